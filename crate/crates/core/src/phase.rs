//! Weyl-frequency isolation over a grid of lattice constants and Zeeman
//! splittings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ewald::EwaldConfig;
use crate::lattice::LatticeGeometry;
use crate::model::ArrayParams;
use crate::weyl::{find_weyl_nodes, isolation_check, WeylSearch};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhaseDiagramConfig {
    pub a_grid: Vec<f64>,
    pub mu_b_grid: Vec<f64>,
    pub grid_n: usize,
    pub window: f64,
    /// Largest window count (states per k-point) still called isolated.
    pub threshold: f64,
    pub search: WeylSearch,
}

impl Default for PhaseDiagramConfig {
    fn default() -> Self {
        Self {
            a_grid: vec![0.06, 0.15, 0.24, 0.33, 0.42, 0.51],
            mu_b_grid: vec![1.0, 4.8, 8.6, 12.4, 16.2, 20.0],
            grid_n: 16,
            window: 0.1,
            threshold: 1e-3,
            search: WeylSearch::default(),
        }
    }
}

impl PhaseDiagramConfig {
    pub fn validate(&self) -> Result<()> {
        if self.a_grid.is_empty() || self.mu_b_grid.is_empty() {
            return Err(Error::Domain(
                "phase diagram grids must be non-empty".into(),
            ));
        }
        if self.grid_n < 4 || !(self.window > 0.0) || !(self.threshold >= 0.0) {
            return Err(Error::Domain(
                "phase diagram needs grid_n >= 4, window > 0, threshold >= 0".into(),
            ));
        }
        for &a in &self.a_grid {
            ArrayParams::new(a, 0.0)?;
        }
        self.search.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseCell {
    pub a_over_lambda: f64,
    pub mu_b: f64,
    pub omega_w: Option<f64>,
    /// Position of the primary node, units of π/a.
    pub k_w: Option<[f64; 3]>,
    pub dos_window_count: Option<f64>,
    pub in_light_cone: Option<bool>,
    pub isolated: Option<bool>,
    pub spoiler: Option<String>,
    pub nodes: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagram {
    pub config: PhaseDiagramConfig,
    /// Row-major: `cells[i * mu_b_grid.len() + j]` holds `(a_grid[i], mu_b_grid[j])`.
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &PhaseCell {
        &self.cells[i * self.config.mu_b_grid.len() + j]
    }
}

pub fn phase_cell(
    lattice: &LatticeGeometry,
    a_over_lambda: f64,
    mu_b: f64,
    config: &PhaseDiagramConfig,
    ewald: &EwaldConfig,
) -> PhaseCell {
    let mut cell = PhaseCell {
        a_over_lambda,
        mu_b,
        omega_w: None,
        k_w: None,
        dos_window_count: None,
        in_light_cone: None,
        isolated: None,
        spoiler: None,
        nodes: 0,
        error: None,
    };
    let mut run = || -> Result<()> {
        let params = ArrayParams::new(a_over_lambda, mu_b)?;
        let found = find_weyl_nodes(lattice, &params, &config.search, ewald)?;
        cell.nodes = found.nodes.len();
        let Some(node) = found.primary() else {
            return Err(Error::Domain(format!(
                "no Weyl pair (smallest gap {:.3e})",
                found.smallest_gap
            )));
        };
        cell.omega_w = Some(node.weyl_frequency);
        cell.k_w = Some(node.k_position);
        cell.in_light_cone = Some(node.in_light_cone);
        let primary = &found.nodes[..2.min(found.nodes.len())];
        let iso = isolation_check(
            lattice,
            &params,
            primary,
            config.window,
            config.grid_n,
            config.threshold,
            ewald,
        )?;
        cell.dos_window_count = Some(iso.dos_window_count);
        cell.isolated = Some(iso.isolated);
        cell.spoiler = if iso.isolated { None } else { iso.spoiler };
        Ok(())
    };
    if let Err(e) = run() {
        cell.error = Some(e.to_string());
    }
    cell
}

/// Per-cell failures are recorded in the cell and never abort the sweep.
pub fn phase_diagram(
    lattice: &LatticeGeometry,
    config: &PhaseDiagramConfig,
    ewald: &EwaldConfig,
) -> Result<PhaseDiagram> {
    config.validate()?;
    let jobs: Vec<(f64, f64)> = config
        .a_grid
        .iter()
        .flat_map(|&a| config.mu_b_grid.iter().map(move |&m| (a, m)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(a, m)| phase_cell(lattice, a, m, config, ewald))
        .collect();
    Ok(PhaseDiagram {
        config: config.clone(),
        cells,
    })
}
