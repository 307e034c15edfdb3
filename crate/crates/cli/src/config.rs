//! Run configuration: one TOML document per run, unknown keys rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use weylarray_core::ewald::EwaldConfig;
use weylarray_core::lattice::{high_symmetry_path, LatticeGeometry};
use weylarray_core::model::ArrayParams;
use weylarray_core::phase::PhaseDiagramConfig;
use weylarray_core::slab::{build_slab, slab_path, ArcConfig};
use weylarray_core::spectral::PlaneGrid;
use weylarray_core::weyl::WeylSearch;

use crate::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeChoice {
    Bcc,
    Cub,
}

impl LatticeChoice {
    pub fn geometry(self) -> LatticeGeometry {
        match self {
            LatticeChoice::Bcc => LatticeGeometry::bcc(),
            LatticeChoice::Cub => LatticeGeometry::cub(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeChoice,
    pub a_over_lambda: f64,
    #[serde(rename = "muB_over_gamma_tilde")]
    pub mu_b: f64,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub workers: Option<usize>,
    /// Overrides the seeds of the Weyl and phase-diagram searches.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub ewald: EwaldConfig,
    #[serde(default)]
    pub bands: BandsBlock,
    #[serde(default)]
    pub dos: DosBlock,
    #[serde(default)]
    pub contours: ContoursBlock,
    #[serde(default)]
    pub weyl: WeylBlock,
    #[serde(default)]
    pub phase_diagram: PhaseDiagramConfig,
    #[serde(default)]
    pub slab: SlabBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandsBlock {
    pub path: Vec<String>,
    pub samples_per_segment: usize,
}

impl Default for BandsBlock {
    fn default() -> Self {
        Self {
            path: ["Γ", "X", "M", "Γ", "Z", "R", "A", "Z"]
                .map(String::from)
                .to_vec(),
            samples_per_segment: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DosBlock {
    pub grid_n: usize,
    pub bin_width: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

impl Default for DosBlock {
    fn default() -> Self {
        Self {
            grid_n: 24,
            bin_width: 0.1,
            omega_min: -10.0,
            omega_max: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContoursBlock {
    pub plane: PlaneGrid,
    /// Absolute frequencies `(ω − ω₀)/γ̃₀`.
    pub frequencies: Vec<f64>,
}

impl Default for ContoursBlock {
    fn default() -> Self {
        Self {
            plane: PlaneGrid::diagonal(81),
            frequencies: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeylBlock {
    pub search: WeylSearch,
    pub isolation_window: f64,
    pub isolation_grid: usize,
    pub isolation_threshold: f64,
}

impl Default for WeylBlock {
    fn default() -> Self {
        Self {
            search: WeylSearch::default(),
            isolation_window: 0.1,
            isolation_grid: 16,
            isolation_threshold: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SlabBlock {
    pub width: f64,
    pub path: Vec<String>,
    pub samples_per_segment: usize,
    /// Arc frequency; the bulk Weyl frequency when absent.
    pub frequency: Option<f64>,
    pub arcs: ArcConfig,
}

impl Default for SlabBlock {
    fn default() -> Self {
        Self {
            width: 15.5,
            path: ["Γ", "Y", "M", "Z", "Γ"].map(String::from).to_vec(),
            samples_per_segment: 40,
            frequency: None,
            arcs: ArcConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if let Some(seed) = cfg.seed {
            cfg.weyl.search.seed = seed;
            cfg.phase_diagram.search.seed = seed;
        }
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ArrayParams, String> {
        ArrayParams::new(self.a_over_lambda, self.mu_b).map_err(|e| e.to_string())
    }

    /// Everything that can be checked without running the computation.
    pub fn validate(&self, command: Command) -> Result<(), String> {
        let s = |e: weylarray_core::Error| e.to_string();
        self.params()?;
        self.ewald.validate().map_err(s)?;
        if self.workers == Some(0) {
            return Err("workers must be at least 1".into());
        }
        let lattice = self.lattice.geometry();
        match command {
            Command::Bands => {
                high_symmetry_path(&lattice, &self.bands.path, self.bands.samples_per_segment)
                    .map_err(s)?;
            }
            Command::Dos => {
                let d = &self.dos;
                if d.grid_n < 4 || !(d.bin_width > 0.0) || !(d.omega_max > d.omega_min) {
                    return Err(
                        "dos needs grid_n >= 4, bin_width > 0 and omega_max > omega_min".into(),
                    );
                }
            }
            Command::Contours => {
                self.contours.plane.validate().map_err(s)?;
                if self.contours.frequencies.is_empty()
                    || self.contours.frequencies.iter().any(|w| !w.is_finite())
                {
                    return Err(
                        "contours.frequencies must be a non-empty list of finite numbers".into(),
                    );
                }
            }
            Command::Weyl => self.validate_weyl()?,
            Command::PhaseDiagram => self.phase_diagram.validate().map_err(s)?,
            Command::Slab => {
                if self.lattice != LatticeChoice::Bcc {
                    return Err("the slab command is defined for the bcc lattice".into());
                }
                let slab = build_slab(self.slab.width).map_err(s)?;
                let labels: Vec<&str> = self.slab.path.iter().map(String::as_str).collect();
                slab_path(&slab, &labels, self.slab.samples_per_segment).map_err(s)?;
                if self.slab.arcs.grid_n < 4 || !(self.slab.arcs.gamma_cutoff > 0.0) {
                    return Err("slab.arcs needs grid_n >= 4 and gamma_cutoff > 0".into());
                }
                if self.slab.frequency.is_none() {
                    self.validate_weyl()?;
                }
            }
        }
        Ok(())
    }

    fn validate_weyl(&self) -> Result<(), String> {
        self.weyl.search.validate().map_err(|e| e.to_string())?;
        let w = &self.weyl;
        if w.isolation_grid < 4 || !(w.isolation_window > 0.0) || !(w.isolation_threshold >= 0.0) {
            return Err(
                "weyl needs isolation_grid >= 4, isolation_window > 0, isolation_threshold >= 0"
                    .into(),
            );
        }
        Ok(())
    }
}
