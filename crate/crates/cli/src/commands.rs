use serde::Serialize;
use weylarray_core::ewald::{lattice_sum, ConvergenceReport};
use weylarray_core::export::{self, Metadata, NodeRecord};
use weylarray_core::lattice::{high_symmetry_path, LatticeGeometry};
use weylarray_core::model::{ArrayParams, Vec3};
use weylarray_core::phase::phase_diagram;
use weylarray_core::slab::{build_slab, fermi_arcs, slab_bands, slab_path, SlabModel};
use weylarray_core::spectral::{
    band_structure, density_of_states, equifrequency_contours, BandSample, BandTable,
};
use weylarray_core::weyl::{find_weyl_nodes, isolation_check, IsolationReport, WeylSearchResult};

use crate::config::RunConfig;
use crate::{CliError, Command};

type Files = Vec<(String, String)>;

#[derive(Serialize)]
struct WeylOutput {
    found: bool,
    nodes: Vec<NodeRecord>,
    chirality_sum: Option<i32>,
    rejected: Vec<NodeRecord>,
    smallest_gap: f64,
    /// Units of π/a.
    smallest_gap_at: [f64; 3],
    isolation: Option<IsolationReport>,
}

#[derive(Serialize)]
struct LatticeSumDiagnostic {
    offset: [f64; 3],
    k: [f64; 3],
    report: ConvergenceReport,
}

#[derive(Serialize)]
struct Diagnostics {
    nudged_points: usize,
    lattice_sums: Vec<LatticeSumDiagnostic>,
}

pub fn execute(
    command: Command,
    config: &RunConfig,
    sha: &str,
    diagnostics: bool,
) -> Result<Files, CliError> {
    let params = config.params().map_err(CliError::Config)?;
    let lattice = config.lattice.geometry();
    let meta = Metadata::new(
        command.name(),
        sha,
        serde_json::to_value(config).map_err(|e| CliError::Io(e.to_string()))?,
    );
    let ewald = &config.ewald;
    let mut files = Files::new();
    let mut nudged = 0;
    let mut probe_lattice = lattice.clone();
    match command {
        Command::Bands => {
            let path = high_symmetry_path(
                &lattice,
                &config.bands.path,
                config.bands.samples_per_segment,
            )?;
            let table = band_structure(&lattice, &params, &path, ewald)?;
            nudged = table.nudged();
            files.push(("bands.csv".into(), export::bands_csv(&meta, &table)?));
            files.push(("bands.json".into(), export::json_document(&meta, &table)?));
        }
        Command::Dos => {
            let d = &config.dos;
            let dos = density_of_states(
                &lattice,
                &params,
                d.grid_n,
                d.bin_width,
                (d.omega_min, d.omega_max),
                ewald,
            )?;
            nudged = dos.nudged;
            files.push(("dos.csv".into(), export::dos_csv(&meta, &dos)?));
        }
        Command::Contours => {
            let c = &config.contours;
            let contours =
                equifrequency_contours(&lattice, &params, &c.plane, &c.frequencies, ewald)?;
            files.push((
                "contours.csv".into(),
                export::contours_csv(&meta, &contours)?,
            ));
        }
        Command::Weyl => {
            let out = weyl(config, &lattice, &params)?;
            files.push(("weyl.json".into(), export::json_document(&meta, &out)?));
        }
        Command::PhaseDiagram => {
            let diagram = phase_diagram(&lattice, &config.phase_diagram, ewald)?;
            for c in &diagram.cells {
                eprintln!(
                    "cell a/lambda0={} muB={} omega_W={:?} isolated={:?}{}",
                    c.a_over_lambda,
                    c.mu_b,
                    c.omega_w,
                    c.isolated,
                    c.error
                        .as_ref()
                        .map(|e| format!(" error={e}"))
                        .unwrap_or_default()
                );
            }
            files.push((
                "phase_diagram.csv".into(),
                export::phase_csv(&meta, &diagram)?,
            ));
            files.push((
                "phase_diagram.json".into(),
                export::json_document(&meta, &diagram)?,
            ));
        }
        Command::Slab => {
            let slab = build_slab(config.slab.width)?;
            let (frequency, weyl_k) = match config.slab.frequency {
                Some(w) => (w, vec![]),
                None => {
                    let found = find_weyl_nodes(&lattice, &params, &config.weyl.search, ewald)?;
                    let Some(node) = found.primary() else {
                        return Err(weylarray_core::Error::Domain(format!(
                            "no bulk Weyl node to set the arc frequency (smallest gap {:.3e}); set slab.frequency",
                            found.smallest_gap
                        ))
                        .into());
                    };
                    (
                        node.weyl_frequency,
                        found.nodes.iter().take(2).map(|n| n.k()).collect(),
                    )
                }
            };
            let table = slab_table(&slab, &params, config)?;
            let arcs = fermi_arcs(&slab, &params, frequency, &weyl_k, &config.slab.arcs, ewald)?;
            nudged = table.nudged() + arcs.nudged;
            files.push(("slab_bands.csv".into(), export::bands_csv(&meta, &table)?));
            files.push(("fermi_arcs.csv".into(), export::arcs_csv(&meta, &arcs)?));
            files.push((
                "fermi_arcs.json".into(),
                export::json_document(&meta, &arcs)?,
            ));
            files.push((
                "slab_sites.csv".into(),
                export::slab_sites_csv(&meta, &slab)?,
            ));
            probe_lattice = slab.lattice.clone();
        }
    }
    if diagnostics {
        let report = Diagnostics {
            nudged_points: nudged,
            lattice_sums: lattice_sum_reports(&probe_lattice, &params, config)?,
        };
        files.push((
            "diagnostics.json".into(),
            export::json_document(&meta, &report)?,
        ));
    }
    Ok(files)
}

fn weyl(
    config: &RunConfig,
    lattice: &LatticeGeometry,
    params: &ArrayParams,
) -> Result<WeylOutput, CliError> {
    let w = &config.weyl;
    let mut found: WeylSearchResult = find_weyl_nodes(lattice, params, &w.search, &config.ewald)?;
    let mut isolation = None;
    if found.found() {
        let primary = found.nodes.len().min(2);
        let iso = isolation_check(
            lattice,
            params,
            &found.nodes[..primary],
            w.isolation_window,
            w.isolation_grid,
            w.isolation_threshold,
            &config.ewald,
        )?;
        for n in &mut found.nodes[..primary] {
            n.isolated = Some(iso.isolated);
        }
        isolation = Some(iso);
    }
    let record = |n| NodeRecord::new(config.a_over_lambda, config.mu_b, n);
    let chirality_sum = found
        .nodes
        .iter()
        .map(|n| n.chirality)
        .sum::<Option<i32>>()
        .filter(|_| found.found());
    Ok(WeylOutput {
        found: found.found(),
        nodes: found.nodes.iter().map(record).collect(),
        chirality_sum,
        rejected: found.rejected.iter().map(record).collect(),
        smallest_gap: found.smallest_gap,
        smallest_gap_at: found.smallest_gap_at,
        isolation,
    })
}

fn slab_table(
    slab: &SlabModel,
    params: &ArrayParams,
    config: &RunConfig,
) -> Result<BandTable, CliError> {
    let labels: Vec<&str> = config.slab.path.iter().map(String::as_str).collect();
    let path = slab_path(slab, &labels, config.slab.samples_per_segment)?;
    let solved = slab_bands(slab, params, &path.points, &config.ewald)?;
    let samples = solved
        .into_iter()
        .zip(path.points.iter().zip(&path.arc_length))
        .map(|((sol, nudged), (k, &s))| BandSample {
            s,
            k: *k,
            frequencies: sol.frequencies,
            decay_rates: sol.decay_rates,
            in_light_cone: slab.lattice.in_light_cone(k, params.k0a()),
            nudged,
        })
        .collect();
    let vertices = path
        .vertices
        .iter()
        .zip(&path.vertex_index)
        .map(|((l, _), &i)| (l.clone(), path.arc_length[i]))
        .collect();
    Ok(BandTable { samples, vertices })
}

/// Convergence of every sublattice-pair sum at one generic quasimomentum.
fn lattice_sum_reports(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    config: &RunConfig,
) -> Result<Vec<LatticeSumDiagnostic>, CliError> {
    let pi = std::f64::consts::PI;
    let k = lattice.project_in_plane(&Vec3::new(0.13 * pi, 0.21 * pi, 0.37 * pi));
    let subs = lattice.sublattice_displacements();
    let mut out = Vec::new();
    for a in subs {
        for b in subs {
            let offset = b - a;
            let sum = lattice_sum(lattice, &offset, &k, params.k0a(), &config.ewald)?;
            out.push(LatticeSumDiagnostic {
                offset: offset.into(),
                k: k.into(),
                report: sum.report,
            });
        }
    }
    Ok(out)
}
