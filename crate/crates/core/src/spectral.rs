//! Band structures along paths, k-grid sampling, densities of states and
//! equifrequency contours on plane cuts of the Brillouin zone.
//!
//! Every sampler runs one k-point per work item on the rayon pool and
//! collects in input order, so results do not depend on the worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{solve_bands_nudged, BandSolution};
use crate::contour::{marching_squares, ScalarGrid};
use crate::error::{Error, Result};
use crate::ewald::EwaldConfig;
use crate::lattice::{KPath, LatticeGeometry};
use crate::model::{ArrayParams, Vec3};

#[derive(Debug, Clone, Serialize)]
pub struct BandSample {
    /// Arc length along the path.
    pub s: f64,
    pub k: Vec3,
    pub frequencies: Vec<f64>,
    pub decay_rates: Vec<f64>,
    pub in_light_cone: bool,
    pub nudged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BandTable {
    pub samples: Vec<BandSample>,
    /// Vertex labels with their arc-length positions.
    pub vertices: Vec<(String, f64)>,
}

impl BandTable {
    pub fn nudged(&self) -> usize {
        self.samples.iter().filter(|s| s.nudged).count()
    }
}

pub fn band_structure(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    path: &KPath,
    config: &EwaldConfig,
) -> Result<BandTable> {
    let samples = path
        .points
        .par_iter()
        .zip(path.arc_length.par_iter())
        .map(|(k, &s)| {
            let (sol, nudged) = solve_bands_nudged(lattice, params, k, config)?;
            Ok(BandSample {
                s,
                k: *k,
                frequencies: sol.frequencies,
                decay_rates: sol.decay_rates,
                in_light_cone: lattice.in_light_cone(k, params.k0a()),
                nudged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let vertices = path
        .vertices
        .iter()
        .zip(&path.vertex_index)
        .map(|((label, _), &i)| (label.clone(), path.arc_length[i]))
        .collect();
    Ok(BandTable { samples, vertices })
}

/// Γ-centred uniform grid `k = Σ_i (n_i/N) b_i`, `n_i ∈ [−N/2, N/2)`,
/// over the periodic directions of the lattice.
pub fn grid_points(lattice: &LatticeGeometry, n: usize) -> Vec<Vec3> {
    let b = lattice.reciprocal_basis();
    let lo = -(n as i64 / 2);
    let idx: Vec<i64> = (lo..lo + n as i64).collect();
    let mut out = Vec::with_capacity(n.pow(b.len() as u32));
    for &i in &idx {
        for &j in &idx {
            if b.len() == 3 {
                for &l in &idx {
                    out.push((b[0] * i as f64 + b[1] * j as f64 + b[2] * l as f64) / n as f64);
                }
            } else {
                out.push((b[0] * i as f64 + b[1] * j as f64) / n as f64);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct GridSample {
    pub k: Vec3,
    pub solution: BandSolution,
    pub nudged: bool,
}

pub fn solve_points(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    points: &[Vec3],
    config: &EwaldConfig,
) -> Result<Vec<GridSample>> {
    points
        .par_iter()
        .map(|k| {
            let (solution, nudged) = solve_bands_nudged(lattice, params, k, config)?;
            Ok(GridSample {
                k: *k,
                solution,
                nudged,
            })
        })
        .collect()
}

pub fn sample_grid(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    n: usize,
    config: &EwaldConfig,
) -> Result<Vec<GridSample>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "grid needs at least 2 points per direction, got {n}"
        )));
    }
    solve_points(lattice, params, &grid_points(lattice, n), config)
}

#[derive(Debug, Clone, Serialize)]
pub struct DosHistogram {
    pub bin_edges: Vec<f64>,
    /// States per bin, each k-point weighted `1/N^d`.
    pub counts: Vec<f64>,
    /// Weight below the first and above the last edge.
    pub underflow: f64,
    pub overflow: f64,
    pub grid_resolution: usize,
    pub nudged: usize,
}

impl DosHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// `counts / bin_width`, integrating to the in-range weight.
    pub fn density(&self) -> Vec<f64> {
        let w = self.bin_width();
        self.counts.iter().map(|c| c / w).collect()
    }

    /// Total weight including the out-of-range tallies; equals the number
    /// of bands.
    pub fn total(&self) -> f64 {
        self.counts.iter().sum::<f64>() + self.underflow + self.overflow
    }
}

/// Histogram of the sampled frequencies over `[omega_min, omega_max]`.
/// Bands near a light sphere run off to ±∞, so the range is explicit.
pub fn histogram(
    samples: &[GridSample],
    grid_n: usize,
    bin_width: f64,
    omega_min: f64,
    omega_max: f64,
) -> Result<DosHistogram> {
    if !(bin_width > 0.0) || !(omega_max > omega_min) {
        return Err(Error::Domain(format!(
            "histogram needs bin_width > 0 and omega_max > omega_min, got {bin_width}, [{omega_min}, {omega_max}]"
        )));
    }
    let nbins = ((omega_max - omega_min) / bin_width).ceil() as usize;
    let bin_edges: Vec<f64> = (0..=nbins)
        .map(|i| omega_min + i as f64 * bin_width)
        .collect();
    let weight = 1.0 / samples.len() as f64;
    let mut counts = vec![0.0; nbins];
    let (mut underflow, mut overflow) = (0.0, 0.0);
    for s in samples {
        for &w in &s.solution.frequencies {
            if w < omega_min {
                underflow += weight;
            } else {
                let b = ((w - omega_min) / bin_width).floor() as usize;
                if b < nbins {
                    counts[b] += weight;
                } else {
                    overflow += weight;
                }
            }
        }
    }
    Ok(DosHistogram {
        bin_edges,
        counts,
        underflow,
        overflow,
        grid_resolution: grid_n,
        nudged: samples.iter().filter(|s| s.nudged).count(),
    })
}

pub fn density_of_states(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    grid_n: usize,
    bin_width: f64,
    omega_range: (f64, f64),
    config: &EwaldConfig,
) -> Result<DosHistogram> {
    if grid_n < 4 {
        return Err(Error::Domain(format!(
            "DOS grid needs grid_n >= 4, got {grid_n}"
        )));
    }
    let samples = sample_grid(lattice, params, grid_n, config)?;
    histogram(&samples, grid_n, bin_width, omega_range.0, omega_range.1)
}

/// Weight of states in the closed window `[center − width/2, center + width/2]`,
/// each state weighted by `1/(number of k-points)`.
pub fn window_count(samples: &[GridSample], center: f64, width: f64) -> f64 {
    let (lo, hi) = (center - 0.5 * width, center + 0.5 * width);
    let hits = samples
        .iter()
        .map(|s| {
            s.solution
                .frequencies
                .iter()
                .filter(|&&w| w >= lo && w <= hi)
                .count()
        })
        .sum::<usize>();
    hits as f64 / samples.len() as f64
}

/// Rectangular patch `origin + s·u + t·v` with `s`, `t` sampled uniformly
/// over closed ranges (both ends included).
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaneGrid {
    pub origin: [f64; 3],
    pub u: [f64; 3],
    pub v: [f64; 3],
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub n_u: usize,
    pub n_v: usize,
}

impl PlaneGrid {
    /// The `k_x = k_y` plane of the cubic zone: `s(1,1,0) + t(0,0,1)` with
    /// `s, t ∈ [−π, π]`.
    pub fn diagonal(n: usize) -> Self {
        let pi = std::f64::consts::PI;
        Self {
            origin: [0.0; 3],
            u: [1.0, 1.0, 0.0],
            v: [0.0, 0.0, 1.0],
            u_range: [-pi, pi],
            v_range: [-pi, pi],
            n_u: n,
            n_v: n,
        }
    }

    /// The plane `k_z = kz` over the full zone square.
    pub fn constant_kz(kz: f64, n: usize) -> Self {
        let pi = std::f64::consts::PI;
        Self {
            origin: [0.0, 0.0, kz],
            u: [1.0, 0.0, 0.0],
            v: [0.0, 1.0, 0.0],
            u_range: [-pi, pi],
            v_range: [-pi, pi],
            n_u: n,
            n_v: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_u < 2 || self.n_v < 2 {
            return Err(Error::Domain(
                "plane grid needs at least 2 points per direction".into(),
            ));
        }
        let u = Vec3::from(self.u);
        let v = Vec3::from(self.v);
        if u.cross(&v).norm() < 1e-12 {
            return Err(Error::Domain("plane axes u and v are parallel".into()));
        }
        Ok(())
    }

    /// Momentum at fractional grid coordinates.
    pub fn at(&self, fi: f64, fj: f64) -> Vec3 {
        let s = self.u_range[0] + (self.u_range[1] - self.u_range[0]) * fi / (self.n_u - 1) as f64;
        let t = self.v_range[0] + (self.v_range[1] - self.v_range[0]) * fj / (self.n_v - 1) as f64;
        Vec3::from(self.origin) + Vec3::from(self.u) * s + Vec3::from(self.v) * t
    }

    pub fn points(&self) -> Vec<Vec3> {
        let mut out = Vec::with_capacity(self.n_u * self.n_v);
        for i in 0..self.n_u {
            for j in 0..self.n_v {
                out.push(self.at(i as f64, j as f64));
            }
        }
        out
    }

    /// Area in k-space of one grid cell.
    pub fn cell_area(&self) -> f64 {
        let du = Vec3::from(self.u) * ((self.u_range[1] - self.u_range[0]) / (self.n_u - 1) as f64);
        let dv = Vec3::from(self.v) * ((self.v_range[1] - self.v_range[0]) / (self.n_v - 1) as f64);
        du.cross(&dv).norm()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourLine {
    pub band: usize,
    pub points: Vec<Vec3>,
    pub closed: bool,
    /// Enclosed k-space area for closed, contractible lines.
    pub area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquifrequencyContour {
    pub frequency: f64,
    pub lines: Vec<ContourLine>,
}

/// Level sets `ω_ν(k) = ω` on a plane cut, band by band.
pub fn equifrequency_contours(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    plane: &PlaneGrid,
    frequencies: &[f64],
    config: &EwaldConfig,
) -> Result<Vec<EquifrequencyContour>> {
    plane.validate()?;
    let samples = solve_points(lattice, params, &plane.points(), config)?;
    Ok(contours_from_samples(&samples, plane, frequencies))
}

pub fn contours_from_samples(
    samples: &[GridSample],
    plane: &PlaneGrid,
    frequencies: &[f64],
) -> Vec<EquifrequencyContour> {
    let nb = samples[0].solution.num_bands();
    let cell = plane.cell_area();
    frequencies
        .iter()
        .map(|&w| {
            let mut lines = Vec::new();
            for band in 0..nb {
                let values = samples
                    .iter()
                    .map(|s| s.solution.frequencies[band])
                    .collect();
                let grid = ScalarGrid::new(plane.n_u, plane.n_v, values, false);
                for poly in marching_squares(&grid, w) {
                    lines.push(ContourLine {
                        band,
                        points: poly.points.iter().map(|p| plane.at(p[0], p[1])).collect(),
                        closed: poly.closed,
                        area: poly.area().abs() * cell,
                    });
                }
            }
            EquifrequencyContour {
                frequency: w,
                lines,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_is_gamma_centred() {
        let pts = grid_points(&LatticeGeometry::cub(), 4);
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().any(|k| k.norm() < 1e-15));
        assert!(pts
            .iter()
            .all(|k| k.iter().all(|c| *c >= -PI - 1e-12 && *c < PI)));
    }

    #[test]
    fn histogram_conserves_weight() {
        let lat = LatticeGeometry::bcc();
        let p = ArrayParams::new(0.1, 5.0).unwrap();
        let samples = sample_grid(&lat, &p, 4, &EwaldConfig::default()).unwrap();
        let h = histogram(&samples, 4, 0.5, -10.0, 10.0).unwrap();
        assert!((h.total() - 6.0).abs() < 1e-12);
        let integral: f64 = h.density().iter().sum::<f64>() * h.bin_width();
        assert!((integral + h.underflow + h.overflow - 6.0).abs() < 1e-12);
    }

    #[test]
    fn window_is_closed_interval() {
        let lat = LatticeGeometry::cub();
        let p = ArrayParams::new(0.1, 0.0).unwrap();
        let s = sample_grid(&lat, &p, 2, &EwaldConfig::default()).unwrap();
        let w = s[0].solution.frequencies[0];
        let closed = window_count(&s, w + 0.05, 0.1);
        let shifted = window_count(&s, w + 0.0500001, 0.1);
        assert!(closed >= shifted + 1.0 / s.len() as f64 - 1e-15);
    }

    #[test]
    fn far_frequency_gives_no_contours() {
        let lat = LatticeGeometry::bcc();
        let p = ArrayParams::new(0.1, 5.0).unwrap();
        let c = equifrequency_contours(
            &lat,
            &p,
            &PlaneGrid::diagonal(9),
            &[1e6],
            &EwaldConfig::default(),
        )
        .unwrap();
        assert!(c[0].lines.is_empty());
    }

    #[test]
    fn plane_maps_corners() {
        let g = PlaneGrid::diagonal(5);
        assert!((g.at(0.0, 0.0) - Vec3::new(-PI, -PI, -PI)).norm() < 1e-15);
        assert!((g.at(4.0, 4.0) - Vec3::new(PI, PI, PI)).norm() < 1e-15);
    }
}
