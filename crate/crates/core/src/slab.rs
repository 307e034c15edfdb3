//! Finite (100) slabs of the BCC array: sites, bands, facet localization,
//! polarization texture and Fermi-arc extraction.
//!
//! The slab is periodic along `a₁ = e_y`, `a₂ = e_z` and finite along `x`.
//! Square layers sit at `x = 0, ½, 1, …` (units of `a`), alternating between
//! in-plane offset `(0, 0)` and `(½, ½)`. A slab of width `w` holds
//! `2w − 1` layers of one site each; `w = ½` is the single-layer case.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{solve_bands_nudged, BandSolution};
use crate::contour::{marching_squares, ScalarGrid};
use crate::error::{Error, Result};
use crate::ewald::EwaldConfig;
use crate::lattice::{KPath, LatticeGeometry};
use crate::model::{ArrayParams, Vec3};

#[derive(Debug, Clone, Serialize)]
pub struct SlabModel {
    pub width: f64,
    /// Site positions ordered by ascending `x`.
    pub sites: Vec<Vec3>,
    /// `x` of the (1̄00) and (100) terminations.
    pub facet_planes: [f64; 2],
    #[serde(skip)]
    pub lattice: LatticeGeometry,
}

impl SlabModel {
    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }
}

pub fn build_slab(width: f64) -> Result<SlabModel> {
    let twice = 2.0 * width;
    if !(width > 0.0) || !width.is_finite() || (twice - twice.round()).abs() > 1e-9 {
        return Err(Error::SlabWidth(width));
    }
    let m = ((twice.round() as i64) - 1).max(1) as usize;
    let sites: Vec<Vec3> = (0..m)
        .map(|j| {
            let o = if j % 2 == 0 { 0.0 } else { 0.5 };
            Vec3::new(0.5 * j as f64, o, o)
        })
        .collect();
    let lattice = LatticeGeometry::surface(Vec3::y(), Vec3::z(), sites.clone())?;
    let last = sites.last().map(|s| s.x).unwrap_or(0.0);
    Ok(SlabModel {
        width,
        sites,
        facet_planes: [0.0, last],
        lattice,
    })
}

/// Bands at in-plane momenta; any `k_x` component is ignored.
pub fn slab_bands(
    slab: &SlabModel,
    params: &ArrayParams,
    k: &[Vec3],
    config: &EwaldConfig,
) -> Result<Vec<(BandSolution, bool)>> {
    k.par_iter()
        .map(|q| solve_bands_nudged(&slab.lattice, params, q, config))
        .collect()
}

pub fn slab_path(slab: &SlabModel, labels: &[&str], samples_per_segment: usize) -> Result<KPath> {
    crate::lattice::high_symmetry_path(&slab.lattice, labels, samples_per_segment)
}

/// `p_ξ = Σ_β |c_{ξβ}|²`.
pub fn localization_profile(state: &[Complex64]) -> Vec<f64> {
    state
        .chunks(3)
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// `(W_x, W_y, W_z)` with `W_β = Σ_ξ |c_{ξβ}|²`.
pub fn polarization_weight(state: &[Complex64]) -> [f64; 3] {
    let mut w = [0.0; 3];
    for c in state.chunks(3) {
        for b in 0..3 {
            w[b] += c[b].norm_sqr();
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Facet {
    /// The (100) face, highest `x`.
    Facet100,
    /// The (1̄00) face, `x = 0`.
    Facet1bar00,
    Bulk,
}

impl Facet {
    pub fn label(self) -> &'static str {
        match self {
            Facet::Facet100 => "100",
            Facet::Facet1bar00 => "-100",
            Facet::Bulk => "bulk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FacetRule {
    pub edge_fraction: f64,
    pub threshold: f64,
}

impl Default for FacetRule {
    fn default() -> Self {
        Self {
            edge_fraction: 1.0 / 3.0,
            threshold: 0.6,
        }
    }
}

pub fn facet_classify(profile: &[f64], rule: &FacetRule) -> Facet {
    let m = profile.len();
    let edge = ((rule.edge_fraction * m as f64).round() as usize).clamp(1, m);
    let low: f64 = profile[..edge].iter().sum();
    let high: f64 = profile[m - edge..].iter().sum();
    if high > rule.threshold && high >= low {
        Facet::Facet100
    } else if low > rule.threshold {
        Facet::Facet1bar00
    } else {
        Facet::Bulk
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArcConfig {
    pub grid_n: usize,
    /// Only states with `γ/γ₀` below this enter the contours.
    pub gamma_cutoff: f64,
    pub facet: FacetRule,
    /// Only states this close to the contour frequency are followed.
    pub search_window: f64,
    /// Smallest overlap between the states at the ends of a crossed edge.
    pub min_overlap: f64,
    /// Largest gap, in grid cells, bridged between pieces of one curve.
    pub stitch_cells: f64,
    /// Largest jump in `W_z` accepted across a stitch.
    pub stitch_weight: f64,
}

impl Default for ArcConfig {
    fn default() -> Self {
        Self {
            grid_n: 48,
            gamma_cutoff: 0.5,
            facet: FacetRule::default(),
            search_window: 6.0,
            min_overlap: 0.5,
            stitch_cells: 2.5,
            stitch_weight: 0.25,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcVertex {
    /// `(k_y, k_z)` in units of `π/a`, unwrapped along the curve.
    pub k: [f64; 2],
    pub facet: Facet,
    pub weights: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcCurve {
    /// Slab bands visited by the curve, in order of first appearance.
    pub bands: Vec<usize>,
    pub closed: bool,
    /// Periods crossed along `(k_y, k_z)` by a closed curve.
    pub winding: [i64; 2],
    pub facet: Facet,
    pub vertices: Vec<ArcVertex>,
}

impl ArcCurve {
    pub fn mean_weights(&self) -> [f64; 3] {
        let mut w = [0.0; 3];
        for v in &self.vertices {
            for b in 0..3 {
                w[b] += v.weights[b];
            }
        }
        let n = self.vertices.len().max(1) as f64;
        w.map(|x| x / n)
    }

    pub fn endpoints(&self) -> Option<([f64; 2], [f64; 2])> {
        match (self.closed, self.vertices.first(), self.vertices.last()) {
            (false, Some(a), Some(b)) => Some((a.k, b.k)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FermiArcs {
    pub frequency: f64,
    pub grid_n: usize,
    pub curves: Vec<ArcCurve>,
    /// Surface projections of the bulk nodes, `(k_y, k_z)` in `π/a`.
    pub weyl_projections: Vec<[f64; 2]>,
    pub nudged: usize,
}

impl FermiArcs {
    pub fn on_facet(&self, facet: Facet) -> impl Iterator<Item = &ArcCurve> {
        self.curves.iter().filter(move |c| c.facet == facet)
    }
}

/// Per grid point and facet: the subradiant state of that facet closest to
/// the contour frequency, if one lies within the search window.
struct Pick {
    band: usize,
    frequency: f64,
    weights: [f64; 3],
    state: Vec<Complex64>,
}

/// Equifrequency curves at `frequency` of subradiant surface states on a
/// periodic `grid_n²` grid over the surface zone, one set per facet.
///
/// For each facet the contoured field is, at every grid point, the frequency
/// of the facet's subradiant state nearest to `frequency` (masked when none
/// lies within `search_window`). A crossing is kept only where the states at
/// the two ends of its grid edge overlap by at least `min_overlap`, so jumps
/// between unrelated states do not produce contours. Remaining pieces of one
/// facet are stitched end to end. Vertex metadata comes from the nearest
/// grid eigenstate.
pub fn fermi_arcs(
    slab: &SlabModel,
    params: &ArrayParams,
    frequency: f64,
    weyl_k: &[Vec3],
    arcs: &ArcConfig,
    config: &EwaldConfig,
) -> Result<FermiArcs> {
    let n = arcs.grid_n;
    if n < 4 {
        return Err(Error::Domain(
            "fermi arc grid needs at least 4 points per side".into(),
        ));
    }
    // grid index (i, j) ↦ (k_y, k_z) = 2π (i, j)/n − π
    let ks: Vec<Vec3> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            Vec3::new(
                0.0,
                2.0 * PI * i as f64 / n as f64 - PI,
                2.0 * PI * j as f64 / n as f64 - PI,
            )
        })
        .collect();
    let solved = slab_bands(slab, params, &ks, config)?;
    let nudged = solved.iter().filter(|s| s.1).count();
    let facets = [Facet::Facet100, Facet::Facet1bar00];
    let picks: Vec<[Option<Pick>; 2]> = solved
        .par_iter()
        .map(|(s, _)| {
            let mut out: [Option<Pick>; 2] = [None, None];
            for b in 0..s.num_bands() {
                let d = (s.frequencies[b] - frequency).abs();
                if s.decay_rates[b] >= arcs.gamma_cutoff || d >= arcs.search_window {
                    continue;
                }
                let c = s.coefficient(b);
                let f = facet_classify(&localization_profile(&c), &arcs.facet);
                let Some(slot) = facets.iter().position(|&x| x == f) else {
                    continue;
                };
                if out[slot]
                    .as_ref()
                    .map_or(true, |p| d < (p.frequency - frequency).abs())
                {
                    out[slot] = Some(Pick {
                        band: b,
                        frequency: s.frequencies[b],
                        weights: polarization_weight(&c),
                        state: c,
                    });
                }
            }
            out
        })
        .collect();

    let mut curves = Vec::new();
    for (slot, &facet) in facets.iter().enumerate() {
        let pick = |i: usize, j: usize| picks[(i % n) * n + (j % n)][slot].as_ref();
        let values: Vec<f64> = picks
            .iter()
            .map(|p| p[slot].as_ref().map_or(f64::NAN, |p| p.frequency))
            .collect();
        if values.iter().all(|v| v.is_nan()) {
            continue;
        }
        let same_state = |p: [f64; 2]| -> bool {
            // the crossing lies on the grid edge through p
            let (a, b) = if (p[0] - p[0].round()).abs() < 1e-12 {
                let i = p[0].round().rem_euclid(n as f64) as usize;
                let j = p[1].floor().rem_euclid(n as f64) as usize;
                ((i, j), (i, j + 1))
            } else {
                let i = p[0].floor().rem_euclid(n as f64) as usize;
                let j = p[1].round().rem_euclid(n as f64) as usize;
                ((i, j), (i + 1, j))
            };
            match (pick(a.0, a.1), pick(b.0, b.1)) {
                (Some(x), Some(y)) => {
                    let o: Complex64 = x
                        .state
                        .iter()
                        .zip(&y.state)
                        .map(|(u, v)| u.conj() * v)
                        .sum();
                    o.norm() >= arcs.min_overlap
                }
                _ => false,
            }
        };
        let mut pieces = Vec::new();
        for line in marching_squares(&ScalarGrid::new(n, n, values, true), frequency) {
            let mut run: Vec<ArcVertex> = Vec::new();
            let mut bands: Vec<usize> = Vec::new();
            let mut broken = false;
            for p in &line.points {
                if !same_state(*p) {
                    broken = true;
                    push_piece(&mut pieces, &mut run, &mut bands, facet);
                    continue;
                }
                let (i, j) = (
                    p[0].round().rem_euclid(n as f64) as usize,
                    p[1].round().rem_euclid(n as f64) as usize,
                );
                let near = pick(i, j).or_else(|| {
                    pick(
                        p[0].floor().rem_euclid(n as f64) as usize,
                        p[1].floor().rem_euclid(n as f64) as usize,
                    )
                });
                let (band, weights) =
                    near.map_or((usize::MAX, [f64::NAN; 3]), |q| (q.band, q.weights));
                if band != usize::MAX && !bands.contains(&band) {
                    bands.push(band);
                }
                run.push(ArcVertex {
                    k: [2.0 * p[0] / n as f64 - 1.0, 2.0 * p[1] / n as f64 - 1.0],
                    facet,
                    weights,
                });
            }
            if line.closed && !broken {
                pieces.push(ArcCurve {
                    bands,
                    closed: true,
                    winding: line.winding,
                    facet,
                    vertices: run,
                });
            } else {
                push_piece(&mut pieces, &mut run, &mut bands, facet);
            }
        }
        curves.extend(stitch(
            pieces,
            arcs.stitch_cells * 2.0 / n as f64,
            arcs.stitch_weight,
        ));
    }
    let weyl_projections = weyl_k.iter().map(|k| [k.y / PI, k.z / PI]).collect();
    Ok(FermiArcs {
        frequency,
        grid_n: n,
        curves,
        weyl_projections,
        nudged,
    })
}

fn push_piece(
    pieces: &mut Vec<ArcCurve>,
    run: &mut Vec<ArcVertex>,
    bands: &mut Vec<usize>,
    facet: Facet,
) {
    if run.len() >= 2 {
        pieces.push(ArcCurve {
            bands: std::mem::take(bands),
            closed: false,
            winding: [0, 0],
            facet,
            vertices: std::mem::take(run),
        });
    }
    run.clear();
    bands.clear();
}

/// Shortest displacement on the surface zone torus (side 2 in `π/a` units).
fn torus_step(from: [f64; 2], to: [f64; 2]) -> [f64; 2] {
    [0, 1].map(|c| {
        let d = to[c] - from[c];
        d - 2.0 * (d / 2.0).round()
    })
}

fn stitch(pieces: Vec<ArcCurve>, max_gap: f64, max_weight_jump: f64) -> Vec<ArcCurve> {
    let (mut done, mut open): (Vec<ArcCurve>, Vec<ArcCurve>) =
        pieces.into_iter().partition(|c| c.closed);
    loop {
        // best join over all (end of a, start of b) after optional reversals; a == b closes a loop
        let mut best: Option<(f64, usize, usize, bool, bool)> = None;
        for a in 0..open.len() {
            for b in a..open.len() {
                let options: &[(bool, bool)] = if a == b {
                    &[(false, false)]
                } else {
                    &[(false, false), (true, false), (false, true), (true, true)]
                };
                for &(ra, rb) in options {
                    let ea = if ra {
                        open[a].vertices.first()
                    } else {
                        open[a].vertices.last()
                    };
                    let sb = if rb {
                        open[b].vertices.last()
                    } else {
                        open[b].vertices.first()
                    };
                    let (Some(ea), Some(sb)) = (ea, sb) else {
                        continue;
                    };
                    if a == b && open[a].vertices.len() < 3 {
                        continue;
                    }
                    let d = torus_step(ea.k, sb.k);
                    let dist = d[0].hypot(d[1]);
                    if dist <= max_gap
                        && (ea.weights[2] - sb.weights[2]).abs() <= max_weight_jump
                        && best.map_or(true, |x| dist < x.0)
                    {
                        best = Some((dist, a, b, ra, rb));
                    }
                }
            }
        }
        let Some((_, a, b, ra, rb)) = best else { break };
        if a == b {
            let mut c = open.remove(a);
            let first = c.vertices[0].k;
            let last = c.vertices.last().unwrap().k;
            let d = torus_step(last, first);
            let end = [last[0] + d[0], last[1] + d[1]];
            c.winding = [
                ((end[0] - first[0]) / 2.0).round() as i64,
                ((end[1] - first[1]) / 2.0).round() as i64,
            ];
            c.closed = true;
            done.push(c);
            continue;
        }
        let mut cb = open.remove(b);
        let mut ca = open.remove(a);
        if ra {
            ca.vertices.reverse();
        }
        if rb {
            cb.vertices.reverse();
        }
        // translate b so the joined curve stays unwrapped
        let last = ca.vertices.last().unwrap().k;
        let d = torus_step(last, cb.vertices[0].k);
        let shift = [
            last[0] + d[0] - cb.vertices[0].k[0],
            last[1] + d[1] - cb.vertices[0].k[1],
        ];
        for v in cb.vertices.iter_mut() {
            v.k = [v.k[0] + shift[0], v.k[1] + shift[1]];
        }
        ca.vertices.extend(cb.vertices);
        for band in cb.bands {
            if !ca.bands.contains(&band) {
                ca.bands.push(band);
            }
        }
        open.push(ca);
    }
    done.extend(open);
    done
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirty_sites_at_fifteen_and_a_half() {
        let s = build_slab(15.5).unwrap();
        assert_eq!(s.num_sites(), 30);
        for (j, p) in s.sites.iter().enumerate() {
            assert!((p.x - 0.5 * j as f64).abs() < 1e-12);
            let o = if j % 2 == 0 { 0.0 } else { 0.5 };
            assert_eq!((p.y, p.z), (o, o));
        }
    }

    #[test]
    fn monolayer_and_rejections() {
        assert_eq!(build_slab(0.5).unwrap().num_sites(), 1);
        assert!(build_slab(1.3).is_err());
        assert!(build_slab(0.0).is_err());
    }

    #[test]
    fn facet_rule() {
        let mut p = vec![0.0; 30];
        for x in p.iter_mut().skip(25) {
            *x = 0.18;
        }
        p[0] = 0.1;
        assert_eq!(facet_classify(&p, &FacetRule::default()), Facet::Facet100);
        let u = vec![1.0 / 30.0; 30];
        assert_eq!(facet_classify(&u, &FacetRule::default()), Facet::Bulk);
        let rev: Vec<f64> = p.iter().rev().copied().collect();
        assert_eq!(
            facet_classify(&rev, &FacetRule::default()),
            Facet::Facet1bar00
        );
    }

    #[test]
    fn weights_of_a_state() {
        let s = vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.8),
        ];
        assert_eq!(polarization_weight(&s), [0.36, 0.0, 0.6400000000000001]);
        assert_eq!(localization_profile(&s), vec![1.0]);
    }
}
