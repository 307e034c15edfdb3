//! Weyl nodes: location, chirality and frequency isolation.
//!
//! Which two bands form the node: each light sphere `|k + g| = k₀` that
//! encloses `k` lifts two transverse, photon-like branches above the
//! material bands, and outside every light sphere they sit below. The
//! crossing pair is the middle pair of the remaining material bands, i.e.
//! sorted indices `(p, p+1)` with `p = N/2 − 2·n_in(k)` where `n_in` counts
//! the enclosing light spheres. A fixed pair can be forced through
//! [`WeylSearch::band_pair`].

use std::f64::consts::PI;

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::goldensectionsearch::GoldenSectionSearch;
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::solve_bands_nudged;
use crate::error::{Error, Result};
use crate::ewald::EwaldConfig;
use crate::lattice::LatticeGeometry;
use crate::model::{ArrayParams, Vec3};
use crate::spectral::{sample_grid, window_count, GridSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Scan the line `(k_x, k_y) = axis`, `k_z ∈ (0, π]`, and mirror.
    Axis,
    /// Multi-start minimization of the gap over the whole zone.
    Full3d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeylSearch {
    pub mode: SearchMode,
    /// Largest residual gap (γ̃₀) accepted as a degeneracy.
    pub gap_tol: f64,
    pub scan_points: usize,
    pub refine_steps: u64,
    /// In-plane position `(k_x, k_y)` of the scanned line, units of `1/a`.
    pub axis: [f64; 2],
    pub band_pair: Option<usize>,
    pub starts: usize,
    pub seed: u64,
    pub chirality_radius: f64,
    pub chirality_mesh: usize,
}

impl Default for WeylSearch {
    fn default() -> Self {
        Self {
            mode: SearchMode::Axis,
            gap_tol: 1e-4,
            scan_points: 240,
            refine_steps: 60,
            axis: [0.0, 0.0],
            band_pair: None,
            starts: 24,
            seed: 7,
            chirality_radius: 0.05,
            chirality_mesh: 20,
        }
    }
}

impl WeylSearch {
    pub fn validate(&self) -> Result<()> {
        if !(self.gap_tol > 0.0) || self.scan_points < 8 || self.refine_steps == 0 {
            return Err(Error::Domain(
                "weyl search needs gap_tol > 0, scan_points >= 8, refine_steps >= 1".into(),
            ));
        }
        if !(self.chirality_radius > 0.0) || self.chirality_mesh < 4 {
            return Err(Error::Domain(
                "chirality sphere needs radius > 0 and mesh >= 4".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylNode {
    /// Node position in units of `π/a`.
    pub k_position: [f64; 3],
    /// `(ω_W − ω₀)/γ̃₀`.
    pub weyl_frequency: f64,
    pub chirality: Option<i32>,
    pub berry_flux: Option<f64>,
    pub residual_gap: f64,
    pub in_light_cone: bool,
    pub isolated: Option<bool>,
    pub bands: [usize; 2],
}

impl WeylNode {
    /// Position in units of `1/a`.
    pub fn k(&self) -> Vec3 {
        Vec3::from(self.k_position) * PI
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeylSearchResult {
    pub nodes: Vec<WeylNode>,
    /// Degeneracies whose Berry flux was not a clean nonzero integer (or,
    /// on an axis, not opposite to that of the mirror partner).
    pub rejected: Vec<WeylNode>,
    /// Smallest gap seen anywhere in the search, with its position (π/a).
    pub smallest_gap: f64,
    pub smallest_gap_at: [f64; 3],
}

impl WeylSearchResult {
    pub fn found(&self) -> bool {
        !self.nodes.is_empty()
    }

    /// The first node; on an axis search this is the pair farthest from Γ.
    pub fn primary(&self) -> Option<&WeylNode> {
        self.nodes.first()
    }
}

/// Number of light spheres `|k + g| < k₀` enclosing `k`.
pub fn light_spheres_enclosing(lattice: &LatticeGeometry, k: &Vec3, k0a: f64) -> usize {
    let b = lattice.reciprocal_basis();
    let kr = lattice.reduce_k(k);
    let n3 = if b.len() == 3 { 1 } else { 0 };
    let mut count = 0;
    for i in -1..=1 {
        for j in -1..=1 {
            for l in -n3..=n3 {
                let mut q = kr + b[0] * i as f64 + b[1] * j as f64;
                if b.len() == 3 {
                    q += b[2] * l as f64;
                }
                if lattice.project_in_plane(&q).norm() < k0a {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Lower index of the mid-spectrum material pair at `k`.
pub fn crossing_pair(lattice: &LatticeGeometry, k: &Vec3, k0a: f64) -> usize {
    let n = lattice.num_orbitals() as i64;
    let p = n / 2 - 2 * light_spheres_enclosing(lattice, k, k0a) as i64;
    p.clamp(0, n - 2) as usize
}

struct GapProblem<'a> {
    lattice: &'a LatticeGeometry,
    params: &'a ArrayParams,
    config: &'a EwaldConfig,
    pair: Option<usize>,
}

struct GapValue {
    gap: f64,
    omega: f64,
    pair: usize,
}

impl GapProblem<'_> {
    fn eval(&self, k: &Vec3) -> Result<GapValue> {
        let (solution, _) = solve_bands_nudged(self.lattice, self.params, k, self.config)?;
        let pair = self
            .pair
            .unwrap_or_else(|| crossing_pair(self.lattice, k, self.params.k0a()));
        let f = &solution.frequencies;
        Ok(GapValue {
            gap: (f[pair + 1] - f[pair]).abs(),
            omega: 0.5 * (f[pair] + f[pair + 1]),
            pair,
        })
    }
}

struct AxisCost<'a> {
    problem: &'a GapProblem<'a>,
    axis: [f64; 2],
}

impl CostFunction for AxisCost<'_> {
    type Param = f64;
    type Output = f64;
    fn cost(&self, kz: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self
            .problem
            .eval(&Vec3::new(self.axis[0], self.axis[1], *kz))?
            .gap)
    }
}

struct ZoneCost<'a> {
    problem: &'a GapProblem<'a>,
}

impl CostFunction for ZoneCost<'_> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, k: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.problem.eval(&Vec3::new(k[0], k[1], k[2]))?.gap)
    }
}

fn from_argmin(e: argmin::core::Error) -> Error {
    match e.downcast::<Error>() {
        Ok(ours) => ours,
        Err(other) => Error::Domain(format!("optimizer failed: {other}")),
    }
}

pub fn find_weyl_nodes(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    search: &WeylSearch,
    config: &EwaldConfig,
) -> Result<WeylSearchResult> {
    search.validate()?;
    let problem = GapProblem {
        lattice,
        params,
        config,
        pair: search.band_pair,
    };
    if let Some(p) = search.band_pair {
        if p + 1 >= lattice.num_orbitals() {
            return Err(Error::Domain(format!(
                "band pair ({p}, {}) exceeds {} bands",
                p + 1,
                lattice.num_orbitals()
            )));
        }
    }
    let mut result = match search.mode {
        SearchMode::Axis => axis_search(&problem, search)?,
        SearchMode::Full3d => zone_search(&problem, search)?,
    };
    let centres: Vec<Vec3> = result.nodes.iter().map(|n| n.k()).collect();
    for (i, node) in result.nodes.iter_mut().enumerate() {
        // keep neighbouring nodes and periodic images outside the sphere
        let mut gap = f64::INFINITY;
        for (j, c) in centres.iter().enumerate() {
            let d = lattice.reduce_k(&(c - centres[i])).norm();
            if j != i || d > 1e-9 {
                gap = gap.min(d);
            }
        }
        let radius = search.chirality_radius.min(0.3 * gap);
        let flux = berry_flux(
            lattice,
            params,
            &node.k(),
            node.bands[0],
            radius,
            search.chirality_mesh,
            config,
        )?;
        node.berry_flux = Some(flux);
        let rounded = flux.round();
        if (flux - rounded).abs() <= 0.1 && rounded != 0.0 {
            node.chirality = Some(rounded as i32);
        }
    }
    let mut kept = Vec::new();
    let mut rejected = Vec::new();
    match search.mode {
        // axis nodes come as (node, mirror) pairs
        SearchMode::Axis => {
            let mut pairs: Vec<&[WeylNode]> = Vec::new();
            for pair in result.nodes.chunks(2) {
                let ok = pair.len() == 2
                    && matches!((pair[0].chirality, pair[1].chirality), (Some(a), Some(b)) if a == -b);
                if ok {
                    pairs.push(pair)
                } else {
                    rejected.extend_from_slice(pair)
                }
            }
            // the pair farthest from Γ comes first; crossings close to Γ inside
            // the light cone involve the photon-like branches
            pairs.sort_by(|a, b| b[0].k().norm().total_cmp(&a[0].k().norm()));
            for pair in pairs {
                kept.extend_from_slice(pair);
            }
        }
        SearchMode::Full3d => {
            for n in result.nodes.drain(..) {
                if n.chirality.is_some() {
                    kept.push(n)
                } else {
                    rejected.push(n)
                }
            }
        }
    }
    result.nodes = kept;
    result.rejected = rejected;
    Ok(result)
}

fn make_node(problem: &GapProblem, k: Vec3, value: &GapValue) -> WeylNode {
    WeylNode {
        k_position: [k.x / PI, k.y / PI, k.z / PI],
        weyl_frequency: value.omega,
        chirality: None,
        berry_flux: None,
        residual_gap: value.gap,
        in_light_cone: problem.lattice.in_light_cone(&k, problem.params.k0a()),
        isolated: None,
        bands: [value.pair, value.pair + 1],
    }
}

fn axis_search(problem: &GapProblem, search: &WeylSearch) -> Result<WeylSearchResult> {
    let n = search.scan_points;
    let [ax, ay] = search.axis;
    let at = |kz: f64| Vec3::new(ax, ay, kz);
    let kz: Vec<f64> = (1..=n).map(|i| PI * i as f64 / n as f64).collect();
    let scan: Vec<(f64, usize)> = kz
        .par_iter()
        .map(|&z| problem.eval(&at(z)).map(|v| (v.gap, v.pair)))
        .collect::<Result<_>>()?;

    let mut smallest = (f64::INFINITY, 0.0);
    for (i, &(g, _)) in scan.iter().enumerate() {
        if g < smallest.0 {
            smallest = (g, kz[i]);
        }
    }

    let h = 0.5 * PI / n as f64;
    let mut nodes = Vec::new();
    for i in 0..n {
        let g = scan[i].0;
        let left_ok = i == 0 || (g <= scan[i - 1].0 && scan[i - 1].1 == scan[i].1);
        let right_ok = i == n - 1 || (g <= scan[i + 1].0 && scan[i + 1].1 == scan[i].1);
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = if i == 0 { 0.5 * kz[0] } else { kz[i - 1] };
        let hi = if i == n - 1 { PI } else { kz[i + 1] };
        let cost = AxisCost {
            problem,
            axis: search.axis,
        };
        let solver = GoldenSectionSearch::new(lo, hi)
            .and_then(|s| s.with_tolerance(1e-13))
            .map_err(from_argmin)?;
        let res = Executor::new(cost, solver)
            .configure(|s| s.param(kz[i].min(hi)).max_iters(search.refine_steps))
            .run()
            .map_err(from_argmin)?;
        let best = *res
            .state()
            .get_best_param()
            .expect("golden section keeps a best point");
        let value = problem.eval(&at(best))?;
        if value.gap < smallest.0 {
            smallest = (value.gap, best);
        }
        if value.gap >= search.gap_tol {
            continue;
        }
        // an isolated linear touching rises on both sides; a degenerate line does not
        let floor = (10.0 * search.gap_tol).max(3.0 * value.gap);
        let side = |z: f64| problem.eval(&at(z)).map(|v| v.gap);
        if side(best - h)? < floor || side(best + h)? < floor {
            continue;
        }
        if nodes
            .iter()
            .any(|n: &WeylNode| (n.k_position[2] * PI - best).abs() < 2.0 * h)
        {
            continue;
        }
        nodes.push(make_node(problem, at(best), &value));
        let mirror = problem.eval(&at(-best))?;
        nodes.push(make_node(problem, at(-best), &mirror));
    }
    Ok(WeylSearchResult {
        nodes,
        rejected: Vec::new(),
        smallest_gap: smallest.0,
        smallest_gap_at: [ax / PI, ay / PI, smallest.1 / PI],
    })
}

fn zone_search(problem: &GapProblem, search: &WeylSearch) -> Result<WeylSearchResult> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(search.seed);
    let starts: Vec<Vec<f64>> = (0..search.starts)
        .map(|_| (0..3).map(|_| rng.gen_range(-PI..PI)).collect())
        .collect();
    let found: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|x0| {
            let mut simplex = vec![x0.clone()];
            for d in 0..3 {
                let mut p = x0.clone();
                p[d] += 0.3;
                simplex.push(p);
            }
            let solver = NelderMead::new(simplex)
                .with_sd_tolerance(1e-14)
                .map_err(from_argmin)?;
            let res = Executor::new(ZoneCost { problem }, solver)
                .configure(|s| s.max_iters(600))
                .run()
                .map_err(from_argmin)?;
            let best = res
                .state()
                .get_best_param()
                .cloned()
                .expect("simplex keeps a best point");
            Ok((best, res.state().get_best_cost()))
        })
        .collect::<Result<_>>()?;

    let mut smallest = (f64::INFINITY, [0.0; 3]);
    let mut nodes: Vec<WeylNode> = Vec::new();
    for (x, g) in found {
        let k = problem.lattice.reduce_k(&Vec3::new(x[0], x[1], x[2]));
        if g < smallest.0 {
            smallest = (g, [k.x / PI, k.y / PI, k.z / PI]);
        }
        if g >= search.gap_tol {
            continue;
        }
        let duplicate = nodes.iter().any(|n| {
            let d = problem.lattice.reduce_k(&(n.k() - k));
            d.norm() < 1e-3
        });
        if !duplicate {
            let value = problem.eval(&k)?;
            nodes.push(make_node(problem, k, &value));
        }
    }
    nodes.sort_by(|a, b| {
        a.k_position
            .partial_cmp(&b.k_position)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(WeylSearchResult {
        nodes,
        rejected: Vec::new(),
        smallest_gap: smallest.0,
        smallest_gap_at: smallest.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingPoint {
    /// Units of π/a.
    pub k_position: [f64; 3],
    pub frequency: f64,
    pub gap: f64,
}

struct RayCost<'a> {
    problem: &'a GapProblem<'a>,
    center: Vec3,
    dir: Vec3,
}

impl CostFunction for RayCost<'_> {
    type Param = f64;
    type Output = f64;
    fn cost(&self, r: &f64) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.problem.eval(&(self.center + self.dir * *r))?.gap)
    }
}

/// Smallest gap between bands `pair` and `pair + 1` along `rays` in-plane
/// directions from `center` (a point of the plane `k_z = center.z`), over
/// radii in `radius`. A nodal line encircling `center` shows up as one
/// near-zero minimum per ray.
pub fn degeneracy_ring(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    center: Vec3,
    pair: usize,
    rays: usize,
    radius: [f64; 2],
    config: &EwaldConfig,
) -> Result<Vec<RingPoint>> {
    if pair + 1 >= lattice.num_orbitals()
        || rays == 0
        || !(radius[0] >= 0.0 && radius[1] > radius[0])
    {
        return Err(Error::Domain(
            "degeneracy ring needs a valid band pair, rays > 0 and an increasing radius range"
                .into(),
        ));
    }
    let problem = GapProblem {
        lattice,
        params,
        config,
        pair: Some(pair),
    };
    const SCAN: usize = 48;
    (0..rays)
        .into_par_iter()
        .map(|i| {
            let t = 2.0 * PI * i as f64 / rays as f64;
            let dir = Vec3::new(t.cos(), t.sin(), 0.0);
            let rs: Vec<f64> = (0..=SCAN)
                .map(|j| radius[0] + (radius[1] - radius[0]) * j as f64 / SCAN as f64)
                .collect();
            let mut best = (f64::INFINITY, 0);
            for (j, &r) in rs.iter().enumerate() {
                let g = problem.eval(&(center + dir * r))?.gap;
                if g < best.0 {
                    best = (g, j);
                }
            }
            let (lo, hi) = (rs[best.1.saturating_sub(1)], rs[(best.1 + 1).min(SCAN)]);
            let solver = GoldenSectionSearch::new(lo, hi)
                .and_then(|s| s.with_tolerance(1e-13))
                .map_err(from_argmin)?;
            let res = Executor::new(
                RayCost {
                    problem: &problem,
                    center,
                    dir,
                },
                solver,
            )
            .configure(|s| s.param(rs[best.1].clamp(lo, hi)).max_iters(60))
            .run()
            .map_err(from_argmin)?;
            let r = *res
                .state()
                .get_best_param()
                .expect("golden section keeps a best point");
            let k = center + dir * r;
            let v = problem.eval(&k)?;
            Ok(RingPoint {
                k_position: [k.x / PI, k.y / PI, k.z / PI],
                frequency: v.omega,
                gap: v.gap,
            })
        })
        .collect()
}

/// Berry flux (in units of 2π) of band `band` through a sphere of radius
/// `radius` around `center`, from gauge-invariant plaquette products on an
/// `n × n` latitude-longitude mesh whose polar rows are triangles.
pub fn berry_flux(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    center: &Vec3,
    band: usize,
    radius: f64,
    n: usize,
    config: &EwaldConfig,
) -> Result<f64> {
    // index 0 is the north pole, then rings 1..n-1 of n points, then the south pole
    let mut points = vec![*center + Vec3::new(0.0, 0.0, radius)];
    for i in 1..n {
        let theta = PI * i as f64 / n as f64;
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            points.push(
                *center
                    + radius
                        * Vec3::new(
                            theta.sin() * phi.cos(),
                            theta.sin() * phi.sin(),
                            theta.cos(),
                        ),
            );
        }
    }
    points.push(*center - Vec3::new(0.0, 0.0, radius));
    let south = points.len() - 1;
    let states: Vec<Vec<Complex64>> = points
        .par_iter()
        .map(|k| solve_bands_nudged(lattice, params, k, config).map(|(s, _)| s.coefficient(band)))
        .collect::<Result<_>>()?;

    let link = |a: usize, b: usize| -> Complex64 {
        let z: Complex64 = states[a]
            .iter()
            .zip(&states[b])
            .map(|(x, y)| x.conj() * y)
            .sum();
        z / z.norm()
    };
    let ring = |i: usize, j: usize| 1 + (i - 1) * n + (j % n);
    let mut flux = 0.0;
    for j in 0..n {
        // θ grows southwards and φ eastwards, so this order circulates about the outward normal
        flux += (link(0, ring(1, j)) * link(ring(1, j), ring(1, j + 1)) * link(ring(1, j + 1), 0))
            .arg();
        for i in 1..n - 1 {
            let (a, b, c, d) = (
                ring(i, j),
                ring(i + 1, j),
                ring(i + 1, j + 1),
                ring(i, j + 1),
            );
            flux += (link(a, b) * link(b, c) * link(c, d) * link(d, a)).arg();
        }
        let (a, c) = (ring(n - 1, j), ring(n - 1, j + 1));
        flux += (link(a, south) * link(south, c) * link(c, a)).arg();
    }
    Ok(flux / (2.0 * PI))
}

/// Integer chirality of a located node; fails when the flux is not within
/// 0.1 of an integer (the sphere must then shrink or the mesh refine).
pub fn chirality(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    node: &WeylNode,
    radius: f64,
    n: usize,
    config: &EwaldConfig,
) -> Result<i32> {
    let flux = berry_flux(lattice, params, &node.k(), node.bands[0], radius, n, config)?;
    let rounded = flux.round();
    if (flux - rounded).abs() > 0.1 {
        return Err(Error::InconclusiveFlux { flux });
    }
    Ok(rounded as i32)
}

#[derive(Debug, Clone, Serialize)]
pub struct IsolationReport {
    pub isolated: bool,
    /// States in the window per k-point.
    pub dos_window_count: f64,
    pub threshold: f64,
    /// High-symmetry point nearest to most of the in-window states away
    /// from the nodes.
    pub spoiler: Option<String>,
    pub grid_n: usize,
    pub nudged: usize,
}

/// Counts states within `window` around the node frequency on a Γ-centred
/// `grid_n³` grid. The node's own cones are included in the count.
pub fn isolation_check(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    nodes: &[WeylNode],
    window: f64,
    grid_n: usize,
    threshold: f64,
    config: &EwaldConfig,
) -> Result<IsolationReport> {
    if nodes.is_empty() {
        return Err(Error::Domain(
            "isolation check needs at least one node".into(),
        ));
    }
    let samples = sample_grid(lattice, params, grid_n, config)?;
    Ok(isolation_from_samples(
        lattice, &samples, grid_n, nodes, window, threshold,
    ))
}

pub fn isolation_from_samples(
    lattice: &LatticeGeometry,
    samples: &[GridSample],
    grid_n: usize,
    nodes: &[WeylNode],
    window: f64,
    threshold: f64,
) -> IsolationReport {
    let omega = nodes[0].weyl_frequency;
    let count = window_count(samples, omega, window);
    let (lo, hi) = (omega - 0.5 * window, omega + 0.5 * window);
    let exclusion = 3.0 * 2.0 * PI / grid_n as f64;
    let vertices = lattice.vertices();
    let mut votes = vec![0usize; vertices.len()];
    for s in samples {
        if !s.solution.frequencies.iter().any(|&w| w >= lo && w <= hi) {
            continue;
        }
        if nodes
            .iter()
            .any(|n| lattice.reduce_k(&(s.k - n.k())).norm() < exclusion)
        {
            continue;
        }
        let mut best = (f64::INFINITY, 0);
        for (vi, (_, v)) in vertices.iter().enumerate() {
            for sign in [1.0, -1.0] {
                let d = lattice.reduce_k(&(s.k - v * sign)).norm();
                if d < best.0 - 1e-12 {
                    best = (d, vi);
                }
            }
        }
        votes[best.1] += 1;
    }
    let spoiler = votes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| vertices[i].0.to_string());
    IsolationReport {
        isolated: count <= threshold,
        dos_window_count: count,
        threshold,
        spoiler,
        grid_n,
        nudged: samples.iter().filter(|s| s.nudged).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_rule_follows_light_cone() {
        let lat = LatticeGeometry::bcc();
        let k0 = 2.0 * PI * 0.1;
        assert_eq!(crossing_pair(&lat, &Vec3::new(0.0, 0.0, 0.1), k0), 1);
        assert_eq!(crossing_pair(&lat, &Vec3::new(0.0, 0.0, 2.0), k0), 3);
        assert_eq!(
            crossing_pair(&LatticeGeometry::cub(), &Vec3::new(PI, PI, 1.0), k0),
            1
        );
    }

    #[test]
    fn flux_vanishes_away_from_nodes() {
        let lat = LatticeGeometry::bcc();
        let p = ArrayParams::new(0.1, 5.0).unwrap();
        let f = berry_flux(
            &lat,
            &p,
            &Vec3::new(1.0, 0.7, 0.4),
            3,
            0.05,
            12,
            &EwaldConfig::default(),
        )
        .unwrap();
        assert!(f.abs() < 0.1, "{f}");
    }

    #[test]
    fn search_validation() {
        let s = WeylSearch {
            gap_tol: 0.0,
            ..Default::default()
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn ring_arguments_are_checked() {
        let lat = LatticeGeometry::cub();
        let p = ArrayParams::new(0.1, 5.0).unwrap();
        let c = EwaldConfig::default();
        let z = Vec3::new(0.0, 0.0, PI);
        assert!(degeneracy_ring(&lat, &p, z, 2, 8, [0.1, 1.0], &c).is_err());
        assert!(degeneracy_ring(&lat, &p, z, 1, 0, [0.1, 1.0], &c).is_err());
        assert!(degeneracy_ring(&lat, &p, z, 1, 8, [1.0, 0.5], &c).is_err());
    }
}
