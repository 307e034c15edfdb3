//! Effective Bloch Hamiltonian of a (possibly non-Bravais) array and its
//! band decomposition.
//!
//! Orbital ordering is `(ξ₁x, ξ₁y, ξ₁z, ξ₂x, …)`. The block coupling
//! sublattice `ξ` to `ξ′` is
//!
//! ```text
//! h(ξ,ξ′) = -3π(k₀a)² e^{-ik·Δ} Σ_R G(Δ − R) e^{ik·R},   Δ = δ_ξ − δ_ξ′
//! ```
//!
//! in `γ̃₀` units, and the diagonal blocks add `-i(k₀a)³/2 + h_Zeeman`.
//! `k` is used as given: folding it back into the zone would change the
//! phase gauge of the off-diagonal blocks.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::{eigen_decompose, CMatrix};
use crate::error::Result;
use crate::ewald::{lattice_sum, EwaldConfig};
use crate::lattice::{LatticeGeometry, LatticeKind};
use crate::model::{zeeman_block, ArrayParams, CMat3, Vec3, I};

/// Eigenvalues closer than this (in `γ̃₀`) form one degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct BlochMatrix {
    pub matrix: CMatrix,
    pub quasimomentum: Vec3,
    pub params: ArrayParams,
    pub lattice: LatticeKind,
    pub num_sublattices: usize,
}

impl BlochMatrix {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// The 3×3 block between sublattices `xi` and `xi_p`.
    pub fn block(&self, xi: usize, xi_p: usize) -> CMat3 {
        CMat3::from_fn(|b, bp| self.matrix[(3 * xi + b, 3 * xi_p + bp)])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BandSolution {
    pub quasimomentum: Vec3,
    /// Complex eigenvalues in `γ̃₀` units, sorted by real part.
    pub eigenvalues: Vec<Complex64>,
    /// `(ω − ω₀)/γ̃₀` per band.
    pub frequencies: Vec<f64>,
    /// `γ/γ₀` per band.
    pub decay_rates: Vec<f64>,
    /// Column `ν` holds the unit-norm amplitudes `c_{ξβ}` of band `ν`.
    pub coefficients: CMatrix,
}

impl BandSolution {
    pub fn num_bands(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn coefficient(&self, band: usize) -> Vec<Complex64> {
        self.coefficients.column(band).iter().copied().collect()
    }
}

pub fn assemble_bloch(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    k: &Vec3,
) -> Result<BlochMatrix> {
    assemble_bloch_with(lattice, params, k, &EwaldConfig::default())
}

pub fn assemble_bloch_with(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    k: &Vec3,
    config: &EwaldConfig,
) -> Result<BlochMatrix> {
    let k = if lattice.periodic_dimension() == 2 {
        lattice.project_in_plane(k)
    } else {
        *k
    };
    let sites = lattice.sublattice_displacements();
    let m = sites.len();
    let k0a = params.k0a();
    let pref = Complex64::new(params.coupling_prefactor(), 0.0);
    let onsite =
        zeeman_block(params.zeeman()) - CMat3::identity() * (I * params.half_decay_in_tilde());

    // slab offsets repeat along the stack, so sums are shared by Δ
    let mut cache: HashMap<[i64; 3], CMat3> = HashMap::new();
    let key = |d: &Vec3| [d.x, d.y, d.z].map(|c| (c * 1e9).round() as i64);

    let mut matrix = CMatrix::zeros(3 * m, 3 * m);
    for xi in 0..m {
        for xp in 0..m {
            let delta = sites[xi] - sites[xp];
            let sum = match cache.get(&key(&delta)) {
                Some(s) => *s,
                None => {
                    let s = lattice_sum(lattice, &delta, &k, k0a, config)?.value;
                    cache.insert(key(&delta), s);
                    s
                }
            };
            let phase = (-I * k.dot(&delta)).exp();
            let mut block = sum * (pref * phase);
            if xi == xp {
                block += onsite;
            }
            matrix.view_mut((3 * xi, 3 * xp), (3, 3)).copy_from(&block);
        }
    }
    Ok(BlochMatrix {
        matrix,
        quasimomentum: k,
        params: *params,
        lattice: lattice.kind(),
        num_sublattices: m,
    })
}

pub fn diagonalize(bloch: &BlochMatrix) -> Result<BandSolution> {
    let eig = eigen_decompose(&bloch.matrix)?;
    let n = eig.values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.values[a].re.total_cmp(&eig.values[b].re));

    let mut sorted_vals = Vec::with_capacity(n);
    let mut columns: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eig.values[order[end]].re - eig.values[order[end - 1]].re < DEGENERACY_TOLERANCE
        {
            end += 1;
        }
        let mut cluster: Vec<(Complex64, nalgebra::DVector<Complex64>)> = order[start..end]
            .iter()
            .map(|&i| (eig.values[i], eig.vectors.column(i).into_owned()))
            .collect();
        if cluster.len() > 1 {
            orthonormalize(&mut cluster);
        }
        for (_, v) in cluster.iter_mut() {
            fix_phase(v);
        }
        cluster.sort_by(|a, b| tie_key(&b.1).cmp(&tie_key(&a.1)));
        for (val, v) in cluster {
            sorted_vals.push(val);
            columns.push(v);
        }
        start = end;
    }

    let params = bloch.params;
    Ok(BandSolution {
        quasimomentum: bloch.quasimomentum,
        frequencies: sorted_vals.iter().map(|e| e.re).collect(),
        decay_rates: sorted_vals
            .iter()
            .map(|e| params.decay_from_eigenvalue(*e))
            .collect(),
        eigenvalues: sorted_vals,
        coefficients: CMatrix::from_columns(&columns),
    })
}

/// Assemble and diagonalize in one step.
pub fn solve_bands(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    k: &Vec3,
    config: &EwaldConfig,
) -> Result<BandSolution> {
    diagonalize(&assemble_bloch_with(lattice, params, k, config)?)
}

/// Step size used to move a sample off a diffraction singularity.
pub const NUDGE: f64 = 1e-7;

/// [`solve_bands`] for samplers: a k-point sitting exactly on a light
/// sphere `|k + g| = k₀` is moved by [`NUDGE`] along a fixed generic
/// direction (in-plane for surface lattices). The flag reports whether a
/// nudge was needed.
pub fn solve_bands_nudged(
    lattice: &LatticeGeometry,
    params: &ArrayParams,
    k: &Vec3,
    config: &EwaldConfig,
) -> Result<(BandSolution, bool)> {
    match solve_bands(lattice, params, k, config) {
        Ok(s) => return Ok((s, false)),
        Err(e) if e.is_singular() => {}
        Err(e) => return Err(e),
    }
    let dir = lattice
        .project_in_plane(&Vec3::new(0.5772156649, 0.6180339887, 0.5307710171))
        .normalize();
    let mut last = None;
    for step in [1.0, -1.0, 3.0, -3.0] {
        match solve_bands(lattice, params, &(k + dir * (NUDGE * step)), config) {
            Ok(s) => return Ok((s, true)),
            Err(e) if e.is_singular() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one nudge attempted"))
}

fn orthonormalize(cluster: &mut [(Complex64, nalgebra::DVector<Complex64>)]) {
    for i in 0..cluster.len() {
        let (done, rest) = cluster.split_at_mut(i);
        let v = &mut rest[0].1;
        for (_, u) in done.iter() {
            let proj = u.dotc(v);
            *v -= u * proj;
        }
        let norm = v.norm();
        if norm > 1e-12 {
            *v /= Complex64::new(norm, 0.0);
        }
    }
}

/// Rotate the phase so the first component of (near) maximal magnitude is
/// real and positive.
fn fix_phase(v: &mut nalgebra::DVector<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = v.iter().find(|z| z.norm() > max * (1.0 - 1e-9)) {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Magnitudes quantized to 1e-9, compared lexicographically starting at
/// `|c_{ξ₁x}|`.
fn tie_key(v: &nalgebra::DVector<Complex64>) -> Vec<i64> {
    v.iter().map(|z| (z.norm() * 1e9).round() as i64).collect()
}
