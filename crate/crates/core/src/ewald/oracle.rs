//! Brute-force damped lattice sums used to verify the Ewald evaluation.
//!
//! The sum `Σ_R G(Δ − R) e^{ik·R}` only converges conditionally, so every
//! term is damped and the damping is extrapolated away. Two dampings are
//! available:
//!
//! * [`Damping::ComplexMomentum`] evaluates `G` at `k₀(1 + iη)`, so terms
//!   decay like `e^{−ηk₀r}`. It is the physically transparent choice but needs
//!   very large radii once `η` is small.
//! * [`Damping::Gaussian`] multiplies each term by `e^{−ηr²}`. The damped
//!   sum is a smooth function of `η` with a regular expansion around 0 as
//!   long as no `k + g` sits on the light sphere or at the origin, so a few
//!   moderate `η` values extrapolate to high accuracy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::model::{green_dyadic_complex, CMat3, Vec3, I};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Damping {
    /// `k₀ → k₀(1 + iη)`.
    ComplexMomentum(f64),
    /// `× e^{−η r²}` with `r` in units of `a`.
    Gaussian(f64),
}

impl Damping {
    fn eta(&self) -> f64 {
        match self {
            Damping::ComplexMomentum(e) | Damping::Gaussian(e) => *e,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSum {
    pub value: CMat3,
    pub terms: usize,
    /// Largest element of the summed contribution from the outermost unit
    /// radial shell `max_radius − 1 < r ≤ max_radius`.
    pub last_shell: f64,
}

/// Damped direct sum over all lattice vectors with `|Δ − R| ≤ max_radius`.
/// Fails with [`Error::Truncation`] when the outermost shell still
/// contributes more than `tolerance` relative to the total.
pub fn direct_sum_oracle(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k: &Vec3,
    k0a: f64,
    damping: Damping,
    max_radius: f64,
    tolerance: f64,
) -> Result<OracleSum> {
    if !(damping.eta() > 0.0) {
        return Err(Error::Domain("oracle damping must be positive".into()));
    }
    if !(max_radius > 1.0) {
        return Err(Error::Domain(
            "oracle cutoff must exceed one lattice constant".into(),
        ));
    }
    let a = lattice.direct_basis();
    let b = lattice.reciprocal_basis();
    let reach = max_radius + offset.norm();
    let bounds: Vec<i64> = b
        .iter()
        .map(|bi| (reach * bi.norm() / (2.0 * std::f64::consts::PI)).ceil() as i64 + 1)
        .collect();

    let k0 = match damping {
        Damping::ComplexMomentum(eta) => Complex64::new(k0a, k0a * eta),
        Damping::Gaussian(_) => Complex64::new(k0a, 0.0),
    };

    let mut total = CMat3::zeros();
    let mut outer = CMat3::zeros();
    let mut terms = 0;
    let n2 = if bounds.len() == 3 { bounds[2] } else { 0 };
    for i in -bounds[0]..=bounds[0] {
        for j in -bounds[1]..=bounds[1] {
            for l in -n2..=n2 {
                let mut r = a[0] * i as f64 + a[1] * j as f64;
                if a.len() == 3 {
                    r += a[2] * l as f64;
                }
                let rho = offset - r;
                let dist = rho.norm();
                if dist < 1e-12 || dist > max_radius {
                    continue;
                }
                let mut weight = (I * k.dot(&r)).exp();
                if let Damping::Gaussian(eta) = damping {
                    weight *= (-eta * dist * dist).exp();
                }
                let term = green_dyadic_complex(&rho, k0) * weight;
                total += term;
                if dist > max_radius - 1.0 {
                    outer += term;
                }
                terms += 1;
            }
        }
    }
    let norm = |m: &CMat3| m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let last_shell = norm(&outer);
    if last_shell > tolerance * norm(&total) {
        return Err(Error::Truncation {
            last_shell,
            tolerance: tolerance * norm(&total),
        });
    }
    Ok(OracleSum {
        value: total,
        terms,
        last_shell,
    })
}

/// Distance from the nearest `k + g` to the light sphere `|q| = k₀`,
/// with `q` projected onto the lattice plane for 2D lattices.
pub fn light_sphere_distance(lattice: &LatticeGeometry, k: &Vec3, k0a: f64) -> f64 {
    let b = lattice.reciprocal_basis();
    let kr = lattice.reduce_k(k);
    let n3 = if b.len() == 3 { 2 } else { 0 };
    let mut best = f64::INFINITY;
    for i in -2..=2 {
        for j in -2..=2 {
            for l in -n3..=n3 {
                let mut q = kr + b[0] * i as f64 + b[1] * j as f64;
                if b.len() == 3 {
                    q += b[2] * l as f64;
                }
                let q = lattice.project_in_plane(&q);
                best = best.min((q.norm() - k0a).abs());
            }
        }
    }
    best
}

/// Gaussian-damped direct sums at five `η` nodes scaled to the distance
/// from the light sphere, extrapolated to `η = 0`. The damped sum differs
/// from its small-`η` polynomial expansion by roughly `e^{−δ²/4η}`, so the
/// largest node is kept at `δ²/60`, and at most 0.05 so that the
/// polynomial part stays low order.
pub fn extrapolated_oracle(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k: &Vec3,
    k0a: f64,
) -> Result<CMat3> {
    let delta = light_sphere_distance(lattice, k, k0a);
    if delta < 0.25 {
        return Err(Error::Domain(format!(
            "k is {delta} from the light sphere, too close for the oracle"
        )));
    }
    let etas: Vec<f64> = (0..5)
        .map(|j| (delta * delta / 60.0).min(0.05) * (2.0f64 / 3.0).powi(j))
        .collect();
    let mut values = Vec::with_capacity(etas.len());
    for &eta in &etas {
        let sum = direct_sum_oracle(
            lattice,
            offset,
            k,
            k0a,
            Damping::Gaussian(eta),
            (36.0 / eta).sqrt(),
            1e-10,
        )?;
        values.push(sum.value);
    }
    Ok(extrapolate_to_zero(&etas, &values))
}

/// Polynomial (Neville) extrapolation of `values(η)` to `η = 0`, element
/// by element.
pub fn extrapolate_to_zero(etas: &[f64], values: &[CMat3]) -> CMat3 {
    assert_eq!(etas.len(), values.len());
    assert!(!etas.is_empty());
    let mut table: Vec<CMat3> = values.to_vec();
    let n = etas.len();
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (etas[i], etas[i + level]);
            table[i] = (table[i + 1] * Complex64::from(xi) - table[i] * Complex64::from(xj))
                / Complex64::from(xi - xj);
        }
    }
    table[0]
}
