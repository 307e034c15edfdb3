//! Physical parameters, the free-space dyadic Green's function and the
//! Zeeman block.
//!
//! Units: lengths in the lattice constant `a`, momenta in `1/a`, energies as
//! offsets from the bare transition frequency in units of the dipolar scale
//! `γ̃₀ = γ₀/(k₀a)³`. Decay rates handed to users are in units of `γ₀`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type CMat3 = Matrix3<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physical constants of the atomic species and applied field, in the
/// dimensionless form used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayParams {
    a_over_lambda: f64,
    zeeman: f64,
    k0a: f64,
    collective_scale: f64,
}

impl ArrayParams {
    /// `a_over_lambda` is `a/λ₀`, `zeeman` is `μB/γ̃₀` (any sign).
    pub fn new(a_over_lambda: f64, zeeman: f64) -> Result<Self> {
        if !(a_over_lambda > 0.0) || !a_over_lambda.is_finite() {
            return Err(Error::Domain(format!(
                "a/lambda0 must be positive and finite, got {a_over_lambda}"
            )));
        }
        if !zeeman.is_finite() {
            return Err(Error::Domain(format!(
                "muB/gamma_tilde must be finite, got {zeeman}"
            )));
        }
        let k0a = 2.0 * PI * a_over_lambda;
        Ok(Self {
            a_over_lambda,
            zeeman,
            k0a,
            collective_scale: 1.0 / (k0a * k0a * k0a),
        })
    }

    pub fn a_over_lambda(&self) -> f64 {
        self.a_over_lambda
    }

    /// Zeeman splitting `μB/γ̃₀`.
    pub fn zeeman(&self) -> f64 {
        self.zeeman
    }

    /// `k₀a = 2π a/λ₀`.
    pub fn k0a(&self) -> f64 {
        self.k0a
    }

    /// Single-atom decay rate; the global rate unit.
    pub fn single_atom_decay(&self) -> f64 {
        1.0
    }

    /// `γ̃₀/γ₀ = 1/(k₀a)³`.
    pub fn collective_scale(&self) -> f64 {
        self.collective_scale
    }

    /// Same parameters with a different field.
    pub fn with_zeeman(&self, zeeman: f64) -> Result<Self> {
        Self::new(self.a_over_lambda, zeeman)
    }

    /// Coefficient multiplying a (dimensionless) Green's-function lattice sum
    /// to give a coupling in `γ̃₀` units: `-(3πγ₀/k₀)·G` rescaled.
    pub fn coupling_prefactor(&self) -> f64 {
        -3.0 * PI * self.k0a * self.k0a
    }

    /// `γ₀/2` expressed in `γ̃₀` units.
    pub fn half_decay_in_tilde(&self) -> f64 {
        0.5 * self.k0a.powi(3)
    }

    /// Convert a decay rate `-2 Im E` with `E` in `γ̃₀` units into `γ₀` units.
    pub fn decay_from_eigenvalue(&self, eigenvalue: Complex64) -> f64 {
        -2.0 * eigenvalue.im * self.collective_scale
    }
}

/// Free-space dyadic Green's function `G(r)` for a displacement in units of
/// `a`, with `k0a` the dimensionless transition momentum. The value carries
/// the overall `1/a` of the physical Green's function.
///
/// The contact term at `r = 0` is not representable; self-interaction belongs
/// to the on-site block, so a zero displacement is rejected.
pub fn green_dyadic(displacement: &Vec3, k0a: f64) -> Result<CMat3> {
    let r = displacement.norm();
    if !(r > 0.0) {
        return Err(Error::Domain(
            "dyadic Green's function evaluated at zero displacement".into(),
        ));
    }
    Ok(green_dyadic_complex(displacement, Complex64::new(k0a, 0.0)))
}

/// Same as [`green_dyadic`] for a complex momentum. Only the direct-sum
/// oracle uses complex `k0`. Caller guarantees `r != 0`.
pub(crate) fn green_dyadic_complex(displacement: &Vec3, k0: Complex64) -> CMat3 {
    let r = displacement.norm();
    let rhat = displacement / r;
    let kr = k0 * r;
    let inv = kr.inv();
    let inv2 = inv * inv;
    let scalar = (I * kr).exp() / (4.0 * PI * r);
    let diag = scalar * (1.0 + I * inv - inv2);
    let outer = scalar * (-1.0 - 3.0 * I * inv + 3.0 * inv2);
    CMat3::from_fn(|b, bp| {
        let d = if b == bp {
            diag
        } else {
            Complex64::new(0.0, 0.0)
        };
        d + outer * (rhat[b] * rhat[bp])
    })
}

/// `iμB [[0,-1,0],[1,0,0],[0,0,0]]` in the Cartesian basis; Hermitian and
/// traceless. Eigenvectors are the circular states `∓(|x⟩ ± i|y⟩)/√2`
/// (energies `±μB`) and `|z⟩` (energy 0).
pub fn zeeman_block(mu_b: f64) -> CMat3 {
    let z = Complex64::new(0.0, 0.0);
    let up = Complex64::new(0.0, mu_b);
    CMat3::new(z, -up, z, up, z, z, z, z, z)
}
