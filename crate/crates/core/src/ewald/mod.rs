//! Lattice sums `S(k, Δ) = Σ_R G(Δ − R) e^{ik·R}` of the dyadic Green's
//! function over 3D (bulk) and 2D (slab) lattices.
//!
//! Both are evaluated with the Ewald splitting of the scalar periodic
//! Green's function. The dyadic operator `I + ∇∇/k₀²` is applied to every
//! term analytically: in the spectral part it becomes `I − q qᵀ/k₀²` (3D) or
//! the in-plane/out-of-plane derivative mix (2D); in the spatial part each
//! term is a radial function whose first two derivatives are known in closed
//! form. When `Δ = 0` the `R = 0` term is excluded and replaced by the
//! analytic limit of the screened self-interaction.

mod oracle;
mod special;

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::model::{CMat3, Vec3, I};

pub use oracle::{
    direct_sum_oracle, extrapolate_to_zero, extrapolated_oracle, light_sphere_distance, Damping,
    OracleSum,
};
use special::{erfi, exp_erfc, scaled_erfc};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Splitting and truncation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EwaldConfig {
    /// Splitting parameter in units of `1/a`; `None` picks `√π / a_cell`.
    pub splitting_parameter: Option<f64>,
    pub real_space_shells: usize,
    pub reciprocal_shells: usize,
    /// Relative size of the last shell at which a sum counts as converged.
    pub tolerance: f64,
    pub self_term_excluded: bool,
    /// Relative distance `||k+g| − k₀|/k₀` below which a configuration is
    /// reported as a diffraction singularity.
    pub singular_tolerance: f64,
    /// Re-evaluate at half and twice the splitting parameter and report the
    /// spread (triples the cost).
    pub report_splitting_spread: bool,
}

impl Default for EwaldConfig {
    fn default() -> Self {
        Self {
            splitting_parameter: None,
            real_space_shells: 8,
            reciprocal_shells: 12,
            tolerance: 1e-12,
            self_term_excluded: true,
            singular_tolerance: 1e-9,
            report_splitting_spread: false,
        }
    }
}

impl EwaldConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(e) = self.splitting_parameter {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::Domain(format!(
                    "splitting parameter must be positive, got {e}"
                )));
            }
        }
        if self.real_space_shells < 1 || self.reciprocal_shells < 1 {
            return Err(Error::Domain("shell budgets must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn with_splitting(mut self, e: f64) -> Self {
        self.splitting_parameter = Some(e);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub splitting_parameter: f64,
    pub real_space_shells: usize,
    pub reciprocal_shells: usize,
    pub real_space_terms: usize,
    pub reciprocal_terms: usize,
    /// Largest element of the last real-space / spectral shell.
    pub last_real_shell: f64,
    pub last_reciprocal_shell: f64,
    /// Max relative deviation over splitting parameters `E/2` and `2E`.
    pub splitting_spread: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenLatticeSum {
    pub value: CMat3,
    pub quasimomentum: Vec3,
    pub offset: Vec3,
    pub periodic_dimension: usize,
    pub report: ConvergenceReport,
}

/// Bulk sum over a 3D-periodic lattice.
pub fn lattice_sum_3d(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k: &Vec3,
    k0a: f64,
    config: &EwaldConfig,
) -> Result<GreenLatticeSum> {
    if lattice.periodic_dimension() != 3 {
        return Err(Error::Domain(
            "lattice_sum_3d needs a 3D-periodic lattice".into(),
        ));
    }
    lattice_sum(lattice, offset, k, k0a, config)
}

/// Sum over a 2D-periodic lattice; `offset` may have any out-of-plane
/// component, `k_par` is projected onto the lattice plane.
pub fn lattice_sum_2d(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k_par: &Vec3,
    k0a: f64,
    config: &EwaldConfig,
) -> Result<GreenLatticeSum> {
    if lattice.periodic_dimension() != 2 {
        return Err(Error::Domain(
            "lattice_sum_2d needs a 2D-periodic lattice".into(),
        ));
    }
    lattice_sum(lattice, offset, k_par, k0a, config)
}

/// Dimension-dispatching entry point used by the Bloch assembler.
pub fn lattice_sum(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k: &Vec3,
    k0a: f64,
    config: &EwaldConfig,
) -> Result<GreenLatticeSum> {
    config.validate()?;
    if !(k0a > 0.0) {
        return Err(Error::Domain(format!("k0a must be positive, got {k0a}")));
    }
    let is_self = offset.norm() < 1e-12;
    if is_self && !config.self_term_excluded {
        return Err(Error::Domain(
            "the R = 0 self term diverges and must be excluded".into(),
        ));
    }
    let dim = lattice.periodic_dimension();
    let e = default_splitting(lattice, k0a, config);
    let (value, mut report) =
        evaluate(lattice, offset, k, k0a, e, config).map_err(|err| match err {
            // the spectral sum sees q = k + g; report g relative to the caller's k
            Error::Singular { g: q, mismatch } => {
                let kp = if dim == 2 {
                    lattice.project_in_plane(k)
                } else {
                    *k
                };
                Error::Singular {
                    g: [q[0] - kp.x, q[1] - kp.y, q[2] - kp.z],
                    mismatch,
                }
            }
            other => other,
        })?;
    if config.report_splitting_spread {
        let scale = value
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut spread: f64 = 0.0;
        for factor in [0.5, 2.0] {
            let (other, _) = evaluate(lattice, offset, k, k0a, e * factor, config)?;
            spread = spread.max(max_abs_diff(&value, &other) / scale);
        }
        report.splitting_spread = Some(spread);
    }
    Ok(GreenLatticeSum {
        value,
        quasimomentum: *k,
        offset: *offset,
        periodic_dimension: dim,
        report,
    })
}

fn default_splitting(lattice: &LatticeGeometry, k0a: f64, config: &EwaldConfig) -> f64 {
    let dim = lattice.periodic_dimension() as f64;
    let e = config
        .splitting_parameter
        .unwrap_or_else(|| SQRT_PI / lattice.cell_measure().powf(1.0 / dim));
    // exp((k0/2E)^2) overflows for E ≪ k0; keep the exponent bounded.
    let max_ratio = 12.0;
    e.max(k0a / (2.0 * max_ratio))
}

pub(crate) fn max_abs_diff(a: &CMat3, b: &CMat3) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_abs(a: &CMat3) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn evaluate(
    lattice: &LatticeGeometry,
    offset: &Vec3,
    k: &Vec3,
    k0a: f64,
    e: f64,
    config: &EwaldConfig,
) -> Result<(CMat3, ConvergenceReport)> {
    let k_red = lattice.reduce_k(k);
    let is_self = offset.norm() < 1e-12;
    let dim = lattice.periodic_dimension();

    let spectral = if dim == 3 {
        let v = lattice.cell_measure();
        let b = lattice.reciprocal_basis();
        sum_shells(dim, config.reciprocal_shells, config.tolerance, |n| {
            let q = k_red + b[0] * n[0] as f64 + b[1] * n[1] as f64 + b[2] * n[2] as f64;
            spectral_term_3d(&q, offset, k0a, e, v, config.singular_tolerance)
        })?
    } else {
        let area = lattice.cell_measure();
        let normal = lattice.normal().expect("surface lattice");
        let b = lattice.reciprocal_basis();
        sum_shells(dim, config.reciprocal_shells, config.tolerance, |n| {
            let q = k_red + b[0] * n[0] as f64 + b[1] * n[1] as f64;
            spectral_term_2d(&q, offset, &normal, k0a, e, area, config.singular_tolerance)
        })?
    };

    let a = lattice.direct_basis();
    let spatial = sum_shells(dim, config.real_space_shells, config.tolerance, |n| {
        let mut r = Vec3::zeros();
        for (ai, ni) in a.iter().zip(n.iter()) {
            r += ai * *ni as f64;
        }
        let rho = offset - r;
        if rho.norm() < 1e-12 {
            return Ok(CMat3::zeros());
        }
        let phase = (I * k_red.dot(&r)).exp();
        Ok(spatial_term(&rho, k0a, e).map(|x| phase * x))
    })?;

    let mut value = spectral.value + spatial.value;
    if is_self {
        value += CMat3::identity() * self_term(k0a, e);
    }
    let report = ConvergenceReport {
        splitting_parameter: e,
        real_space_shells: spatial.shells,
        reciprocal_shells: spectral.shells,
        real_space_terms: spatial.terms,
        reciprocal_terms: spectral.terms,
        last_real_shell: spatial.last_shell,
        last_reciprocal_shell: spectral.last_shell,
        splitting_spread: None,
    };
    Ok((value, report))
}

struct ShellSum {
    value: CMat3,
    shells: usize,
    terms: usize,
    last_shell: f64,
}

/// Integer vectors with max-norm exactly `n` in the first `dim` components.
pub(crate) fn shell_indices(n: i32, dim: usize) -> Vec<[i32; 3]> {
    let mut out = Vec::new();
    let range = -n..=n;
    match dim {
        3 => {
            for i in range.clone() {
                for j in range.clone() {
                    for l in range.clone() {
                        if i.abs().max(j.abs()).max(l.abs()) == n {
                            out.push([i, j, l]);
                        }
                    }
                }
            }
        }
        2 => {
            for i in range.clone() {
                for j in range.clone() {
                    if i.abs().max(j.abs()) == n {
                        out.push([i, j, 0]);
                    }
                }
            }
        }
        _ => unreachable!("only 2D and 3D lattices"),
    }
    out
}

fn sum_shells(
    dim: usize,
    budget: usize,
    tolerance: f64,
    mut term: impl FnMut(&[i32; 3]) -> Result<CMat3>,
) -> Result<ShellSum> {
    const MIN_SHELLS: usize = 3;
    let mut total = CMat3::zeros();
    let mut terms = 0;
    let mut last_shell = f64::INFINITY;
    let mut quiet = 0;
    for n in 0..=budget {
        let mut shell = CMat3::zeros();
        for idx in shell_indices(n as i32, dim) {
            shell += term(&idx)?;
            terms += 1;
        }
        total += shell;
        last_shell = max_abs(&shell);
        if last_shell <= tolerance * max_abs(&total) {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if n + 1 >= MIN_SHELLS && quiet >= 2 {
            return Ok(ShellSum {
                value: total,
                shells: n + 1,
                terms,
                last_shell,
            });
        }
    }
    Err(Error::Convergence {
        shells: budget + 1,
        last_shell,
        reference: max_abs(&total),
    })
}

fn check_singular(q: &Vec3, k0: f64, tol: f64) -> Result<()> {
    let mismatch = q.norm() - k0;
    if mismatch.abs() < tol * k0.max(1.0) {
        return Err(Error::Singular {
            g: [q.x, q.y, q.z],
            mismatch,
        });
    }
    Ok(())
}

fn spectral_term_3d(q: &Vec3, r: &Vec3, k0: f64, e: f64, volume: f64, tol: f64) -> Result<CMat3> {
    check_singular(q, k0, tol)?;
    let q2 = q.norm_squared();
    let k02 = k0 * k0;
    let weight = ((k02 - q2) / (4.0 * e * e)).exp() / (volume * (q2 - k02));
    let phase = (I * q.dot(r)).exp() * weight;
    let proj: Matrix3<f64> = Matrix3::identity() - q * q.transpose() / k02;
    Ok(proj.map(|x| phase * x))
}

#[allow(clippy::too_many_arguments)]
fn spectral_term_2d(
    q: &Vec3,
    r: &Vec3,
    normal: &Vec3,
    k0: f64,
    e: f64,
    area: f64,
    tol: f64,
) -> Result<CMat3> {
    check_singular(q, k0, tol)?;
    let qn = q.norm();
    let gamma = if qn >= k0 {
        Complex64::new((qn * qn - k0 * k0).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -(k0 * k0 - qn * qn).sqrt())
    };
    let s = r.dot(normal);
    let a = gamma / (2.0 * e);
    let plus = exp_erfc(gamma * s, a + s * e);
    let minus = exp_erfc(-gamma * s, a - s * e);
    let sum = plus + minus;
    let diff = plus - minus;
    let gauss = (2.0 * e / SQRT_PI) * (-gamma * gamma / (4.0 * e * e) - s * s * e * e).exp();
    let z0 = sum / (4.0 * area * gamma);
    let z1 = diff / (4.0 * area);
    let z2 = (gamma * sum - 2.0 * gauss) / (4.0 * area);

    let phase = (I * q.dot(r)).exp();
    let k02 = k0 * k0;
    Ok(CMat3::from_fn(|b, bp| {
        let delta = if b == bp {
            z0
        } else {
            Complex64::new(0.0, 0.0)
        };
        let deriv = -q[b] * q[bp] * z0
            + I * (q[b] * normal[bp] + normal[b] * q[bp]) * z1
            + normal[b] * normal[bp] * z2;
        phase * (delta + deriv / k02)
    }))
}

/// Screened real-space term `(I + ∇∇/k₀²) f(|ρ|)` with
/// `f(ρ) = [e^{ik₀ρ} erfc(Eρ + ik₀/2E) + e^{−ik₀ρ} erfc(Eρ − ik₀/2E)] / (8πρ)`.
/// For real `k₀` the two halves are complex conjugates, so `f` is real.
fn spatial_term(rho_vec: &Vec3, k0: f64, e: f64) -> Matrix3<f64> {
    let rho = rho_vec.norm();
    let a = k0 / (2.0 * e);
    let z = Complex64::new(e * rho, a);
    // e^{ik0ρ} erfc(z) = exp(ik0ρ − z²) erfcx(z)
    let u = (I * k0 * rho - z * z).exp() * scaled_erfc(z);
    let h = 2.0 * u.re;
    let gauss = (2.0 * e / SQRT_PI) * (a * a - e * e * rho * rho).exp();
    let h1 = -2.0 * k0 * u.im - 2.0 * gauss;
    let h2 = -k0 * k0 * h + 4.0 * e * e * rho * gauss;

    let c = 1.0 / (8.0 * PI * rho);
    let f0 = h * c;
    let f1 = (h1 - h / rho) * c;
    let f2 = (h2 - 2.0 * h1 / rho + 2.0 * h / (rho * rho)) * c;

    let k02 = k0 * k0;
    let rhat = rho_vec / rho;
    let iso = f0 + f1 / (rho * k02);
    let radial = (f2 - f1 / rho) / k02;
    Matrix3::identity() * iso + rhat * rhat.transpose() * radial
}

/// `lim_{ρ→0} [(I + ∇∇/k₀²)(f(ρ) − e^{ik₀ρ}/(4πρ))]`, isotropic. The
/// imaginary part is exactly `−k₀/(6π)`, cancelling the free-space
/// `Im G(0)`.
fn self_term(k0: f64, e: f64) -> Complex64 {
    let a = k0 / (2.0 * e);
    let c = (2.0 * e / SQRT_PI) * (a * a).exp();
    let p1 = 2.0 * c - 2.0 * k0 * erfi(a);
    let p3 = -k0 * k0 * p1 - 4.0 * c * e * e;
    let f1 = Complex64::new(-p1, -2.0 * k0);
    let f3 = Complex64::new(-p3 / 6.0, 2.0 * k0.powi(3) / 6.0);
    (f1 + 2.0 * f3 / (k0 * k0)) / (8.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::green_dyadic;
    use approx::assert_relative_eq;

    fn rel_diff(a: &CMat3, b: &CMat3) -> f64 {
        max_abs_diff(a, b) / max_abs(a).max(max_abs(b))
    }

    #[test]
    fn shells_partition_the_index_box() {
        for dim in [2, 3] {
            let total: usize = (0..=4).map(|n| shell_indices(n, dim).len()).sum();
            assert_eq!(total, 9usize.pow(dim as u32));
        }
    }

    #[test]
    fn spatial_plus_spectral_kernel_matches_free_space_near_origin() {
        // The screened R=0 term minus the free Green's function tends to the
        // isotropic self term as ρ → 0.
        let k0 = 2.0 * PI * 0.13;
        let e = SQRT_PI;
        let expected = self_term(k0, e);
        assert_relative_eq!(expected.im, -k0 / (6.0 * PI), epsilon = 1e-15);
        for dir in [Vec3::x(), Vec3::new(1.0, 2.0, -0.5).normalize()] {
            let rho = dir * 2e-3;
            let screened = spatial_term(&rho, k0, e).map(|x| Complex64::new(x, 0.0));
            let free = green_dyadic(&rho, k0).unwrap();
            let diff = screened - free;
            for b in 0..3 {
                for bp in 0..3 {
                    let want = if b == bp {
                        expected
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!(
                        (diff[(b, bp)] - want).norm() < 1e-4 * expected.norm(),
                        "{b}{bp}: {} vs {}",
                        diff[(b, bp)],
                        want
                    );
                }
            }
        }
    }

    #[test]
    fn bulk_sum_is_periodic_in_k() {
        let lat = LatticeGeometry::cub();
        let cfg = EwaldConfig::default();
        let k = Vec3::new(1.1, -0.4, 2.3);
        let s1 = lattice_sum_3d(&lat, &Vec3::zeros(), &k, 0.7, &cfg).unwrap();
        let s2 = lattice_sum_3d(
            &lat,
            &Vec3::zeros(),
            &(k + Vec3::new(2.0 * PI, 0.0, -4.0 * PI)),
            0.7,
            &cfg,
        )
        .unwrap();
        assert!(rel_diff(&s1.value, &s2.value) < 1e-13);
    }

    #[test]
    fn exchange_symmetry() {
        let lat = LatticeGeometry::bcc();
        let cfg = EwaldConfig::default();
        let k = Vec3::new(0.9, 1.7, -2.2);
        let d = Vec3::new(0.5, 0.5, 0.5);
        let a = lattice_sum_3d(&lat, &d, &k, 0.8, &cfg).unwrap().value;
        let b = lattice_sum_3d(&lat, &(-d), &(-k), 0.8, &cfg).unwrap().value;
        assert!(rel_diff(&a, &b) < 1e-12);
        assert!(rel_diff(&a.transpose(), &a) < 1e-12);
    }

    #[test]
    fn self_sum_imaginary_part_cancels_single_atom_decay() {
        // Im S(k, 0) = -k0/(6π) I for every k in 3D.
        let lat = LatticeGeometry::cub();
        let k0 = 2.0 * PI * 0.1;
        for k in [Vec3::new(0.2, 0.1, 0.0), Vec3::new(2.0, 1.0, 3.0)] {
            let s = lattice_sum_3d(&lat, &Vec3::zeros(), &k, k0, &EwaldConfig::default()).unwrap();
            let im = s.value.map(|z| z.im);
            assert_relative_eq!(
                im,
                Matrix3::identity() * (-k0 / (6.0 * PI)),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn splitting_invariance_3d() {
        let lat = LatticeGeometry::bcc();
        let k = Vec3::new(0.3, 2.2, -1.0);
        let k0 = 2.0 * PI * 0.1;
        let base = EwaldConfig::default();
        for d in [Vec3::zeros(), Vec3::new(0.5, 0.5, 0.5)] {
            let reference = lattice_sum_3d(&lat, &d, &k, k0, &base).unwrap();
            for e in [SQRT_PI / 2.0, SQRT_PI * 2.0] {
                let other = lattice_sum_3d(&lat, &d, &k, k0, &base.with_splitting(e)).unwrap();
                assert!(rel_diff(&reference.value, &other.value) < 1e-10);
            }
        }
    }

    #[test]
    fn splitting_invariance_2d() {
        let lat = LatticeGeometry::surface(Vec3::y(), Vec3::z(), vec![Vec3::zeros()]).unwrap();
        let k0 = 2.0 * PI * 0.1;
        let base = EwaldConfig::default();
        for k in [Vec3::new(0.0, 0.2, 0.3), Vec3::new(0.0, 2.0, -1.0)] {
            for d in [
                Vec3::zeros(),
                Vec3::new(0.5, 0.5, 0.5),
                Vec3::new(-3.0, 0.0, 0.0),
            ] {
                let reference = lattice_sum_2d(&lat, &d, &k, k0, &base).unwrap();
                for e in [SQRT_PI / 2.0, SQRT_PI * 2.0] {
                    let other = lattice_sum_2d(&lat, &d, &k, k0, &base.with_splitting(e)).unwrap();
                    assert!(
                        rel_diff(&reference.value, &other.value) < 1e-10,
                        "{k:?} {d:?} {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn diffraction_singularity_is_reported() {
        let lat = LatticeGeometry::cub();
        let k0 = 2.0 * PI * 0.1;
        let err = lattice_sum_3d(
            &lat,
            &Vec3::zeros(),
            &Vec3::new(k0, 0.0, 0.0),
            k0,
            &EwaldConfig::default(),
        )
        .unwrap_err();
        assert!(err.is_singular());
        let err = lattice_sum_3d(
            &lat,
            &Vec3::zeros(),
            &Vec3::new(2.0 * PI - k0, 0.0, 0.0),
            k0,
            &EwaldConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::Singular { g, .. } => {
                assert!(
                    (g[0] + 2.0 * PI).abs() < 1e-12 && g[1].abs() < 1e-12 && g[2].abs() < 1e-12,
                    "{g:?}"
                )
            }
            other => panic!("{other:?}"),
        }
        let surf = LatticeGeometry::surface(Vec3::y(), Vec3::z(), vec![Vec3::zeros()]).unwrap();
        let err = lattice_sum_2d(
            &surf,
            &Vec3::zeros(),
            &Vec3::new(0.0, 0.0, k0),
            k0,
            &EwaldConfig::default(),
        )
        .unwrap_err();
        assert!(err.is_singular());
    }

    #[test]
    fn wrong_dimension_rejected() {
        let lat = LatticeGeometry::cub();
        assert!(lattice_sum_2d(
            &lat,
            &Vec3::zeros(),
            &Vec3::x(),
            1.0,
            &EwaldConfig::default()
        )
        .is_err());
    }

    #[test]
    fn evanescent_decay_between_layers() {
        let lat = LatticeGeometry::surface(Vec3::y(), Vec3::z(), vec![Vec3::zeros()]).unwrap();
        let k0 = 2.0 * PI * 0.1;
        let k = Vec3::new(0.0, 2.5, 0.0);
        let kappa = (k.norm_squared() - k0 * k0).sqrt();
        let cfg = EwaldConfig::default();
        let at = |x: f64| {
            lattice_sum_2d(&lat, &Vec3::new(x, 0.0, 0.0), &k, k0, &cfg)
                .unwrap()
                .value
        };
        // beyond a few layers only the g = 0 wave survives
        let (s1, s2) = (at(14.0), at(16.0));
        let ratio = s2[(2, 2)].norm() / s1[(2, 2)].norm();
        assert_relative_eq!(ratio, (-2.0 * kappa).exp(), max_relative = 1e-6);
    }

    #[test]
    fn spread_report() {
        let lat = LatticeGeometry::bcc();
        let cfg = EwaldConfig {
            report_splitting_spread: true,
            ..Default::default()
        };
        let s = lattice_sum_3d(&lat, &Vec3::zeros(), &Vec3::new(1.0, 0.5, 0.2), 0.6, &cfg).unwrap();
        assert!(s.report.splitting_spread.unwrap() < 1e-10);
        assert!(s.report.real_space_shells >= 3);
    }
}
