//! Right eigendecomposition of a general complex matrix.
//!
//! nalgebra provides the complex Schur form `A = Q T Q†`; eigenvectors of the
//! upper-triangular `T` follow by back-substitution and are rotated back
//! with `Q`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues and unit-norm right eigenvectors (columns), unsorted.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
}

pub fn eigen_decompose(matrix: &CMatrix) -> Result<Eigen> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::Eigen(format!(
            "matrix is {}x{}, not square",
            n,
            matrix.ncols()
        )));
    }
    if matrix
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let scale = matrix
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // nearly scalar matrices can stall at the tightest tolerance
    let schur = [f64::EPSILON, 1e-15, 1e-14, 1e-13, 1e-12]
        .iter()
        .find_map(|&eps| nalgebra::linalg::Schur::try_new(matrix.clone(), eps, 10_000))
        .ok_or_else(|| {
            Error::Eigen(format!(
                "Schur iteration did not converge (max |a_ij| = {scale:e})"
            ))
        })?;
    let (q, t) = schur.unpack();

    let tiny = f64::EPSILON * scale;
    let values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut y = CMatrix::zeros(n, n);
    for i in 0..n {
        let lambda = values[i];
        y[(i, i)] = Complex64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut rhs = Complex64::new(0.0, 0.0);
            for l in j + 1..=i {
                rhs -= t[(j, l)] * y[(l, i)];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < tiny {
                if rhs.norm() < tiny {
                    // degenerate pair with no coupling: component stays zero
                    continue;
                }
                denom = Complex64::new(tiny, 0.0);
            }
            y[(j, i)] = rhs / denom;
        }
    }
    let mut vectors = q * y;
    for mut col in vectors.column_iter_mut() {
        let norm = col.norm();
        col /= Complex64::new(norm, 0.0);
    }
    Ok(Eigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(m: &CMatrix, e: &Eigen) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, v) in e.vectors.column_iter().enumerate() {
            let r = m * v - v * e.values[i];
            worst = worst.max(r.norm());
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0, 0.0),
            c(-2.0, 1.0),
            c(0.5, 0.0),
        ]));
        let e = eigen_decompose(&m).unwrap();
        assert!(residual(&m, &e) < 1e-14);
    }

    #[test]
    fn non_normal_matrix() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(2.0, 1.0),
                c(0.0, 3.0),
                c(0.0, 0.0),
                c(2.0, -1.0),
                c(1.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let e = eigen_decompose(&m).unwrap();
        assert!(residual(&m, &e) < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_gives_independent_vectors() {
        let m = CMatrix::identity(3, 3) * c(2.0, 0.0);
        let e = eigen_decompose(&m).unwrap();
        assert!(residual(&m, &e) < 1e-14);
        assert!(e.vectors.determinant().norm() > 0.5);
    }

    #[test]
    fn nearly_scalar_matrix() {
        let mut m = CMatrix::identity(6, 6) * c(0.33, 0.0);
        m[(0, 4)] = c(3e-17, -1e-17);
        m[(4, 0)] = c(3e-17, 1e-17);
        m[(2, 5)] = c(-2e-17, 0.0);
        let e = eigen_decompose(&m).unwrap();
        assert!(residual(&m, &e) < 1e-14);
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert!(eigen_decompose(&m).is_err());
    }
}
