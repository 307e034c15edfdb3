//! Error-function helpers on top of the Faddeeva implementation.

use errorfunctions::{ComplexErrorFunctions, RealErrorFunctions};
use num_complex::Complex64;

/// `erfcx(z) = e^{z²} erfc(z)`.
pub(super) fn scaled_erfc(z: Complex64) -> Complex64 {
    z.erfcx()
}

/// `e^{a} erfc(z)` without forming the two factors separately, so that huge
/// `e^{a}` against tiny `erfc(z)` neither overflows nor underflows.
pub(super) fn exp_erfc(a: Complex64, z: Complex64) -> Complex64 {
    if z.re >= 0.0 {
        (a - z * z).exp() * z.erfcx()
    } else {
        2.0 * a.exp() - (a - z * z).exp() * (-z).erfcx()
    }
}

pub(super) fn erfi(x: f64) -> f64 {
    RealErrorFunctions::erfi(x)
}
