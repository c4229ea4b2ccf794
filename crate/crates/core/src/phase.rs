//! Points of the circle `[0, 1)` and the character `e(x) = exp(2πix)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Fractional part in `[0, 1)`.
#[inline]
pub fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// `frac(n * x)` with the rounding error of the product folded back in.
///
/// `n * x` is split into its rounded value and the exact residual from a fused
/// multiply-add, so the reduction stays accurate for large `n`.
#[inline]
pub fn frac_mul(n: i64, x: f64) -> f64 {
    let nf = n as f64;
    let p = nf * x;
    let err = nf.mul_add(x, -p);
    frac(frac(p) + err)
}

/// `e(x) = (cos 2πx, sin 2πx)` evaluated on the reduced argument.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (TAU * frac(x)).sin_cos();
    Complex64::new(c, s)
}

/// `e(n x)` for an integer frequency.
#[inline]
pub fn e_mul(n: i64, x: f64) -> Complex64 {
    let (s, c) = (TAU * frac_mul(n, x)).sin_cos();
    Complex64::new(c, s)
}
