//! The Cantor function, exactly and through its Fourier series.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::arc::sawtooth;
use crate::coefficients::{CoefficientProvider, MeasureSpec};
use crate::error::{Error, Result};
use crate::phase::e_mul;
use crate::series::{PartialSums, Smoothing};

/// Ternary digits scanned before giving up.
const MAX_DIGITS: usize = 60;

/// `C(x)` from the base-3 expansion of `x`.
///
/// Digits 0 and 2 contribute binary digits 0 and 1; the first digit 1 adds a
/// final 1-bit and stops the scan.
pub fn cantor_exact(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let mut r = x;
    let mut bit = 0.5;
    let mut acc = 0.0;
    for _ in 0..MAX_DIGITS {
        let t = 3.0 * r;
        let d = t.floor().min(2.0);
        r = t - d;
        if d == 1.0 {
            return acc + bit;
        }
        if d == 2.0 {
            acc += bit;
        }
        if r == 0.0 {
            break;
        }
        bit *= 0.5;
    }
    acc
}

/// Shared provider for the Cantor measure, so its coefficient table is
/// computed once per process.
pub fn cantor_provider() -> &'static CoefficientProvider {
    static PROVIDER: OnceLock<CoefficientProvider> = OnceLock::new();
    PROVIDER.get_or_init(|| CoefficientProvider::new(MeasureSpec::Cantor).expect("valid"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorSeriesPoint {
    pub x: f64,
    pub partial_sum: f64,
    pub terms: usize,
    pub exact: f64,
    pub tail_estimate: f64,
}

impl CantorSeriesPoint {
    pub fn error(&self) -> f64 {
        self.partial_sum - self.exact
    }
}

/// `1/2 + (1/π) Σ_{n≤N} (ĉ(n) - 1)/n · sin(2πnx)` with default block smoothing.
pub fn cantor_series(x: f64, terms: usize) -> Result<CantorSeriesPoint> {
    cantor_series_with(x, terms, Smoothing::default_block(terms))
}

pub fn cantor_series_with(x: f64, terms: usize, smoothing: Smoothing) -> Result<CantorSeriesPoint> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidInput(format!("Cantor series point {x} outside (0, 1)")));
    }
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    let smoothing = smoothing.checked(terms)?;
    let mut sums = PartialSums::new(terms, smoothing);
    cantor_provider().for_each_positive(terms, |n, c| {
        sums.push(c.re * e_mul(n as i64, x).im / n as f64);
    });
    let s = sums.finish();
    // The "-1" part sums to -sawtooth(x)/π in closed form.
    let partial_sum = 0.5 - sawtooth(x) / PI + s.value / PI;
    Ok(CantorSeriesPoint {
        x,
        partial_sum,
        terms,
        exact: cantor_exact(x),
        tail_estimate: s.tail / PI,
    })
}
