//! Local dimension of a continuous measure from Fourier-reconstructed ball
//! measures `μ(B_r(x)) = μ[x - r, x + r)`.

use rayon::prelude::*;

use crate::arc::{arc_measure, ArcOptions, CircleArc, LimitMethod, SeriesResult};
use crate::coefficients::{CoefficientProvider, MeasureSpec};
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Coefficients summed for `Σ|μ̂(n)|` when the spectrum is not finite.
pub const HYPOTHESIS_TERMS: usize = 1_000_000;

/// A ball measure must exceed this multiple of its tail estimate.
const SIGNAL_FACTOR: f64 = 10.0;

/// `Σ_{n≥1} |μ̂(n)|`, exact for finite spectra and truncated otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisSum {
    pub value: f64,
    pub terms: usize,
    pub exact: bool,
}

impl HypothesisSum {
    pub fn note(&self) -> Option<String> {
        (!self.exact).then(|| format!("truncated after {} terms; true sum is at least this", self.terms))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionFit {
    pub x: f64,
    /// Strictly decreasing.
    pub radii: Vec<f64>,
    pub log_measures: Vec<f64>,
    pub tails: Vec<f64>,
    /// `|μ(B_r) - 2r| / (2r)` per radius.
    pub correction_ratios: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub hypothesis_sum: f64,
    pub hypothesis_terms: usize,
    pub hypothesis_exact: bool,
    pub hypothesis_met: bool,
}

pub fn hypothesis_sum(provider: &CoefficientProvider) -> HypothesisSum {
    let (terms, exact) = match provider.spectral_bound() {
        Some(k) => (k, true),
        None => (HYPOTHESIS_TERMS, false),
    };
    let mut s = CompensatedSum::new();
    provider.for_each_positive(terms, |_, c| s.add(c.norm()));
    HypothesisSum { value: s.value(), terms, exact }
}

/// `μ[x - r, x + r)` with the limit term skipped.
pub fn ball_measure(provider: &CoefficientProvider, x: f64, r: f64, terms: usize) -> Result<SeriesResult> {
    if !(r > 0.0 && r < x.min(1.0 - x)) {
        return Err(Error::InvalidInput(format!(
            "radius {r} must lie in (0, min(x, 1 - x)) for x = {x}"
        )));
    }
    let arc = CircleArc::new(x - r, x + r)?;
    let mut ball = arc_measure(provider, arc, terms, ArcOptions::with_limit(LimitMethod::SkippedContinuous))?;
    // (x + r) - (x - r) need not round to 2r.
    ball.value = 2.0 * r + ball.series_part;
    Ok(ball)
}

/// Least-squares slope of `log μ(B_r(x))` against `log r` over `points`
/// geometrically spaced radii from `r_max` down to `r_min`.
pub fn local_dimension(
    provider: &CoefficientProvider,
    x: f64,
    r_max: f64,
    r_min: f64,
    points: usize,
    terms: usize,
) -> Result<DimensionFit> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidInput(format!("point {x} outside (0, 1)")));
    }
    if !(r_min > 0.0 && r_min < r_max && r_max < x.min(1.0 - x)) {
        return Err(Error::InvalidInput(format!(
            "radii must satisfy 0 < r_min < r_max < min(x, 1 - x); got r_min = {r_min}, r_max = {r_max}, x = {x}"
        )));
    }
    if points < 3 {
        return Err(Error::InvalidInput("at least 3 radii are required".into()));
    }
    let radii = geometric_radii(r_max, r_min, points);
    let balls: Vec<SeriesResult> = radii
        .par_iter()
        .map(|&r| ball_measure(provider, x, r, terms))
        .collect::<Result<_>>()?;
    for (&r, ball) in radii.iter().zip(&balls) {
        let tolerance = ball.tail_estimate.max(f64::EPSILON);
        if ball.value <= SIGNAL_FACTOR * tolerance {
            return Err(Error::DegenerateSignal { radius: r, value: ball.value, tolerance });
        }
    }
    let log_r: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let log_measures: Vec<f64> = balls.iter().map(|b| b.value.ln()).collect();
    let (slope, intercept, residual) = least_squares(&log_r, &log_measures);
    let h = hypothesis_sum(provider);
    Ok(DimensionFit {
        x,
        correction_ratios: radii.iter().zip(&balls).map(|(r, b)| b.series_part.abs() / (2.0 * r)).collect(),
        tails: balls.iter().map(|b| b.tail_estimate).collect(),
        radii,
        log_measures,
        slope,
        intercept,
        residual,
        hypothesis_sum: h.value,
        hypothesis_terms: h.terms,
        hypothesis_exact: h.exact,
        hypothesis_met: h.exact && h.value < 0.5,
    })
}

fn geometric_radii(r_max: f64, r_min: f64, points: usize) -> Vec<f64> {
    let ratio = r_min / r_max;
    let last = points - 1;
    (0..points)
        .map(|i| match i {
            0 => r_max,
            i if i == last => r_min,
            i => r_max * ratio.powf(i as f64 / last as f64),
        })
        .collect()
}

/// `(slope, intercept, rms residual)` of `y ≈ slope·x + intercept`.
fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = CompensatedSum::new();
    let mut sxy = CompensatedSum::new();
    for (xi, yi) in x.iter().zip(y) {
        sxx.add((xi - mx) * (xi - mx));
        sxy.add((xi - mx) * (yi - my));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(xi, yi)| (yi - slope * xi - intercept).powi(2)).sum();
    (slope, intercept, (ssr / n).sqrt())
}

/// The density `1 + Σ a_k cos(2πkt)`, whose coefficients are `a_n/2`.
pub fn example_measure(a: &[f64]) -> Result<MeasureSpec> {
    let spec = MeasureSpec::CosineDensity(a.to_vec());
    spec.validate()?;
    Ok(spec)
}
