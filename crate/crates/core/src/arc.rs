//! Arc measures `μ[a, b)` and the distribution function `D_μ(x) = μ[0, x)`
//! reconstructed from Fourier coefficients.
//!
//! The working formula is
//!
//! ```text
//! μ[a,b) = (b - a) + (1/π) Σ_{n≥1} Im( μ̂(n)/n · (e(nb) - e(na)) )
//!                  + lim (1/2N) Σ_{j=1}^{N} μ̂(j) (e(ja) - e(jb))
//! ```
//!
//! which is the `(μ̂(n) - 1)` form with the Lebesgue part summed in closed
//! form through [`sawtooth`]. The limit term equals `(μ{a} - μ{b}) / 2` and
//! vanishes for continuous measures.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficients::CoefficientProvider;
use crate::error::{Error, Result};
use crate::phase::{e_mul, frac};
use crate::series::{CheckpointSums, PartialSums, SeriesSummary, Smoothing};
use crate::wiener::{window_average, Window};

/// Half-open arc `[a, b)` of the circle `[0, 1)`, with `0 ≤ a < b ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleArc {
    a: f64,
    b: f64,
}

impl CircleArc {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "arc [{a}, {b}) must satisfy 0 <= a < b <= 1"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// How the Cesàro limit term is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LimitMethod {
    /// `(μ{a} - μ{b}) / 2` with both masses from the one-sided Wiener average.
    #[default]
    AtomDecomposition,
    /// The Cesàro mean itself, evaluated at `N`.
    DirectCesaro,
    /// Zero; requires a continuity certificate.
    SkippedContinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArcOptions {
    pub limit_method: LimitMethod,
    /// `None` selects the default: block smoothing over `N/10` partial sums
    /// unless the coefficients vanish beyond `N`.
    pub smoothing: Option<Smoothing>,
}

impl ArcOptions {
    pub fn with_limit(limit_method: LimitMethod) -> Self {
        Self { limit_method, smoothing: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Heuristic stability certificate; see [`SeriesSummary::tail`].
    pub tail_estimate: f64,
    pub limit_term: f64,
    /// Drift of the limit-term averages across checkpoints; already
    /// included in `tail_estimate`.
    pub oscillation: f64,
    pub limit_method: LimitMethod,
    pub smoothing: Smoothing,
    /// The summed series contribution, already divided by π.
    pub series_part: f64,
}

/// `Σ_{n≥1} sin(2πnx)/n` in closed form: `π(1/2 - frac x)`, and 0 at integers.
pub fn sawtooth(x: f64) -> f64 {
    let r = frac(x);
    if r == 0.0 {
        0.0
    } else {
        PI * (0.5 - r)
    }
}

/// Partial sums of `Σ sin(2πnx)/n`, for checking [`sawtooth`].
pub fn sawtooth_partial_sum(x: f64, terms: usize, smoothing: Smoothing) -> Result<SeriesSummary> {
    let smoothing = smoothing.checked(terms)?;
    Ok(crate::series::sum_series(terms, smoothing, |n| {
        e_mul(n as i64, x).im / n as f64
    }))
}

fn require_terms(terms: usize) -> Result<()> {
    if terms == 0 {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    if terms as i64 > crate::coefficients::MAX_FREQUENCY {
        return Err(Error::InvalidInput(format!("{terms} terms exceeds the supported frequency range")));
    }
    Ok(())
}

fn require_continuous(provider: &CoefficientProvider, what: &str) -> Result<()> {
    if provider.is_continuous() {
        Ok(())
    } else {
        Err(Error::Certificate(format!(
            "{what} requires a continuous measure, but {} may have atoms",
            provider.spec()
        )))
    }
}

/// Resolves smoothing and the number of terms to sum. Returns `None` for the
/// smoothing when the series is exactly finite within `terms`.
fn plan(provider: &CoefficientProvider, terms: usize, requested: Option<Smoothing>) -> Result<(usize, Option<Smoothing>)> {
    match provider.spectral_bound() {
        Some(k) if k <= terms => Ok((k, None)),
        _ => {
            let s = requested.unwrap_or_else(|| Smoothing::default_block(terms));
            Ok((terms, Some(s.checked(terms)?)))
        }
    }
}

enum LimitAcc {
    Atoms(CheckpointSums, CheckpointSums),
    Direct(CheckpointSums),
    Skipped,
}

impl LimitAcc {
    fn new(method: LimitMethod, terms: usize) -> Self {
        match method {
            LimitMethod::AtomDecomposition => {
                LimitAcc::Atoms(CheckpointSums::new(terms), CheckpointSums::new(terms))
            }
            LimitMethod::DirectCesaro => LimitAcc::Direct(CheckpointSums::new(terms)),
            LimitMethod::SkippedContinuous => LimitAcc::Skipped,
        }
    }

    /// `c` is the (possibly shifted) coefficient, `ea`/`eb` the endpoint characters.
    #[inline]
    fn push(&mut self, c: Complex64, ea: Complex64, eb: Complex64) {
        match self {
            LimitAcc::Atoms(sa, sb) => {
                sa.push((c * ea).re);
                sb.push((c * eb).re);
            }
            LimitAcc::Direct(s) => s.push((c * (ea - eb)).re),
            LimitAcc::Skipped => {}
        }
    }

    /// `(limit term, oscillation)`.
    fn finish(self) -> (f64, f64) {
        match self {
            LimitAcc::Atoms(sa, sb) => {
                let (ma, oa) = sa.finish(|m, s| window_average(Window::OneSided, m, s));
                let (mb, ob) = sb.finish(|m, s| window_average(Window::OneSided, m, s));
                ((ma - mb) / 2.0, (oa + ob) / 2.0)
            }
            LimitAcc::Direct(s) => s.finish(|m, s| s / (2 * m) as f64),
            LimitAcc::Skipped => (0.0, 0.0),
        }
    }
}

/// Shared evaluation of the backbone formula for `0 ≤ a < b ≤ 1`.
fn backbone(provider: &CoefficientProvider, a: f64, b: f64, terms: usize, opts: ArcOptions) -> Result<SeriesResult> {
    let (upto, smoothing) = plan(provider, terms, opts.smoothing)?;
    let mut series = PartialSums::new(upto, smoothing.unwrap_or(Smoothing::None));
    let mut limit = LimitAcc::new(opts.limit_method, terms);
    provider.for_each_positive(upto, |n, c| {
        let ea = e_mul(n as i64, a);
        let eb = e_mul(n as i64, b);
        series.push((c * (eb - ea)).im / n as f64);
        limit.push(c, ea, eb);
    });
    let mut summary = series.finish();
    if smoothing.is_none() {
        summary.tail = 0.0;
    }
    let (limit_term, oscillation) = limit.finish();
    let series_part = summary.value / PI;
    Ok(SeriesResult {
        value: (b - a) + series_part + limit_term,
        terms_used: upto,
        tail_estimate: summary.tail / PI + oscillation,
        limit_term,
        oscillation,
        limit_method: opts.limit_method,
        smoothing: summary.smoothing,
        series_part,
    })
}

/// `D_μ(x) = μ[0, x)` for `x ∈ [0, 1]`.
pub fn cdf(provider: &CoefficientProvider, x: f64, terms: usize, opts: ArcOptions) -> Result<SeriesResult> {
    require_terms(terms)?;
    if !(x.is_finite() && (0.0..=1.0).contains(&x)) {
        return Err(Error::InvalidInput(format!("cdf point {x} outside [0, 1]")));
    }
    if opts.limit_method == LimitMethod::SkippedContinuous {
        require_continuous(provider, "the continuous fast path")?;
    }
    if x == 0.0 || x == 1.0 {
        return Ok(SeriesResult {
            value: x,
            terms_used: 0,
            tail_estimate: 0.0,
            limit_term: 0.0,
            oscillation: 0.0,
            limit_method: opts.limit_method,
            smoothing: Smoothing::None,
            series_part: 0.0,
        });
    }
    backbone(provider, 0.0, x, terms, opts)
}

/// `μ[a, b)`.
pub fn arc_measure(provider: &CoefficientProvider, arc: CircleArc, terms: usize, opts: ArcOptions) -> Result<SeriesResult> {
    if arc.a == 0.0 {
        return cdf(provider, arc.b, terms, opts);
    }
    require_terms(terms)?;
    if opts.limit_method == LimitMethod::SkippedContinuous {
        require_continuous(provider, "the continuous fast path")?;
    }
    backbone(provider, arc.a, arc.b, terms, opts)
}

/// `μ[a, b)` from the `(μ̂(n) - 1)` form summed term by term, with the
/// limit term as a direct Cesàro mean. Slower to converge than
/// [`arc_measure`]; kept as an independent route to the same number.
pub fn arc_measure_unsplit(provider: &CoefficientProvider, arc: CircleArc, terms: usize, smoothing: Option<Smoothing>) -> Result<SeriesResult> {
    require_terms(terms)?;
    let smoothing = smoothing.unwrap_or_else(|| Smoothing::default_block(terms)).checked(terms)?;
    let (a, b) = (arc.a, arc.b);
    let one = Complex64::new(1.0, 0.0);
    let mut series = PartialSums::new(terms, smoothing);
    let mut limit = CheckpointSums::new(terms);
    provider.for_each_positive(terms, |n, c| {
        let ea = e_mul(n as i64, a);
        let eb = e_mul(n as i64, b);
        let d = c - one;
        series.push((d * (eb - ea)).im / n as f64);
        limit.push((d * (ea - eb)).re);
    });
    let summary = series.finish();
    let (limit_term, oscillation) = limit.finish(|m, s| s / (2 * m) as f64);
    let series_part = summary.value / PI;
    let base = if a == 0.0 { 1.0 } else { 0.0 };
    Ok(SeriesResult {
        value: base + series_part + limit_term,
        terms_used: terms,
        tail_estimate: summary.tail / PI + oscillation,
        limit_term,
        oscillation,
        limit_method: LimitMethod::DirectCesaro,
        smoothing: summary.smoothing,
        series_part,
    })
}

/// `(μ ∗ μ̄)[a, b)` from `|μ̂(n)|²` for a continuous `μ`.
pub fn autocorrelation_arc(provider: &CoefficientProvider, arc: CircleArc, terms: usize) -> Result<SeriesResult> {
    require_terms(terms)?;
    require_continuous(provider, "autocorrelation reconstruction")?;
    let (a, b) = (arc.a, arc.b);
    let (upto, smoothing) = plan(provider, terms, None)?;
    let mut series = PartialSums::new(upto, smoothing.unwrap_or(Smoothing::None));
    provider.for_each_positive(upto, |n, c| {
        let d = e_mul(n as i64, b).im - e_mul(n as i64, a).im;
        series.push(c.norm_sqr() * d / n as f64);
    });
    let mut summary = series.finish();
    if smoothing.is_none() {
        summary.tail = 0.0;
    }
    // The "-1" part of (|μ̂(n)|² - 1) in closed form, plus the Cesàro limit
    // of (1/2N) Σ e(jb) (which survives only at b = 1) and, for a = 0, the
    // constant from comparing against the point mass at 0.
    let closed = (sawtooth(a) - sawtooth(b)) / PI;
    let limit_term = if b == 1.0 { 0.5 } else { 0.0 };
    let base = if a == 0.0 { 0.5 } else { 0.0 };
    let series_part = summary.value / PI;
    Ok(SeriesResult {
        value: base + closed + series_part + limit_term,
        terms_used: upto,
        tail_estimate: summary.tail / PI,
        limit_term,
        oscillation: 0.0,
        limit_method: LimitMethod::SkippedContinuous,
        smoothing: summary.smoothing,
        series_part,
    })
}
