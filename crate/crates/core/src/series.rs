//! Partial-sum tracking for slowly converging series.
//!
//! Two diagnostics come out of every sum: the spread of the raw partial sums
//! over the final stretch of terms (the tail estimate), and, for Cesàro-type
//! averages, the drift of the running average across fixed checkpoints (the
//! oscillation). Neither is a proven bound.

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Post-processing applied to the sequence of partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothing {
    /// Report the last partial sum.
    None,
    /// Report the mean of the last `block` partial sums.
    BlockCesaro { block: usize },
}

impl Smoothing {
    /// Default block: a tenth of the terms.
    pub fn default_block(terms: usize) -> Self {
        Smoothing::BlockCesaro { block: (terms / 10).max(1) }
    }

    pub(crate) fn checked(self, terms: usize) -> Result<Self> {
        match self {
            Smoothing::BlockCesaro { block: 0 } => {
                Err(Error::InvalidInput("smoothing block must be at least 1".into()))
            }
            Smoothing::BlockCesaro { block } => {
                Ok(Smoothing::BlockCesaro { block: block.min(terms.max(1)) })
            }
            Smoothing::None => Ok(Smoothing::None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSummary {
    pub value: f64,
    /// Largest distance between `value` and any partial sum in the final
    /// tenth of the terms (or the smoothing block, if longer).
    pub tail: f64,
    pub terms: usize,
    pub smoothing: Smoothing,
}

/// Streaming accumulator for `Σ_{n=1}^{N} t_n`.
#[derive(Debug, Clone)]
pub(crate) struct PartialSums {
    total: usize,
    block_start: usize,
    window_start: usize,
    k: usize,
    sum: CompensatedSum,
    block_sum: CompensatedSum,
    lo: f64,
    hi: f64,
    smoothing: Smoothing,
}

impl PartialSums {
    pub(crate) fn new(total: usize, smoothing: Smoothing) -> Self {
        let block = match smoothing {
            Smoothing::None => 1,
            Smoothing::BlockCesaro { block } => block.clamp(1, total.max(1)),
        };
        let window = total.div_ceil(10).max(block);
        Self {
            total,
            block_start: total.saturating_sub(block) + 1,
            window_start: total.saturating_sub(window) + 1,
            k: 0,
            sum: CompensatedSum::new(),
            block_sum: CompensatedSum::new(),
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            smoothing,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, term: f64) {
        self.k += 1;
        self.sum.add(term);
        if self.k >= self.window_start {
            let s = self.sum.value();
            self.lo = self.lo.min(s);
            self.hi = self.hi.max(s);
            if self.k >= self.block_start {
                self.block_sum.add(s);
            }
        }
    }

    pub(crate) fn finish(self) -> SeriesSummary {
        debug_assert_eq!(self.k, self.total);
        if self.total == 0 {
            return SeriesSummary { value: 0.0, tail: 0.0, terms: 0, smoothing: self.smoothing };
        }
        let value = match self.smoothing {
            Smoothing::None => self.sum.value(),
            Smoothing::BlockCesaro { .. } => {
                self.block_sum.value() / (self.total - self.block_start + 1) as f64
            }
        };
        let tail = (self.hi - value).max(value - self.lo).max(0.0);
        SeriesSummary { value, tail, terms: self.total, smoothing: self.smoothing }
    }
}

/// Sums `t(1..=n)` with the given smoothing.
pub fn sum_series<F: FnMut(usize) -> f64>(n: usize, smoothing: Smoothing, mut t: F) -> SeriesSummary {
    let mut acc = PartialSums::new(n, smoothing);
    for k in 1..=n {
        acc.push(t(k));
    }
    acc.finish()
}

/// Running sums recorded at the checkpoints `⌈kN/10⌉`, `k = 1..=10`.
///
/// Terms that are never pushed count as zero, so a series with finite
/// support can stop early and still report averages out to `N`.
#[derive(Debug, Clone)]
pub(crate) struct CheckpointSums {
    total: usize,
    checkpoints: Vec<usize>,
    next: usize,
    k: usize,
    sum: CompensatedSum,
    recorded: Vec<f64>,
}

impl CheckpointSums {
    pub(crate) fn new(total: usize) -> Self {
        let mut checkpoints: Vec<usize> = (1..=10).map(|k| (k * total).div_ceil(10).max(1)).collect();
        checkpoints.dedup();
        Self {
            total,
            recorded: Vec::with_capacity(checkpoints.len()),
            checkpoints,
            next: 0,
            k: 0,
            sum: CompensatedSum::new(),
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, v: f64) {
        self.k += 1;
        self.sum.add(v);
        if self.next < self.checkpoints.len() && self.checkpoints[self.next] == self.k {
            self.recorded.push(self.sum.value());
            self.next += 1;
        }
    }

    /// Returns `(final average, oscillation)` where `average(m, S_m)` maps a
    /// checkpoint and its running sum to the running average.
    pub(crate) fn finish(mut self, average: impl Fn(usize, f64) -> f64) -> (f64, f64) {
        let s = self.sum.value();
        while self.recorded.len() < self.checkpoints.len() {
            self.recorded.push(s);
        }
        let last = average(self.total, *self.recorded.last().unwrap_or(&s));
        let osc = self
            .checkpoints
            .iter()
            .zip(&self.recorded)
            .map(|(&m, &sm)| (average(m, sm) - last).abs())
            .fold(0.0, f64::max);
        (last, osc)
    }
}
