//! Point masses from Cesàro averages of `μ̂(n) e(nx)`.

use crate::coefficients::CoefficientProvider;
use crate::error::{Error, Result};
use crate::phase::{e_mul, frac};
use crate::series::CheckpointSums;

/// Averaging window over the integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// `{-N, ..., N}`
    Symmetric,
    /// `{1, ..., N}`
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomEstimate {
    pub value: f64,
    pub window: Window,
    pub terms: usize,
    /// Largest distance between the final average and the running averages
    /// at `N/10, 2N/10, ..., N`.
    pub oscillation: f64,
}

/// Running average for `window` given the partial sum `S_m = Σ_{n=1}^m Re(μ̂(n)e(nx))`.
pub(crate) fn window_average(window: Window, m: usize, s: f64) -> f64 {
    match window {
        // The n = 0 term is μ̂(0) = 1; negative n mirror positive n.
        Window::Symmetric => (1.0 + 2.0 * s) / (2 * m + 1) as f64,
        Window::OneSided => s / m as f64,
    }
}

/// Estimates `μ{x}` from `N` coefficients.
pub fn atom_mass(provider: &CoefficientProvider, x: f64, window: Window, terms: usize) -> Result<AtomEstimate> {
    if terms == 0 {
        return Err(Error::InvalidInput("atom estimation needs at least one term".into()));
    }
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("point {x} is not finite")));
    }
    let x = frac(x);
    let upto = provider.spectral_bound().map_or(terms, |k| k.min(terms));
    let mut acc = CheckpointSums::new(terms);
    provider.for_each_positive(upto, |n, c| {
        let z = c * e_mul(n as i64, x);
        acc.push(z.re);
    });
    let (value, oscillation) = acc.finish(|m, s| window_average(window, m, s));
    Ok(AtomEstimate { value, window, terms, oscillation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{Atom, MeasureSpec};

    fn provider(spec: MeasureSpec) -> CoefficientProvider {
        CoefficientProvider::new(spec).unwrap()
    }

    #[test]
    fn lebesgue_keeps_only_zeroth_term() {
        let p = provider(MeasureSpec::Lebesgue);
        let est = atom_mass(&p, 0.5, Window::Symmetric, 1000).unwrap();
        assert_eq!(est.value, 1.0 / 2001.0);
        let one = atom_mass(&p, 0.5, Window::OneSided, 1000).unwrap();
        assert_eq!(one.value, 0.0);
        assert_eq!(one.oscillation, 0.0);
    }

    #[test]
    fn single_atom_phase_cancels() {
        let p = provider(MeasureSpec::dirac(1.0 / 3.0));
        for n in [1, 7, 100, 12345] {
            let est = atom_mass(&p, 1.0 / 3.0, Window::OneSided, n).unwrap();
            assert!((est.value - 1.0).abs() < 1e-12, "{n}: {}", est.value);
        }
    }

    #[test]
    fn mixture_atom() {
        let p = provider(MeasureSpec::Mixture(vec![
            (0.5, MeasureSpec::dirac(1.0 / 3.0)),
            (0.5, MeasureSpec::Lebesgue),
        ]));
        let est = atom_mass(&p, 1.0 / 3.0, Window::Symmetric, 10_000).unwrap();
        assert!((est.value - 0.5).abs() < 0.01);
        // Finite-N error is exactly the surviving Lebesgue zeroth term.
        assert!((est.value - (0.5 + 0.5 / 20_001.0)).abs() < 1e-12);
    }

    #[test]
    fn atomic_error_decays_like_inverse_n() {
        let p = provider(MeasureSpec::Atomic(vec![
            Atom::new(0.2, 0.5),
            Atom::new(0.7, 0.5),
        ]));
        for n in [100, 1000, 10_000] {
            for (x, w) in [(0.2, 0.5), (0.7, 0.5)] {
                let est = atom_mass(&p, x, Window::OneSided, n).unwrap();
                assert!((est.value - w).abs() <= 2.0 * 2.0 / n as f64);
            }
            let off = atom_mass(&p, 0.45, Window::OneSided, n).unwrap();
            assert!(off.value.abs() <= 4.0 / n as f64);
        }
    }

    #[test]
    fn continuous_measures_have_no_atoms() {
        for spec in [MeasureSpec::Cantor, MeasureSpec::CosineDensity(vec![0.4, 0.1])] {
            let p = provider(spec);
            for x in [0.0, 0.25, 1.0 / 3.0, 0.5, 0.9] {
                let est = atom_mass(&p, x, Window::OneSided, 10_000).unwrap();
                assert!(est.value.abs() < 0.02, "{x}: {}", est.value);
            }
        }
    }

    #[test]
    fn rejects_zero_terms() {
        let p = provider(MeasureSpec::Lebesgue);
        assert!(atom_mass(&p, 0.1, Window::OneSided, 0).is_err());
    }
}
