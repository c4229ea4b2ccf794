//! The Fejér kernel and Fejér means of `f(x) = D_μ(x) - x`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficients::CoefficientProvider;
use crate::error::{Error, Result};
use crate::phase::{e_mul, frac, frac_mul};
use crate::series::{PartialSums, Smoothing};
use crate::sum::CompensatedSum;
use crate::wiener::{atom_mass, Window};

/// Terms used for the series defining `f̂(0)`.
pub const F0_TERMS: usize = 100_000;

/// Below this distance from an integer the closed form switches to its
/// Taylor expansion.
const TAYLOR_RADIUS: f64 = 1e-8;

/// Points sampled by [`fejer_sup_bound_check`].
const SUP_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub n: usize,
    pub t: f64,
    pub value_sum: f64,
    pub value_closed: f64,
}

/// `K_n(t)` both as `Σ_{|j|≤n} (1 - |j|/(n+1)) e(jt)` and in closed form.
pub fn fejer_kernel(n: usize, t: f64) -> KernelSample {
    let t = frac(t);
    KernelSample { n, t, value_sum: kernel_sum(n, t), value_closed: kernel_closed(n, t) }
}

fn kernel_sum(n: usize, t: f64) -> f64 {
    let a = (n + 1) as f64;
    let mut s = CompensatedSum::new();
    for j in 1..=n {
        s.add((1.0 - j as f64 / a) * e_mul(j as i64, t).re);
    }
    1.0 + 2.0 * s.value()
}

fn kernel_closed(n: usize, t: f64) -> f64 {
    let a = (n + 1) as f64;
    let u = t - t.round();
    if u == 0.0 {
        return a;
    }
    if u.abs() < TAYLOR_RADIUS && a * u.abs() < 1e-3 {
        return a * (1.0 - (a * a - 1.0) * PI * PI * u * u / 3.0);
    }
    let v = frac_mul((n + 1) as i64, t);
    let num = (PI * (v - v.round())).sin();
    let den = (PI * u).sin();
    num * num / (a * den * den)
}

/// `sup_{t∈[λ,1-λ]} K_n(t) ≤ 1/((n+1) sin²πλ)`, checked on 10⁴ points.
pub fn fejer_sup_bound_check(n: usize, lambda: f64) -> Result<bool> {
    if !(lambda > 0.0 && lambda < 0.5) {
        return Err(Error::InvalidInput(format!("lambda {lambda} outside (0, 1/2)")));
    }
    let s = (PI * lambda).sin();
    let bound = 1.0 / ((n + 1) as f64 * s * s);
    let step = (1.0 - 2.0 * lambda) / (SUP_SAMPLES - 1) as f64;
    Ok((0..SUP_SAMPLES).all(|i| {
        let t = lambda + i as f64 * step;
        kernel_closed(n, t) <= bound * (1.0 + 1e-12)
    }))
}

/// Fourier coefficients of `f(x) = D_μ(x) - x`.
#[derive(Debug, Clone)]
pub struct AuxFunctionCoefficients<'a> {
    provider: &'a CoefficientProvider,
    f_hat_zero: f64,
}

impl<'a> AuxFunctionCoefficients<'a> {
    pub fn new(provider: &'a CoefficientProvider) -> Result<Self> {
        Self::with_terms(provider, F0_TERMS)
    }

    /// `f̂(0) = μ{0}/2 - (1/π) Σ_{j≥1} Im(μ̂(j)/j)`, summed over `terms`
    /// coefficients with block smoothing.
    pub fn with_terms(provider: &'a CoefficientProvider, terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::InvalidInput("at least one term is required".into()));
        }
        let atom_zero = if provider.is_continuous() {
            0.0
        } else {
            atom_mass(provider, 0.0, Window::OneSided, terms)?.value
        };
        let (upto, smoothing) = match provider.spectral_bound() {
            Some(k) if k <= terms => (k, Smoothing::None),
            _ => (terms, Smoothing::default_block(terms)),
        };
        let mut sums = PartialSums::new(upto, smoothing);
        provider.for_each_positive(upto, |j, c| sums.push(c.im / j as f64));
        let f_hat_zero = atom_zero / 2.0 - sums.finish().value / PI;
        Ok(Self { provider, f_hat_zero })
    }

    pub fn provider(&self) -> &CoefficientProvider {
        self.provider
    }

    pub fn f_hat_zero(&self) -> f64 {
        self.f_hat_zero
    }

    /// `f̂(n) = μ̂(n)/(2πin)` for `n ≠ 0`.
    pub fn f_hat(&self, n: i64) -> Complex64 {
        if n == 0 {
            return Complex64::new(self.f_hat_zero, 0.0);
        }
        let c = self.provider.coefficient(n);
        c / Complex64::new(0.0, 2.0 * PI * n as f64)
    }

    /// `σ_n(f, t) = Σ_{|j|≤n} (1 - |j|/(n+1)) f̂(j) e(jt)`.
    pub fn fejer_mean(&self, t: f64, n: usize) -> f64 {
        let a = (n + 1) as f64;
        let upto = self.provider.spectral_bound().map_or(n, |k| k.min(n));
        let mut s = CompensatedSum::new();
        self.provider.for_each_positive(upto, |j, c| {
            s.add((1.0 - j as f64 / a) * (c * e_mul(j as i64, t)).im / j as f64);
        });
        self.f_hat_zero + s.value() / PI
    }
}

/// Fejér mean of `D_μ(x) - x` at `t`; tends to `D_μ(t) + μ{t}/2 - t`.
pub fn fejer_mean_aux(provider: &CoefficientProvider, t: f64, n: usize) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("point {t} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("Fejér order must be at least 1".into()));
    }
    Ok(AuxFunctionCoefficients::new(provider)?.fejer_mean(t, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::MeasureSpec;
    use crate::dsl::parse_measure;
    use crate::oracle::oracle_cdf;

    #[test]
    fn kernel_examples() {
        let k = fejer_kernel(2, 0.0);
        assert_eq!(k.value_sum, 3.0);
        assert_eq!(k.value_closed, 3.0);
        let k = fejer_kernel(1, 0.5);
        assert!(k.value_sum.abs() < 1e-15);
        assert!(k.value_closed.abs() < 1e-15);
        let k = fejer_kernel(63, 0.3);
        assert!((k.value_sum - k.value_closed).abs() < 1e-10);
    }

    #[test]
    fn kernel_forms_agree_near_integers() {
        for n in [0, 1, 7, 63, 511] {
            for t in [1e-12, 3e-9, -5e-9, 1e-7, 1.0 - 1e-10, 0.999_999_9] {
                let k = fejer_kernel(n, t);
                assert!(
                    (k.value_sum - k.value_closed).abs() <= 1e-10 * (n + 1) as f64,
                    "n={n} t={t}: {k:?}"
                );
            }
        }
    }

    #[test]
    fn kernel_symmetry_and_unit_integral() {
        for n in [0, 5, 100] {
            let m = 10_000;
            let mut s = CompensatedSum::new();
            for i in 0..m {
                let t = i as f64 / m as f64;
                let k = fejer_kernel(n, t);
                s.add(k.value_closed);
                if i > 0 {
                    let r = fejer_kernel(n, 1.0 - t);
                    assert!((k.value_closed - r.value_closed).abs() < 1e-12 * (n + 1) as f64);
                }
                assert!(k.value_closed >= -1e-12);
            }
            // Periodic trapezoid rule.
            assert!((s.value() / m as f64 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn sup_bound_examples() {
        assert!(fejer_sup_bound_check(10, 0.25).unwrap());
        assert!(fejer_sup_bound_check(100, 0.01).unwrap());
        assert!(fejer_sup_bound_check(0, 0.3).unwrap());
        assert!(fejer_sup_bound_check(3, 0.5).is_err());
    }

    #[test]
    fn f_hat_is_hermitian() {
        let p = CoefficientProvider::new(parse_measure("atoms(0.2:0.5, 0.7:0.5)").unwrap()).unwrap();
        let aux = AuxFunctionCoefficients::with_terms(&p, 1000).unwrap();
        for n in 1..20 {
            assert!((aux.f_hat(-n) - aux.f_hat(n).conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn fejer_mean_examples() {
        let leb = CoefficientProvider::new(MeasureSpec::Lebesgue).unwrap();
        assert_eq!(fejer_mean_aux(&leb, 0.4, 50).unwrap(), 0.0);

        let d = CoefficientProvider::new(MeasureSpec::dirac(0.5)).unwrap();
        assert!(fejer_mean_aux(&d, 0.5, 10_000).unwrap().abs() < 0.01);

        let c = crate::cantor::cantor_provider();
        let v = fejer_mean_aux(c, 0.25, 10_000).unwrap();
        assert!((v - 1.0 / 12.0).abs() < 5e-3, "{v}");
    }

    #[test]
    fn f_hat_zero_matches_quadrature() {
        for src in [
            "lebesgue",
            "dirac(0)",
            "dirac(1/3)",
            "atoms(0.2:0.5, 0.7:0.5)",
            "cantor",
            "density(0.4, 0.1)",
            "mix(0.5:dirac(1/3), 0.5:lebesgue)",
        ] {
            let spec = parse_measure(src).unwrap();
            let p = CoefficientProvider::new(spec.clone()).unwrap();
            let aux = AuxFunctionCoefficients::new(&p).unwrap();
            let m = 10_000;
            let q: f64 = (0..m)
                .map(|i| {
                    let x = (i as f64 + 0.5) / m as f64;
                    oracle_cdf(&spec, x).unwrap() - x
                })
                .sum::<f64>()
                / m as f64;
            assert!((aux.f_hat_zero() - q).abs() < 1e-3, "{src}: {} vs {q}", aux.f_hat_zero());
        }
    }
}
