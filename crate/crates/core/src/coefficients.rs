//! Measure descriptions and their exact Fourier coefficients
//! `μ̂(n) = ∫ e(-nx) dμ(x)`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase::e_mul;

pub type ComplexValue = Complex64;

/// Tolerance on weight normalization for atoms and mixtures.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Per-factor tolerance used to truncate the Cantor cosine product.
pub const CANTOR_EPS: f64 = 1e-14;

/// Largest frequency accepted by [`CoefficientProvider::coefficient`].
pub const MAX_FREQUENCY: i64 = i32::MAX as i64;

/// Coefficient tables up to this many terms are kept by the provider.
const CACHE_LIMIT: usize = 1 << 21;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

impl Atom {
    pub fn new(position: f64, weight: f64) -> Self {
        Self { position, weight }
    }
}

/// Symbolic description of a Borel probability measure on the circle `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    Atomic(Vec<Atom>),
    Lebesgue,
    /// The uniform measure on the middle-thirds Cantor set.
    Cantor,
    /// Density `1 + Σ a_k cos(2πkt)` with coefficients `a_1..a_K`.
    CosineDensity(Vec<f64>),
    Mixture(Vec<(f64, MeasureSpec)>),
    Convolution(Box<MeasureSpec>, Box<MeasureSpec>),
    /// Reflection `x ↦ -x (mod 1)`.
    Conjugate(Box<MeasureSpec>),
}

impl MeasureSpec {
    pub fn dirac(position: f64) -> Self {
        MeasureSpec::Atomic(vec![Atom::new(position, 1.0)])
    }

    pub fn convolution(a: MeasureSpec, b: MeasureSpec) -> Self {
        MeasureSpec::Convolution(Box::new(a), Box::new(b))
    }

    pub fn conjugate(a: MeasureSpec) -> Self {
        MeasureSpec::Conjugate(Box::new(a))
    }

    /// `μ ∗ μ̄`, whose coefficients are `|μ̂(n)|²`.
    pub fn autocorrelation(a: MeasureSpec) -> Self {
        Self::convolution(a.clone(), Self::conjugate(a))
    }

    /// Checks every structural invariant of the description.
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureSpec::Atomic(atoms) => validate_atoms(atoms),
            MeasureSpec::Lebesgue | MeasureSpec::Cantor => Ok(()),
            MeasureSpec::CosineDensity(a) => validate_cosine(a),
            MeasureSpec::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidSpec("mixture has no components".into()));
                }
                for (w, _) in parts {
                    if !(w.is_finite() && *w > 0.0) {
                        return Err(Error::InvalidSpec(format!(
                            "mixture weight {w} is not positive"
                        )));
                    }
                }
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::InvalidSpec(format!(
                        "mixture weights sum to {total}, expected 1"
                    )));
                }
                parts.iter().try_for_each(|(_, s)| s.validate())
            }
            MeasureSpec::Convolution(a, b) => {
                a.validate()?;
                b.validate()
            }
            MeasureSpec::Conjugate(a) => a.validate(),
        }
    }

    /// Structural continuity certificate: `true` only when the measure
    /// provably has no atoms.
    pub fn is_continuous(&self) -> bool {
        match self {
            MeasureSpec::Atomic(atoms) => atoms.is_empty(),
            MeasureSpec::Lebesgue | MeasureSpec::Cantor | MeasureSpec::CosineDensity(_) => true,
            MeasureSpec::Mixture(parts) => parts.iter().all(|(_, s)| s.is_continuous()),
            MeasureSpec::Convolution(a, b) => a.is_continuous() || b.is_continuous(),
            MeasureSpec::Conjugate(a) => a.is_continuous(),
        }
    }

    /// `Some(K)` when `μ̂(n) = 0` for every `|n| > K`.
    pub fn spectral_bound(&self) -> Option<usize> {
        match self {
            MeasureSpec::Lebesgue => Some(0),
            MeasureSpec::CosineDensity(a) => Some(a.len()),
            MeasureSpec::Atomic(_) | MeasureSpec::Cantor => None,
            MeasureSpec::Mixture(parts) => parts
                .iter()
                .map(|(_, s)| s.spectral_bound())
                .try_fold(0, |acc, b| b.map(|b| acc.max(b))),
            MeasureSpec::Convolution(a, b) => match (a.spectral_bound(), b.spectral_bound()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            MeasureSpec::Conjugate(a) => a.spectral_bound(),
        }
    }

    /// Exact coefficient by family. Assumes a validated description.
    pub(crate) fn eval(&self, n: i64) -> Complex64 {
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        match self {
            MeasureSpec::Atomic(atoms) => {
                let mut re = crate::sum::CompensatedSum::new();
                let mut im = crate::sum::CompensatedSum::new();
                for a in atoms {
                    let z = e_mul(-n, a.position);
                    re.add(a.weight * z.re);
                    im.add(a.weight * z.im);
                }
                Complex64::new(re.value(), im.value())
            }
            MeasureSpec::Lebesgue => Complex64::new(0.0, 0.0),
            MeasureSpec::Cantor => Complex64::new(cantor_coefficient(n), 0.0),
            MeasureSpec::CosineDensity(a) => {
                let k = n.unsigned_abs() as usize;
                Complex64::new(a.get(k - 1).map_or(0.0, |v| v / 2.0), 0.0)
            }
            MeasureSpec::Mixture(parts) => parts
                .iter()
                .map(|(w, s)| s.eval(n) * *w)
                .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z),
            MeasureSpec::Convolution(a, b) => a.eval(n) * b.eval(n),
            MeasureSpec::Conjugate(a) => a.eval(n).conj(),
        }
    }
}

fn validate_atoms(atoms: &[Atom]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::InvalidSpec("atomic measure has no atoms".into()));
    }
    for a in atoms {
        if !(a.position.is_finite() && (0.0..1.0).contains(&a.position)) {
            return Err(Error::InvalidSpec(format!(
                "atom position {} outside [0, 1)",
                a.position
            )));
        }
        if !(a.weight.is_finite() && a.weight > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "atom weight {} is not positive",
                a.weight
            )));
        }
    }
    for (i, a) in atoms.iter().enumerate() {
        if atoms[..i].iter().any(|b| b.position == a.position) {
            return Err(Error::InvalidSpec(format!(
                "duplicate atom position {}",
                a.position
            )));
        }
    }
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidSpec(format!(
            "atom weights sum to {total}, expected 1"
        )));
    }
    Ok(())
}

fn validate_cosine(a: &[f64]) -> Result<()> {
    if let Some(bad) = a.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidSpec(format!("density coefficient {bad} is not finite")));
    }
    let total: f64 = a.iter().map(|v| v.abs()).sum();
    if total >= 1.0 {
        return Err(Error::InvalidSpec(format!(
            "density coefficients have absolute sum {total}, must be < 1"
        )));
    }
    Ok(())
}

/// Smallest `K` with `2π|n| / 3^K < sqrt(2 eps)`.
///
/// Every factor `cos(2πn/3^k)` with `k > K` then differs from 1 by less than
/// `eps`, since `1 - cos θ ≤ θ²/2`.
///
/// # Panics
///
/// Panics if `n == 0` or `eps` is not positive.
pub fn cantor_product_depth(n: i64, eps: f64) -> u32 {
    assert!(n != 0, "cantor_product_depth requires n != 0");
    assert!(eps > 0.0 && eps.is_finite(), "eps must be positive");
    let threshold = (2.0 * eps).sqrt();
    let scaled = TAU * n.unsigned_abs() as f64;
    let mut pow = 1.0f64;
    let mut k = 0;
    loop {
        k += 1;
        pow *= 3.0;
        if scaled / pow < threshold {
            return k;
        }
    }
}

/// `ĉ(n) = (-1)^n ∏_{k≥1} cos(2πn/3^k)`, truncated at [`cantor_product_depth`].
///
/// Each angle is reduced exactly as `(n mod 3^k) / 3^k` in integer arithmetic.
pub fn cantor_coefficient(n: i64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let m = n.unsigned_abs();
    let depth = cantor_product_depth(n, CANTOR_EPS);
    let mut prod = if m % 2 == 1 { -1.0 } else { 1.0 };
    let mut pow: u64 = 1;
    for _ in 0..depth {
        pow *= 3;
        let r = (m % pow) as f64 / pow as f64;
        prod *= (TAU * r).cos();
    }
    prod
}

/// Validated, immutable source of Fourier coefficients for one measure.
///
/// Tables of positive-frequency coefficients are cached internally; every
/// entry is computed independently, so cached and uncached values agree bit
/// for bit.
pub struct CoefficientProvider {
    spec: MeasureSpec,
    continuous: bool,
    spectral_bound: Option<usize>,
    table: RwLock<Arc<Vec<Complex64>>>,
}

impl CoefficientProvider {
    pub fn new(spec: MeasureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            continuous: spec.is_continuous(),
            spectral_bound: spec.spectral_bound(),
            spec,
            table: RwLock::new(Arc::new(Vec::new())),
        })
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn is_continuous(&self) -> bool {
        self.continuous
    }

    pub fn spectral_bound(&self) -> Option<usize> {
        self.spectral_bound
    }

    /// `μ̂(n)`.
    ///
    /// # Panics
    ///
    /// Panics if `|n|` exceeds [`MAX_FREQUENCY`].
    pub fn coefficient(&self, n: i64) -> ComplexValue {
        assert!(n.abs() <= MAX_FREQUENCY, "frequency {n} out of range");
        self.spec.eval(n)
    }

    /// Calls `f(n, μ̂(n))` for `n = 1..=n_max` in increasing order.
    pub fn for_each_positive<F: FnMut(usize, Complex64)>(&self, n_max: usize, mut f: F) {
        let cached = self.cached_table(n_max.min(CACHE_LIMIT));
        let upto = n_max.min(cached.len());
        for (i, c) in cached[..upto].iter().enumerate() {
            f(i + 1, *c);
        }
        let mut start = upto + 1;
        while start <= n_max {
            let end = (start + CHUNK - 1).min(n_max);
            for (i, c) in self.compute_range(start, end).into_iter().enumerate() {
                f(start + i, c);
            }
            start = end + 1;
        }
    }

    /// `μ̂(1..=n)` as a vector.
    pub fn positive_coefficients(&self, n: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(n);
        self.for_each_positive(n, |_, c| out.push(c));
        out
    }

    fn compute_range(&self, start: usize, end: usize) -> Vec<Complex64> {
        (start..=end)
            .into_par_iter()
            .map(|n| self.spec.eval(n as i64))
            .collect()
    }

    fn cached_table(&self, n: usize) -> Arc<Vec<Complex64>> {
        {
            let t = self.table.read().unwrap_or_else(|e| e.into_inner());
            if t.len() >= n {
                return Arc::clone(&t);
            }
        }
        let mut t = self.table.write().unwrap_or_else(|e| e.into_inner());
        if t.len() < n {
            let mut v = Vec::with_capacity(n);
            v.extend_from_slice(&t);
            v.extend(self.compute_range(t.len() + 1, n));
            *t = Arc::new(v);
        }
        Arc::clone(&t)
    }
}

impl Clone for CoefficientProvider {
    fn clone(&self) -> Self {
        let table = self.table.read().unwrap_or_else(|e| e.into_inner()).clone();
        Self {
            spec: self.spec.clone(),
            continuous: self.continuous,
            spectral_bound: self.spectral_bound,
            table: RwLock::new(table),
        }
    }
}

impl fmt::Debug for CoefficientProvider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientProvider")
            .field("spec", &self.spec)
            .field("is_continuous", &self.continuous)
            .field("spectral_bound", &self.spectral_bound)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(z: Complex64, w: Complex64, tol: f64) -> bool {
        (z - w).norm() <= tol
    }

    #[test]
    fn lebesgue_coefficients_vanish() {
        let p = CoefficientProvider::new(MeasureSpec::Lebesgue).unwrap();
        assert_eq!(p.coefficient(5), Complex64::new(0.0, 0.0));
        assert_eq!(p.coefficient(0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_atom_at_quarter() {
        let p = CoefficientProvider::new(MeasureSpec::dirac(0.25)).unwrap();
        assert!(close(p.coefficient(1), Complex64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn cantor_first_coefficient_against_long_product() {
        let long: f64 = -(1..=30)
            .map(|k| (TAU / 3f64.powi(k)).cos())
            .product::<f64>();
        let c = cantor_coefficient(1);
        assert!((c - long).abs() < 1e-14);
        assert!((c - 0.3714).abs() < 1e-4, "{c}");
    }

    #[test]
    fn cantor_depth_examples() {
        assert_eq!(cantor_product_depth(1, 1e-14), 17);
        assert_eq!(cantor_product_depth(729, 1e-14), 17 + 6);
        assert_eq!(cantor_product_depth(-3, 1e-14), cantor_product_depth(3, 1e-14));
    }

    #[test]
    #[should_panic]
    fn cantor_depth_rejects_zero() {
        cantor_product_depth(0, 1e-14);
    }

    #[test]
    fn cantor_self_similarity_under_tripling() {
        // The k = 1 factor of ĉ(3n) is cos(2πn) = 1; the rest is ĉ(n).
        for n in 1..200 {
            assert!((cantor_coefficient(3 * n) - cantor_coefficient(n)).abs() < 1e-13);
        }
    }

    #[test]
    fn cosine_density_coefficients() {
        let p = CoefficientProvider::new(MeasureSpec::CosineDensity(vec![0.4, -0.2])).unwrap();
        assert_eq!(p.coefficient(1).re, 0.2);
        assert_eq!(p.coefficient(-2).re, -0.1);
        assert_eq!(p.coefficient(3).re, 0.0);
        assert_eq!(p.spectral_bound(), Some(2));
    }

    #[test]
    fn validation_rejects_bad_specs() {
        let bad = [
            MeasureSpec::Atomic(vec![Atom::new(0.2, 0.5), Atom::new(0.3, 0.4)]),
            MeasureSpec::Atomic(vec![Atom::new(0.2, 0.5), Atom::new(0.2, 0.5)]),
            MeasureSpec::Atomic(vec![Atom::new(1.0, 1.0)]),
            MeasureSpec::CosineDensity(vec![0.8, 0.4]),
            MeasureSpec::Mixture(vec![(0.5, MeasureSpec::Lebesgue), (0.6, MeasureSpec::Cantor)]),
            MeasureSpec::Mixture(vec![(-0.5, MeasureSpec::Lebesgue), (1.5, MeasureSpec::Cantor)]),
            MeasureSpec::conjugate(MeasureSpec::CosineDensity(vec![1.0])),
        ];
        for spec in bad {
            assert!(CoefficientProvider::new(spec.clone()).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn continuity_is_structural() {
        let atom = MeasureSpec::dirac(0.3);
        assert!(!atom.is_continuous());
        assert!(MeasureSpec::convolution(atom.clone(), MeasureSpec::Cantor).is_continuous());
        assert!(!MeasureSpec::Mixture(vec![(0.5, atom.clone()), (0.5, MeasureSpec::Lebesgue)])
            .is_continuous());
        assert!(!MeasureSpec::conjugate(atom).is_continuous());
    }

    #[test]
    fn spectral_bounds() {
        assert_eq!(MeasureSpec::Cantor.spectral_bound(), None);
        let conv = MeasureSpec::convolution(MeasureSpec::Cantor, MeasureSpec::CosineDensity(vec![0.1]));
        assert_eq!(conv.spectral_bound(), Some(1));
        let mix = MeasureSpec::Mixture(vec![
            (0.5, MeasureSpec::Lebesgue),
            (0.5, MeasureSpec::CosineDensity(vec![0.1, 0.1, 0.1])),
        ]);
        assert_eq!(mix.spectral_bound(), Some(3));
    }

    #[test]
    fn cached_and_direct_values_agree() {
        let p = CoefficientProvider::new(MeasureSpec::Cantor).unwrap();
        let t = p.positive_coefficients(500);
        let t2 = p.positive_coefficients(1000);
        for n in 1..=500 {
            assert_eq!(t[n - 1], p.coefficient(n as i64));
            assert_eq!(t2[n - 1], t[n - 1]);
        }
    }
}
