//! Ground truth for arc measures, distribution functions and atoms computed
//! directly from the measure description, without Fourier coefficients.
//!
//! Descriptions are first resolved into a flat combination of atoms,
//! Lebesgue measure, the Cantor measure and shifted trigonometric densities.
//! Convolutions are resolved only when the result stays in that class.

use std::f64::consts::TAU;

use crate::arc::CircleArc;
use crate::cantor::cantor_exact;
use crate::coefficients::MeasureSpec;
use crate::error::{Error, Result};
use crate::phase::frac;

/// Reference measures for equivalence sweeps.
pub const STANDARD_FIXTURES: [&str; 6] = [
    "lebesgue",
    "dirac(1/3)",
    "atoms(0.2:0.5, 0.7:0.5)",
    "cantor",
    "density(0.4, 0.1)",
    "mix(0.5:dirac(1/3), 0.5:lebesgue)",
];

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCapability {
    pub spec: MeasureSpec,
    pub supported: bool,
    pub reason: Option<String>,
}

pub fn capability(spec: &MeasureSpec) -> OracleCapability {
    match resolve(spec) {
        Ok(_) => OracleCapability { spec: spec.clone(), supported: true, reason: None },
        Err(e) => OracleCapability {
            spec: spec.clone(),
            supported: false,
            reason: Some(match e {
                Error::Unsupported(r) => r,
                other => other.to_string(),
            }),
        },
    }
}

/// `μ[a, b)`.
pub fn oracle_arc(spec: &MeasureSpec, arc: CircleArc) -> Result<f64> {
    let m = resolve(spec)?;
    Ok(if arc.a() == 0.0 {
        m.cdf(arc.b())
    } else {
        m.cdf(arc.b()) - m.cdf(arc.a())
    })
}

/// `μ[0, x)` for `x ∈ [0, 1]`.
pub fn oracle_cdf(spec: &MeasureSpec, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidInput(format!("cdf point {x} outside [0, 1]")));
    }
    Ok(resolve(spec)?.cdf(x))
}

/// `μ{x}`.
pub fn oracle_atom(spec: &MeasureSpec, x: f64) -> Result<f64> {
    Ok(resolve(spec)?.atom(frac(x)))
}

/// Measures with closed-form distribution functions.
#[derive(Debug, Clone, PartialEq)]
enum Resolved {
    Atoms(Vec<(f64, f64)>),
    Lebesgue,
    Cantor,
    /// Density `1 + Σ a_k cos(2πk(t - shift))`.
    Trig { coeffs: Vec<f64>, shift: f64 },
    Mix(Vec<(f64, Resolved)>),
}

fn resolve(spec: &MeasureSpec) -> Result<Resolved> {
    Ok(match spec {
        MeasureSpec::Atomic(atoms) => {
            Resolved::Atoms(atoms.iter().map(|a| (a.position, a.weight)).collect())
        }
        MeasureSpec::Lebesgue => Resolved::Lebesgue,
        MeasureSpec::Cantor => Resolved::Cantor,
        MeasureSpec::CosineDensity(a) => Resolved::Trig { coeffs: a.clone(), shift: 0.0 },
        MeasureSpec::Mixture(parts) => Resolved::Mix(
            parts
                .iter()
                .map(|(w, s)| Ok((*w, resolve(s)?)))
                .collect::<Result<_>>()?,
        ),
        MeasureSpec::Conjugate(s) => reflect(resolve(s)?),
        MeasureSpec::Convolution(a, b) => convolve(resolve(a)?, resolve(b)?)?,
    })
}

fn wrap(x: f64) -> f64 {
    frac(x)
}

/// Image under `x ↦ -x (mod 1)`.
fn reflect(m: Resolved) -> Resolved {
    match m {
        Resolved::Atoms(atoms) => Resolved::Atoms(atoms.into_iter().map(|(p, w)| (wrap(-p), w)).collect()),
        // The Cantor set is symmetric under x ↦ 1 - x and carries no atom at 0.
        Resolved::Lebesgue | Resolved::Cantor => m,
        Resolved::Trig { coeffs, shift } => Resolved::Trig { coeffs, shift: wrap(-shift) },
        Resolved::Mix(parts) => Resolved::Mix(parts.into_iter().map(|(w, p)| (w, reflect(p))).collect()),
    }
}

fn convolve(a: Resolved, b: Resolved) -> Result<Resolved> {
    use Resolved::*;
    Ok(match (a, b) {
        (Lebesgue, _) | (_, Lebesgue) => Lebesgue,
        (Mix(parts), other) | (other, Mix(parts)) => Mix(
            parts
                .into_iter()
                .map(|(w, p)| Ok((w, convolve(p, other.clone())?)))
                .collect::<Result<_>>()?,
        ),
        (Cantor, _) | (_, Cantor) => {
            return Err(Error::Unsupported(
                "convolution with the Cantor measure has no closed-form oracle".into(),
            ))
        }
        (Atoms(x), Atoms(y)) => {
            let mut out: Vec<(f64, f64)> = Vec::new();
            for &(p, v) in &x {
                for &(q, w) in &y {
                    let r = wrap(p + q);
                    match out.iter_mut().find(|(s, _)| *s == r) {
                        Some(slot) => slot.1 += v * w,
                        None => out.push((r, v * w)),
                    }
                }
            }
            Atoms(out)
        }
        (Atoms(x), Trig { coeffs, shift }) | (Trig { coeffs, shift }, Atoms(x)) => Mix(
            x.into_iter()
                .map(|(p, w)| (w, Trig { coeffs: coeffs.clone(), shift: wrap(shift + p) }))
                .collect(),
        ),
        (Trig { coeffs: x, shift: s }, Trig { coeffs: y, shift: t }) => {
            // (a_k/2)(b_k/2) = c_k/2, so c_k = a_k b_k / 2.
            let coeffs = x.iter().zip(&y).map(|(a, b)| a * b / 2.0).collect();
            Trig { coeffs, shift: wrap(s + t) }
        }
    })
}

impl Resolved {
    /// `μ[0, x)`.
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        match self {
            Resolved::Atoms(atoms) => atoms.iter().filter(|(p, _)| *p < x).map(|(_, w)| w).sum(),
            Resolved::Lebesgue => x,
            Resolved::Cantor => cantor_exact(x),
            Resolved::Trig { coeffs, shift } => {
                let mut v = x;
                for (i, a) in coeffs.iter().enumerate() {
                    let k = (i + 1) as f64;
                    v += a * ((TAU * k * (x - shift)).sin() + (TAU * k * shift).sin()) / (TAU * k);
                }
                v
            }
            Resolved::Mix(parts) => parts.iter().map(|(w, p)| w * p.cdf(x)).sum(),
        }
    }

    fn atom(&self, x: f64) -> f64 {
        match self {
            Resolved::Atoms(atoms) => atoms.iter().filter(|(p, _)| *p == x).map(|(_, w)| w).sum(),
            Resolved::Mix(parts) => parts.iter().map(|(w, p)| w * p.atom(x)).sum(),
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_measure;

    fn spec(src: &str) -> MeasureSpec {
        parse_measure(src).unwrap()
    }

    fn arc(a: f64, b: f64) -> CircleArc {
        CircleArc::new(a, b).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(oracle_arc(&spec("cantor"), arc(0.0, 1.0 / 3.0)).unwrap(), 0.5);
        assert_eq!(oracle_arc(&spec("atoms(0.2:0.5, 0.7:0.5)"), arc(0.2, 0.7)).unwrap(), 0.5);
        assert_eq!(
            oracle_arc(&spec("conv(dirac(0.3), conj(dirac(0.3)))"), arc(0.0, 0.1)).unwrap(),
            1.0
        );
        assert_eq!(oracle_cdf(&spec("lebesgue"), 0.37).unwrap(), 0.37);
        assert_eq!(oracle_atom(&spec("mix(0.5:dirac(1/3),0.5:lebesgue)"), 1.0 / 3.0).unwrap(), 0.5);
        assert!((oracle_cdf(&spec("cantor"), 0.25).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_density_integral() {
        // ∫_{0.49}^{0.51} (1 + 0.4 cos 2πt) dt.
        let exact = 0.02 + 0.4 * ((TAU * 0.51).sin() - (TAU * 0.49).sin()) / TAU;
        let v = oracle_arc(&spec("density(0.4)"), arc(0.49, 0.51)).unwrap();
        assert!((v - exact).abs() < 1e-15);
        assert!((v - 0.012_005_262_750_081_26).abs() < 1e-15);
    }

    #[test]
    fn total_mass_is_one() {
        for src in [
            "lebesgue",
            "cantor",
            "atoms(0.2:0.5, 0.7:0.5)",
            "density(0.4, 0.1)",
            "mix(0.5:dirac(1/3), 0.5:lebesgue)",
            "conv(density(0.5, 0.2), atoms(0.1:0.3, 0.6:0.7))",
            "conv(conj(density(0.5)), density(0.3))",
            "conv(cantor, lebesgue)",
            "conj(mix(0.5: dirac(0), 0.5: cantor))",
        ] {
            assert_eq!(oracle_arc(&spec(src), arc(0.0, 1.0)).unwrap(), 1.0, "{src}");
        }
    }

    #[test]
    fn capability_marks_cantor_convolutions() {
        let c = capability(&spec("conv(cantor, dirac(0.5))"));
        assert!(!c.supported);
        assert!(c.reason.unwrap().contains("Cantor"));
        assert!(matches!(
            oracle_arc(&spec("conv(cantor, cantor)"), arc(0.1, 0.2)),
            Err(Error::Unsupported(_))
        ));
        assert!(capability(&spec("conv(cantor, lebesgue)")).supported);
        assert!(capability(&spec("conv(mix(0.5:cantor, 0.5:dirac(0)), lebesgue)")).supported);
    }

    #[test]
    fn conjugate_reflects_half_open_arcs() {
        // μ̄[a, b) = μ((1-b, 1-a]) = μ[1-b, 1-a) - μ{1-b} + μ{1-a}.
        // Dyadic positions reflect exactly; 1 - 0.8 would land just below 0.2.
        let s = spec("atoms(0.25:0.25, 0.5:0.25, 0.75:0.5)");
        let c = MeasureSpec::conjugate(s.clone());
        for (a, b) in [(0.25, 0.5), (0.5, 0.75), (0.0, 0.25), (0.1, 1.0), (0.25, 0.75)] {
            let lhs = oracle_arc(&c, arc(a, b)).unwrap();
            let (lo, hi) = (1.0 - b, 1.0 - a);
            let base = if lo == 0.0 {
                oracle_cdf(&s, hi).unwrap()
            } else {
                oracle_arc(&s, arc(lo, hi)).unwrap()
            };
            let rhs = base - oracle_atom(&s, lo).unwrap() + oracle_atom(&s, hi).unwrap();
            assert!((lhs - rhs).abs() < 1e-15, "[{a},{b}): {lhs} vs {rhs}");
        }
    }

    #[test]
    fn trig_convolution_matches_coefficients() {
        use crate::coefficients::CoefficientProvider;
        // The shifted density's oracle cdf must agree with the exact Fourier
        // series, which is finite here.
        let s = spec("conv(density(0.5, 0.2), conj(dirac(0.15)))");
        let p = CoefficientProvider::new(s.clone()).unwrap();
        for x in [0.1, 0.4, 0.77] {
            let series = crate::arc::cdf(&p, x, 10, crate::arc::ArcOptions::with_limit(crate::arc::LimitMethod::SkippedContinuous)).unwrap();
            assert!((series.value - oracle_cdf(&s, x).unwrap()).abs() < 1e-14);
        }
    }
}
