//! Textual measure descriptions.
//!
//! ```text
//! spec := "lebesgue" | "cantor" | "dirac" "(" num ")"
//!       | "atoms" "(" num ":" num ("," num ":" num)* ")"
//!       | "density" "(" num ("," num)* ")"
//!       | "mix" "(" num ":" spec ("," num ":" spec)* ")"
//!       | "conv" "(" spec "," spec ")" | "conj" "(" spec ")"
//! num  := decimal literal | integer "/" positive-integer
//! ```
//!
//! Whitespace is ignored between tokens. [`fmt::Display`] on [`MeasureSpec`]
//! prints the same grammar back out.

use std::fmt;

use crate::coefficients::{Atom, MeasureSpec, NORMALIZATION_TOL};
use crate::error::Error;

pub const MAX_SOURCE_LEN: usize = 64 * 1024;
pub const MAX_DEPTH: usize = 32;

/// A rejection with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

impl From<ParseDiagnostic> for Error {
    fn from(d: ParseDiagnostic) -> Self {
        Error::Parse(d)
    }
}

/// Parses and validates a measure description.
pub fn parse_measure(src: &str) -> Result<MeasureSpec, ParseDiagnostic> {
    let mut p = Parser::new(src)?;
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error_at(p.pos, "unexpected trailing input"));
    }
    // Every semantic rule was checked with offsets above; this is the
    // contract shared with programmatic construction.
    spec.validate().map_err(|e| p.error_at(0, e.to_string()))?;
    Ok(spec)
}

/// Parses a single `num` (decimal or exact fraction), e.g. `"1/3"`.
pub fn parse_number(src: &str) -> Result<f64, ParseDiagnostic> {
    let mut p = Parser::new(src)?;
    let (v, _) = p.number()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error_at(p.pos, "unexpected trailing input"));
    }
    Ok(v)
}

/// `num / den` rounded once to the nearest double (ties to even).
pub fn ratio_to_f64(num: u64, den: u64) -> f64 {
    assert!(den != 0, "zero denominator");
    if num == 0 {
        return 0.0;
    }
    // Scale so the integer quotient has exactly 55 significant bits:
    // 53 mantissa bits, one guard bit, one round bit; the remainder is sticky.
    let mut n = num as u128;
    let mut d = den as u128;
    let lead = |x: u128| 127 - x.leading_zeros() as i32;
    let mut shift = 54 - (lead(n) - lead(d));
    if shift >= 0 {
        n <<= shift;
    } else {
        d <<= -shift;
    }
    if n / d < (1u128 << 54) {
        n <<= 1;
        shift += 1;
    }
    let q = n / d;
    let sticky = !n.is_multiple_of(d);
    debug_assert!((1 << 54..1 << 55).contains(&q));
    let low = (q & 3) as u32;
    let mut m = (q >> 2) as u64;
    if low > 2 || (low == 2 && (sticky || m & 1 == 1)) {
        m += 1;
    }
    // value = q * 2^-shift = m * 2^(2 - shift); m ≤ 2^53 converts exactly.
    m as f64 * 2f64.powi(2 - shift)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseDiagnostic> {
        let bytes = src.as_bytes();
        if bytes.len() > MAX_SOURCE_LEN {
            return Err(ParseDiagnostic {
                offset: MAX_SOURCE_LEN - 1,
                message: format!("input longer than {MAX_SOURCE_LEN} bytes"),
            });
        }
        if let Some(i) = bytes.iter().position(|b| !b.is_ascii()) {
            return Err(ParseDiagnostic { offset: i, message: "non-ASCII character".into() });
        }
        Ok(Self { src: bytes, pos: 0, depth: 0 })
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            offset: offset.min(self.src.len().saturating_sub(1)),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<usize, ParseDiagnostic> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(self.pos - 1)
            }
            Some(b) => Err(self.error_at(
                self.pos,
                format!("expected '{}', found '{}'", c as char, b as char),
            )),
            None => Err(self.error_at(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    /// Consumes `sep` if present.
    fn eat(&mut self, sep: u8) -> bool {
        if self.peek() == Some(sep) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn keyword(&mut self) -> Result<(&'a str, usize), ParseDiagnostic> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected a measure name"));
        }
        // ASCII was checked at construction.
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok((word, start))
    }

    fn spec(&mut self) -> Result<MeasureSpec, ParseDiagnostic> {
        self.skip_ws();
        if self.depth >= MAX_DEPTH {
            return Err(self.error_at(self.pos, format!("nesting deeper than {MAX_DEPTH}")));
        }
        self.depth += 1;
        let out = self.spec_inner();
        self.depth -= 1;
        out
    }

    fn spec_inner(&mut self) -> Result<MeasureSpec, ParseDiagnostic> {
        let (word, at) = self.keyword()?;
        match word {
            "lebesgue" => Ok(MeasureSpec::Lebesgue),
            "cantor" => Ok(MeasureSpec::Cantor),
            "dirac" => {
                self.expect(b'(')?;
                let (p, p_at) = self.number()?;
                self.check_position(p, p_at)?;
                self.expect(b')')?;
                Ok(MeasureSpec::dirac(p))
            }
            "atoms" => {
                self.expect(b'(')?;
                let mut atoms: Vec<Atom> = Vec::new();
                loop {
                    let (p, p_at) = self.number()?;
                    self.check_position(p, p_at)?;
                    if atoms.iter().any(|a| a.position == p) {
                        return Err(self.error_at(p_at, format!("duplicate atom position {p}")));
                    }
                    self.expect(b':')?;
                    let (w, w_at) = self.number()?;
                    if w <= 0.0 {
                        return Err(self.error_at(w_at, format!("atom weight {w} is not positive")));
                    }
                    atoms.push(Atom::new(p, w));
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                let total: f64 = atoms.iter().map(|a| a.weight).sum();
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(self.error_at(at, format!("atom weights sum to {total}, expected 1")));
                }
                Ok(MeasureSpec::Atomic(atoms))
            }
            "density" => {
                self.expect(b'(')?;
                let mut coeffs = Vec::new();
                loop {
                    coeffs.push(self.number()?.0);
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                let total: f64 = coeffs.iter().map(|a: &f64| a.abs()).sum();
                if total >= 1.0 {
                    return Err(self.error_at(
                        at,
                        format!("density coefficients have absolute sum {total}, must be < 1"),
                    ));
                }
                Ok(MeasureSpec::CosineDensity(coeffs))
            }
            "mix" => {
                self.expect(b'(')?;
                let mut parts = Vec::new();
                loop {
                    let (w, w_at) = self.number()?;
                    if w <= 0.0 {
                        return Err(self.error_at(w_at, format!("mixture weight {w} is not positive")));
                    }
                    self.expect(b':')?;
                    parts.push((w, self.spec()?));
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b')')?;
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(self.error_at(at, format!("mixture weights sum to {total}, expected 1")));
                }
                Ok(MeasureSpec::Mixture(parts))
            }
            "conv" => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b',')?;
                let b = self.spec()?;
                self.expect(b')')?;
                Ok(MeasureSpec::convolution(a, b))
            }
            "conj" => {
                self.expect(b'(')?;
                let a = self.spec()?;
                self.expect(b')')?;
                Ok(MeasureSpec::conjugate(a))
            }
            other => Err(self.error_at(at, format!("unknown measure '{other}'"))),
        }
    }

    fn check_position(&self, p: f64, at: usize) -> Result<(), ParseDiagnostic> {
        if (0.0..1.0).contains(&p) {
            Ok(())
        } else {
            Err(self.error_at(at, format!("position {p} outside [0, 1)")))
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Returns the value and the offset where the literal starts.
    fn number(&mut self) -> Result<(f64, usize), ParseDiagnostic> {
        self.skip_ws();
        let start = self.pos;
        let negative = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let int_start = self.pos;
        let int_digits = self.digits();
        let int_end = self.pos;

        // Fraction form: integer "/" positive-integer.
        if int_digits > 0 && self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den_start = self.pos;
            if self.digits() == 0 {
                return Err(self.error_at(den_start, "expected denominator digits"));
            }
            let num = self.parse_u64(int_start, int_end)?;
            let den = self.parse_u64(den_start, self.pos)?;
            if den == 0 {
                return Err(self.error_at(den_start, "zero denominator"));
            }
            let v = ratio_to_f64(num, den);
            return Ok((if negative { -v } else { v }, start));
        }
        self.pos = int_end;

        let mut frac_digits = 0;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac_digits = self.digits();
        }
        if int_digits + frac_digits == 0 {
            return Err(self.error_at(start, "expected a number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let v: f64 = text
            .parse()
            .map_err(|_| self.error_at(start, format!("malformed number '{text}'")))?;
        if !v.is_finite() {
            return Err(self.error_at(start, format!("number '{text}' is out of range")));
        }
        Ok((v, start))
    }

    fn parse_u64(&self, from: usize, to: usize) -> Result<u64, ParseDiagnostic> {
        std::str::from_utf8(&self.src[from..to])
            .expect("ascii")
            .parse()
            .map_err(|_| self.error_at(from, "integer too large"))
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSpec::Lebesgue => f.write_str("lebesgue"),
            MeasureSpec::Cantor => f.write_str("cantor"),
            MeasureSpec::Atomic(atoms) if atoms.len() == 1 && atoms[0].weight == 1.0 => {
                write!(f, "dirac({})", atoms[0].position)
            }
            MeasureSpec::Atomic(atoms) => {
                f.write_str("atoms(")?;
                for (i, a) in atoms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}:{}", a.position, a.weight)?;
                }
                f.write_str(")")
            }
            MeasureSpec::CosineDensity(a) if a.is_empty() => f.write_str("lebesgue"),
            MeasureSpec::CosineDensity(a) => {
                f.write_str("density(")?;
                for (i, v) in a.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            MeasureSpec::Mixture(parts) => {
                f.write_str("mix(")?;
                for (i, (w, s)) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{w}: {s}")?;
                }
                f.write_str(")")
            }
            MeasureSpec::Convolution(a, b) => write!(f, "conv({a}, {b})"),
            MeasureSpec::Conjugate(a) => write!(f, "conj({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_names() {
        assert_eq!(parse_measure("lebesgue").unwrap(), MeasureSpec::Lebesgue);
        assert_eq!(parse_measure("  cantor ").unwrap(), MeasureSpec::Cantor);
    }

    #[test]
    fn mixture_desugars_dirac() {
        let s = parse_measure("mix(0.5: dirac(1/3), 0.5: lebesgue)").unwrap();
        assert_eq!(
            s,
            MeasureSpec::Mixture(vec![
                (0.5, MeasureSpec::Atomic(vec![Atom::new(1.0 / 3.0, 1.0)])),
                (0.5, MeasureSpec::Lebesgue),
            ])
        );
    }

    #[test]
    fn density_sum_rule() {
        assert_eq!(
            parse_measure("density(0.4, 0.2)").unwrap(),
            MeasureSpec::CosineDensity(vec![0.4, 0.2])
        );
        let err = parse_measure("density(0.8, 0.4)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.message.contains("1.2"), "{}", err.message);
        assert!(parse_measure("density(-0.3, 0.2)").is_ok());
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_measure("conv(atoms(0.2:0.5,0.7:0.5),conj(dirac(1 / 3)))").unwrap();
        let b = parse_measure(" conv ( atoms ( 0.2 : 0.5 , 0.7 : 0.5 ) , conj ( dirac ( 1/3 ) ) ) ")
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn semantic_errors_point_at_tokens() {
        let src = "atoms(0.2:0.5, 0.2:0.5)";
        let e = parse_measure(src).unwrap_err();
        assert_eq!(e.offset, 15);
        assert!(e.message.contains("duplicate"));

        let e = parse_measure("mix(0.5: lebesgue, 0.4: cantor)").unwrap_err();
        assert_eq!(e.offset, 0);

        let e = parse_measure("conj(dirac(1.5))").unwrap_err();
        assert_eq!(e.offset, 11);

        let e = parse_measure("atoms(0.1:0.5, 0.2:-0.5)").unwrap_err();
        assert_eq!(e.offset, 19);
    }

    #[test]
    fn syntax_errors() {
        for (src, offset) in [
            ("", 0),
            ("lebesgu", 0),
            ("dirac(", 5),
            ("dirac(0.5", 8),
            ("dirac(0.5))", 10),
            ("conv(lebesgue)", 13),
            ("dirac(1/0)", 8),
            ("dirac(x)", 6),
            ("atoms(0.5;1)", 9),
        ] {
            let e = parse_measure(src).unwrap_err();
            assert_eq!(e.offset, offset, "{src}: {}", e.message);
            assert!(src.is_empty() || e.offset < src.len());
        }
    }

    #[test]
    fn depth_limit() {
        let mut ok = "lebesgue".to_string();
        for _ in 0..31 {
            ok = format!("conj({ok})");
        }
        assert!(parse_measure(&ok).is_ok());
        let too_deep = format!("conj({ok})");
        let e = parse_measure(&too_deep).unwrap_err();
        assert!(e.message.contains("nesting"));
    }

    #[test]
    fn rejects_non_ascii_and_oversized_input() {
        assert_eq!(parse_measure("dirac(0.5)\u{e9}").unwrap_err().offset, 10);
        let long = " ".repeat(MAX_SOURCE_LEN + 1);
        assert!(parse_measure(&long).is_err());
    }

    #[test]
    fn fractions_round_once() {
        assert_eq!(parse_number("1/3").unwrap(), 1.0 / 3.0);
        assert_eq!(parse_number("-2/7").unwrap(), -2.0 / 7.0);
        assert_eq!(parse_number("1e-3").unwrap(), 0.001);
        assert_eq!(parse_number(".25").unwrap(), 0.25);
        // 2^53 + 1 is not representable; the quotient 1 / (2^53 + 1) must
        // still round to the nearest double rather than to 1 / 2^53.
        let den = (1u64 << 53) + 1;
        let v = ratio_to_f64(1, den);
        assert!(v < 1.0 / (1u64 << 53) as f64);
        // Ties: (2^54 + 2) / 2 = 2^53 + 1 rounds to even, 2^53.
        assert_eq!(ratio_to_f64((1 << 54) + 2, 2), 9007199254740992.0);
        assert_eq!(ratio_to_f64((1 << 54) + 6, 2), 9007199254740996.0);
        assert_eq!(ratio_to_f64(u64::MAX, 1), 18446744073709551616.0);
    }

    #[test]
    fn display_round_trips_corpus() {
        for src in [
            "lebesgue",
            "cantor",
            "dirac(1/3)",
            "atoms(0.2:0.5, 0.7:0.5)",
            "density(0.4, 0.1)",
            "density(-0.25, 1e-20)",
            "mix(0.5: dirac(1/3), 0.5: lebesgue)",
            "conv(dirac(0.3), conj(dirac(0.3)))",
            "mix(1/3: cantor, 2/3: conv(density(0.5), atoms(0:1/4, 1/2:3/4)))",
        ] {
            let spec = parse_measure(src).unwrap();
            let again = parse_measure(&spec.to_string()).unwrap();
            assert_eq!(spec, again, "{src} -> {spec}");
        }
    }
}
