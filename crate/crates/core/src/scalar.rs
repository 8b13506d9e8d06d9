//! Number representations used by the pivoting engine.
//!
//! Two scalar kinds are supported: IEEE binary64 (`f64`), the fast path, and
//! arbitrary-precision rationals ([`Rational`]), the reference semantics in
//! which every field operation is exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact rational number backed by big integers.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Binary64,
    ExactRational,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Binary64 => f.write_str("f64"),
            ScalarKind::ExactRational => f.write_str("rational"),
        }
    }
}

/// Three-way sign after applying a zero threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Field element usable by the tableau code.
pub trait Scalar:
    Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const KIND: ScalarKind;

    /// Converts an exact rational into this representation (rounding for `f64`).
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact value, when one exists (every finite `f64` is a dyadic rational).
    fn to_rational(&self) -> Option<Rational>;

    /// Renders with six decimals (`f64`) or as an exact fraction.
    fn render_fixed(&self) -> String;

    /// Serialized form: a number with 12 significant digits, or a `"p/q"` string.
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Binary64;

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_rational(&self) -> Option<Rational> {
        Rational::from_float(*self)
    }

    fn render_fixed(&self) -> String {
        // avoid printing "-0.000000"
        let s = format!("{:.6}", self);
        if s.trim_start_matches('-')
            .chars()
            .all(|c| c == '0' || c == '.')
        {
            "0.000000".to_string()
        } else {
            s
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let rounded = round_significant(*self, 12);
        serde_json::Number::from_f64(rounded)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn render_fixed(&self) -> String {
        self.to_string()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Numerator or denominator too large for a direct conversion: keep the
    // leading 64 bits of each and restore the binary exponent afterwards.
    let (n, d) = (r.numer(), r.denom());
    let shift = |x: &BigInt| x.bits().saturating_sub(64);
    let (sn, sd) = (shift(n), shift(d));
    let mn = ToPrimitive::to_f64(&(n >> sn)).unwrap_or(f64::NAN);
    let md = ToPrimitive::to_f64(&(d >> sd)).unwrap_or(f64::NAN);
    let exp = sn as i64 - sd as i64;
    (mn / md) * 2f64.powi(exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Rounds `v` to `digits` significant decimal digits.
pub fn round_significant(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let s = format!("{:.*e}", digits.saturating_sub(1), v);
    s.parse().unwrap_or(v)
}

/// Threshold for treating a magnitude as zero in sign and pivot tests.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    eps_zero: f64,
}

impl Tolerance {
    pub const DEFAULT_BINARY64: f64 = 1e-9;

    pub fn new(eps_zero: f64) -> Result<Self, Error> {
        if !eps_zero.is_finite() || eps_zero < 0.0 {
            return Err(Error::InvalidOptions(format!(
                "tolerance must be finite and nonnegative, got {eps_zero}"
            )));
        }
        Ok(Tolerance { eps_zero })
    }

    pub fn exact() -> Self {
        Tolerance { eps_zero: 0.0 }
    }

    /// Default tolerance for a scalar kind: zero for rationals, 1e-9 for `f64`.
    pub fn default_for(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Binary64 => Tolerance {
                eps_zero: Self::DEFAULT_BINARY64,
            },
            ScalarKind::ExactRational => Tolerance::exact(),
        }
    }

    pub fn eps_zero(&self) -> f64 {
        self.eps_zero
    }

    /// Checks the kind/tolerance pairing: exact mode needs 0, binary64 needs > 0.
    pub fn validate_for(&self, kind: ScalarKind) -> Result<(), Error> {
        match kind {
            ScalarKind::ExactRational if self.eps_zero != 0.0 => Err(Error::InvalidOptions(
                "exact rational mode requires eps_zero = 0".into(),
            )),
            ScalarKind::Binary64 if self.eps_zero <= 0.0 => Err(Error::InvalidOptions(
                "binary64 mode requires eps_zero > 0".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn sign<S: Scalar>(&self, v: &S) -> Sign {
        if S::KIND == ScalarKind::ExactRational || self.eps_zero == 0.0 {
            // `Signed::is_negative` is true for -0.0, so compare instead.
            let zero = S::zero();
            return if *v > zero {
                Sign::Positive
            } else if *v < zero {
                Sign::Negative
            } else {
                Sign::Zero
            };
        }
        let x = v.to_f64();
        if x > self.eps_zero {
            Sign::Positive
        } else if x < -self.eps_zero {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn is_positive<S: Scalar>(&self, v: &S) -> bool {
        self.sign(v) == Sign::Positive
    }

    pub fn is_negative<S: Scalar>(&self, v: &S) -> bool {
        self.sign(v) == Sign::Negative
    }

    pub fn is_zero<S: Scalar>(&self, v: &S) -> bool {
        self.sign(v) == Sign::Zero
    }
}

/// Parses a decimal literal (`-12`, `0.25`, `1.5e-3`) or a fraction `p/q` exactly.
pub fn parse_rational(token: &str) -> Result<Rational, String> {
    let token = token.trim();
    if token.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = parse_integer(p)?;
        let q: BigInt = parse_integer(q)?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{token}`"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(token)
}

fn parse_integer(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("malformed integer `{s}`"));
    }
    s.trim_start_matches('+')
        .parse::<BigInt>()
        .map_err(|e| format!("malformed integer `{s}`: {e}"))
}

fn parse_decimal(s: &str) -> Result<Rational, String> {
    let malformed = || format!("malformed number `{s}`");
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..]
                .trim_start_matches('+')
                .parse()
                .map_err(|_| malformed())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(malformed());
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(format!("exponent out of range in `{s}`"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| malformed())?
    };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact rational from an `f64`; errors on non-finite input.
pub fn rational_from_f64(v: f64) -> Result<Rational, Error> {
    Rational::from_f64(v)
        .filter(|_| v.is_finite())
        .ok_or_else(|| Error::InvalidInstance(format!("non-finite entry {v}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn negative_zero_has_no_sign() {
        assert_eq!(Tolerance::exact().sign(&-0.0f64), Sign::Zero);
        assert_eq!(Tolerance::default_for(f64::KIND).sign(&-0.0f64), Sign::Zero);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400);
        let r = Rational::new(big.clone() * BigInt::from(3), big.clone() * BigInt::from(4));
        assert_eq!(Scalar::to_f64(&r), 0.75);
        let r = Rational::new(big.clone(), BigInt::from(7));
        assert_eq!(Scalar::to_f64(&r), f64::INFINITY);
        let r = Rational::new(BigInt::from(-1), big);
        assert_eq!(Scalar::to_f64(&r), -0.0);
    }

    #[test]
    fn decimal_literals_parse_exactly() {
        assert_eq!(parse_rational("-5").unwrap(), q(-5, 1));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("1.5e-3").unwrap(), q(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), q(200, 1));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("16/19").unwrap(), q(16, 19));
        assert_eq!(parse_rational("-6/4").unwrap(), q(-3, 2));
    }

    #[test]
    fn malformed_numbers_are_rejected() {
        for bad in [
            "", "-", "1..2", "abc", "1/0", "1/", "/3", "1e", "0x10", "1.2.3", "nan",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn tolerance_sign_tests() {
        let tol = Tolerance::default_for(ScalarKind::Binary64);
        assert_eq!(tol.sign(&1e-10f64), Sign::Zero);
        assert_eq!(tol.sign(&-2e-9f64), Sign::Negative);
        assert_eq!(tol.sign(&2e-9f64), Sign::Positive);
        let exact = Tolerance::exact();
        assert_eq!(exact.sign(&q(1, 1_000_000_000_000)), Sign::Positive);
        assert_eq!(exact.sign(&Rational::zero()), Sign::Zero);
    }

    #[test]
    fn tolerance_kind_pairing() {
        assert!(Tolerance::exact()
            .validate_for(ScalarKind::ExactRational)
            .is_ok());
        assert!(Tolerance::exact()
            .validate_for(ScalarKind::Binary64)
            .is_err());
        let t = Tolerance::new(1e-9).unwrap();
        assert!(t.validate_for(ScalarKind::ExactRational).is_err());
        assert!(Tolerance::new(-1.0).is_err());
        assert!(Tolerance::new(f64::NAN).is_err());
    }

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_significant(1.0 / 3.0, 12), 0.333333333333);
        assert_eq!(round_significant(10000.0, 12), 10000.0);
        assert_eq!(round_significant(0.0, 12), 0.0);
    }

    #[test]
    fn fixed_rendering() {
        assert_eq!((1.0f64 / 11.0).render_fixed(), "0.090909");
        assert_eq!((-5.0f64 / 11.0).render_fixed(), "-0.454545");
        assert_eq!((-1e-12f64).render_fixed(), "0.000000");
        assert_eq!(q(-5, 11).render_fixed(), "-5/11");
    }
}
