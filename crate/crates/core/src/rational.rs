//! Exact rational numbers and their `"p/q"` text form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational used for every mass, length and integral.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer {0:?} in rational literal")]
    BadInteger(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| ParseRationalError::BadInteger(num.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| ParseRationalError::BadInteger(den.to_string()))?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` rendering: lowest terms, positive denominator, always
/// with an explicit denominator (`"2/1"`, `"0/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Wrapper that displays a rational in canonical `"p/q"` form.
pub struct Canonical<'a>(pub &'a Rational);

impl fmt::Display for Canonical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Decimal rendering with a fixed number of fractional digits, truncated
/// toward zero. Used only for human-facing plane payloads.
pub fn format_decimal(value: &Rational, digits: usize) -> String {
    let negative = value.is_negative();
    let magnitude = value.abs();
    let int_part = magnitude.trunc().to_integer();
    let mut frac = magnitude.fract();
    let mut out = String::new();
    if negative && !magnitude.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        let ten = int(10);
        for _ in 0..digits {
            frac *= &ten;
            let d = frac.trunc().to_integer();
            out.push_str(&d.to_string());
            frac -= Rational::from_integer(d);
        }
    }
    out
}

/// Least common multiple of the denominators, for scaling to integers.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational(" 6 / -4 ").unwrap(), ratio(-3, 2));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("x/2"),
            Err(ParseRationalError::BadInteger(_))
        ));
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
    }

    #[test]
    fn canonical_form_always_has_denominator() {
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(Canonical(&int(7)).to_string(), "7/1");
    }

    #[test]
    fn decimal_rendering_truncates() {
        assert_eq!(format_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&ratio(-3, 2), 2), "-1.50");
        assert_eq!(format_decimal(&int(2), 0), "2");
    }
}
