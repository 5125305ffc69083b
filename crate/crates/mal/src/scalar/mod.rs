//! Exact number types: dyadic rationals, rationals and elements of ℚ(√2).
//!
//! Nothing in here touches floating point. Decimal renderings are for
//! display only and are computed with integer arithmetic.

mod dyadic;
mod quad;

pub use dyadic::DyadicRational;
pub use quad::{alpha, QuadScalar};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or `"p/2^e"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q = q.trim();
            let q: BigInt = match q.strip_prefix("2^") {
                Some(e) => BigInt::one() << e.parse::<u32>().map_err(|_| bad())?,
                None => q.parse().map_err(|_| bad())?,
            };
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Serializes a rational as its `"p/q"` text.
pub fn serialize_rational<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Serializes a list of rationals as text.
pub fn serialize_rationals<S: serde::Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Renders `x` rounded half away from zero to `places` decimal places.
pub fn rational_decimal(x: &Rational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    format_scaled(x.is_negative() && !rounded.is_zero(), &rounded, &scale, places)
}

pub(crate) fn format_scaled(neg: bool, rounded: &BigInt, scale: &BigInt, places: usize) -> String {
    let (whole, frac) = rounded.div_rem(scale);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_rational_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("5/2^3").unwrap(), rat(5, 8));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_decimal(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(rational_decimal(&rat(-1, 4), 12), "-0.250000000000");
        assert_eq!(rational_decimal(&rat(2, 3), 2), "0.67");
        assert_eq!(rational_decimal(&int(0), 3), "0.000");
    }
}
