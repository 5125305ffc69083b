use super::{format_scaled, parse_rational, DyadicRational, Rational};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// `a + b√2` with rational `a`, `b`. The pair is unique because √2 is
/// irrational, so derived equality is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadScalar {
    pub a: Rational,
    pub b: Rational,
}

/// The irrational cut point α = √2/2 used by the irrational-cut family.
pub fn alpha() -> QuadScalar {
    QuadScalar::new(Rational::zero(), Rational::new(BigInt::one(), BigInt::from(2)))
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of `a + b√2`, decided by comparing `a²` with `2b²`.
    pub fn sign(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        if sa == 0 {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2 = &self.b * &self.b * Rational::from_integer(BigInt::from(2));
        if a2 > b2 {
            sa
        } else {
            sb
        }
    }

    /// Largest integer `f` with `f <= self`, exact.
    pub fn floor(&self) -> BigInt {
        // Integer square root gives an estimate within a couple of units;
        // exact comparisons finish the job.
        let two_b2 = &self.b * &self.b * Rational::from_integer(BigInt::from(2));
        let root = two_b2.to_integer().sqrt();
        let mut f = self.a.floor().to_integer() + if self.b.is_negative() { -root - 1 } else { root };
        while QuadScalar::rational(Rational::from_integer(f.clone())) > *self {
            f -= 1;
        }
        while QuadScalar::rational(Rational::from_integer(&f + 1)) <= *self {
            f += 1;
        }
        f
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(&self.a * r, &self.b * r)
    }

    /// Decimal rendering to `places` digits, rounded half away from zero.
    /// Display only.
    pub fn to_decimal(&self, places: usize) -> String {
        // floor(10^p (a + b√2)) bracketed through an integer square root with
        // a few guard digits.
        let guard = 6u32;
        let p = places as u32 + guard;
        let scale = BigInt::from(10u32).pow(p);
        let sqrt2 = (BigInt::from(2) * &scale * &scale).sqrt();
        let approx = &self.a * Rational::from_integer(scale.clone())
            + &self.b * Rational::from_integer(sqrt2);
        let neg = approx.is_negative();
        let shown = BigInt::from(10u32).pow(places as u32);
        let down = Rational::from_integer(BigInt::from(10u32).pow(guard));
        let rounded = (approx.abs() / down + Rational::new(BigInt::one(), BigInt::from(2)))
            .floor()
            .to_integer();
        format_scaled(neg && !rounded.is_zero(), &rounded, &shown, places)
    }
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl From<Rational> for QuadScalar {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl From<&DyadicRational> for QuadScalar {
    fn from(d: &DyadicRational) -> Self {
        Self::rational(d.to_rational())
    }
}

impl Add for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: Self) -> QuadScalar {
        QuadScalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: Self) -> QuadScalar {
        QuadScalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: Self) -> QuadScalar {
        let two = Rational::from_integer(BigInt::from(2));
        QuadScalar::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new(-&self.a, -&self.b)
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: Self) -> QuadScalar {
        &self + &rhs
    }
}

impl Sub for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: Self) -> QuadScalar {
        &self - &rhs
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: Self) -> QuadScalar {
        &self * &rhs
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

impl std::iter::Sum for QuadScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| &a + &b)
    }
}

impl Ord for QuadScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.b == other.b {
            return self.a.cmp(&other.a);
        }
        (self - other).sign().cmp(&0)
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt2", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*sqrt2", self.a, self.b)
        }
    }
}

impl FromStr for QuadScalar {
    type Err = Error;

    /// Accepts `a`, `b*sqrt2`, `sqrt2`, `a + b*sqrt2` and `a - b*sqrt2`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a quadratic scalar: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        let Some(body) = t.strip_suffix("sqrt2") else {
            return Ok(Self::rational(parse_rational(&t)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // Split off the rational part at the last top-level sign.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && &body[i - 1..i] != "^")
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let a = if a.is_empty() { Rational::zero() } else { parse_rational(a)? };
        let b = match b {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        Ok(Self::new(a, b))
    }
}

impl serde::Serialize for QuadScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_rational() {
            s.collect_str(&self.a)
        } else {
            s.collect_str(self)
        }
    }
}

impl<'de> serde::Deserialize<'de> for QuadScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
