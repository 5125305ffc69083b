//! `∫_e x dμ` for step elements, countable disjoint sums and bounded
//! elements, with μ the dyadic measure of a family.

use crate::error::{Error, Result};
use crate::family::{family_measure, Family};
use crate::riesz::{freudenthal_approx, LazySimple, StepElement};
use crate::scalar::{rational_decimal, serialize_rational, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

const DECIMAL_PLACES: usize = 12;
const MAX_LAZY_TERMS: u64 = 62;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralValue {
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub hi: Rational,
    /// `value` to 12 places, for display.
    pub decimal: String,
}

impl IntegralValue {
    pub fn exact(value: Rational) -> Self {
        Self::enclosed(value.clone(), value.clone(), value)
    }

    pub fn enclosed(value: Rational, lo: Rational, hi: Rational) -> Self {
        let decimal = rational_decimal(&value, DECIMAL_PLACES);
        Self { value, lo, hi, decimal }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// `Σ a_k μ(x_k)`.
pub fn integrate_simple(x: &StepElement, fam: &Family) -> Result<IntegralValue> {
    if x.unit() != fam.unit() {
        return Err(Error::UnitMismatch);
    }
    let mut sum = Rational::zero();
    for (a, frag) in x.terms() {
        sum += a * family_measure(fam, frag, fam.len())?.to_rational();
    }
    Ok(IntegralValue::exact(sum))
}

/// Partial sums of a countable disjoint sum until the declared tail bound
/// makes the enclosure `[S_N − T_N, S_N + T_N]` narrower than `tolerance`.
pub fn integrate_lazy(x: &LazySimple, fam: &Family, tolerance: &Rational) -> Result<IntegralValue> {
    if x.unit() != fam.unit() {
        return Err(Error::UnitMismatch);
    }
    if !tolerance.is_positive() {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let mut seen = Vec::new();
    let mut sum = Rational::zero();
    let mut prev_tail: Option<Rational> = None;
    for n in 1..=MAX_LAZY_TERMS {
        let (a, frag) = x.term(n)?;
        if !frag.leq(x.unit())? {
            return Err(Error::InvalidParams(format!("term {n} is not below the unit")));
        }
        for earlier in &seen {
            if !frag.disjoint(earlier)? {
                return Err(Error::InvalidParams(format!("term {n} overlaps an earlier term")));
            }
        }
        sum += &a * family_measure(fam, &frag, fam.len())?.to_rational();
        seen.push(frag);
        let tail = x.tail(n);
        if prev_tail.as_ref().is_some_and(|p| tail > *p) {
            return Err(Error::TailBoundIncreasing(n as usize));
        }
        if &tail + &tail <= *tolerance {
            return Ok(IntegralValue::enclosed(sum.clone(), &sum - &tail, &sum + &tail));
        }
        prev_tail = Some(tail);
    }
    Err(Error::TailTooSlow(MAX_LAZY_TERMS as usize))
}

/// `∫ u_n(x⁺) − ∫ u_n(x⁻)` for each `n` in `grid`.
pub fn freudenthal_integrals(x: &StepElement, fam: &Family, grid: &[u64]) -> Result<Vec<Rational>> {
    let (pos, neg) = (x.positive_part()?, x.negative_part()?);
    grid.iter()
        .map(|&n| {
            let up = integrate_simple(&freudenthal_approx(&pos, n)?, fam)?.value;
            let un = integrate_simple(&freudenthal_approx(&neg, n)?, fam)?.value;
            Ok(up - un)
        })
        .collect()
}

/// The limit of `∫ u_n` along `n = 1, 2, 4, …` until `1/n <= tolerance`,
/// checking `|∫u_n − ∫u_m| <= 1/min(n, m)` on the way. For a step element
/// the limit is the exact simple integral, which is returned.
pub fn integrate_bounded(x: &StepElement, fam: &Family, tolerance: &Rational) -> Result<IntegralValue> {
    if !tolerance.is_positive() {
        return Err(Error::InvalidParams("tolerance must be positive".into()));
    }
    let mut grid = vec![1u64];
    while Rational::new(1.into(), BigInt::from(*grid.last().expect("nonempty"))) > *tolerance {
        let next = grid.last().expect("nonempty") * 2;
        if next > 1 << 40 {
            return Err(Error::InvalidParams("tolerance too small".into()));
        }
        grid.push(next);
    }
    let values = freudenthal_integrals(x, fam, &grid)?;
    let exact = integrate_simple(x, fam)?.value;
    let inv = |n: u64| Rational::new(1.into(), BigInt::from(n));
    for (i, (n, v)) in grid.iter().zip(&values).enumerate() {
        for (m, w) in grid[..i].iter().zip(&values) {
            if (v - w).abs() > inv(*m.min(n)) {
                return Err(Error::ConditionsFailed(format!("Cauchy estimate fails at n = {n}, m = {m}")));
            }
        }
        if (v - &exact).abs() > inv(*n) {
            return Err(Error::ConditionsFailed(format!("approximant {n} misses the limit")));
        }
    }
    Ok(IntegralValue::exact(exact))
}

/// `‖x‖ = ∫ |x| dμ`.
pub fn l1_norm(x: &StepElement, fam: &Family) -> Result<IntegralValue> {
    integrate_simple(&x.abs()?, fam)
}
