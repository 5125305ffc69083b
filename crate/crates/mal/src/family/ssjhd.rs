//! The irrational-cut family: `s_n = [0, α) ⊔ (every other D-interval of
//! level n)`, with α = √2/2 and a binary tree of D-intervals over `[α, 1)`.
//!
//! Each D-interval splits at the dyadic point of smallest denominator in its
//! interior. Every `s_n` is a finite union of dyadic intervals because the
//! leftmost D-interval of each level starts at α.

use super::Family;
use crate::algebra::{DyadicSet, Element, MAX_LEVEL};
use crate::budget;
use crate::error::{Error, Result};
use crate::scalar::{alpha, DyadicRational, QuadScalar};
use num_bigint::BigInt;

const MAX_STAGE: usize = 20;

fn pow2(m: u32) -> QuadScalar {
    QuadScalar::from(&DyadicRational::new(BigInt::from(1) << m, 0))
}

/// `floor(x · 2^m)` for a dyadic `x >= 0`.
fn scaled_floor(x: &DyadicRational, m: u32) -> BigInt {
    let e = x.exponent();
    if m >= e {
        x.numerator() << (m - e)
    } else {
        x.numerator() >> (e - m)
    }
}

/// The dyadic point of smallest denominator strictly between `lo` and `hi`.
fn split_point(lo: &QuadScalar, hi: &QuadScalar) -> Result<DyadicRational> {
    if lo.is_rational() && hi.is_rational() {
        let (lo, hi) = (dyadic_endpoint(lo), dyadic_endpoint(hi));
        for m in 0..=MAX_LEVEL {
            let d = DyadicRational::new(scaled_floor(&lo, m) + 1, m);
            if d < hi {
                return Ok(d);
            }
        }
    }
    for m in 0..=MAX_LEVEL {
        let k = (lo * &pow2(m)).floor() + 1;
        let d = DyadicRational::new(k, m);
        if QuadScalar::from(&d) < *hi {
            return Ok(d);
        }
    }
    Err(Error::BudgetExceeded { requested: 1u128 << 63, cap: budget::cap() })
}

/// The `2^n` D-intervals of level `n`, left to right. Level 0 is `[α, 1)`.
pub fn d_intervals(n: usize) -> Result<Vec<(QuadScalar, QuadScalar)>> {
    if n > MAX_STAGE {
        return Err(Error::InvalidParams(format!("stage {n} exceeds {MAX_STAGE}")));
    }
    budget::ensure_pow2(n)?;
    let mut level = vec![(alpha(), QuadScalar::one())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (lo, hi) in level {
            let mid = QuadScalar::from(&split_point(&lo, &hi)?);
            next.push((lo, mid.clone()));
            next.push((mid, hi));
        }
        level = next;
    }
    Ok(level)
}

fn dyadic_endpoint(x: &QuadScalar) -> DyadicRational {
    DyadicRational::from_rational(&x.a).expect("split points are dyadic")
}

/// `s_n` as a dyadic union: `[0, sup D_{n,0}) ⊔ D_{n,2} ⊔ D_{n,4} ⊔ …`.
pub fn ssjhd_dyadic_generator(n: usize) -> Result<DyadicSet> {
    if n == 0 {
        return Err(Error::InvalidParams("generators are indexed from 1".into()));
    }
    let ds = d_intervals(n)?;
    let mut out = DyadicSet::interval(&DyadicRational::zero(), &dyadic_endpoint(&ds[0].1))?;
    for (lo, hi) in ds.iter().skip(2).step_by(2) {
        out = out.join(&DyadicSet::interval(&dyadic_endpoint(lo), &dyadic_endpoint(hi))?);
    }
    Ok(out)
}

pub fn ssjhd_family(stage: usize) -> Result<Family> {
    if stage == 0 {
        return Err(Error::InvalidParams("stage must be positive".into()));
    }
    let gens = (1..=stage).map(|n| ssjhd_dyadic_generator(n).map(Into::into)).collect::<Result<_>>()?;
    Family::from_elements("ssjhd", gens, None)
}

/// Given a lower bound `z ⊆ [0, α)` of `s_1..s_stage`, returns the strictly
/// larger lower bound `[0, k/2^m)` with the smallest `m` such that
/// `max z < k/2^m < α`.
pub fn ssjhd_lower_bound_refuter(stage: usize, z: &DyadicSet) -> Result<DyadicSet> {
    let fam = ssjhd_family(stage)?;
    let zl = Element::from(z.clone());
    for g in fam.generators() {
        if !zl.leq(&g.element)? {
            return Err(Error::NotLowerBound(format!("z is not below s_{}", g.index)));
        }
    }
    let top = z.max_point().unwrap_or_else(DyadicRational::zero);
    if QuadScalar::from(&top) > alpha() {
        return Err(Error::NotLowerBound("z reaches past the irrational cut".into()));
    }
    for m in 1..=MAX_LEVEL {
        let k = (alpha() * pow2(m)).floor();
        let cut = DyadicRational::new(k, m);
        if cut > top {
            return DyadicSet::interval(&DyadicRational::zero(), &cut);
        }
    }
    Err(Error::BudgetExceeded { requested: 1u128 << 63, cap: budget::cap() })
}
