//! A decreasing chain in the usual dyadic-union algebra whose measures stay
//! above 1/2 while its infimum there is zero.

use crate::algebra::{enumeration_cell, enumeration_index, DyadicSet};
use crate::error::{Error, Result};
use crate::scalar::{rat, Rational};

/// Largest chain index whose removed interval still fits the grid.
pub const MAX_CHAIN_INDEX: u64 = 61;

/// `I_{k_n}`: the leftmost level-`(n+1)` cell inside the `n`-th enumerated
/// dyadic interval.
pub fn removed_interval(n: u64) -> Result<DyadicSet> {
    if n == 0 || n > MAX_CHAIN_INDEX {
        return Err(Error::InvalidParams(format!("chain index {n} outside 1..={MAX_CHAIN_INDEX}")));
    }
    let (level, pos) = enumeration_cell(n)?;
    let depth = n as u32 + 1;
    DyadicSet::cell(depth, pos << (depth - level))
}

/// `x_t = [0,1) ∖ (I_{k_1} ∪ … ∪ I_{k_t})`.
pub fn chain_element(t: u64) -> Result<DyadicSet> {
    let mut x = DyadicSet::full();
    for n in 1..=t {
        x = x.difference(&removed_interval(n)?);
    }
    Ok(x)
}

/// `x_1 ≥ … ≥ x_m`, for `1 <= m <= 20`.
pub fn non_sigma_additive_chain(m: usize) -> Result<Vec<DyadicSet>> {
    if !(1..=20).contains(&m) {
        return Err(Error::InvalidParams(format!("chain length {m} outside 1..=20")));
    }
    let mut out = Vec::with_capacity(m);
    let mut x = DyadicSet::full();
    for n in 1..=m as u64 {
        x = x.difference(&removed_interval(n)?);
        out.push(x.clone());
    }
    Ok(out)
}

/// `1 − Σ_{n ≤ t} 2^{-n-1}`.
pub fn ledger_bound(t: u64) -> Rational {
    let mut out = rat(1, 1);
    for n in 1..=t {
        out -= Rational::new(1.into(), num_bigint::BigInt::from(1) << (n + 1));
    }
    out
}

/// For nonzero `z`, the index `t` of the first enumerated dyadic interval
/// inside `z`; then `I_{k_t} ⊆ z` is missing from `x_t`, so `z ≰ x_t`.
pub fn refute_lower_bound(z: &DyadicSet) -> Result<u64> {
    let (level, pos) = z
        .first_enumerated_subinterval()
        .ok_or_else(|| Error::InvalidParams("z must be nonzero".into()))?;
    let t = enumeration_index(level, pos);
    if t > MAX_CHAIN_INDEX {
        return Err(Error::BudgetExceeded { requested: u128::from(t), cap: MAX_CHAIN_INDEX });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_measures() {
        let chain = non_sigma_additive_chain(3).unwrap();
        // I_{k_2} = [0,1/8) sits inside I_{k_1} = [0,1/4), so the bound is not tight.
        assert_eq!(chain[2].measure().to_rational(), rat(11, 16));
        assert_eq!(ledger_bound(3), rat(9, 16));
        assert!(chain.windows(2).all(|w| w[1].leq(&w[0])));
    }

    #[test]
    fn refuter_on_i5() {
        let (level, pos) = enumeration_cell(5).unwrap();
        let z = DyadicSet::cell(level, pos).unwrap();
        assert_eq!(refute_lower_bound(&z).unwrap(), 5);
        assert!(!z.leq(&chain_element(5).unwrap()));
        assert!(refute_lower_bound(&DyadicSet::empty()).is_err());
    }
}
