//! The enumeration cap shared by every exhaustive search.

use crate::error::{Error, Result};

/// Default cap on enumerated cases: 2^20.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// The active cap. `MAL_BUDGET` may lower it, never raise it.
pub fn cap() -> u64 {
    std::env::var("MAL_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .map_or(DEFAULT_CAP, |v| v.min(DEFAULT_CAP))
}

/// Fails with a budget error when `requested` exceeds the cap.
pub fn ensure(requested: u128) -> Result<()> {
    let cap = cap();
    if requested > cap as u128 {
        Err(Error::BudgetExceeded { requested, cap })
    } else {
        Ok(())
    }
}

/// Budget check for `2^n` cases.
pub fn ensure_pow2(n: usize) -> Result<()> {
    if n >= 127 {
        return Err(Error::BudgetExceeded { requested: u128::MAX, cap: cap() });
    }
    ensure(1u128 << n)
}
