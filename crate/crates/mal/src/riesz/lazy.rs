use crate::algebra::{DyadicSet, Element};
use crate::error::{Error, Result};
use crate::scalar::Rational;
use num_bigint::BigInt;
use num_traits::One;

type TermFn = Box<dyn Fn(u64) -> Result<(Rational, Element)> + Send + Sync>;
type TailFn = Box<dyn Fn(u64) -> Rational + Send + Sync>;

/// A countable disjoint sum `Σ a_n x_n` given by a term generator and a
/// declared bound `tail(N) >= Σ_{m>N} |a_m| μ(x_m)`. Terms are indexed from 1.
pub struct LazySimple {
    unit: Element,
    term: TermFn,
    tail: TailFn,
}

impl std::fmt::Debug for LazySimple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LazySimple").field("unit", &self.unit).finish_non_exhaustive()
    }
}

impl LazySimple {
    pub fn new(
        unit: Element,
        term: impl Fn(u64) -> Result<(Rational, Element)> + Send + Sync + 'static,
        tail: impl Fn(u64) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Self { unit, term: Box::new(term), tail: Box::new(tail) }
    }

    /// `a_n = 2^{-n}` on `x_n = [1 − 2^{1-n}, 1 − 2^{-n})`; the sum of
    /// `a_n μ(x_n)` is `1/3` and `tail(N) = 4^{-N}/3`.
    pub fn geometric() -> Self {
        let pow = |n: u64| Rational::new(BigInt::one(), BigInt::one() << n);
        Self::new(
            DyadicSet::full().into(),
            move |n| {
                let level = u32::try_from(n).map_err(|_| Error::InvalidParams("index too large".into()))?;
                Ok((pow(n), DyadicSet::cell(level, (1u64 << level) - 2)?.into()))
            },
            move |n| pow(2 * n) / Rational::from_integer(3.into()),
        )
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn term(&self, n: u64) -> Result<(Rational, Element)> {
        if n == 0 {
            return Err(Error::InvalidParams("terms are indexed from 1".into()));
        }
        (self.term)(n)
    }

    pub fn tail(&self, n: u64) -> Rational {
        (self.tail)(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn geometric_terms() {
        let g = LazySimple::geometric();
        let (a, x) = g.term(2).unwrap();
        assert_eq!(a, rat(1, 4));
        assert_eq!(x, DyadicSet::from_mask_u64(2, 0b0100).unwrap().into());
        assert_eq!(g.tail(1), rat(1, 12));
    }
}
