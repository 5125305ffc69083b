use super::runs;
use crate::error::{Error, Result};
use crate::scalar::QuadScalar;

/// A finite union of half-open intervals `[lo, hi)` in `[0, 1]` with
/// endpoints in ℚ(√2). Intervals are sorted and maximally merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    ivals: Vec<(QuadScalar, QuadScalar)>,
}

impl IntervalSet {
    /// Union of the given intervals; they may overlap or arrive unsorted.
    pub fn new(ivals: Vec<(QuadScalar, QuadScalar)>) -> Result<Self> {
        let zero = QuadScalar::zero();
        let one = QuadScalar::one();
        for (lo, hi) in &ivals {
            if *lo < zero || *hi > one || lo > hi {
                return Err(Error::InvalidParams(format!("interval [{lo}, {hi}) outside [0,1]")));
            }
        }
        Ok(Self { ivals: runs::normalize(ivals) })
    }

    pub(crate) fn from_normalized(ivals: Vec<(QuadScalar, QuadScalar)>) -> Self {
        Self { ivals }
    }

    pub fn interval(lo: QuadScalar, hi: QuadScalar) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { ivals: vec![(QuadScalar::zero(), QuadScalar::one())] }
    }

    pub fn intervals(&self) -> &[(QuadScalar, QuadScalar)] {
        &self.ivals
    }

    pub fn is_empty(&self) -> bool {
        self.ivals.is_empty()
    }

    pub fn measure(&self) -> QuadScalar {
        self.ivals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains_point(&self, x: &QuadScalar) -> bool {
        self.ivals.iter().any(|(lo, hi)| lo <= x && x < hi)
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        self.combine(&Self::empty(), |a, _| !a)
    }

    pub fn leq(&self, other: &Self) -> bool {
        runs::subset(&self.ivals, &other.ivals)
    }

    pub fn disjoint(&self, other: &Self) -> bool {
        runs::disjoint(&self.ivals, &other.ivals)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let ivals = runs::sweep(&self.ivals, &other.ivals, &QuadScalar::zero(), &QuadScalar::one(), op);
        Self { ivals }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{alpha, rat};

    fn q(n: i64, d: i64) -> QuadScalar {
        QuadScalar::from(rat(n, d))
    }

    #[test]
    fn join_at_alpha_merges() {
        let left = IntervalSet::interval(QuadScalar::zero(), alpha()).unwrap();
        let right = IntervalSet::interval(alpha(), QuadScalar::one()).unwrap();
        assert_eq!(left.join(&right), IntervalSet::full());
        assert_eq!(left.measure(), alpha());
        assert!(left.meet(&right).is_empty());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(IntervalSet::interval(q(-1, 2), q(1, 2)).is_err());
        assert!(IntervalSet::interval(q(1, 2), q(1, 4)).is_err());
    }

    #[test]
    fn complement_and_points() {
        let x = IntervalSet::new(vec![(q(1, 4), q(1, 2)), (q(0, 1), q(1, 8))]).unwrap();
        let c = x.complement();
        assert_eq!(c.intervals(), &[(q(1, 8), q(1, 4)), (q(1, 2), q(1, 1))]);
        assert!(x.contains_point(&q(1, 4)));
        assert!(!x.contains_point(&q(1, 2)));
        assert_eq!(c.complement(), x);
    }
}
