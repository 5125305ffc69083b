use super::runs;
use super::IntervalSet;
use crate::error::{Error, Result};
use crate::scalar::{DyadicRational, QuadScalar};
use num_bigint::BigUint;
use num_traits::Zero;

/// Deepest supported level. Cell positions are `u64`.
pub const MAX_LEVEL: u32 = 62;

/// A finite union of level-`n` dyadic cells `[j/2^n, (j+1)/2^n)`.
///
/// The mask is stored as maximal runs of consecutive cells, which keeps deep
/// but sparse sets cheap. The level is always minimal, so structural
/// equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicSet {
    level: u32,
    runs: Vec<(u64, u64)>,
}

impl DyadicSet {
    pub fn empty() -> Self {
        Self { level: 0, runs: Vec::new() }
    }

    pub fn full() -> Self {
        Self { level: 0, runs: vec![(0, 1)] }
    }

    /// Union of the cell ranges `runs` at `level`.
    pub fn from_runs(level: u32, runs: Vec<(u64, u64)>) -> Result<Self> {
        check_level(level)?;
        let top = 1u64 << level;
        if runs.iter().any(|&(lo, hi)| lo > hi || hi > top) {
            return Err(Error::InvalidParams(format!("cell range outside level {level}")));
        }
        Ok(Self::canonical(level, runs::normalize(runs)))
    }

    /// The cells whose mask bit is set; bit `j` of `mask` is cell `j`.
    pub fn from_mask_u64(level: u32, mask: u64) -> Result<Self> {
        if level > 6 {
            return Err(Error::InvalidParams("u64 masks cover levels up to 6".into()));
        }
        if level < 6 && mask >> (1u64 << level) != 0 {
            return Err(Error::InvalidParams(format!("mask has bits beyond level {level}")));
        }
        Self::from_cells(level, (0..64u64).filter(|j| mask >> j & 1 == 1))
    }

    pub fn from_cells(level: u32, cells: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::from_runs(level, cells.into_iter().map(|j| (j, j + 1)).collect())
    }

    /// The single dyadic interval `I_n^{j+1} = [j/2^n, (j+1)/2^n)`.
    pub fn cell(level: u32, j: u64) -> Result<Self> {
        Self::from_runs(level, vec![(j, j + 1)])
    }

    /// `[lo, hi)` for dyadic endpoints in `[0, 1]`.
    pub fn interval(lo: &DyadicRational, hi: &DyadicRational) -> Result<Self> {
        let level = lo.exponent().max(hi.exponent());
        let to_cell = |d: &DyadicRational| -> Result<u64> {
            if d.is_negative() || *d > DyadicRational::one() {
                return Err(Error::InvalidParams(format!("endpoint {d} outside [0,1]")));
            }
            let shifted = d.numerator() << (level - d.exponent());
            u64::try_from(shifted).map_err(|_| Error::InvalidParams("endpoint too deep".into()))
        };
        Self::from_runs(level, vec![(to_cell(lo)?, to_cell(hi)?)])
    }

    /// The `m`-th dyadic interval in the enumeration `I_m = I_n^k`,
    /// `m = 2^n + k - 1`.
    pub fn enumerated(m: u64) -> Result<Self> {
        let (level, pos) = enumeration_cell(m)?;
        Self::cell(level, pos)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn runs(&self) -> &[(u64, u64)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.level == 0 && self.runs == [(0, 1)]
    }

    /// Runs rescaled to a level at least as deep as `self.level`.
    pub fn runs_at(&self, level: u32) -> Vec<(u64, u64)> {
        debug_assert!(level >= self.level);
        let s = level - self.level;
        self.runs.iter().map(|&(lo, hi)| (lo << s, hi << s)).collect()
    }

    /// Number of cells at the canonical level.
    pub fn cell_count(&self) -> u64 {
        self.runs.iter().map(|(lo, hi)| hi - lo).sum()
    }

    /// Cell indices at the canonical level, ascending.
    pub fn cells(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs.iter().flat_map(|&(lo, hi)| lo..hi)
    }

    /// Whether cell `j` at `level` lies inside the set.
    pub fn contains_cell(&self, level: u32, j: u64) -> bool {
        let l = level.max(self.level);
        let s = l - level;
        runs::subset(&[(j << s, (j + 1) << s)], &self.runs_at(l))
    }

    pub fn contains_point(&self, x: &QuadScalar) -> bool {
        self.to_interval_set().contains_point(x)
    }

    pub fn measure(&self) -> DyadicRational {
        DyadicRational::new(self.cell_count(), self.level)
    }

    pub fn lebesgue(&self) -> QuadScalar {
        QuadScalar::from(&self.measure())
    }

    /// The set's maximal intervals with exact endpoints.
    pub fn intervals(&self) -> Vec<(DyadicRational, DyadicRational)> {
        self.runs
            .iter()
            .map(|&(lo, hi)| (DyadicRational::new(lo, self.level), DyadicRational::new(hi, self.level)))
            .collect()
    }

    /// Supremum of the set, `None` when empty.
    pub fn max_point(&self) -> Option<DyadicRational> {
        self.runs.last().map(|&(_, hi)| DyadicRational::new(hi, self.level))
    }

    pub fn to_interval_set(&self) -> IntervalSet {
        IntervalSet::from_normalized(
            self.intervals()
                .iter()
                .map(|(lo, hi)| (QuadScalar::from(lo), QuadScalar::from(hi)))
                .collect(),
        )
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
        let l = self.level.max(other.level);
        runs::subset(&self.runs_at(l), &other.runs_at(l))
    }

    pub fn disjoint(&self, other: &Self) -> bool {
        let l = self.level.max(other.level);
        runs::disjoint(&self.runs_at(l), &other.runs_at(l))
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let l = self.level.max(other.level);
        let out = runs::sweep(&self.runs_at(l), &other.runs_at(l), &0, &(1u64 << l), op);
        Self::canonical(l, out)
    }

    /// Coarsens a normalized run list to its minimal level.
    fn canonical(level: u32, runs: Vec<(u64, u64)>) -> Self {
        if runs.is_empty() {
            return Self::empty();
        }
        let tz = runs
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .filter(|&p| p != 0)
            .map(|p| p.trailing_zeros())
            .min()
            .unwrap_or(level)
            .min(level);
        Self { level: level - tz, runs: runs.into_iter().map(|(lo, hi)| (lo >> tz, hi >> tz)).collect() }
    }

    /// The dyadic interval of smallest enumeration index inside the set,
    /// as `(level, position)`.
    pub fn first_enumerated_subinterval(&self) -> Option<(u32, u64)> {
        (0..=self.level).find_map(|l| {
            let s = self.level - l;
            self.runs
                .iter()
                .find_map(|&(lo, hi)| {
                    let start = lo.div_ceil(1 << s);
                    ((start + 1) << s <= hi).then_some(start)
                })
                .map(|p| (l, p))
        })
    }

    /// Mask as a hexadecimal integer; bit `j` is cell `j`.
    pub fn mask_hex(&self) -> String {
        let mut words = vec![0u32; ((1u64 << self.level) as usize).div_ceil(32)];
        for j in self.cells() {
            words[(j / 32) as usize] |= 1 << (j % 32);
        }
        format!("{:x}", BigUint::new(words))
    }

    pub fn from_mask_hex(level: u32, hex: &str) -> Result<Self> {
        check_level(level)?;
        let v = BigUint::parse_bytes(hex.trim().as_bytes(), 16)
            .ok_or_else(|| Error::Parse(format!("bad hex mask {hex:?}")))?;
        if v.bits() > (1u64 << level) {
            return Err(Error::Parse(format!("mask has bits beyond level {level}")));
        }
        if v.is_zero() {
            return Ok(Self::empty());
        }
        let cells = (0..v.bits()).filter(|&j| v.bit(j));
        Self::from_cells(level, cells)
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > MAX_LEVEL {
        Err(Error::InvalidParams(format!("dyadic level {level} exceeds {MAX_LEVEL}")))
    } else {
        Ok(())
    }
}

/// `(level, position)` of the enumerated interval `I_m`, `m ≥ 1`.
pub fn enumeration_cell(m: u64) -> Result<(u32, u64)> {
    if m == 0 {
        return Err(Error::InvalidParams("enumeration starts at 1".into()));
    }
    let level = 63 - m.leading_zeros();
    Ok((level, m - (1 << level)))
}

/// Enumeration index `m = 2^level + position` of a dyadic interval.
pub fn enumeration_index(level: u32, pos: u64) -> u64 {
    (1u64 << level) + pos
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(level: u32, mask: u64) -> DyadicSet {
        DyadicSet::from_mask_u64(level, mask).unwrap()
    }

    #[test]
    fn meet_join_complement_examples() {
        assert_eq!(d(1, 0b01).meet(&d(2, 0b0101)), d(2, 0b0001));
        assert_eq!(d(1, 0b01).join(&d(1, 0b10)), DyadicSet::full());
        assert_eq!(d(0, 1).complement(), DyadicSet::empty());
        assert_eq!(d(2, 0b0101).complement(), d(2, 0b1010));
    }

    #[test]
    fn canonical_levels() {
        assert_eq!(d(3, 0b0000_1111), d(1, 0b01));
        assert_eq!(d(2, 0b1111), DyadicSet::full());
        assert_eq!(d(2, 0).level(), 0);
        assert_eq!(d(2, 0b0111).level(), 2);
    }

    #[test]
    fn order_and_measure() {
        assert!(DyadicSet::empty().leq(&d(1, 0b10)));
        assert!(d(2, 0b0001).leq(&d(1, 0b01)));
        assert!(!d(1, 0b01).leq(&d(1, 0b10)));
        assert_eq!(d(3, 0b1011_0101).measure(), DyadicRational::new(5, 3));
    }

    #[test]
    fn hex_round_trip() {
        let x = d(3, 0b0101_0101);
        assert_eq!(x.mask_hex(), "55");
        assert_eq!(DyadicSet::from_mask_hex(3, "55").unwrap(), x);
        assert_eq!(DyadicSet::full().mask_hex(), "1");
        assert_eq!(DyadicSet::empty().mask_hex(), "0");
        assert!(DyadicSet::from_mask_hex(1, "7").is_err());
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumeration_cell(1).unwrap(), (0, 0));
        assert_eq!(enumeration_cell(5).unwrap(), (2, 1));
        assert_eq!(enumeration_index(2, 1), 5);
        let z = DyadicSet::from_runs(3, vec![(3, 8)]).unwrap();
        // [3/8, 1) contains [1/2, 1) = I_3 first.
        assert_eq!(z.first_enumerated_subinterval(), Some((1, 1)));
        let z = d(3, 0b0011_0000);
        assert_eq!(z.first_enumerated_subinterval(), Some((2, 2)));
        assert_eq!(d(3, 0b0000_0110).first_enumerated_subinterval(), Some((3, 1)));
        assert_eq!(d(3, 0b0000_0100).first_enumerated_subinterval(), Some((3, 2)));
    }

    #[test]
    fn interval_constructor() {
        let x = DyadicSet::interval(&DyadicRational::zero(), &DyadicRational::new(3, 2)).unwrap();
        assert_eq!(x, d(2, 0b0111));
    }
}
