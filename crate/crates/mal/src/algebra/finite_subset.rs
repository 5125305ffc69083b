use crate::error::{Error, Result};
use num_bigint::BigUint;

/// A subset of the labeled point set `{0, .., size-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSubset {
    size: usize,
    words: Vec<u64>,
}

impl FiniteSubset {
    pub fn empty(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParams("universe must be nonempty".into()));
        }
        Ok(Self { size, words: vec![0; size.div_ceil(64)] })
    }

    pub fn full(size: usize) -> Result<Self> {
        Self::new(size, 0..size)
    }

    pub fn new(size: usize, points: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(size)?;
        for p in points {
            if p >= size {
                return Err(Error::InvalidParams(format!("point {p} outside universe of {size}")));
            }
            s.words[p / 64] |= 1 << (p % 64);
        }
        Ok(s)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.size && self.words[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&p| self.contains(p))
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & b)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        let mut out = Self { size: self.size, words: self.words.iter().map(|w| !w).collect() };
        out.clear_tail();
        out
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::IncompatibleAlgebra(format!(
                "finite universes of sizes {} and {}",
                self.size, other.size
            )));
        }
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { size: self.size, words })
    }

    fn clear_tail(&mut self) {
        let r = self.size % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn mask_hex(&self) -> String {
        let digits: Vec<u32> = self.words.iter().flat_map(|&w| [w as u32, (w >> 32) as u32]).collect();
        format!("{:x}", BigUint::new(digits))
    }

    pub fn from_mask_hex(size: usize, hex: &str) -> Result<Self> {
        let v = BigUint::parse_bytes(hex.trim().as_bytes(), 16)
            .ok_or_else(|| Error::Parse(format!("bad hex mask {hex:?}")))?;
        if v.bits() > size as u64 {
            return Err(Error::Parse(format!("mask has bits beyond universe of {size}")));
        }
        Self::new(size, (0..v.bits()).filter(|&j| v.bit(j)).map(|j| j as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ops() {
        let a = FiniteSubset::new(8, [0, 1, 2]).unwrap();
        let b = FiniteSubset::new(8, [2, 3]).unwrap();
        assert_eq!(a.meet(&b).unwrap(), FiniteSubset::new(8, [2]).unwrap());
        assert_eq!(a.join(&b).unwrap().count(), 4);
        assert_eq!(a.complement().points().collect::<Vec<_>>(), vec![3, 4, 5, 6, 7]);
        assert!(a.meet(&FiniteSubset::empty(9).unwrap()).is_err());
    }

    #[test]
    fn hex() {
        let a = FiniteSubset::new(70, [0, 3, 65]).unwrap();
        let h = a.mask_hex();
        assert_eq!(FiniteSubset::from_mask_hex(70, &h).unwrap(), a);
        assert_eq!(FiniteSubset::new(8, [0, 2]).unwrap().mask_hex(), "5");
    }
}
