//! Concrete Boolean algebras with exact operations.
//!
//! [`Element`] is the common currency: a dyadic-union set, an interval set
//! with endpoints in ℚ(√2), a subset of a finite point set, a pair in a
//! direct sum, or an element of the free algebra. Binary operations require
//! both operands to live in the same algebra.

mod dyadic_set;
mod finite_algebra;
mod finite_subset;
mod free;
mod interval_set;
pub(crate) mod runs;
mod sign;

pub use dyadic_set::{enumeration_cell, enumeration_index, DyadicSet, MAX_LEVEL};
pub use finite_algebra::{generate_subalgebra, Atom, FiniteAlgebra, MAX_GENERATORS};
pub use finite_subset::FiniteSubset;
pub use free::{canonical_expand, FreeElement, MAX_FREE_INDICES};
pub use interval_set::IntervalSet;
pub use sign::{Sign, SignVector};

use crate::error::{Error, Result};
use crate::scalar::QuadScalar;
use serde::{Deserialize, Serialize};

/// Direct-sum element; operations act componentwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairElement {
    pub left: Box<Element>,
    pub right: Box<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Repr", into = "Repr")]
pub enum Element {
    Dyadic(DyadicSet),
    Interval(IntervalSet),
    Finite(FiniteSubset),
    Pair(PairElement),
    Free(FreeElement),
}

impl Element {
    pub fn pair(left: Element, right: Element) -> Self {
        Element::Pair(PairElement { left: Box::new(left), right: Box::new(right) })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Element::Dyadic(_) => "dyadic",
            Element::Interval(_) => "interval",
            Element::Finite(_) => "finite",
            Element::Pair(_) => "pair",
            Element::Free(_) => "free",
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Dyadic(x) => x.is_empty(),
            Element::Interval(x) => x.is_empty(),
            Element::Finite(x) => x.is_empty(),
            Element::Pair(p) => p.left.is_zero() && p.right.is_zero(),
            Element::Free(x) => x.is_zero(),
        }
    }

    /// The zero of the algebra `self` lives in.
    pub fn zero_like(&self) -> Self {
        match self {
            Element::Dyadic(_) => Element::Dyadic(DyadicSet::empty()),
            Element::Interval(_) => Element::Interval(IntervalSet::empty()),
            Element::Finite(x) => Element::Finite(FiniteSubset::empty(x.size()).expect("nonempty universe")),
            Element::Pair(p) => Element::pair(p.left.zero_like(), p.right.zero_like()),
            Element::Free(_) => Element::Free(FreeElement::zero()),
        }
    }

    /// The unit of the algebra `self` lives in.
    pub fn unit_like(&self) -> Self {
        match self {
            Element::Dyadic(_) => Element::Dyadic(DyadicSet::full()),
            Element::Interval(_) => Element::Interval(IntervalSet::full()),
            Element::Finite(x) => Element::Finite(FiniteSubset::full(x.size()).expect("nonempty universe")),
            Element::Pair(p) => Element::pair(p.left.unit_like(), p.right.unit_like()),
            Element::Free(_) => Element::Free(FreeElement::unit()),
        }
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.binary(other, Op::Meet)
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.binary(other, Op::Join)
    }

    /// `self ∖ other`, the complement of `other` relative to `self`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.binary(other, Op::Difference)
    }

    pub fn complement(&self) -> Result<Self> {
        Ok(match self {
            Element::Dyadic(x) => Element::Dyadic(x.complement()),
            Element::Interval(x) => Element::Interval(x.complement()),
            Element::Finite(x) => Element::Finite(x.complement()),
            Element::Pair(p) => Element::pair(p.left.complement()?, p.right.complement()?),
            Element::Free(x) => Element::Free(x.complement()?),
        })
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (Element::Dyadic(a), Element::Dyadic(b)) => Ok(a.leq(b)),
            (Element::Interval(a), Element::Interval(b)) => Ok(a.leq(b)),
            (Element::Finite(a), Element::Finite(b)) => a.leq(b),
            (Element::Pair(a), Element::Pair(b)) => Ok(a.left.leq(&b.left)? && a.right.leq(&b.right)?),
            (Element::Free(a), Element::Free(b)) => a.leq(b),
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn disjoint(&self, other: &Self) -> Result<bool> {
        match (self, other) {
            (Element::Dyadic(a), Element::Dyadic(b)) => Ok(a.disjoint(b)),
            (Element::Interval(a), Element::Interval(b)) => Ok(a.disjoint(b)),
            _ => Ok(self.meet(other)?.is_zero()),
        }
    }

    /// Exact Lebesgue measure of a dyadic or interval set.
    pub fn lebesgue(&self) -> Result<QuadScalar> {
        match self {
            Element::Dyadic(x) => Ok(x.lebesgue()),
            Element::Interval(x) => Ok(x.measure()),
            other => Err(Error::NoMeasure(other.kind())),
        }
    }

    /// Membership of a point of `[0, 1)`, for sets on the unit interval.
    pub fn contains_point(&self, x: &QuadScalar) -> Option<bool> {
        match self {
            Element::Dyadic(s) => Some(s.contains_point(x)),
            Element::Interval(s) => Some(s.contains_point(x)),
            _ => None,
        }
    }

    fn binary(&self, other: &Self, op: Op) -> Result<Self> {
        Ok(match (self, other) {
            (Element::Dyadic(a), Element::Dyadic(b)) => Element::Dyadic(match op {
                Op::Meet => a.meet(b),
                Op::Join => a.join(b),
                Op::Difference => a.difference(b),
            }),
            (Element::Interval(a), Element::Interval(b)) => Element::Interval(match op {
                Op::Meet => a.meet(b),
                Op::Join => a.join(b),
                Op::Difference => a.difference(b),
            }),
            (Element::Finite(a), Element::Finite(b)) => Element::Finite(match op {
                Op::Meet => a.meet(b)?,
                Op::Join => a.join(b)?,
                Op::Difference => a.difference(b)?,
            }),
            (Element::Pair(a), Element::Pair(b)) => {
                Element::pair(a.left.binary(&b.left, op)?, a.right.binary(&b.right, op)?)
            }
            (Element::Free(a), Element::Free(b)) => Element::Free(match op {
                Op::Meet => a.meet(b)?,
                Op::Join => a.join(b)?,
                Op::Difference => a.difference(b)?,
            }),
            _ => return Err(mismatch(self, other)),
        })
    }
}

#[derive(Clone, Copy)]
enum Op {
    Meet,
    Join,
    Difference,
}

fn mismatch(a: &Element, b: &Element) -> Error {
    Error::IncompatibleAlgebra(format!("{} vs {}", a.kind(), b.kind()))
}

pub fn meet(x: &Element, y: &Element) -> Result<Element> {
    x.meet(y)
}

pub fn join(x: &Element, y: &Element) -> Result<Element> {
    x.join(y)
}

pub fn complement(x: &Element) -> Result<Element> {
    x.complement()
}

pub fn leq(x: &Element, y: &Element) -> Result<bool> {
    x.leq(y)
}

pub fn lebesgue(x: &Element) -> Result<QuadScalar> {
    x.lebesgue()
}

/// Join of a list of elements; `None` for an empty list.
pub fn join_all<'a>(items: impl IntoIterator<Item = &'a Element>) -> Result<Option<Element>> {
    let mut acc: Option<Element> = None;
    for x in items {
        acc = Some(match acc {
            None => x.clone(),
            Some(a) => a.join(x)?,
        });
    }
    Ok(acc)
}

impl From<DyadicSet> for Element {
    fn from(x: DyadicSet) -> Self {
        Element::Dyadic(x)
    }
}

impl From<IntervalSet> for Element {
    fn from(x: IntervalSet) -> Self {
        Element::Interval(x)
    }
}

impl From<FiniteSubset> for Element {
    fn from(x: FiniteSubset) -> Self {
        Element::Finite(x)
    }
}

impl From<FreeElement> for Element {
    fn from(x: FreeElement) -> Self {
        Element::Free(x)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Repr {
    Dyadic { level: u32, mask: String },
    Interval { ivals: Vec<(QuadScalar, QuadScalar)> },
    Finite { size: usize, mask: String },
    Pair { left: Box<Element>, right: Box<Element> },
    Free { indices: Vec<u32>, rows: Vec<String> },
}

impl From<Element> for Repr {
    fn from(e: Element) -> Self {
        match e {
            Element::Dyadic(x) => Repr::Dyadic { level: x.level(), mask: x.mask_hex() },
            Element::Interval(x) => Repr::Interval { ivals: x.intervals().to_vec() },
            Element::Finite(x) => Repr::Finite { size: x.size(), mask: x.mask_hex() },
            Element::Pair(p) => Repr::Pair { left: p.left, right: p.right },
            Element::Free(x) => Repr::Free {
                indices: x.indices().to_vec(),
                rows: x.rows().map(|r| r.sign_string()).collect(),
            },
        }
    }
}

impl TryFrom<Repr> for Element {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Self> {
        Ok(match r {
            Repr::Dyadic { level, mask } => Element::Dyadic(DyadicSet::from_mask_hex(level, &mask)?),
            Repr::Interval { ivals } => Element::Interval(IntervalSet::new(ivals)?),
            Repr::Finite { size, mask } => Element::Finite(FiniteSubset::from_mask_hex(size, &mask)?),
            Repr::Pair { left, right } => Element::Pair(PairElement { left, right }),
            Repr::Free { indices, rows } => {
                let rows: Vec<SignVector> =
                    rows.iter().map(|s| SignVector::parse(&indices, s)).collect::<Result<_>>()?;
                Element::Free(FreeElement::from_sign_vectors(&indices, &rows)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{alpha, rat};

    fn d(level: u32, mask: u64) -> Element {
        DyadicSet::from_mask_u64(level, mask).unwrap().into()
    }

    #[test]
    fn variant_mismatch_is_an_error() {
        let a = d(1, 1);
        let b: Element = IntervalSet::full().into();
        assert!(matches!(a.meet(&b), Err(Error::IncompatibleAlgebra(_))));
        assert!(a.leq(&b).is_err());
    }

    #[test]
    fn lebesgue_examples() {
        assert_eq!(d(3, 0b1_1111).lebesgue().unwrap(), QuadScalar::from(rat(5, 8)));
        let x: Element = IntervalSet::interval(QuadScalar::zero(), alpha()).unwrap().into();
        assert_eq!(x.lebesgue().unwrap(), alpha());
        assert!(d(0, 0).lebesgue().unwrap().is_zero());
        let f: Element = FiniteSubset::full(3).unwrap().into();
        assert_eq!(f.lebesgue(), Err(Error::NoMeasure("finite")));
    }

    #[test]
    fn pair_is_componentwise() {
        let f = |pts: &[usize]| -> Element { FiniteSubset::new(3, pts.iter().copied()).unwrap().into() };
        let x = Element::pair(d(1, 0b01), f(&[0]));
        let y = Element::pair(d(1, 0b11), f(&[0, 2]));
        assert!(x.leq(&y).unwrap());
        assert_eq!(x.complement().unwrap(), Element::pair(d(1, 0b10), f(&[1, 2])));
        assert_eq!(x.zero_like(), Element::pair(d(0, 0), f(&[])));
    }

    #[test]
    fn json_round_trip() {
        let items = vec![
            d(3, 0b0101_0101),
            IntervalSet::new(vec![(QuadScalar::zero(), alpha())]).unwrap().into(),
            FiniteSubset::new(8, [1, 7]).unwrap().into(),
            Element::pair(d(1, 1), FiniteSubset::new(2, [1]).unwrap().into()),
            FreeElement::from_sign_vectors(&[1, 3], &[SignVector::parse(&[1, 3], "+-").unwrap()])
                .unwrap()
                .into(),
        ];
        for x in items {
            let s = serde_json::to_string(&x).unwrap();
            let back: Element = serde_json::from_str(&s).unwrap();
            assert_eq!(back, x, "{s}");
        }
        let s = serde_json::to_string(&d(3, 0b0101_0101)).unwrap();
        assert_eq!(s, r#"{"kind":"dyadic","level":3,"mask":"55"}"#);
        let s = serde_json::to_string(&Element::from(IntervalSet::interval(QuadScalar::zero(), alpha()).unwrap()))
            .unwrap();
        assert_eq!(s, r#"{"kind":"interval","ivals":[["0","0 + 1/2*sqrt2"]]}"#);
    }
}
