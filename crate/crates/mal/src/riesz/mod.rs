//! Step elements of the Riesz space over a unit `e`: finite disjoint sums
//! `Σ a_k x_k` of fragments of `e` with rational coefficients.

mod fragment;
mod freudenthal;
mod haar;
mod lazy;

pub use fragment::{fragment_product, rademacher_system, SignedFragment};
pub use freudenthal::{band_slices, freudenthal_approx, BandSlice};
pub use haar::{haar_element, haar_expand, haar_on_particle, haar_synthesis, HaarExpansion, HaarIndex};
pub use lazy::LazySimple;

use crate::algebra::{DyadicSet, Element};
use crate::budget;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::scalar::{parse_rational, Rational};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A canonical step element: coefficients distinct and nonzero, one fragment
/// per coefficient, sorted by coefficient. Equality is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepElement {
    unit: Element,
    terms: Vec<(Rational, Element)>,
}

impl StepElement {
    /// Validates that the fragments are pairwise disjoint and below `unit`.
    pub fn new(unit: Element, terms: Vec<(Rational, Element)>) -> Result<Self> {
        for (i, (_, x)) in terms.iter().enumerate() {
            if !x.leq(&unit)? {
                return Err(Error::InvalidParams("fragment is not below the unit".into()));
            }
            for (_, y) in &terms[i + 1..] {
                if !x.disjoint(y)? {
                    return Err(Error::InvalidParams("fragments overlap".into()));
                }
            }
        }
        Self::canonical(unit, terms)
    }

    fn canonical(unit: Element, terms: Vec<(Rational, Element)>) -> Result<Self> {
        let mut by_coeff: BTreeMap<Rational, Element> = BTreeMap::new();
        for (a, x) in terms {
            if a.is_zero() || x.is_zero() {
                continue;
            }
            let merged = match by_coeff.remove(&a) {
                Some(y) => y.join(&x)?,
                None => x,
            };
            by_coeff.insert(a, merged);
        }
        Ok(Self { unit, terms: by_coeff.into_iter().collect() })
    }

    pub fn zero(unit: Element) -> Self {
        Self { unit, terms: Vec::new() }
    }

    pub fn constant(unit: Element, c: Rational) -> Result<Self> {
        let u = unit.clone();
        Self::canonical(unit, vec![(c, u)])
    }

    /// The 0/1 indicator of `fragment`.
    pub fn indicator(unit: Element, fragment: Element) -> Result<Self> {
        Self::new(unit, vec![(Rational::from_integer(1.into()), fragment)])
    }

    /// The element taking `values[s]` on the `s`-th depth-`depth` particle.
    pub fn from_particle_values(fam: &Family, depth: usize, values: &[Rational]) -> Result<Self> {
        let parts = fam.partition(depth)?;
        if parts.len() != values.len() {
            return Err(Error::InvalidParams(format!("{} values for {} particles", values.len(), parts.len())));
        }
        let terms = values.iter().cloned().zip(parts.into_iter().map(|(_, p)| p)).collect();
        Self::canonical(fam.unit().clone(), terms)
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn terms(&self) -> &[(Rational, Element)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Join of the fragments carrying nonzero coefficients.
    pub fn support(&self) -> Result<Element> {
        self.terms.iter().try_fold(self.unit.zero_like(), |acc, (_, x)| acc.join(x))
    }

    /// Terms plus the zero part `e ∖ support`, when nonzero.
    fn pieces(&self) -> Result<Vec<(Rational, Element)>> {
        let mut out = self.terms.clone();
        let rest = self.unit.difference(&self.support()?)?;
        if !rest.is_zero() {
            out.push((Rational::zero(), rest));
        }
        Ok(out)
    }

    /// Pointwise `f` on the common refinement of `self` and `other`.
    pub fn combine(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if self.unit != other.unit {
            return Err(Error::UnitMismatch);
        }
        let (xs, ys) = (self.pieces()?, other.pieces()?);
        budget::ensure(xs.len() as u128 * ys.len() as u128)?;
        let mut terms = Vec::new();
        for (a, x) in &xs {
            for (b, y) in &ys {
                let p = x.meet(y)?;
                if !p.is_zero() {
                    terms.push((f(a, b), p));
                }
            }
        }
        Self::canonical(self.unit.clone(), terms)
    }

    /// Pointwise `f` applied to every value, including the zero part.
    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Result<Self> {
        let terms = self.pieces()?.into_iter().map(|(a, x)| (f(&a), x)).collect();
        Self::canonical(self.unit.clone(), terms)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        self.map(|a| a * c)
    }

    pub fn neg(&self) -> Self {
        Self { unit: self.unit.clone(), terms: self.terms.iter().rev().map(|(a, x)| (-a, x.clone())).collect() }
    }

    /// `x ∧ y`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.min(b).clone())
    }

    /// `x ∨ y`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a.max(b).clone())
    }

    pub fn abs(&self) -> Result<Self> {
        self.map(|a| a.abs())
    }

    pub fn positive_part(&self) -> Result<Self> {
        self.map(|a| a.max(&Rational::zero()).clone())
    }

    pub fn negative_part(&self) -> Result<Self> {
        self.map(|a| (-a).max(Rational::zero()))
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        Ok(self.sub(other)?.terms.iter().all(|(a, _)| !a.is_positive()))
    }

    /// Restriction to `fragment`, zero elsewhere.
    pub fn restrict(&self, fragment: &Element) -> Result<Self> {
        let terms = self.terms.iter().map(|(a, x)| Ok((a.clone(), x.meet(fragment)?))).collect::<Result<_>>()?;
        Self::canonical(self.unit.clone(), terms)
    }

    pub fn max_abs(&self) -> Rational {
        self.terms.iter().map(|(a, _)| a.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// The value on `p` when `x` is constant there.
    pub fn value_on(&self, p: &Element) -> Result<Option<Rational>> {
        let mut hit = false;
        for (a, x) in &self.terms {
            if p.leq(x)? {
                return Ok(Some(a.clone()));
            }
            hit |= !p.disjoint(x)?;
        }
        Ok(if hit { None } else { Some(Rational::zero()) })
    }

    /// `cell_lo,cell_hi,value` rows for the dyadic cells of `level` below the
    /// unit.
    pub fn to_csv(&self, level: u32) -> Result<String> {
        let Element::Dyadic(unit) = &self.unit else {
            return Err(Error::IncompatibleAlgebra("CSV needs a dyadic unit".into()));
        };
        budget::ensure_pow2(level as usize)?;
        let mut out = String::from("cell_lo,cell_hi,value\n");
        for j in 0..1u64 << level {
            let cell = DyadicSet::cell(level, j)?;
            if !cell.leq(unit) {
                continue;
            }
            let v = self.value_on(&cell.clone().into())?.ok_or(Error::NotMeasurable(level as usize))?;
            let (lo, hi) = &cell.intervals()[0];
            out.push_str(&format!("{},{},{}\n", lo.to_rational(), hi.to_rational(), v));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRepr {
    unit: Element,
    terms: Vec<(String, Element)>,
}

impl Serialize for StepElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepRepr {
            unit: self.unit.clone(),
            terms: self.terms.iter().map(|(a, x)| (a.to_string(), x.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = StepRepr::deserialize(d)?;
        let terms = repr
            .terms
            .into_iter()
            .map(|(a, x)| Ok((parse_rational(&a)?, x)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        StepElement::new(repr.unit, terms).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn d(level: u32, mask: u64) -> Element {
        DyadicSet::from_mask_u64(level, mask).unwrap().into()
    }

    fn e() -> Element {
        DyadicSet::full().into()
    }

    #[test]
    fn add_on_refinement() {
        let x = StepElement::new(e(), vec![(int(2), d(1, 0b01))]).unwrap();
        let y = StepElement::new(e(), vec![(int(3), d(2, 0b0001))]).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.terms(), &[(int(2), d(2, 0b0010)), (int(5), d(2, 0b0001))]);
    }

    #[test]
    fn lattice_identities() {
        let x = StepElement::new(e(), vec![(rat(1, 2), d(2, 0b0011)), (int(-1), d(2, 0b1000))]).unwrap();
        let y = StepElement::new(e(), vec![(int(1), d(2, 0b0110))]).unwrap();
        assert_eq!(x.meet(&x).unwrap(), x);
        let lhs = x.join(&y).unwrap().add(&x.meet(&y).unwrap()).unwrap();
        assert_eq!(lhs, x.add(&y).unwrap());
        assert_eq!(x.abs().unwrap(), x.join(&x.neg()).unwrap());
        assert!(x.meet(&y).unwrap().leq(&x).unwrap());
    }

    #[test]
    fn rejects_overlap_and_mismatch() {
        assert!(StepElement::new(e(), vec![(int(1), d(1, 1)), (int(2), d(2, 1))]).is_err());
        let other = StepElement::zero(d(1, 1));
        assert!(matches!(StepElement::zero(e()).add(&other), Err(Error::UnitMismatch)));
    }

    #[test]
    fn json_and_csv() {
        let x = StepElement::new(e(), vec![(rat(3, 2), d(1, 0b01))]).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"{"unit":{"kind":"dyadic","level":0,"mask":"1"},"terms":[["3/2",{"kind":"dyadic","level":1,"mask":"1"}]]}"#
        );
        assert_eq!(serde_json::from_str::<StepElement>(&json).unwrap(), x);
        assert_eq!(x.to_csv(1).unwrap(), "cell_lo,cell_hi,value\n0,1/2,3/2\n1/2,1,0\n");
    }
}
