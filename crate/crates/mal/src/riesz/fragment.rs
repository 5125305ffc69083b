use super::StepElement;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::scalar::Rational;
use num_traits::{One, Signed};
use serde::Serialize;

/// A step element with coefficients in `{−1, +1}`; `|x|` is a fragment of
/// the unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SignedFragment(StepElement);

impl SignedFragment {
    pub fn new(step: StepElement) -> Result<Self> {
        if step.terms().iter().any(|(a, _)| a.abs() != Rational::one()) {
            return Err(Error::InvalidParams("signed fragments take values in {-1, +1}".into()));
        }
        Ok(Self(step))
    }

    /// `+1` on `plus`, `−1` on `minus`.
    pub fn from_parts(unit: Element, plus: Element, minus: Element) -> Result<Self> {
        let one = Rational::one();
        Self::new(StepElement::new(unit, vec![(one.clone(), plus), (-one, minus)])?)
    }

    /// `e` itself, the identity of the group.
    pub fn identity(unit: Element) -> Result<Self> {
        let zero = unit.zero_like();
        Self::from_parts(unit.clone(), unit, zero)
    }

    fn part(&self, sign: i64) -> Element {
        let want = Rational::from_integer(sign.into());
        self.0.terms().iter().find(|(a, _)| *a == want).map_or_else(|| self.0.unit().zero_like(), |(_, x)| x.clone())
    }

    pub fn plus(&self) -> Element {
        self.part(1)
    }

    pub fn minus(&self) -> Element {
        self.part(-1)
    }

    pub fn unit(&self) -> &Element {
        self.0.unit()
    }

    pub fn support(&self) -> Result<Element> {
        self.0.support()
    }

    pub fn as_step(&self) -> &StepElement {
        &self.0
    }

    pub fn into_step(self) -> StepElement {
        self.0
    }
}

/// `x·y = x⁺∧y⁺ + x⁻∧y⁻ − x⁺∧y⁻ − x⁻∧y⁺`.
pub fn fragment_product(x: &SignedFragment, y: &SignedFragment) -> Result<SignedFragment> {
    if x.unit() != y.unit() {
        return Err(Error::UnitMismatch);
    }
    let (xp, xm, yp, ym) = (x.plus(), x.minus(), y.plus(), y.minus());
    let plus = xp.meet(&yp)?.join(&xm.meet(&ym)?)?;
    let minus = xp.meet(&ym)?.join(&xm.meet(&yp)?)?;
    SignedFragment::from_parts(x.unit().clone(), plus, minus)
}

/// `r_i = 2 r̂_i − e` for every generator of `fam`.
pub fn rademacher_system(e: &Element, fam: &Family) -> Result<Vec<SignedFragment>> {
    fam.generators()
        .iter()
        .map(|g| {
            if !g.element.leq(e)? {
                return Err(Error::InvalidParams(format!("generator {} is not below e", g.index)));
            }
            SignedFragment::from_parts(e.clone(), g.element.clone(), e.difference(&g.element)?)
        })
        .collect()
}
