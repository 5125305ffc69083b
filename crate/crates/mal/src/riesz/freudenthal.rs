use super::StepElement;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::Rational;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use std::collections::BTreeMap;

fn ensure_nonnegative(x: &StepElement) -> Result<()> {
    if x.terms().iter().any(|(a, _)| a.is_negative()) {
        return Err(Error::NegativeInput);
    }
    Ok(())
}

/// `u_n = Σ (m/n)·[m/n <= x < (m+1)/n]`, so that `0 <= x − u_n <= e/n`.
pub fn freudenthal_approx(x: &StepElement, n: u64) -> Result<StepElement> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be positive".into()));
    }
    ensure_nonnegative(x)?;
    let n = Rational::from_integer(BigInt::from(n));
    x.map(|a| (a * &n).floor() / &n)
}

fn as_text<S: serde::Serializer>(m: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct BandSlice {
    #[serde(serialize_with = "as_text")]
    pub m: BigInt,
    /// The fragment where `m − 1 < x <= m`.
    pub unit: Element,
    pub slice: StepElement,
}

/// The nonempty slices `x_m` of `x >= 0`; they are disjoint and sum to `x`.
pub fn band_slices(x: &StepElement) -> Result<Vec<BandSlice>> {
    ensure_nonnegative(x)?;
    let mut groups: BTreeMap<BigInt, Element> = BTreeMap::new();
    for (a, frag) in x.terms() {
        let m = a.ceil().to_integer();
        let merged = match groups.remove(&m) {
            Some(g) => g.join(frag)?,
            None => frag.clone(),
        };
        groups.insert(m, merged);
    }
    groups
        .into_iter()
        .map(|(m, unit)| Ok(BandSlice { m, slice: x.restrict(&unit)?, unit }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DyadicSet;
    use crate::scalar::{int, rat};

    fn d(level: u32, mask: u64) -> Element {
        DyadicSet::from_mask_u64(level, mask).unwrap().into()
    }

    #[test]
    fn quarter_grid() {
        let e = d(0, 1);
        let x = StepElement::new(e.clone(), vec![(rat(1, 3), d(1, 0b01)), (rat(3, 4), d(1, 0b10))]).unwrap();
        let u = freudenthal_approx(&x, 4).unwrap();
        assert_eq!(u.terms(), &[(rat(1, 4), d(1, 0b01)), (rat(3, 4), d(1, 0b10))]);
        let err = x.sub(&u).unwrap();
        assert!(err.terms().iter().all(|(a, _)| *a >= int(0) && *a <= rat(1, 4)));
        assert_eq!(freudenthal_approx(&u, 4).unwrap(), u);
        let c = StepElement::constant(e.clone(), rat(7, 3)).unwrap();
        assert_eq!(freudenthal_approx(&c, 2).unwrap(), StepElement::constant(e, int(2)).unwrap());
    }

    #[test]
    fn slices() {
        let e = d(0, 1);
        let x = StepElement::new(e.clone(), vec![(rat(1, 2), d(1, 0b01)), (rat(3, 2), d(1, 0b10))]).unwrap();
        let s = band_slices(&x).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].m, BigInt::from(1));
        assert_eq!(s[1].slice, StepElement::new(e.clone(), vec![(rat(3, 2), d(1, 0b10))]).unwrap());
        assert!(band_slices(&StepElement::zero(e.clone())).unwrap().is_empty());
        assert!(matches!(band_slices(&x.neg()), Err(Error::NegativeInput)));
    }
}
