//! The Haar system of a family: `h_1 = e`, `h_2 = r_1`, and for `n >= 2`,
//! `h_{2^{n-1}+k} = r_n` restricted to the depth-`(n-1)` particle whose
//! signs are `ε_{k,j} = 1 − 2 a_{k,j}`, `a_{k,j}` the digits of `k − 1`,
//! least significant first.

use super::{SignedFragment, StepElement};
use crate::algebra::{Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};
use crate::family::{family_measure, Family};
use crate::scalar::{serialize_rationals, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarIndex {
    /// `h_1 = e`.
    Constant,
    /// `h_2 = r_1`.
    First,
    /// `n >= 2`, `1 <= k <= 2^{n-1}`.
    Split { n: u32, k: u64 },
}

impl HaarIndex {
    pub fn from_linear(i: u64) -> Result<Self> {
        match i {
            0 => Err(Error::InvalidParams("Haar indices start at 1".into())),
            1 => Ok(Self::Constant),
            2 => Ok(Self::First),
            _ => {
                let n = (i - 1).ilog2() + 1;
                Ok(Self::Split { n, k: i - (1 << (n - 1)) })
            }
        }
    }

    pub fn linear(self) -> u64 {
        match self {
            Self::Constant => 1,
            Self::First => 2,
            Self::Split { n, k } => (1 << (n - 1)) + k,
        }
    }

    /// Number of leading generators the element depends on.
    pub fn order(self) -> usize {
        match self {
            Self::Constant => 0,
            Self::First => 1,
            Self::Split { n, .. } => n as usize,
        }
    }

    /// `ε_{k,1..n-1}` for split indices, empty otherwise.
    pub fn signs(self) -> Vec<Sign> {
        match self {
            Self::Split { n, k } => (0..n - 1)
                .map(|j| if (k - 1) >> j & 1 == 0 { Sign::Plus } else { Sign::Minus })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// `-log2` of the measure of the support.
    fn support_depth(self) -> usize {
        self.order().saturating_sub(1)
    }
}

/// `h_i` on the particle with the given signs (in generator order).
pub fn haar_on_particle(idx: HaarIndex, signs: &[Sign]) -> i8 {
    match idx {
        HaarIndex::Constant => 1,
        HaarIndex::First => signs[0].value(),
        HaarIndex::Split { n, .. } => {
            let n = n as usize;
            if signs[..n - 1] == idx.signs()[..] {
                signs[n - 1].value()
            } else {
                0
            }
        }
    }
}

pub fn haar_element(fam: &Family, idx: HaarIndex) -> Result<StepElement> {
    let gens = fam.prefix(idx.order())?;
    let unit = fam.unit().clone();
    match idx {
        HaarIndex::Constant => StepElement::constant(unit, Rational::one()),
        HaarIndex::First => {
            let r = &gens[0].element;
            Ok(SignedFragment::from_parts(unit.clone(), r.clone(), unit.difference(r)?)?.into_step())
        }
        HaarIndex::Split { n, .. } => {
            let n = n as usize;
            let idxs: Vec<u32> = gens[..n - 1].iter().map(|g| g.index).collect();
            let p = fam.particle(&SignVector::from_parts(&idxs, &idx.signs())?)?;
            let r = &gens[n - 1].element;
            Ok(SignedFragment::from_parts(unit, p.meet(r)?, p.difference(r)?)?.into_step())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HaarExpansion {
    pub depth: usize,
    /// `a_1 .. a_{2^depth}`.
    #[serde(serialize_with = "serialize_rationals")]
    pub coefficients: Vec<Rational>,
    /// `x − Σ a_i h_i`; zero exactly when `x` is measurable at this depth.
    pub residual: StepElement,
}

fn particle_signs(fam: &Family, depth: usize, sv: &SignVector) -> Result<Vec<Sign>> {
    fam.prefix(depth)?
        .iter()
        .map(|g| sv.sign_of(g.index).ok_or(Error::UnknownIndex(g.index)))
        .collect()
}

/// Values of `x` averaged over each depth-`depth` particle, with the signs
/// of the particle.
fn particle_means(x: &StepElement, fam: &Family, depth: usize) -> Result<Vec<(Vec<Sign>, Rational)>> {
    let cell = Rational::new(BigInt::one(), BigInt::one() << depth);
    let mut out = Vec::new();
    for (sv, p) in fam.partition(depth)? {
        if p.is_zero() {
            return Err(Error::FamilyDefect(format!("particle {sv} is zero")));
        }
        let v = match x.value_on(&p)? {
            Some(v) => v,
            None => {
                let mut acc = Rational::zero();
                for (a, frag) in x.terms() {
                    let piece = frag.meet(&p)?;
                    if !piece.is_zero() {
                        acc += a * family_measure(fam, &piece, fam.len())?.to_rational();
                    }
                }
                acc / &cell
            }
        };
        out.push((particle_signs(fam, depth, &sv)?, v));
    }
    Ok(out)
}

/// Coefficients `a_i = ∫ x h_i dμ / ∫ h_i² dμ` for `i <= 2^depth`, with μ
/// the dyadic measure of `fam`.
pub fn haar_expand(x: &StepElement, fam: &Family, depth: usize) -> Result<HaarExpansion> {
    if x.unit() != fam.unit() {
        return Err(Error::UnitMismatch);
    }
    budget::ensure(1u128 << (2 * depth.min(60)))?;
    let means = particle_means(x, fam, depth)?;
    let mut coefficients = Vec::with_capacity(1 << depth);
    for i in 1..=1u64 << depth {
        let idx = HaarIndex::from_linear(i)?;
        let mut acc = Rational::zero();
        for (signs, v) in &means {
            match haar_on_particle(idx, signs) {
                1 => acc += v,
                -1 => acc -= v,
                _ => {}
            }
        }
        // ∫ x h_i / μ(supp h_i) with every particle of measure 2^{-depth}.
        coefficients.push(acc / Rational::from_integer(BigInt::one() << (depth - idx.support_depth())));
    }
    let residual = x.sub(&haar_synthesis(fam, depth, &coefficients)?)?;
    Ok(HaarExpansion { depth, coefficients, residual })
}

/// `Σ a_i h_i` over the first `coefficients.len() <= 2^depth` Haar elements.
pub fn haar_synthesis(fam: &Family, depth: usize, coefficients: &[Rational]) -> Result<StepElement> {
    if coefficients.len() as u128 > 1u128 << depth {
        return Err(Error::InvalidParams(format!("{} coefficients exceed depth {depth}", coefficients.len())));
    }
    let idxs = (1..=coefficients.len() as u64).map(HaarIndex::from_linear).collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(1 << depth);
    for (sv, _) in fam.partition(depth)? {
        let signs = particle_signs(fam, depth, &sv)?;
        let mut v = Rational::zero();
        for (a, &idx) in coefficients.iter().zip(&idxs) {
            match haar_on_particle(idx, &signs) {
                1 => v += a,
                -1 => v -= a,
                _ => {}
            }
        }
        values.push(v);
    }
    StepElement::from_particle_values(fam, depth, &values)
}
