//! The dyadic measure, expansions over particles, transport and gluing.

use super::{Family, Generator};
use crate::algebra::{canonical_expand, Element, FreeElement, Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};
use crate::scalar::DyadicRational;

/// Splits `x` into the maximal particles (on prefixes of at most
/// `max_depth` generators) that it contains. Fails when `x` is not a union
/// of such particles, or when a zero particle shows the family is not
/// pre-Rademacher on the explored part.
pub fn decompose(fam: &Family, x: &Element, max_depth: usize) -> Result<Vec<SignVector>> {
    let max_depth = max_depth.min(fam.len());
    if !x.leq(fam.unit())? {
        return Err(Error::NotInAlgebra);
    }
    let gens = fam.prefix(max_depth)?;
    let cap = budget::cap();
    let mut visited: u64 = 0;
    let mut out = Vec::new();
    let mut stack = vec![(SignVector::empty(), fam.unit().clone())];
    while let Some((sv, cell)) = stack.pop() {
        visited += 1;
        if visited > cap {
            return Err(Error::BudgetExceeded { requested: visited as u128, cap });
        }
        if cell.disjoint(x)? {
            continue;
        }
        if cell.leq(x)? {
            out.push(sv);
            continue;
        }
        let depth = sv.len();
        if depth == max_depth {
            return Err(Error::NotMeasurable(max_depth));
        }
        let g: &Generator = &gens[depth];
        let plus = cell.meet(&g.element)?;
        let minus = cell.difference(&g.element)?;
        for (s, part) in [(Sign::Plus, &plus), (Sign::Minus, &minus)] {
            if part.is_zero() {
                let w = sv.with(g.index, s)?;
                return Err(Error::FamilyDefect(format!("zero particle {w}")));
            }
        }
        stack.push((sv.with(g.index, Sign::Minus)?, minus));
        stack.push((sv.with(g.index, Sign::Plus)?, plus));
    }
    Ok(out)
}

/// The dyadic measure `μ(x)`: every depth-`n` particle weighs `2^{-n}`.
pub fn family_measure(fam: &Family, x: &Element, max_depth: usize) -> Result<DyadicRational> {
    Ok(decompose(fam, x, max_depth)?.iter().map(|sv| DyadicRational::pow2_inv(sv.len() as u32)).sum())
}

/// The free-algebra preimage of `x`: the rows of the particles composing it.
pub fn express(fam: &Family, x: &Element, max_depth: usize) -> Result<FreeElement> {
    canonical_expand(&decompose(fam, x, max_depth)?)
}

/// Evaluates a free element on the family: `⊔_rows ⋂ θ_j r_j`.
pub fn realize(fam: &Family, x: &FreeElement) -> Result<Element> {
    let mut acc = fam.unit().zero_like();
    for row in x.rows() {
        acc = acc.join(&fam.particle(&row)?)?;
    }
    Ok(acc)
}

/// Reinterprets the rows of `x` over the generators of `fam_b`.
pub fn transport(fam_a: &Family, fam_b: &Family, x: &FreeElement) -> Result<FreeElement> {
    let mut a = fam_a.indices();
    let mut b = fam_b.indices();
    a.sort();
    b.sort();
    if a != b || x.indices().iter().any(|i| a.binary_search(i).is_err()) {
        return Err(Error::IndexSetMismatch);
    }
    Ok(x.clone())
}

/// `φ(x)` for a concrete element `x` of the algebra generated by `fam_a`.
pub fn transport_element(fam_a: &Family, fam_b: &Family, x: &Element, max_depth: usize) -> Result<Element> {
    realize(fam_b, &transport(fam_a, fam_b, &express(fam_a, x, max_depth)?)?)
}

/// Glues a family on `e'` and a family on `e''` with the same indices into
/// a family on `e' ⊔ e''`: `r_i = r'_i ⊔ r''_i`, plus one more generator
/// `e'` with the next free index.
pub fn glue(fam_a: &Family, fam_b: &Family) -> Result<Family> {
    let (ea, eb) = (fam_a.unit(), fam_b.unit());
    if !ea.disjoint(eb)? {
        return Err(Error::NonDisjointUnits);
    }
    if fam_a.indices() != fam_b.indices() {
        return Err(Error::IndexSetMismatch);
    }
    let mut generators = Vec::with_capacity(fam_a.len() + 1);
    for (ga, gb) in fam_a.generators().iter().zip(fam_b.generators()) {
        generators.push(Generator { index: ga.index, element: ga.element.join(&gb.element)? });
    }
    let extra = fam_a.indices().into_iter().max().map_or(1, |m| m + 1);
    generators.push(Generator { index: extra, element: ea.clone() });
    Family::new(format!("glue({}, {})", fam_a.name(), fam_b.name()), generators, Some(ea.join(eb)?))
}
