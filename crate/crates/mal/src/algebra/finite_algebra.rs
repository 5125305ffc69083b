use super::{Element, Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};

/// Hard cap on generators for an explicit atom list.
pub const MAX_GENERATORS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    /// Signs on generator positions `1..=n`.
    pub signs: SignVector,
    pub element: Element,
}

/// The finite subalgebra generated by a list of elements below a unit,
/// stored through its atoms.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    unit: Element,
    atoms: Vec<Atom>,
}

/// Atoms are the nonzero sign meets `⋂ θ_i g_i` taken relative to `unit`
/// (the ambient unit when `None`).
pub fn generate_subalgebra(generators: &[Element], unit: Option<&Element>) -> Result<FiniteAlgebra> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidParams("at least one generator is required".into()));
    };
    if generators.len() > MAX_GENERATORS {
        return Err(Error::BudgetExceeded { requested: 1u128 << generators.len(), cap: budget::cap() });
    }
    budget::ensure_pow2(generators.len())?;
    let unit = match unit {
        Some(u) => u.clone(),
        None => first.unit_like(),
    };
    let mut cells = vec![(SignVector::empty(), unit.clone())];
    for (pos, g) in generators.iter().enumerate() {
        let idx = pos as u32 + 1;
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (sv, cell) in cells {
            let plus = cell.meet(g)?;
            let minus = cell.difference(g)?;
            if !plus.is_zero() {
                next.push((sv.with(idx, Sign::Plus)?, plus));
            }
            if !minus.is_zero() {
                next.push((sv.with(idx, Sign::Minus)?, minus));
            }
        }
        cells = next;
    }
    let atoms = cells.into_iter().map(|(signs, element)| Atom { signs, element }).collect();
    Ok(FiniteAlgebra { unit, atoms })
}

impl FiniteAlgebra {
    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Whether `x` is a union of atoms.
    pub fn contains(&self, x: &Element) -> Result<bool> {
        if !x.leq(&self.unit)? {
            return Ok(false);
        }
        for a in &self.atoms {
            if !(a.element.leq(x)? || a.element.disjoint(x)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether a member `a` is an atom of the algebra.
    pub fn is_atom(&self, a: &Element) -> Result<bool> {
        if !self.contains(a)? {
            return Err(Error::NotInAlgebra);
        }
        let mut below = 0;
        for atom in &self.atoms {
            if atom.element.leq(a)? {
                below += 1;
            }
        }
        Ok(below == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DyadicSet;

    fn d(level: u32, mask: u64) -> Element {
        DyadicSet::from_mask_u64(level, mask).unwrap().into()
    }

    #[test]
    fn usual_pair_gives_quarters() {
        let alg = generate_subalgebra(&[d(1, 0b01), d(2, 0b0101)], None).unwrap();
        let atoms: Vec<Element> = alg.atoms().iter().map(|a| a.element.clone()).collect();
        assert_eq!(atoms, vec![d(2, 0b0001), d(2, 0b0010), d(2, 0b0100), d(2, 0b1000)]);
        assert!(alg.is_atom(&d(2, 0b0100)).unwrap());
        assert!(!alg.is_atom(&d(2, 0b0101)).unwrap());
        assert_eq!(alg.is_atom(&d(3, 0b1)), Err(Error::NotInAlgebra));
    }

    #[test]
    fn unit_generator_gives_one_atom() {
        let alg = generate_subalgebra(&[d(0, 1)], None).unwrap();
        assert_eq!(alg.atoms().len(), 1);
    }

    #[test]
    fn disjoint_halves_generators() {
        // [0,1/4) and [1/2,3/4): the (+,+) meet is empty, three atoms remain.
        let alg = generate_subalgebra(&[d(2, 0b0001), d(2, 0b0100)], None).unwrap();
        assert_eq!(alg.atoms().len(), 3);
        assert!(alg.atoms().iter().all(|a| a.signs.sign_string() != "++"));
    }

    #[test]
    fn too_many_generators() {
        let gens = vec![d(1, 1); 21];
        assert!(matches!(generate_subalgebra(&gens, None), Err(Error::BudgetExceeded { .. })));
    }
}
