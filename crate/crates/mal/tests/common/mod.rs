//! Shared generators and oracles for the integration tests. The oracles
//! work on raw cell tables and never call the measure code under test.

#![allow(dead_code)]

use mal::algebra::{DyadicSet, Element};
use mal::family::{example_family, ExampleParams, Family};
use mal::riesz::StepElement;
use mal::scalar::{rat, Rational};
use num_bigint::BigInt;
use rand::Rng;
use std::collections::BTreeMap;

pub fn usual(n: usize) -> Family {
    example_family("usual", &ExampleParams::with_n(n)).unwrap()
}

pub fn full() -> Element {
    DyadicSet::full().into()
}

pub fn cell(level: u32, j: u64) -> DyadicSet {
    DyadicSet::cell(level, j).unwrap()
}

pub fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(1) << n)
}

/// The step function taking `values[j]` on the `j`-th cell of level `level`.
pub fn step_from_cells(level: u32, values: &[Rational]) -> StepElement {
    assert_eq!(values.len() as u64, 1u64 << level);
    let mut groups: BTreeMap<Rational, Vec<u64>> = BTreeMap::new();
    for (j, v) in values.iter().enumerate() {
        groups.entry(v.clone()).or_default().push(j as u64);
    }
    let terms = groups
        .into_iter()
        .map(|(v, cells)| (v, DyadicSet::from_cells(level, cells).unwrap().into()))
        .collect();
    StepElement::new(full(), terms).unwrap()
}

/// Lebesgue integral of a cell table: the plain average.
pub fn lebesgue_of_cells(values: &[Rational]) -> Rational {
    let sum: Rational = values.iter().sum();
    sum / Rational::from_integer(BigInt::from(values.len()))
}

/// Small rationals `p/q` with `|p| <= 8` and `q` in `{1, 2, 3, 4}`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-8..=8), rng.gen_range(1..=4))
}

pub fn random_cells(rng: &mut impl Rng, level: u32, nonnegative: bool) -> Vec<Rational> {
    (0..1u64 << level)
        .map(|_| {
            let v = small_rational(rng);
            if nonnegative && v < rat(0, 1) {
                -v
            } else {
                v
            }
        })
        .collect()
}
