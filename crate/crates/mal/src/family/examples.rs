//! The example and counterexample gallery.

use super::{crushed_extension_stage, glue, ssjhd_family, Family, Generator};
use crate::algebra::{DyadicSet, Element, FiniteSubset};
use crate::budget;
use crate::error::{Error, Result};
use crate::scalar::{rat, DyadicRational, Rational};

/// Builtin example names with one-line descriptions.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("usual", "usual Rademacher family r_n = odd cells at level n (param n)"),
    ("usual-on", "usual family rescaled to one dyadic cell, relative to that cell (params n, cell)"),
    ("ffk1", "r_{2k-1} = r'_k on [0,1/2), r_{2k} = r''_k on [1/2,1); fails (R1) (param n)"),
    ("ffk2", "r_{2k-1} = [0,1/2) + r''_{2k-1}, r_{2k} = r'_k + r''_{2k}; fails (R2) (param n)"),
    ("ffk4", "usual family with one generator removed; fails (R4) (params n, remove)"),
    ("digit", "r_n = labeled points whose n-th binary digit is 1 (params bits or labels)"),
    ("mixed", "direct sum of the usual family and a finite atomic algebra (params n, atoms)"),
    ("ssjhd", "irrational-cut family s_n = [0,a) + D-intervals, a = sqrt2/2 (param stage)"),
    ("crushed", "usual family extended by a crushed generator r_0 (params gamma, stage, n)"),
    ("relative", "{[0,1/2), [1/4,3/4)} relative to e = [0,3/4); not pre-Rademacher"),
    ("glued", "usual families on [0,1/2) and [1/2,1) glued together (param n)"),
];

#[derive(Clone, Debug, Default)]
pub struct ExampleParams {
    pub n: Option<usize>,
    pub remove: Option<u32>,
    pub bits: Option<u32>,
    pub labels: Option<Vec<DyadicRational>>,
    pub atoms: Option<usize>,
    pub gamma: Option<Rational>,
    pub stage: Option<usize>,
    /// `(level, position)` of a dyadic cell.
    pub cell: Option<(u32, u64)>,
}

impl ExampleParams {
    pub fn with_n(n: usize) -> Self {
        Self { n: Some(n), ..Self::default() }
    }
}

/// `r̂_k`: the left half of every level-`(k-1)` cell.
pub fn usual_generator(k: u32) -> Result<DyadicSet> {
    usual_on_cell(0, 0, k)
}

/// `r̂_{m+k} ∩ I`, the `k`-th usual generator rescaled to the level-`m`
/// cell `I` at `position`.
pub fn usual_on_cell(level: u32, position: u64, k: u32) -> Result<DyadicSet> {
    if k == 0 {
        return Err(Error::InvalidParams("generators are indexed from 1".into()));
    }
    budget::ensure_pow2(k as usize - 1)?;
    let base = position << k;
    DyadicSet::from_runs(level + k, (0..1u64 << (k - 1)).map(|j| (base + 2 * j, base + 2 * j + 1)).collect())
}

fn n_or(params: &ExampleParams, default: usize) -> Result<usize> {
    let n = params.n.unwrap_or(default);
    if n == 0 || n > 40 {
        return Err(Error::InvalidParams(format!("n = {n} outside 1..=40")));
    }
    Ok(n)
}

fn family(name: &str, elements: Vec<DyadicSet>, unit: Option<Element>) -> Result<Family> {
    Family::from_elements(name, elements.into_iter().map(Element::from).collect(), unit)
}

pub fn example_family(name: &str, params: &ExampleParams) -> Result<Family> {
    match name {
        "usual" => {
            let n = n_or(params, 10)?;
            family(name, (1..=n as u32).map(usual_generator).collect::<Result<_>>()?, None)
        }
        "usual-on" => {
            let n = n_or(params, 10)?;
            let (level, pos) = params.cell.unwrap_or((1, 0));
            let unit = DyadicSet::cell(level, pos)?;
            let gens = (1..=n as u32).map(|k| usual_on_cell(level, pos, k)).collect::<Result<_>>()?;
            family(name, gens, Some(unit.into()))
        }
        "ffk1" => {
            let n = n_or(params, 10)?;
            let gens = (1..=n as u32)
                .map(|i| {
                    let k = i.div_ceil(2);
                    usual_on_cell(1, u64::from(i % 2 == 0), k)
                })
                .collect::<Result<_>>()?;
            family(name, gens, None)
        }
        "ffk2" => {
            let n = n_or(params, 20)?;
            let left = DyadicSet::cell(1, 0)?;
            let gens = (1..=n as u32)
                .map(|i| {
                    let right = usual_on_cell(1, 1, i)?;
                    let left_part = if i % 2 == 1 { left.clone() } else { usual_on_cell(1, 0, i / 2)? };
                    Ok(left_part.join(&right))
                })
                .collect::<Result<_>>()?;
            family(name, gens, None)
        }
        "ffk4" => {
            let n = n_or(params, 10)?;
            let remove = params.remove.unwrap_or(1);
            if remove == 0 || remove as usize > n + 1 {
                return Err(Error::InvalidParams(format!("cannot remove r_{remove}")));
            }
            let generators = (1..=n as u32 + 1)
                .filter(|&i| i != remove)
                .map(|i| Ok(Generator { index: i, element: usual_generator(i)?.into() }))
                .collect::<Result<_>>()?;
            Family::new(format!("usual without r_{remove}"), generators, None)
        }
        "digit" => digit_family(params),
        "mixed" => {
            let n = n_or(params, 10)?;
            let m = params.atoms.unwrap_or(2);
            if m == 0 {
                return Err(Error::InvalidParams("atoms must be positive".into()));
            }
            let gens = (1..=n as u32)
                .map(|i| {
                    let atom = (i as usize - 1) % m;
                    Ok(Element::pair(usual_generator(i)?.into(), FiniteSubset::new(m, [atom])?.into()))
                })
                .collect::<Result<_>>()?;
            Family::from_elements(name, gens, None)
        }
        "ssjhd" => ssjhd_family(params.stage.or(params.n).unwrap_or(10)),
        "crushed" => {
            let gamma = params.gamma.clone().unwrap_or_else(|| rat(1, 3));
            let stage = params.stage.unwrap_or(8);
            let n = params.n.unwrap_or(stage);
            Ok(crushed_extension_stage(&gamma, stage, n)?.family)
        }
        "relative" => family(
            name,
            vec![DyadicSet::from_runs(2, vec![(0, 2)])?, DyadicSet::from_runs(2, vec![(1, 3)])?],
            Some(DyadicSet::from_runs(2, vec![(0, 3)])?.into()),
        ),
        "glued" => {
            let n = n_or(params, 5)?;
            let on = |pos| example_family("usual-on", &ExampleParams { n: Some(n), cell: Some((1, pos)), ..Default::default() });
            Ok(glue(&on(0)?, &on(1)?)?.with_name(name))
        }
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

/// `n`-th binary digit of a label in `[0, 1)`.
fn digit(label: &DyadicRational, n: u32) -> bool {
    let shifted = label.numerator() << n;
    let floor = shifted >> label.exponent();
    floor.bit(0)
}

fn digit_family(params: &ExampleParams) -> Result<Family> {
    let labels = match &params.labels {
        Some(l) => l.clone(),
        None => {
            let bits = params.bits.unwrap_or(3);
            if bits == 0 || bits > 16 {
                return Err(Error::InvalidParams(format!("bits = {bits} outside 1..=16")));
            }
            (0..1u64 << bits).map(|j| DyadicRational::new(j, bits)).collect()
        }
    };
    if labels.is_empty() {
        return Err(Error::InvalidParams("digit family needs labels".into()));
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_negative() || *l >= DyadicRational::one() || labels[..i].contains(l) {
            return Err(Error::InvalidParams(format!("label {l} is not a fresh point of [0,1)")));
        }
    }
    let depth = labels.iter().map(|l| l.exponent()).max().unwrap_or(0).max(1);
    let n = params.n.map_or(depth, |n| n as u32);
    let size = labels.len();
    let gens = (1..=n)
        .map(|k| {
            let pts = labels.iter().enumerate().filter(|(_, l)| digit(l, k)).map(|(p, _)| p);
            Ok(FiniteSubset::new(size, pts)?.into())
        })
        .collect::<Result<_>>()?;
    Family::from_elements("digit", gens, None)
}
