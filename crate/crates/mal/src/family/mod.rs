//! Families of generators in a host algebra and the particle machinery.
//!
//! A particle of a family is a finite meet `⋂ θ_j r_j`, where `−r_j` is the
//! complement of `r_j` relative to the family's unit. Depth-`n` statements
//! always refer to the first `n` generators in list order.

mod check;
mod crushed;
mod examples;
mod measure;
mod nonsigma;
mod ssjhd;

pub use check::{
    check_pre_rademacher, generated_membership, probe_paths, stalled, vanishing_witness,
    verify_family, Coverage, MinimalityVerdict, PathTrace, Property, PropertyReport, R1Verdict,
    REPORT_SCHEMA_VERSION,
};
pub use crushed::{
    crushed_extension_stage, positive_witnesses, CantorStageSet, CrushedExtension, CrushedStage,
    InvariantCheck, LedgerEntry, FILLER_PRECISION,
};
pub use examples::{example_family, usual_generator, usual_on_cell, ExampleParams, EXAMPLES};
pub use measure::{
    decompose, express, family_measure, glue, realize, transport, transport_element,
};
pub use nonsigma::{
    chain_element, ledger_bound, non_sigma_additive_chain, refute_lower_bound, removed_interval,
    MAX_CHAIN_INDEX,
};
pub use ssjhd::{
    d_intervals, ssjhd_dyadic_generator, ssjhd_family, ssjhd_lower_bound_refuter,
};

use crate::algebra::{Element, Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub index: u32,
    pub element: Element,
}

/// An indexed list of generators below a unit.
#[derive(Clone, Debug)]
pub struct Family {
    name: String,
    generators: Vec<Generator>,
    unit: Element,
    relative: bool,
}

impl Family {
    /// Builds a family. Without `unit` the host algebra's unit is used.
    pub fn new(name: impl Into<String>, generators: Vec<Generator>, unit: Option<Element>) -> Result<Self> {
        let relative = unit.is_some();
        let unit = match (unit, generators.first()) {
            (Some(u), _) => u,
            (None, Some(g)) => g.element.unit_like(),
            (None, None) => return Err(Error::InvalidParams("a family without generators needs a unit".into())),
        };
        let mut seen = std::collections::BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.index) {
                return Err(Error::InvalidParams(format!("generator index {} repeated", g.index)));
            }
            if !g.element.leq(&unit)? {
                return Err(Error::InvalidParams(format!("generator {} is not below the unit", g.index)));
            }
        }
        Ok(Self { name: name.into(), generators, unit, relative })
    }

    /// Generators indexed `1..=n` in the given order.
    pub fn from_elements(name: impl Into<String>, elements: Vec<Element>, unit: Option<Element>) -> Result<Self> {
        let generators =
            elements.into_iter().enumerate().map(|(i, element)| Generator { index: i as u32 + 1, element }).collect();
        Self::new(name, generators, unit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn is_relative(&self) -> bool {
        self.relative
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn indices(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.index).collect()
    }

    pub fn generator(&self, index: u32) -> Result<&Element> {
        self.generators
            .iter()
            .find(|g| g.index == index)
            .map(|g| &g.element)
            .ok_or(Error::UnknownIndex(index))
    }

    /// The first `depth` generators.
    pub fn prefix(&self, depth: usize) -> Result<&[Generator]> {
        self.generators.get(..depth).ok_or(Error::InsufficientGenerators {
            requested: depth,
            available: self.generators.len(),
        })
    }

    /// The first `depth` generators as a family of their own.
    pub fn truncated(&self, depth: usize) -> Result<Family> {
        Ok(Family {
            name: self.name.clone(),
            generators: self.prefix(depth)?.to_vec(),
            unit: self.unit.clone(),
            relative: self.relative,
        })
    }

    /// The family with generator `index` removed.
    pub fn without(&self, index: u32) -> Result<Family> {
        self.generator(index)?;
        Ok(Family {
            name: format!("{} without r_{index}", self.name),
            generators: self.generators.iter().filter(|g| g.index != index).cloned().collect(),
            unit: self.unit.clone(),
            relative: self.relative,
        })
    }

    /// `θ r` with `−r` read as `e ∖ r`.
    pub fn signed(&self, element: &Element, sign: Sign) -> Result<Element> {
        match sign {
            Sign::Plus => Ok(element.clone()),
            Sign::Minus => self.unit.difference(element),
        }
    }

    /// `⋂_{j ∈ J} θ_j r_j`; the empty meet is the unit.
    pub fn particle(&self, sv: &SignVector) -> Result<Element> {
        let mut acc = self.unit.clone();
        for &(index, sign) in sv.entries() {
            let g = self.generator(index)?;
            acc = match sign {
                Sign::Plus => acc.meet(g)?,
                Sign::Minus => acc.difference(g)?,
            };
        }
        Ok(acc)
    }

    /// All `2^depth` particles on the first `depth` generators, zero ones
    /// included, in lexicographic sign order with `+` first.
    pub fn partition(&self, depth: usize) -> Result<Vec<(SignVector, Element)>> {
        let gens = self.prefix(depth)?;
        budget::ensure_pow2(depth)?;
        let mut cells = vec![(SignVector::empty(), self.unit.clone())];
        for g in gens {
            let mut next = Vec::with_capacity(cells.len() * 2);
            for (sv, cell) in cells {
                next.push((sv.with(g.index, Sign::Plus)?, cell.meet(&g.element)?));
                next.push((sv.with(g.index, Sign::Minus)?, cell.difference(&g.element)?));
            }
            cells = next;
        }
        Ok(cells)
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            algebra: self.unit.kind().to_string(),
            unit: self.relative.then(|| self.unit.clone()),
            generators: self.generators.iter().map(|g| g.element.clone()).collect(),
        }
    }

    pub fn from_file(name: impl Into<String>, file: FamilyFile) -> Result<Family> {
        const KINDS: [&str; 4] = ["dyadic", "interval", "finite", "pair"];
        if !KINDS.contains(&file.algebra.as_str()) {
            return Err(Error::Parse(format!("unknown algebra {:?}", file.algebra)));
        }
        for e in file.generators.iter().chain(&file.unit) {
            if e.kind() != file.algebra {
                return Err(Error::Parse(format!("{} element in a {} family", e.kind(), file.algebra)));
            }
        }
        Family::from_elements(name, file.generators, file.unit)
    }

    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Family> {
        let file: FamilyFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Family::from_file(name, file)
    }
}

/// The on-disk form of a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Element>,
    pub generators: Vec<Element>,
}
