//! (R1)–(R4) certificates at a finite depth.

use super::Family;
use crate::algebra::{DyadicSet, Element, FiniteSubset, Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};
use crate::scalar::{QuadScalar, Rational};
use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    R1,
    R2,
    R3,
    R4,
}

impl std::str::FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "r1" => Ok(Property::R1),
            "r2" => Ok(Property::R2),
            "r3" => Ok(Property::R3),
            "r4" => Ok(Property::R4),
            other => Err(Error::Parse(format!("unknown property {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct R1Verdict {
    pub pass: bool,
    pub witness: Option<SignVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PathTrace {
    pub path: SignVector,
    pub trace: Vec<QuadScalar>,
    /// Measure of the deepest meet on the path.
    pub tail: QuadScalar,
    pub stalled: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityVerdict {
    pub index: u32,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub probed: usize,
    pub generated: usize,
    #[serde(serialize_with = "crate::scalar::serialize_rational")]
    pub fraction: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub schema_version: u32,
    pub family: String,
    pub depth: usize,
    pub label: String,
    pub r1: R1Verdict,
    /// `None` when the host algebra has no Lebesgue measure.
    pub r2_pass: Option<bool>,
    pub r2_paths: Vec<PathTrace>,
    pub r3: Vec<MinimalityVerdict>,
    pub r4: Coverage,
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn holds(&self, p: Property) -> bool {
        match p {
            Property::R1 => self.r1.pass,
            Property::R2 => self.r2_pass.unwrap_or(true),
            Property::R3 => self.r3.iter().all(|v| v.pass),
            Property::R4 => self.r4.generated == self.r4.probed,
        }
    }

    pub fn passes(&self, props: &[Property]) -> bool {
        props.iter().all(|&p| self.holds(p))
    }
}

/// (R1) at depth `n`: every particle on the first `n` generators is
/// nonzero. On failure the lexicographically first zero particle is
/// returned.
pub fn check_pre_rademacher(fam: &Family, depth: usize) -> Result<R1Verdict> {
    let gens = fam.prefix(depth)?;
    budget::ensure_pow2(depth)?;
    let mut stack = vec![(SignVector::empty(), fam.unit().clone())];
    while let Some((sv, cell)) = stack.pop() {
        if cell.is_zero() {
            let mut witness = sv;
            for g in &gens[witness.len()..] {
                witness = witness.with(g.index, Sign::Plus)?;
            }
            return Ok(R1Verdict { pass: false, witness: Some(witness) });
        }
        if sv.len() == depth {
            continue;
        }
        let g = &gens[sv.len()];
        stack.push((sv.with(g.index, Sign::Minus)?, cell.difference(&g.element)?));
        stack.push((sv.with(g.index, Sign::Plus)?, cell.meet(&g.element)?));
    }
    Ok(R1Verdict { pass: true, witness: None })
}

/// Lebesgue measures of the successive meets along `path`, in index order.
pub fn vanishing_witness(fam: &Family, path: &SignVector) -> Result<Vec<QuadScalar>> {
    fam.unit().lebesgue()?;
    let mut acc = fam.unit().clone();
    let mut out = Vec::with_capacity(path.len());
    for &(index, sign) in path.entries() {
        acc = acc.meet(&fam.signed(fam.generator(index)?, sign)?)?;
        out.push(acc.lebesgue()?);
    }
    Ok(out)
}

/// A trace stalls when its last value is positive and the second half of
/// the path failed to halve the measure.
pub fn stalled(trace: &[QuadScalar]) -> bool {
    let (Some(last), true) = (trace.last(), trace.len() >= 2) else {
        return false;
    };
    let mid = &trace[trace.len() / 2 - 1];
    last.sign() > 0 && last.scale(&Rational::from_integer(2.into())) > *mid
}

/// Constant-sign paths over all, odd-position and even-position indices of
/// the first `depth` generators.
pub fn probe_paths(fam: &Family, depth: usize) -> Result<Vec<SignVector>> {
    let idx: Vec<u32> = fam.prefix(depth)?.iter().map(|g| g.index).collect();
    let odd: Vec<u32> = idx.iter().step_by(2).copied().collect();
    let even: Vec<u32> = idx.iter().skip(1).step_by(2).copied().collect();
    let mut out = Vec::new();
    for sub in [&idx, &odd, &even] {
        if sub.is_empty() {
            continue;
        }
        for s in [Sign::Plus, Sign::Minus] {
            let p = SignVector::constant(sub, s);
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Whether `target` is a union of the particles on the first `depth`
/// generators.
pub fn generated_membership(fam: &Family, depth: usize, target: &Element) -> Result<bool> {
    let gens = fam.prefix(depth)?;
    budget::ensure_pow2(depth)?;
    if !target.leq(fam.unit())? {
        return Ok(false);
    }
    let mut stack = vec![(0usize, fam.unit().clone())];
    while let Some((d, cell)) = stack.pop() {
        if cell.disjoint(target)? || cell.leq(target)? {
            continue;
        }
        if d == depth {
            return Ok(false);
        }
        let g = &gens[d].element;
        stack.push((d + 1, cell.difference(g)?));
        stack.push((d + 1, cell.meet(g)?));
    }
    Ok(true)
}

/// Dyadic intervals (level ≤ 4), points, or both for pair hosts, all below
/// the unit.
fn coverage_targets(fam: &Family, depth: usize) -> Result<Vec<Element>> {
    let max_level = depth.min(4) as u32;
    let dyadic_cells = || -> Vec<DyadicSet> {
        (1..=max_level)
            .flat_map(|l| (0..1u64 << l).map(move |j| DyadicSet::cell(l, j).expect("valid cell")))
            .collect()
    };
    let lift = |unit: &Element| -> Result<Vec<Element>> {
        Ok(match unit {
            Element::Dyadic(_) => dyadic_cells().into_iter().map(Element::from).collect(),
            Element::Interval(_) => {
                dyadic_cells().iter().map(|c| Element::from(c.to_interval_set())).collect()
            }
            Element::Finite(f) => (0..f.size())
                .map(|p| FiniteSubset::new(f.size(), [p]).map(Element::from))
                .collect::<Result<_>>()?,
            _ => Vec::new(),
        })
    };
    let unit = fam.unit();
    let mut out = Vec::new();
    match unit {
        Element::Pair(p) => {
            for l in lift(&p.left)? {
                out.push(Element::pair(l, p.right.zero_like()));
            }
            for r in lift(&p.right)? {
                out.push(Element::pair(p.left.zero_like(), r));
            }
        }
        other => out = lift(other)?,
    }
    let mut kept = Vec::new();
    for t in out {
        if t.leq(unit)? {
            kept.push(t);
        }
    }
    Ok(kept)
}

/// Runs all four certificates at depth `n`.
pub fn verify_family(fam: &Family, depth: usize) -> Result<PropertyReport> {
    let r1 = check_pre_rademacher(fam, depth)?;
    let mut notes = Vec::new();
    if let Some(w) = &r1.witness {
        let p = fam.particle(w)?;
        debug_assert!(p.is_zero());
        notes.push(format!("r1: particle {w} is zero"));
    }

    let (r2_pass, r2_paths) = match fam.unit().lebesgue() {
        Ok(_) => {
            let mut paths = Vec::new();
            for path in probe_paths(fam, depth)? {
                let trace = vanishing_witness(fam, &path)?;
                let tail = trace.last().cloned().unwrap_or_default();
                let st = stalled(&trace);
                paths.push(PathTrace { path, trace, tail, stalled: st });
            }
            (Some(paths.iter().all(|p| !p.stalled)), paths)
        }
        Err(_) => {
            notes.push(format!("r2: {} host has no Lebesgue measure; not probed", fam.unit().kind()));
            (None, Vec::new())
        }
    };

    let truncated = fam.truncated(depth)?;
    let mut r3 = Vec::with_capacity(depth);
    for g in truncated.generators() {
        let others = truncated.without(g.index)?;
        let member = generated_membership(&others, depth - 1, &g.element)?;
        r3.push(MinimalityVerdict { index: g.index, pass: !member });
    }

    let targets = coverage_targets(fam, depth)?;
    let mut generated = 0;
    for t in &targets {
        if generated_membership(fam, depth, t)? {
            generated += 1;
        }
    }
    let fraction = if targets.is_empty() {
        Rational::from_integer(1.into())
    } else {
        Rational::new(generated.into(), targets.len().into())
    };

    Ok(PropertyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        family: fam.name().to_string(),
        depth,
        label: format!("certified to depth {depth}"),
        r1,
        r2_pass,
        r2_paths,
        r3,
        r4: Coverage { probed: targets.len(), generated, fraction },
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{example_family, ExampleParams};
    use crate::scalar::rat;

    fn sv(indices: &[u32], s: &str) -> SignVector {
        SignVector::parse(indices, s).unwrap()
    }

    #[test]
    fn r1_examples() {
        let usual = example_family("usual", &ExampleParams::with_n(8)).unwrap();
        assert!(check_pre_rademacher(&usual, 8).unwrap().pass);
        let ffk1 = example_family("ffk1", &ExampleParams::with_n(4)).unwrap();
        assert_eq!(check_pre_rademacher(&ffk1, 2).unwrap().witness, Some(sv(&[1, 2], "++")));
        let rel = example_family("relative", &ExampleParams::default()).unwrap();
        assert_eq!(check_pre_rademacher(&rel, 2).unwrap().witness, Some(sv(&[1, 2], "--")));
    }

    #[test]
    fn vanishing_traces() {
        let usual = example_family("usual", &ExampleParams::with_n(10)).unwrap();
        let path = SignVector::constant(&usual.indices(), Sign::Plus);
        let t = vanishing_witness(&usual, &path).unwrap();
        let expected: Vec<QuadScalar> = (1..=10).map(|m| QuadScalar::from(rat(1, 1 << m))).collect();
        assert_eq!(t, expected);
        assert!(!stalled(&t));
        let one = vanishing_witness(&usual, &sv(&[1], "-")).unwrap();
        assert_eq!(one, vec![QuadScalar::from(rat(1, 2))]);
    }

    #[test]
    fn ffk2_odd_path_stalls() {
        let fam = example_family("ffk2", &ExampleParams::with_n(20)).unwrap();
        let odd: Vec<u32> = (1..=19).step_by(2).collect();
        let t = vanishing_witness(&fam, &SignVector::constant(&odd, Sign::Plus)).unwrap();
        assert!(t.iter().all(|v| *v >= QuadScalar::from(rat(1, 2))));
        assert!(stalled(&t));
    }

    #[test]
    fn membership_examples() {
        let usual = example_family("usual", &ExampleParams::with_n(9)).unwrap();
        let target = usual.generator(3).unwrap().clone();
        assert!(!generated_membership(&usual.without(3).unwrap(), 8, &target).unwrap());
        assert!(generated_membership(&usual, 4, usual.unit()).unwrap());
        let x = DyadicSet::from_runs(4, vec![(0, 3)]).unwrap().into();
        assert!(generated_membership(&usual, 4, &x).unwrap());
        assert!(!generated_membership(&usual, 3, &x).unwrap());
    }

    #[test]
    fn full_report() {
        let usual = example_family("usual", &ExampleParams::with_n(10)).unwrap();
        let rep = verify_family(&usual, 10).unwrap();
        assert!(rep.passes(&[Property::R1, Property::R2, Property::R3, Property::R4]));
        assert_eq!(rep.label, "certified to depth 10");
        let ffk2 = example_family("ffk2", &ExampleParams::with_n(10)).unwrap();
        let rep = verify_family(&ffk2, 10).unwrap();
        assert!(rep.holds(Property::R1));
        assert!(!rep.holds(Property::R2));
        let ffk4 = example_family("ffk4", &ExampleParams::with_n(6)).unwrap();
        assert!(!verify_family(&ffk4, 6).unwrap().holds(Property::R4));
    }
}
