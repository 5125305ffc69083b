//! Finite probability-space representations of a system of signed
//! fragments: outcomes are the depth-`n` particles, and the system becomes a
//! table of `±1`-valued random variables.

use crate::algebra::{Element, SignVector};
use crate::error::{Error, Result};
use crate::family::{check_pre_rademacher, family_measure, verify_family, Family, PropertyReport, REPORT_SCHEMA_VERSION};
use crate::riesz::{SignedFragment, StepElement};
use crate::scalar::{DyadicRational, Rational};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct PartansReport {
    pub schema_version: u32,
    pub depth: usize,
    pub label: String,
    /// `(i, |r_i| = e)`.
    pub moduli: Vec<(u32, bool)>,
    /// The (R1)–(R4) report of the family `r̂_i = r_i⁺` on `e`.
    pub properties: PropertyReport,
}

impl PartansReport {
    /// (a): every `|r_i|` equals the common unit.
    pub fn a(&self) -> bool {
        self.moduli.iter().all(|&(_, ok)| ok)
    }

    /// (b): all depth-`n` signed meets are nonzero.
    pub fn b(&self) -> bool {
        self.properties.r1.pass
    }

    /// (c): no probed sign path stalls.
    pub fn c(&self) -> bool {
        self.properties.r2_pass.unwrap_or(true)
    }

    /// (d): no `r_i` is generated by the others at this depth.
    pub fn d(&self) -> bool {
        self.properties.r3.iter().all(|v| v.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.a() && self.b() && self.c() && self.d()
    }
}

fn common_unit(system: &[SignedFragment]) -> Result<Element> {
    let first = system.first().ok_or_else(|| Error::InvalidParams("empty system".into()))?;
    if system.iter().any(|r| r.unit() != first.unit()) {
        return Err(Error::UnitMismatch);
    }
    Ok(first.unit().clone())
}

/// The family of positive parts `r_i⁺`, indexed from 1, on the common unit.
pub fn positive_family(system: &[SignedFragment]) -> Result<Family> {
    let unit = common_unit(system)?;
    Family::from_elements("system", system.iter().map(SignedFragment::plus).collect(), Some(unit))
}

pub fn verify_partans_conditions(system: &[SignedFragment], depth: usize) -> Result<PartansReport> {
    let unit = common_unit(system)?;
    let moduli = system
        .iter()
        .enumerate()
        .map(|(i, r)| Ok((i as u32 + 1, r.support()? == unit)))
        .collect::<Result<_>>()?;
    let properties = verify_family(&positive_family(system)?, depth)?;
    Ok(PartansReport {
        schema_version: REPORT_SCHEMA_VERSION,
        depth,
        label: format!("certified to depth {depth}"),
        moduli,
        properties,
    })
}

#[derive(Clone, Debug)]
pub struct FiniteProbSpace {
    pub depth: usize,
    /// Depth-`n` particles in lexicographic order, `+` first.
    pub outcomes: Vec<SignVector>,
    pub probabilities: Vec<DyadicRational>,
    /// `variables[i][ω]` is the value of `T r_{i+1}` at outcome `ω`.
    pub variables: Vec<Vec<i8>>,
}

impl Serialize for FiniteProbSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            depth: usize,
            outcomes: Vec<String>,
            probabilities: &'a [DyadicRational],
            variables: &'a [Vec<i8>],
        }
        Repr {
            depth: self.depth,
            outcomes: self.outcomes.iter().map(SignVector::sign_string).collect(),
            probabilities: &self.probabilities,
            variables: &self.variables,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CylinderCertificate {
    pub max_order: usize,
    /// Cylinders checked, counting every sign choice.
    pub checked: usize,
    /// Cylinders whose probability differs from `2^{-|J|}` or from the
    /// product of the marginals.
    pub failures: Vec<String>,
}

impl CylinderCertificate {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub space: FiniteProbSpace,
    pub family: Family,
    particles: Vec<Element>,
}

/// Conditions (a) and (b) at `depth`, then the outcome space of depth-`n`
/// particles with their dyadic measures.
pub fn build_representation(system: &[SignedFragment], depth: usize) -> Result<Representation> {
    let unit = common_unit(system)?;
    for (i, r) in system.iter().enumerate() {
        if r.support()? != unit {
            return Err(Error::ConditionsFailed(format!("|r_{}| is not the unit", i + 1)));
        }
    }
    let family = positive_family(system)?;
    if let Some(w) = check_pre_rademacher(&family, depth)?.witness {
        return Err(Error::ConditionsFailed(format!("particle {w} is zero")));
    }
    let mut outcomes = Vec::new();
    let mut probabilities = Vec::new();
    let mut particles = Vec::new();
    for (sv, p) in family.partition(depth)? {
        probabilities.push(family_measure(&family, &p, depth)?);
        outcomes.push(sv);
        particles.push(p);
    }
    let variables = family.generators()[..depth]
        .iter()
        .map(|g| outcomes.iter().map(|sv| sv.sign_of(g.index).map_or(0, |s| s.value())).collect())
        .collect();
    Ok(Representation { space: FiniteProbSpace { depth, outcomes, probabilities, variables }, family, particles })
}

impl Representation {
    /// `T x`: the value of `x` at each outcome. `x` must be constant on
    /// every depth-`n` particle.
    pub fn transport(&self, x: &StepElement) -> Result<Vec<Rational>> {
        if x.unit() != self.family.unit() {
            return Err(Error::UnitMismatch);
        }
        self.particles
            .iter()
            .map(|p| x.value_on(p)?.ok_or(Error::NotMeasurable(self.space.depth)))
            .collect()
    }

    /// Checks `P(T r_j = θ_j, j ∈ J) = 2^{-|J|} = Π_j P(T r_j = θ_j)` for
    /// every nonempty `J` with `|J| <= max_order` and every sign choice.
    pub fn cylinder_certificate(&self, max_order: usize) -> Result<CylinderCertificate> {
        let n = self.space.depth;
        crate::budget::ensure_pow2(n)?;
        let vars = &self.space.variables;
        let probs = &self.space.probabilities;
        let marginal = |i: usize, v: i8| -> DyadicRational {
            vars[i].iter().zip(probs).filter(|(x, _)| **x == v).map(|(_, p)| p.clone()).sum()
        };
        let marginals: Vec<[DyadicRational; 2]> = (0..n).map(|i| [marginal(i, 1), marginal(i, -1)]).collect();
        let mut checked = 0;
        let mut failures = Vec::new();
        for mask in 1u64..1 << n {
            let order = mask.count_ones() as usize;
            if order > max_order {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            // Probability of each sign pattern on J, bit b set for a minus.
            let mut table = vec![DyadicRational::zero(); 1 << order];
            for (w, p) in probs.iter().enumerate() {
                let key = members.iter().enumerate().fold(0usize, |k, (b, &i)| k | usize::from(vars[i][w] < 0) << b);
                table[key] = &table[key] + p;
            }
            let target = DyadicRational::pow2_inv(order as u32);
            for (key, got) in table.iter().enumerate() {
                checked += 1;
                let product = members
                    .iter()
                    .enumerate()
                    .fold(DyadicRational::one(), |acc, (b, &i)| &acc * &marginals[i][key >> b & 1]);
                if *got != target || *got != product {
                    failures.push(format!("J = {members:?}, pattern {key:b}: {got}"));
                }
            }
        }
        Ok(CylinderCertificate { max_order, checked, failures })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{example_family, ExampleParams};
    use crate::riesz::rademacher_system;
    use crate::scalar::int;

    fn usual_system(n: usize) -> Vec<SignedFragment> {
        let fam = example_family("usual", &ExampleParams::with_n(n)).unwrap();
        rademacher_system(fam.unit(), &fam).unwrap()
    }

    #[test]
    fn three_generators() {
        let rep = build_representation(&usual_system(3), 3).unwrap();
        assert_eq!(rep.space.outcomes.len(), 8);
        assert!(rep.space.probabilities.iter().all(|p| *p == DyadicRational::pow2_inv(3)));
        let cert = rep.cylinder_certificate(3).unwrap();
        assert_eq!(cert.checked, 26);
        assert!(cert.holds());
        let e = rep.family.unit().clone();
        assert_eq!(rep.transport(&StepElement::constant(e, int(1)).unwrap()).unwrap(), vec![int(1); 8]);
    }

    #[test]
    fn single_generator() {
        let rep = build_representation(&usual_system(1), 1).unwrap();
        assert_eq!(rep.space.probabilities, vec![DyadicRational::pow2_inv(1); 2]);
        let json = serde_json::to_string(&rep.space).unwrap();
        assert_eq!(json, r#"{"depth":1,"outcomes":["+","-"],"probabilities":["1/2^1","1/2^1"],"variables":[[1,-1]]}"#);
    }

    #[test]
    fn conditions() {
        let report = verify_partans_conditions(&usual_system(6), 6).unwrap();
        assert!(report.all_pass());
        let mut sys = usual_system(3);
        sys.push(SignedFragment::identity(sys[0].unit().clone()).unwrap());
        let report = verify_partans_conditions(&sys, 4).unwrap();
        assert!(report.a() && !report.b());
        assert!(matches!(build_representation(&sys, 4), Err(Error::ConditionsFailed(_))));
    }
}
