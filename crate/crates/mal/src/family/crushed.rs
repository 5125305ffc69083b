//! Finite stages of a crushed generator `r_0` extending the usual family.
//!
//! Stage `k` places disjoint finite-generation Cantor sets `A_n`, `B_n` inside
//! the `n`-th enumerated dyadic interval for `n <= k`, then splits every
//! remaining grid cell between the two sides so that `μ(r_0)` is close to
//! `γ` and each side meets every cell.

use super::{usual_generator, Family, Generator};
use crate::algebra::{enumeration_cell, DyadicSet, IntervalSet, SignVector};
use crate::error::{Error, Result};
use crate::scalar::{rat, serialize_rational, DyadicRational, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Binary digits used to split each free cell between `r_0` and its
/// complement.
pub const FILLER_PRECISION: u32 = 10;

const MAX_STAGE: usize = 12;

/// A dyadic cell with finitely many dyadic cells removed.
#[derive(Clone, Debug, Serialize)]
pub struct CantorStageSet {
    pub enclosing: (u32, u64),
    pub removed: Vec<(u32, u64)>,
    #[serde(skip)]
    set: DyadicSet,
}

impl CantorStageSet {
    /// `g` generations of middle-half removal inside the cell: each kept
    /// piece keeps its quarters 0 and 3. The result has measure `2^-g |J|`
    /// and kept pieces at level `level + 2g`.
    pub fn generations(level: u32, pos: u64, g: u32) -> Result<Self> {
        let mut removed = Vec::new();
        let mut kept = vec![pos];
        for i in 0..g {
            let l = level + 2 * (i + 1);
            let mut next = Vec::with_capacity(kept.len() * 2);
            for q in kept {
                removed.extend([(l, 4 * q + 1), (l, 4 * q + 2)]);
                next.extend([4 * q, 4 * q + 3]);
            }
            kept = next;
        }
        let set = DyadicSet::from_cells(level + 2 * g, kept)?;
        Ok(Self { enclosing: (level, pos), removed, set })
    }

    pub fn set(&self) -> &DyadicSet {
        &self.set
    }

    pub fn measure(&self) -> DyadicRational {
        self.set.measure()
    }

    pub fn to_interval_set(&self) -> IntervalSet {
        self.set.to_interval_set()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerEntry {
    pub n: usize,
    pub a_measure: DyadicRational,
    #[serde(serialize_with = "serialize_rational")]
    pub a_bound: Rational,
    pub b_measure: DyadicRational,
    #[serde(serialize_with = "serialize_rational")]
    pub b_bound: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrushedStage {
    #[serde(serialize_with = "serialize_rational")]
    pub gamma: Rational,
    pub stage: usize,
    pub a: Vec<CantorStageSet>,
    pub b: Vec<CantorStageSet>,
    pub ledger: Vec<LedgerEntry>,
    /// Grid level at which the leftover region is split.
    pub filler_level: u32,
    /// `r_0` at this stage: the `A_n` plus the filler.
    #[serde(serialize_with = "as_element")]
    pub r0: DyadicSet,
    pub r0_measure: DyadicRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CrushedExtension {
    pub stage: CrushedStage,
    /// `r_0` (index 0) followed by the usual `r_1..r_N`.
    pub family: Family,
    /// `min(k, N) + 1`.
    pub depth: usize,
    pub invariants: Vec<InvariantCheck>,
    /// One `(particle, enumerated cell inside it)` per depth-`depth` particle.
    pub witnesses: Vec<(SignVector, (u32, u64))>,
}

impl CrushedExtension {
    pub fn holds(&self) -> bool {
        self.invariants.iter().all(|c| c.holds)
    }
}

fn as_element<S: serde::Serializer>(d: &DyadicSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::algebra::Element::from(d.clone()).serialize(s)
}

fn generations_for(level: u32, resolution: u32) -> u32 {
    resolution.saturating_sub(level).div_ceil(2).max(2)
}

/// A Cantor stage set in the leftmost subcell `J` of the first enumerated
/// interval of `region`, with at least two generations, kept pieces finer
/// than `resolution` and measure within `budget`.
fn place(region: &DyadicSet, budget: &Rational, resolution: u32) -> Result<CantorStageSet> {
    let (mut level, mut pos) = region
        .first_enumerated_subinterval()
        .ok_or_else(|| Error::FamilyDefect("no free dyadic interval left".into()))?;
    while DyadicRational::pow2_inv(level + generations_for(level, resolution)).to_rational() > *budget {
        level += 1;
        pos *= 2;
    }
    CantorStageSet::generations(level, pos, generations_for(level, resolution))
}

fn check(name: &str, holds: bool, detail: String) -> InvariantCheck {
    InvariantCheck { name: name.into(), holds, detail }
}

/// Every depth-`depth` particle with the enumerated cell it contains.
pub fn positive_witnesses(fam: &Family, depth: usize) -> Result<Vec<(SignVector, (u32, u64))>> {
    fam.partition(depth)?
        .into_iter()
        .map(|(sv, p)| {
            let cell = match &p {
                crate::algebra::Element::Dyadic(d) => d.first_enumerated_subinterval(),
                _ => return Err(Error::InvalidParams("witnesses need a dyadic family".into())),
            };
            cell.map(|c| (sv.clone(), c)).ok_or_else(|| Error::FamilyDefect(format!("particle {sv} is zero")))
        })
        .collect()
}

/// Stage `k` of the crushed extension at `γ`, joined to `r_1..r_n`.
pub fn crushed_extension_stage(gamma: &Rational, k: usize, n: usize) -> Result<CrushedExtension> {
    if !(gamma > &Rational::zero() && gamma < &Rational::one()) {
        return Err(Error::InvalidParams(format!("gamma = {gamma} outside (0,1)")));
    }
    if !(1..=MAX_STAGE).contains(&k) {
        return Err(Error::InvalidParams(format!("stage {k} outside 1..={MAX_STAGE}")));
    }
    if n == 0 || n > 20 {
        return Err(Error::InvalidParams(format!("n = {n} outside 1..=20")));
    }
    let one_minus = Rational::one() - gamma;
    let depth = k.min(n) + 1;
    let mut used = DyadicSet::empty();
    let (mut a, mut b, mut ledger) = (Vec::new(), Vec::new(), Vec::new());
    for idx in 1..=k {
        let (level, pos) = enumeration_cell(idx as u64)?;
        let scale = rat(1, 1) / Rational::from_integer(BigInt::one() << idx);
        let (a_bound, b_bound) = (gamma * &scale, &one_minus * &scale);
        let host = DyadicSet::cell(level, pos)?.difference(&used);
        let home = host.first_enumerated_subinterval().ok_or_else(|| {
            Error::FamilyDefect(format!("I_{idx} is covered by earlier stages"))
        })?;
        let home = DyadicSet::cell(home.0, home.1)?;
        let an = place(&home, &a_bound, depth as u32)?;
        let bn = place(&home.difference(an.set()), &b_bound, depth as u32)?;
        used = used.join(an.set()).join(bn.set());
        ledger.push(LedgerEntry { n: idx, a_measure: an.measure(), a_bound, b_measure: bn.measure(), b_bound });
        a.push(an);
        b.push(bn);
    }

    let a0 = a.iter().fold(DyadicSet::empty(), |acc, s| acc.join(s.set()));
    let free = used.complement();
    let filler_level = used.level().max(n as u32);
    let (r0, filler_ok) = fill(&a0, &free, filler_level, gamma)?;
    let r0_measure = r0.measure();
    let stage = CrushedStage { gamma: gamma.clone(), stage: k, a, b, ledger, filler_level, r0, r0_measure };

    let mut generators = vec![Generator { index: 0, element: stage.r0.clone().into() }];
    for i in 1..=n as u32 {
        generators.push(Generator { index: i, element: usual_generator(i)?.into() });
    }
    let family = Family::new(format!("crushed(gamma={gamma}, stage={k})"), generators, None)?;
    let witnesses = positive_witnesses(&family, depth);
    let mut invariants = stage_invariants(&stage);
    invariants.push(check("filler", filler_ok, format!("every free cell at level {filler_level} is split")));
    let gap = (stage.r0_measure.to_rational() - gamma).abs();
    invariants.push(check(
        "measure",
        gap <= DyadicRational::pow2_inv(FILLER_PRECISION).to_rational(),
        format!("|mu(r0) - gamma| = {gap}"),
    ));
    invariants.push(check(
        "pre-rademacher",
        witnesses.is_ok(),
        format!("all 2^{depth} particles of (r_0, r_1..r_{}) contain an enumerated cell", depth - 1),
    ));
    Ok(CrushedExtension { stage, family, depth, invariants, witnesses: witnesses.unwrap_or_default() })
}

/// Adds the left `q/2^FILLER_PRECISION` of every free cell at `level` to
/// `a0`, with `q` the quantized share still owed to `γ`, clamped so both
/// sides of each cell stay nonempty.
fn fill(a0: &DyadicSet, free: &DyadicSet, level: u32, gamma: &Rational) -> Result<(DyadicSet, bool)> {
    let free_measure = free.measure().to_rational();
    if free_measure.is_zero() {
        return Ok((a0.clone(), false));
    }
    let share = (gamma - a0.measure().to_rational()) / free_measure;
    let top = 1u64 << FILLER_PRECISION;
    let q = (share * Rational::from_integer(BigInt::from(top))).floor().to_integer().to_u64().unwrap_or(0);
    let q = q.clamp(1, top - 1);
    let fine = level + FILLER_PRECISION;
    let mut runs = Vec::new();
    for (lo, hi) in free.runs_at(level) {
        crate::budget::ensure(u128::from(hi - lo))?;
        runs.extend((lo..hi).map(|c| (c << FILLER_PRECISION, (c << FILLER_PRECISION) + q)));
    }
    Ok((a0.join(&DyadicSet::from_runs(fine, runs)?), true))
}

fn stage_invariants(stage: &CrushedStage) -> Vec<InvariantCheck> {
    let sets: Vec<&DyadicSet> = stage.a.iter().chain(&stage.b).map(|s| s.set()).collect();
    let disjoint = sets.iter().enumerate().all(|(i, x)| sets[i + 1..].iter().all(|y| x.disjoint(y)));

    let bounds = stage.ledger.iter().all(|e| {
        let (am, bm) = (e.a_measure.to_rational(), e.b_measure.to_rational());
        am.is_positive() && bm.is_positive() && am <= e.a_bound && bm <= e.b_bound
    });

    let inside = (0..stage.stage).all(|i| {
        let (l, p) = enumeration_cell(i as u64 + 1).expect("small index");
        let cell = DyadicSet::cell(l, p).expect("valid cell");
        stage.a[i].set().leq(&cell) && stage.b[i].set().leq(&cell)
    });

    // For m <= k and j <= m, I_j ∖ A_m and I_j ∖ B_m still contain a cell.
    let crushed = (1..=stage.stage).all(|m| {
        (1..=m).all(|j| {
            let (l, p) = enumeration_cell(j as u64).expect("small index");
            let cell = DyadicSet::cell(l, p).expect("valid cell");
            [&stage.a[m - 1], &stage.b[m - 1]]
                .iter()
                .all(|s| cell.difference(s.set()).first_enumerated_subinterval().is_some())
        })
    });

    let k = stage.stage as u32;
    let factor = Rational::one() - DyadicRational::pow2_inv(k).to_rational();
    let sum_a: Rational = stage.ledger.iter().map(|e| e.a_measure.to_rational()).sum();
    let sum_b: Rational = stage.ledger.iter().map(|e| e.b_measure.to_rational()).sum();
    let ledger = sum_a <= &stage.gamma * &factor && sum_b <= (Rational::one() - &stage.gamma) * &factor;

    vec![
        check("disjoint", disjoint, format!("{} sets pairwise disjoint", sets.len())),
        check("bounds", bounds, "0 < mu(A_n) <= 2^-n gamma and 0 < mu(B_n) <= 2^-n (1 - gamma)".into()),
        check("inside", inside, "A_n, B_n inside I_n".into()),
        check("crushed", crushed, "A_m, B_m leave a dyadic interval free in each I_j, j <= m".into()),
        check("ledger", ledger, format!("sum mu(A_n) = {sum_a}, sum mu(B_n) = {sum_b}")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_stage_bounds() {
        let ext = crushed_extension_stage(&rat(1, 3), 1, 1).unwrap();
        let e = &ext.stage.ledger[0];
        assert!(e.a_measure.to_rational() <= rat(1, 6));
        assert!(e.b_measure.to_rational() <= rat(1, 3));
        assert!(ext.stage.a[0].set().disjoint(ext.stage.b[0].set()));
        assert!(ext.holds(), "{:?}", ext.invariants);
    }

    #[test]
    fn half_stage_four() {
        let ext = crushed_extension_stage(&rat(1, 2), 4, 4).unwrap();
        assert!(ext.holds(), "{:?}", ext.invariants);
        let sum: Rational = ext.stage.ledger.iter().map(|e| e.a_measure.to_rational()).sum();
        assert!(sum <= rat(1, 2) * rat(15, 16));
        assert_eq!(ext.witnesses.len(), 32);
    }

    #[test]
    fn third_stage_eight() {
        let ext = crushed_extension_stage(&rat(1, 3), 8, 8).unwrap();
        assert!(ext.holds(), "{:?}", ext.invariants);
        assert_eq!(ext.depth, 9);
        assert_eq!(ext.witnesses.len(), 512);
    }

    #[test]
    fn cantor_stage_measure() {
        let s = CantorStageSet::generations(1, 1, 2).unwrap();
        assert_eq!(s.measure().to_rational(), rat(1, 8));
        assert!(!s.set().contains_cell(3, 5));
        assert_eq!(s.removed.len(), 6);
        let mut rebuilt = DyadicSet::cell(1, 1).unwrap();
        for &(l, p) in &s.removed {
            rebuilt = rebuilt.difference(&DyadicSet::cell(l, p).unwrap());
        }
        assert_eq!(&rebuilt, s.set());
    }

    #[test]
    fn rejects_bad_gamma() {
        assert!(crushed_extension_stage(&rat(1, 1), 2, 2).is_err());
        assert!(crushed_extension_stage(&rat(1, 3), 13, 2).is_err());
    }
}
