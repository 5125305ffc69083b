use super::{Sign, SignVector};
use crate::budget;
use crate::error::{Error, Result};
use crate::scalar::DyadicRational;
use std::collections::BTreeSet;

/// Largest index set a free element may range over.
pub const MAX_FREE_INDICES: usize = 63;

/// An element of the free Boolean algebra on countably many generators,
/// presented as a set of particles (rows) over a finite index set `J`.
///
/// Bit `p` of a row is set when the sign at `indices[p]` is `+`. Equality
/// is semantic: elements over different index sets compare after reduction
/// to the indices they actually depend on.
#[derive(Clone, Debug)]
pub struct FreeElement {
    indices: Vec<u32>,
    rows: BTreeSet<u64>,
}

impl FreeElement {
    pub fn new(mut indices: Vec<u32>, rows: impl IntoIterator<Item = u64>) -> Result<Self> {
        let n = indices.len();
        if n > MAX_FREE_INDICES {
            return Err(Error::InvalidParams(format!("free elements use at most {MAX_FREE_INDICES} indices")));
        }
        let sorted = indices.windows(2).all(|w| w[0] < w[1]);
        let rows: BTreeSet<u64> = rows.into_iter().collect();
        if rows.iter().any(|&r| r >> n != 0) {
            return Err(Error::InvalidParams("row has bits beyond the index set".into()));
        }
        if !sorted {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&p| indices[p]);
            if order.windows(2).any(|w| indices[w[0]] == indices[w[1]]) {
                return Err(Error::InvalidParams("repeated index".into()));
            }
            let rows = rows.iter().map(|&r| permute(r, &order)).collect();
            indices.sort();
            return Ok(Self { indices, rows });
        }
        Ok(Self { indices, rows })
    }

    pub fn zero() -> Self {
        Self { indices: Vec::new(), rows: BTreeSet::new() }
    }

    pub fn unit() -> Self {
        Self { indices: Vec::new(), rows: [0].into() }
    }

    /// The single particle `⋂ θ_j r_j`.
    pub fn particle(sv: &SignVector) -> Result<Self> {
        Self::from_sign_vectors(&sv.indices(), std::slice::from_ref(sv))
    }

    /// Rows given as sign vectors, each over exactly `indices`.
    pub fn from_sign_vectors(indices: &[u32], rows: &[SignVector]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut out = BTreeSet::new();
        for sv in rows {
            if sv.indices() != sorted {
                return Err(Error::InvalidParams(format!("row {sv} is not over the index set")));
            }
            out.insert(encode(sv));
        }
        Self::new(sorted, out)
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn row_bits(&self) -> &BTreeSet<u64> {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = SignVector> + '_ {
        self.rows.iter().map(|&r| self.decode(r))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn decode(&self, row: u64) -> SignVector {
        let entries = self
            .indices
            .iter()
            .enumerate()
            .map(|(p, &i)| (i, if row >> p & 1 == 1 { Sign::Plus } else { Sign::Minus }))
            .collect();
        SignVector::new(entries).expect("indices are distinct")
    }

    /// `|rows| / 2^|J|`.
    pub fn dyadic_measure(&self) -> DyadicRational {
        DyadicRational::new(self.rows.len() as u64, self.indices.len() as u32)
    }

    /// Re-expresses the element over a superset `target` of its indices;
    /// every row splits into `2^{|target ∖ J|}` rows.
    pub fn refine(&self, target: &[u32]) -> Result<Self> {
        let mut target = target.to_vec();
        target.sort();
        target.dedup();
        if target == self.indices {
            return Ok(self.clone());
        }
        if target.len() > MAX_FREE_INDICES {
            return Err(Error::InvalidParams(format!("free elements use at most {MAX_FREE_INDICES} indices")));
        }
        let mut old_pos = Vec::with_capacity(self.indices.len());
        let mut free_pos = Vec::new();
        let mut it = self.indices.iter().peekable();
        for (p, &t) in target.iter().enumerate() {
            if it.peek() == Some(&&t) {
                old_pos.push(p);
                it.next();
            } else {
                free_pos.push(p);
            }
        }
        if it.next().is_some() {
            return Err(Error::InvalidParams("refinement target must contain the index set".into()));
        }
        let extra = free_pos.len();
        budget::ensure((self.rows.len() as u128) << extra)?;
        let mut rows = BTreeSet::new();
        for &r in &self.rows {
            let base: u64 = old_pos.iter().enumerate().map(|(k, &p)| (r >> k & 1) << p).sum();
            for combo in 0..(1u64 << extra) {
                let add: u64 = free_pos.iter().enumerate().map(|(k, &p)| (combo >> k & 1) << p).sum();
                rows.insert(base | add);
            }
        }
        Ok(Self { indices: target, rows })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let mut union: Vec<u32> = self.indices.iter().chain(&other.indices).copied().collect();
        union.sort();
        union.dedup();
        Ok((self.refine(&union)?, other.refine(&union)?))
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(Self { rows: a.rows.intersection(&b.rows).copied().collect(), indices: a.indices })
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(Self { rows: a.rows.union(&b.rows).copied().collect(), indices: a.indices })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        Ok(Self { rows: a.rows.difference(&b.rows).copied().collect(), indices: a.indices })
    }

    pub fn complement(&self) -> Result<Self> {
        budget::ensure_pow2(self.indices.len())?;
        let rows = (0..1u64 << self.indices.len()).filter(|r| !self.rows.contains(r)).collect();
        Ok(Self { indices: self.indices.clone(), rows })
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        let (a, b) = self.aligned(other)?;
        Ok(a.rows.is_subset(&b.rows))
    }

    /// Drops every index the element does not depend on. The result is the
    /// unique minimal presentation.
    pub fn reduce(&self) -> Self {
        let mut cur = self.clone();
        let mut p = 0;
        while p < cur.indices.len() {
            let bit = 1u64 << p;
            if cur.rows.iter().all(|r| cur.rows.contains(&(r ^ bit))) {
                let low = bit - 1;
                let rows = cur
                    .rows
                    .iter()
                    .filter(|&&r| r & bit != 0)
                    .map(|&r| (r & low) | ((r >> 1) & !low))
                    .collect();
                let mut indices = cur.indices.clone();
                indices.remove(p);
                cur = Self { indices, rows };
            } else {
                p += 1;
            }
        }
        cur
    }
}

impl PartialEq for FreeElement {
    fn eq(&self, other: &Self) -> bool {
        if self.indices == other.indices {
            return self.rows == other.rows;
        }
        let (a, b) = (self.reduce(), other.reduce());
        a.indices == b.indices && a.rows == b.rows
    }
}

impl Eq for FreeElement {}

fn encode(sv: &SignVector) -> u64 {
    sv.entries()
        .iter()
        .enumerate()
        .map(|(p, e)| u64::from(e.1 == Sign::Plus) << p)
        .sum()
}

/// Moves bit `order[k]` of `r` to bit `k`.
fn permute(r: u64, order: &[usize]) -> u64 {
    order.iter().enumerate().map(|(k, &p)| (r >> p & 1) << k).sum()
}

/// Union of particles over varying index sets, expressed over the union of
/// all indices.
pub fn canonical_expand(parts: &[SignVector]) -> Result<FreeElement> {
    let mut indices: Vec<u32> = parts.iter().flat_map(|p| p.indices()).collect();
    indices.sort();
    indices.dedup();
    let mut out = FreeElement::new(indices.clone(), [])?;
    for p in parts {
        let refined = FreeElement::particle(p)?.refine(&indices)?;
        out.rows.extend(refined.rows);
    }
    Ok(out)
}
