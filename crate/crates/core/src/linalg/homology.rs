use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::reduce::GradedMatrices;
use super::{invariant_factors, rank_mod_p, Ring, SparseMatrix};
use crate::cube::{ChainComplex, QBlock};
use crate::error::{Error, Result};

/// One bigraded homology group: a free part and cyclic torsion summands
/// given by invariant factors d₁ | d₂ | … (all greater than one).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Torsion split into prime-power cyclic summands, e.g. 12 → 4, 3.
    pub fn primary_torsion(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &d in &self.torsion {
            let mut n = d;
            let mut p = 2;
            while p * p <= n {
                if n % p == 0 {
                    let mut q = 1;
                    while n % p == 0 {
                        n /= p;
                        q *= p;
                    }
                    out.push(q);
                }
                p += 1;
            }
            if n > 1 {
                out.push(n);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Bigraded homology: (i, j) → group. Zero groups are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub ring: Ring,
    #[serde(with = "entry_list")]
    entries: BTreeMap<(i32, i32), HomologyGroup>,
}

mod entry_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        i: i32,
        j: i32,
        rank: u64,
        torsion: Vec<u64>,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i32, i32), HomologyGroup>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> =
            m.iter().map(|(&(i, j), g)| Entry { i, j, rank: g.rank, torsion: g.torsion.clone() }).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(i32, i32), HomologyGroup>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.i, e.j), HomologyGroup { rank: e.rank, torsion: e.torsion })).collect())
    }
}

impl HomologyTable {
    pub fn new(ring: Ring) -> Self {
        HomologyTable { ring, entries: BTreeMap::new() }
    }

    pub fn from_entries(ring: Ring, entries: impl IntoIterator<Item = ((i32, i32), HomologyGroup)>) -> Self {
        let mut t = Self::new(ring);
        for ((i, j), g) in entries {
            t.insert(i, j, g);
        }
        t
    }

    pub fn insert(&mut self, i: i32, j: i32, g: HomologyGroup) {
        if g.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), g);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> HomologyGroup {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn rank(&self, i: i32, j: i32) -> u64 {
        self.entries.get(&(i, j)).map_or(0, |g| g.rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), &HomologyGroup)> {
        self.entries.iter().map(|(&k, g)| (k, g))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.entries.values().map(|g| g.rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|g| !g.torsion.is_empty())
    }

    /// Gradings (i, j) of nonzero groups, optionally ignoring torsion-only ones.
    pub fn support(&self, count_torsion: bool) -> Vec<(i32, i32)> {
        self.entries
            .iter()
            .filter(|(_, g)| g.rank > 0 || (count_torsion && !g.torsion.is_empty()))
            .map(|(&k, _)| k)
            .collect()
    }

    /// Same table with every j shifted by `dj`.
    pub fn shift_j(&self, dj: i32) -> Self {
        Self::from_entries(self.ring, self.entries.iter().map(|(&(i, j), g)| ((i, j + dj), g.clone())))
    }

    /// Direct sum of two tables over the same ring.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), g) in &other.entries {
            let mut h = out.get(i, j);
            h.rank += g.rank;
            h.torsion.extend(&g.torsion);
            h.torsion = normalize_torsion(&h.torsion);
            out.insert(i, j, h);
        }
        out
    }
}

/// Invariant-factor form of a finite abelian group given by cyclic orders.
pub fn normalize_torsion(orders: &[u64]) -> Vec<u64> {
    let diag = orders.iter().map(|&o| num_bigint::BigInt::from(o)).collect();
    super::normalize_diagonal(diag)
        .into_iter()
        .filter(|d| *d > num_bigint::BigInt::from(1))
        .map(|d| u64::try_from(d).expect("torsion order exceeds 64 bits"))
        .collect()
}

fn rank_and_torsion(m: &SparseMatrix, ring: Ring) -> (usize, Vec<u64>) {
    if m.is_zero() {
        return (0, Vec::new());
    }
    match ring {
        Ring::Z => invariant_factors(m),
        Ring::Q => (invariant_factors(m).0, Vec::new()),
        Ring::Fp(p) => (rank_mod_p(m, p).expect("ring primes are validated"), Vec::new()),
    }
}

/// Homology of one q-block as (i, group) pairs.
pub fn homology_of_block(ring: Ring, block: &QBlock) -> Vec<(i32, HomologyGroup)> {
    let Some(m) = GradedMatrices::from_block(block) else { return Vec::new() };
    let ranks: Vec<(usize, Vec<u64>)> = m.diffs.iter().map(|d| rank_and_torsion(d, ring)).collect();
    let mut out = Vec::new();
    for (k, &n) in m.sizes.iter().enumerate() {
        let outgoing = if k < ranks.len() { ranks[k].0 } else { 0 };
        let (incoming, torsion) = if k > 0 { (ranks[k - 1].0, ranks[k - 1].1.clone()) } else { (0, Vec::new()) };
        let g = HomologyGroup { rank: (n - outgoing - incoming) as u64, torsion };
        if !g.is_zero() {
            out.push((m.lo + k as i32, g));
        }
    }
    out
}

/// Homology of a bigraded complex, block by block.
pub fn homology(c: &ChainComplex) -> Result<HomologyTable> {
    if let Err(loc) = c.verify_d_squared() {
        return Err(Error::DSquaredNonZero(loc));
    }
    let parts: Vec<(i32, Vec<(i32, HomologyGroup)>)> =
        c.blocks.par_iter().map(|(&j, b)| (j, homology_of_block(c.ring, b))).collect();
    let mut t = HomologyTable::new(c.ring);
    for (j, groups) in parts {
        for (i, g) in groups {
            t.insert(i, j, g);
        }
    }
    Ok(t)
}
