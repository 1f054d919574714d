//! Homology-preserving elimination of unit matrix entries.
//!
//! Cancelling a unit entry u = d(a)_b between generators a ∈ Cᵏ and
//! b ∈ Cᵏ⁺¹ removes both, replaces the differential Cᵏ → Cᵏ⁺¹ by
//! d − d(·)_{·,a}·u⁻¹·d(·)_{b,·}, and leaves all other maps restricted.

use std::collections::BTreeMap;

use super::{CoeffRing, Integers, PrimeField, Ring, SparseMatrix};
use crate::cube::{ChainComplex, QBlock};

/// Chain groups of consecutive degrees `lo, lo + 1, …` and the
/// differentials between them; `diffs[k]` maps degree `lo + k` to
/// `lo + k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrices {
    pub lo: i32,
    pub sizes: Vec<usize>,
    pub diffs: Vec<SparseMatrix>,
}

type Row<E> = Vec<(u32, E)>;

/// Incremental eliminator over a coefficient ring.
pub struct Reducer<'r, R: CoeffRing> {
    ring: &'r R,
    lo: i32,
    alive: Vec<Vec<bool>>,
    rows: Vec<Vec<Row<R::E>>>,
    cols: Vec<Vec<Vec<u32>>>,
}

fn get<E>(row: &Row<E>, c: u32) -> Option<&E> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

impl<'r, R: CoeffRing> Reducer<'r, R> {
    pub fn new(ring: &'r R, m: &GradedMatrices) -> Self {
        assert_eq!(m.diffs.len() + 1, m.sizes.len().max(1));
        let alive = m.sizes.iter().map(|&n| vec![true; n]).collect();
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        for (k, d) in m.diffs.iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (m.sizes[k + 1], m.sizes[k]));
            let mut rk: Vec<Row<R::E>> = vec![Vec::new(); d.rows()];
            let mut ck: Vec<Vec<u32>> = vec![Vec::new(); d.cols()];
            for &(r, c, v) in d.entries() {
                let e = ring.from_i64(v);
                if !ring.is_zero(&e) {
                    rk[r as usize].push((c, e));
                    ck[c as usize].push(r);
                }
            }
            rows.push(rk);
            cols.push(ck);
        }
        Reducer { ring, lo: m.lo, alive, rows, cols }
    }

    /// Cancel entry (b, a) of matrix `k` if it is a unit. Returns false
    /// when it is not, or when an update would overflow.
    fn eliminate(&mut self, k: usize, b: u32, a: u32) -> bool {
        let ring = self.ring;
        let Some(u) = get(&self.rows[k][b as usize], a) else { return false };
        let Some(inv) = ring.unit_inverse(u) else { return false };
        let pivot_row = std::mem::take(&mut self.rows[k][b as usize]);
        let others: Vec<u32> = std::mem::take(&mut self.cols[k][a as usize]);
        let mut updates: Vec<(u32, Row<R::E>, Vec<u32>)> = Vec::new();
        for &b2 in &others {
            if b2 == b || !self.alive[k + 1][b2 as usize] {
                continue;
            }
            let row = &self.rows[k][b2 as usize];
            let Some(v) = get(row, a) else { continue };
            let Some(factor) = ring.mul(v, &inv) else {
                return self.abort(k, b, a, pivot_row, others);
            };
            let mut added = Vec::new();
            let mut out = Vec::with_capacity(row.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < pivot_row.len() {
                let ci = row.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    out.push(row[i].clone());
                    i += 1;
                    continue;
                }
                let Some(prod) = ring.mul(&factor, &pivot_row[j].1) else {
                    return self.abort(k, b, a, pivot_row, others);
                };
                let base = if ci == cj { row[i].1.clone() } else { ring.from_i64(0) };
                let Some(val) = ring.sub(&base, &prod) else {
                    return self.abort(k, b, a, pivot_row, others);
                };
                if !ring.is_zero(&val) {
                    if ci != cj {
                        added.push(cj);
                    }
                    out.push((cj, val));
                }
                if ci == cj {
                    i += 1;
                }
                j += 1;
            }
            updates.push((b2, out, added));
        }
        for (b2, row, added) in updates {
            for c in added {
                self.cols[k][c as usize].push(b2);
            }
            self.rows[k][b2 as usize] = row;
        }
        self.alive[k][a as usize] = false;
        self.alive[k + 1][b as usize] = false;
        // generator a no longer receives anything from degree k − 1
        if k > 0 {
            self.rows[k - 1][a as usize].clear();
        }
        // generator b no longer maps into degree k + 2
        if k + 1 < self.rows.len() {
            for r in std::mem::take(&mut self.cols[k + 1][b as usize]) {
                let row = &mut self.rows[k + 1][r as usize];
                if let Ok(p) = row.binary_search_by_key(&b, |e| e.0) {
                    row.remove(p);
                }
            }
        }
        true
    }

    fn abort(&mut self, k: usize, b: u32, a: u32, pivot_row: Row<R::E>, others: Vec<u32>) -> bool {
        self.rows[k][b as usize] = pivot_row;
        self.cols[k][a as usize] = others;
        false
    }

    fn column_len(&mut self, k: usize, a: u32) -> usize {
        let rows = &self.rows[k];
        let alive = &self.alive[k + 1];
        let col = &mut self.cols[k][a as usize];
        col.sort_unstable();
        col.dedup();
        col.retain(|&r| alive[r as usize] && get(&rows[r as usize], a).is_some());
        col.len()
    }

    /// Cancel unit entries for which `allow(degree, row, col)` holds,
    /// cheapest (least fill-in) first. Returns the number of cancellations.
    pub fn run(&mut self, allow: &dyn Fn(i32, u32, u32) -> bool) -> usize {
        let mut total = 0;
        for threshold in [0usize, 1, 4, 16, 64, usize::MAX] {
            loop {
                let mut done = 0;
                for k in 0..self.rows.len() {
                    for b in 0..self.rows[k].len() as u32 {
                        loop {
                            let row = &self.rows[k][b as usize];
                            if row.is_empty() {
                                break;
                            }
                            let len = row.len();
                            let cands: Vec<u32> = row
                                .iter()
                                .filter(|(a, v)| {
                                    self.ring.unit_inverse(v).is_some() && allow(self.lo + k as i32, b, *a)
                                })
                                .map(|(a, _)| *a)
                                .collect();
                            let mut picked = None;
                            for a in cands {
                                let cost = (len - 1).saturating_mul(self.column_len(k, a).saturating_sub(1));
                                if cost <= threshold {
                                    picked = Some(a);
                                    break;
                                }
                            }
                            match picked {
                                Some(a) if self.eliminate(k, b, a) => done += 1,
                                _ => break,
                            }
                        }
                    }
                }
                total += done;
                if done == 0 {
                    break;
                }
            }
        }
        total
    }

    /// Surviving generators of each degree, as original indices.
    pub fn survivors(&self) -> Vec<Vec<u32>> {
        self.alive
            .iter()
            .map(|a| a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as u32).collect())
            .collect()
    }

    /// The reduced differentials with entries in the ring.
    pub fn entries(&self) -> Vec<Vec<(u32, u32, R::E)>> {
        let index: Vec<Vec<u32>> = self
            .alive
            .iter()
            .map(|a| {
                let mut n = 0;
                a.iter()
                    .map(|&x| {
                        let i = if x { n } else { u32::MAX };
                        n += x as u32;
                        i
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for k in 0..self.rows.len() {
            let mut t = Vec::new();
            for (b, row) in self.rows[k].iter().enumerate() {
                if !self.alive[k + 1][b] {
                    continue;
                }
                for (a, v) in row {
                    if self.alive[k][*a as usize] {
                        t.push((index[k + 1][b], index[k][*a as usize], v.clone()));
                    }
                }
            }
            out.push(t);
        }
        out
    }

    /// The reduced complex; panics if an entry does not fit in `i64`.
    pub fn result(&self) -> GradedMatrices {
        let surv = self.survivors();
        let sizes: Vec<usize> = surv.iter().map(Vec::len).collect();
        let diffs = self
            .entries()
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                let t = t
                    .into_iter()
                    .map(|(r, c, v)| (r, c, self.ring.to_i64(&v).expect("reduced entry exceeds 64 bits")))
                    .collect();
                SparseMatrix::from_triplets(sizes[k + 1], sizes[k], t)
            })
            .collect();
        GradedMatrices { lo: self.lo, sizes, diffs }
    }
}

impl GradedMatrices {
    /// Degree-ordered view of one q-block.
    pub fn from_block(block: &QBlock) -> Option<GradedMatrices> {
        let lo = *block.groups.keys().next()?;
        let hi = *block.groups.keys().next_back()?;
        let sizes: Vec<usize> = (lo..=hi).map(|i| block.groups.get(&i).map_or(0, Vec::len)).collect();
        let diffs = (lo..hi)
            .map(|i| {
                block
                    .diffs
                    .get(&i)
                    .cloned()
                    .unwrap_or_else(|| SparseMatrix::zeros(sizes[(i - lo + 1) as usize], sizes[(i - lo) as usize]))
            })
            .collect();
        Some(GradedMatrices { lo, sizes, diffs })
    }
}

fn reduce_block<R: CoeffRing>(ring: &R, block: &QBlock) -> QBlock {
    let Some(m) = GradedMatrices::from_block(block) else { return block.clone() };
    let mut red = Reducer::new(ring, &m);
    red.run(&|_, _, _| true);
    let surv = red.survivors();
    let out = red.result();
    let mut groups = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (k, s) in surv.iter().enumerate() {
        let i = m.lo + k as i32;
        if s.is_empty() {
            continue;
        }
        let gens = &block.groups[&i];
        groups.insert(i, s.iter().map(|&g| gens[g as usize]).collect());
    }
    for (k, d) in out.diffs.into_iter().enumerate() {
        let i = m.lo + k as i32;
        if groups.contains_key(&i) && groups.contains_key(&(i + 1)) {
            diffs.insert(i, d);
        }
    }
    QBlock { groups, diffs }
}

/// Cancel all unit entries block by block. Over ℤ and ℚ only ±1 are
/// cancelled, so integral torsion is preserved; over 𝔽ₚ every nonzero
/// entry is a unit.
pub fn reduce_complex(c: &ChainComplex) -> ChainComplex {
    use rayon::prelude::*;
    let blocks: Vec<(i32, QBlock)> = c
        .blocks
        .par_iter()
        .map(|(&j, b)| {
            let r = match c.ring {
                Ring::Z | Ring::Q => reduce_block(&Integers, b),
                Ring::Fp(p) => reduce_block(&PrimeField { p }, b),
            };
            (j, r)
        })
        .collect();
    ChainComplex { ring: c.ring, variant: c.variant, blocks: blocks.into_iter().filter(|(_, b)| !b.groups.is_empty()).collect() }
}
