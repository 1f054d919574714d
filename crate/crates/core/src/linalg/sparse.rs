use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{is_prime, CoeffRing, PrimeField};
use crate::error::{Error, Result};

/// Integer matrix stored as `(row, col, value)` triplets sorted by
/// position, without zeros or duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, i64)>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: Vec::new() }
    }

    /// Duplicate positions are summed; indices must be in range.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(u32, u32, i64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut entries: Vec<(u32, u32, i64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            assert!((r as usize) < rows && (c as usize) < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => {
                    last.2 = last.2.checked_add(v).expect("matrix entry overflow");
                }
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| e.2 != 0);
        SparseMatrix { rows, cols, entries }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let t = m
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r as u32, c as u32, v)))
            .collect();
        Self::from_triplets(rows, cols, t)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            m[r as usize][c as usize] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(u32, u32, i64)] {
        &self.entries
    }

    pub fn get(&self, r: u32, c: u32) -> i64 {
        self.entries
            .binary_search_by_key(&(r, c), |&(a, b, _)| (a, b))
            .map_or(0, |k| self.entries[k].2)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect())
    }

    /// Rows as sparse vectors.
    pub fn row_vectors(&self) -> Vec<Vec<(u32, i64)>> {
        let mut out = vec![Vec::new(); self.rows];
        for &(r, c, v) in &self.entries {
            out[r as usize].push((c, v));
        }
        out
    }

    /// `self * other`, or `None` on overflow.
    pub fn checked_mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let rhs = other.row_vectors();
        let mut acc: BTreeMap<(u32, u32), i128> = BTreeMap::new();
        for &(r, k, v) in &self.entries {
            for &(c, w) in &rhs[k as usize] {
                *acc.entry((r, c)).or_default() += v as i128 * w as i128;
            }
        }
        let mut t = Vec::with_capacity(acc.len());
        for ((r, c), v) in acc {
            if v != 0 {
                t.push((r, c, i64::try_from(v).ok()?));
            }
        }
        Some(SparseMatrix { rows: self.rows, cols: other.cols, entries: t })
    }

    /// Entries reduced into `0..p`, zeros dropped.
    pub fn reduce_mod(&self, p: u64) -> SparseMatrix {
        let f = PrimeField { p };
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (r, c, f.from_i64(v) as i64))
            .filter(|e| e.2 != 0)
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Submatrix on the given rows and columns, renumbered in order.
    pub fn select(&self, rows: &[u32], cols: &[u32]) -> SparseMatrix {
        let mut rmap = vec![u32::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            rmap[r as usize] = k as u32;
        }
        let mut cmap = vec![u32::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            cmap[c as usize] = k as u32;
        }
        let entries = self
            .entries
            .iter()
            .filter_map(|&(r, c, v)| {
                let (nr, nc) = (rmap[r as usize], cmap[c as usize]);
                (nr != u32::MAX && nc != u32::MAX).then_some((nr, nc, v))
            })
            .collect();
        SparseMatrix::from_triplets(rows.len(), cols.len(), entries)
    }
}

/// Rank over 𝔽ₚ by sparse row echelon form.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let f = PrimeField { p };
    // pivot column -> normalized pivot row (leading entry 1)
    let mut pivots: BTreeMap<u32, Vec<(u32, u64)>> = BTreeMap::new();
    for row in m.row_vectors() {
        let mut row: Vec<(u32, u64)> =
            row.into_iter().map(|(c, v)| (c, f.from_i64(v))).filter(|e| e.1 != 0).collect();
        while let Some(&(lead, v)) = row.first() {
            match pivots.get(&lead) {
                Some(prow) => row = axpy(&f, &row, v, prow),
                None => {
                    let inv = f.unit_inverse(&v).expect("nonzero in a field");
                    let normalized = row.iter().map(|&(c, x)| (c, f.mul(&x, &inv).unwrap())).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    Ok(pivots.len())
}

/// `row - k * other` over 𝔽ₚ for sorted sparse rows.
fn axpy(f: &PrimeField, row: &[(u32, u64)], k: u64, other: &[(u32, u64)]) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < other.len() {
        let ca = row.get(a).map_or(u32::MAX, |e| e.0);
        let cb = other.get(b).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(row[a]);
            a += 1;
        } else {
            let prod = f.mul(&k, &other[b].1).unwrap();
            let base = if ca == cb { row[a].1 } else { 0 };
            let v = f.sub(&base, &prod).unwrap();
            if v != 0 {
                out.push((cb, v));
            }
            if ca == cb {
                a += 1;
            }
            b += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_mod_p() {
        let m = SparseMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(rank_mod_p(&m, 2).unwrap(), 0);
        assert_eq!(rank_mod_p(&m, 3).unwrap(), 2);
        let id = SparseMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        for p in [2, 3, 5, 101] {
            assert_eq!(rank_mod_p(&id, p).unwrap(), 3);
        }
        assert!(matches!(rank_mod_p(&m, 4), Err(Error::NotPrime(4))));
        let dep = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank_mod_p(&dep, 7).unwrap(), 2);
    }

    #[test]
    fn construction_and_products() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1), (0, 0, -1), (1, 0, 2), (1, 0, 3)]);
        assert_eq!(m.entries(), &[(1, 0, 5)]);
        let a = SparseMatrix::from_dense(&[vec![1, 1], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1, -1], vec![0, 1]]);
        assert_eq!(a.checked_mul(&b).unwrap().to_dense(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(a.transpose().get(1, 0), 1);
        assert_eq!(a.select(&[1], &[0, 1]).to_dense(), vec![vec![0, 1]]);
    }
}
