use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::SparseMatrix;

/// Integer arithmetic for elimination; `None` signals overflow.
trait SnfInt: Clone + Debug + PartialEq + Sized {
    fn from_i64(v: i64) -> Self;
    fn nil(&self) -> bool;
    fn lt_abs(&self, other: &Self) -> bool;
    fn is_unit(&self) -> bool;
    /// Quotient q and remainder r with a = q·b + r and |r| ≤ |b|/2.
    fn div_rem_near(a: &Self, b: &Self) -> Option<(Self, Self)>;
    /// a − q·b
    fn mul_sub(a: &Self, q: &Self, b: &Self) -> Option<Self>;
}

impl SnfInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn nil(&self) -> bool {
        *self == 0
    }
    fn lt_abs(&self, other: &Self) -> bool {
        self.unsigned_abs() < other.unsigned_abs()
    }
    fn is_unit(&self) -> bool {
        self.unsigned_abs() == 1
    }
    fn div_rem_near(a: &Self, b: &Self) -> Option<(Self, Self)> {
        let (mut q, mut r) = (a.checked_div_euclid(*b)?, a.checked_rem_euclid(*b)?);
        if r.checked_mul(2)? > b.checked_abs()? {
            r -= b.abs();
            q = q.checked_add(b.signum())?;
        }
        Some((q, r))
    }
    fn mul_sub(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        a.checked_sub(q.checked_mul(*b)?)
    }
}

impl SnfInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn lt_abs(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn div_rem_near(a: &Self, b: &Self) -> Option<(Self, Self)> {
        let (mut q, mut r) = a.div_mod_floor(b);
        // make 0 ≤ r < |b|
        if r.is_negative() {
            r += b.abs();
            q -= b.signum();
        }
        if (&r * 2u32) > b.abs() {
            r -= b.abs();
            q += b.signum();
        }
        Some((q, r))
    }
    fn mul_sub(a: &Self, q: &Self, b: &Self) -> Option<Self> {
        Some(a - q * b)
    }
}

type Row<T> = Vec<(u32, T)>;

fn row_get<T>(row: &Row<T>, c: u32) -> Option<&T> {
    row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
}

/// `row − q·other`; new columns are reported through `added`.
fn row_axpy<T: SnfInt>(row: &Row<T>, q: &T, other: &Row<T>, added: &mut Vec<u32>) -> Option<Row<T>> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < other.len() {
        let ca = row.get(a).map_or(u32::MAX, |e| e.0);
        let cb = other.get(b).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(row[a].clone());
            a += 1;
        } else if cb < ca {
            let v = T::mul_sub(&T::from_i64(0), q, &other[b].1)?;
            if !v.nil() {
                added.push(cb);
                out.push((cb, v));
            }
            b += 1;
        } else {
            let v = T::mul_sub(&row[a].1, q, &other[b].1)?;
            if !v.nil() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    Some(out)
}

/// Diagonalize by unimodular row and column operations; returns the
/// nonzero diagonal entries (not yet normalized), or `None` on overflow.
fn diagonalize<T: SnfInt>(m: &SparseMatrix) -> Option<Vec<T>> {
    let mut rows: Vec<Option<Row<T>>> = m
        .row_vectors()
        .into_iter()
        .map(|r| Some(r.into_iter().map(|(c, v)| (c, T::from_i64(v))).collect()))
        .collect();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    let mut col_count = vec![0usize; m.cols()];
    for &(r, c, _) in m.entries() {
        col_rows[c as usize].push(r);
        col_count[c as usize] += 1;
    }
    let mut diag = Vec::new();
    loop {
        // pivot: smallest magnitude, then smallest fill estimate
        let mut best: Option<(u32, u32, usize)> = None;
        let mut best_val: Option<&T> = None;
        for (r, row) in rows.iter().enumerate() {
            let Some(row) = row else { continue };
            for (c, v) in row {
                let cost = (row.len() - 1) * col_count[*c as usize].saturating_sub(1);
                let better = match best_val {
                    None => true,
                    Some(bv) => v.lt_abs(bv) || (!bv.lt_abs(v) && cost < best.unwrap().2),
                };
                if better {
                    best = Some((r as u32, *c, cost));
                    best_val = Some(v);
                }
            }
            if best_val.is_some_and(|v| v.is_unit()) && best.unwrap().2 == 0 {
                break;
            }
        }
        let Some((mut pr, mut pc, _)) = best else { break };
        loop {
            // clear column pc below/above the pivot
            let mut moved = false;
            let candidates = std::mem::take(&mut col_rows[pc as usize]);
            let mut keep = Vec::with_capacity(candidates.len());
            for &r2 in &candidates {
                if r2 == pr || rows[r2 as usize].is_none() {
                    continue;
                }
                let Some(v2) = row_get(rows[r2 as usize].as_ref().unwrap(), pc).cloned() else { continue };
                let pv = row_get(rows[pr as usize].as_ref().unwrap(), pc).cloned().unwrap();
                let (q, rem) = T::div_rem_near(&v2, &pv)?;
                let mut added = Vec::new();
                let new_row = row_axpy(rows[r2 as usize].as_ref().unwrap(), &q, rows[pr as usize].as_ref().unwrap(), &mut added)?;
                for &c in &added {
                    col_rows[c as usize].push(r2);
                }
                rows[r2 as usize] = Some(new_row);
                if !rem.nil() {
                    keep.push(r2);
                    moved = true;
                    pr = r2;
                    break;
                }
            }
            // restore the index, including rows not yet visited
            let mut idx = candidates;
            idx.extend(keep);
            idx.push(pr);
            idx.sort_unstable();
            idx.dedup();
            idx.retain(|&r| rows[r as usize].as_ref().is_some_and(|row| row_get(row, pc).is_some()));
            col_rows[pc as usize] = idx;
            if moved {
                continue;
            }
            // column pc now holds only the pivot; inspect the pivot row
            let prow = rows[pr as usize].as_ref().unwrap();
            let pv = row_get(prow, pc).cloned().unwrap();
            let mut bad = None;
            for (c2, v2) in prow {
                if *c2 == pc {
                    continue;
                }
                let (_, rem) = T::div_rem_near(v2, &pv)?;
                if !rem.nil() {
                    bad = Some((*c2, rem));
                    break;
                }
            }
            match bad {
                Some((c2, rem)) => {
                    // column c2 −= q·column pc touches only the pivot row
                    let row = rows[pr as usize].as_mut().unwrap();
                    let k = row.binary_search_by_key(&c2, |e| e.0).unwrap();
                    row[k].1 = rem;
                    pc = c2;
                }
                None => {
                    let row = rows[pr as usize].take().unwrap();
                    for (c, _) in &row {
                        col_count[*c as usize] = col_count[*c as usize].saturating_sub(1);
                    }
                    col_rows[pc as usize].clear();
                    diag.push(pv);
                    break;
                }
            }
        }
    }
    Some(diag)
}

/// Turn a list of nonzero diagonal entries into invariant factors
/// d₁ | d₂ | … (all positive).
pub fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut ones = 0;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in diag {
        let d = d.abs();
        if d.is_zero() {
            continue;
        }
        if d.is_one() {
            ones += 1;
        } else {
            rest.push(d);
        }
    }
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            let l = &rest[i] / &g * &rest[j];
            rest[i] = g;
            rest[j] = l;
        }
    }
    let mut out = vec![BigInt::one(); ones];
    // gcd steps may produce further units
    out.extend(rest);
    out.sort();
    out
}

/// Nonzero invariant factors of `m` in divisibility order. The number of
/// factors is the rank of `m`.
pub fn smith_normal_form(m: &SparseMatrix) -> Vec<BigInt> {
    let diag = match diagonalize::<i128>(m) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => diagonalize::<BigInt>(m).expect("arbitrary precision cannot overflow"),
    };
    normalize_diagonal(diag)
}

/// Invariant factors greater than one, as machine integers.
pub fn invariant_factors(m: &SparseMatrix) -> (usize, Vec<u64>) {
    let f = smith_normal_form(m);
    let rank = f.len();
    let torsion = f
        .into_iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(d).expect("invariant factor exceeds 64 bits"))
        .collect();
    (rank, torsion)
}

/// Dense Smith form with transforms: `u · m · v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithTransforms {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Smith normal form of a dense matrix with unimodular transforms.
pub fn smith_with_transforms(m: &[Vec<i64>]) -> SmithTransforms {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);

    // row i ← row i − q·row k, mirrored in u
    fn row_op(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
        for x in [a, u] {
            let src = x[k].clone();
            for (e, s) in x[i].iter_mut().zip(src) {
                *e -= q * s;
            }
        }
    }
    fn col_op(a: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
        for m in [a, v] {
            for r in m.iter_mut() {
                let s = r[k].clone();
                r[j] -= q * s;
            }
        }
    }

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(a, u, v);
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for r in a.iter_mut().chain(v.iter_mut()) {
                r.swap(t, bj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_op(&mut a, &mut u, i, t, &q);
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_op(&mut a, &mut v, j, t, &q);
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offender {
                Some(i) => row_op(&mut a, &mut u, t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -x.clone();
            }
        }
    }
    finish(a, u, v)
}

fn finish(d: Vec<Vec<BigInt>>, u: Vec<Vec<BigInt>>, v: Vec<Vec<BigInt>>) -> SmithTransforms {
    SmithTransforms { u, d, v }
}
