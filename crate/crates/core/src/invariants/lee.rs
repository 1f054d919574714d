//! Lee's deformation and the Rasmussen invariant.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::frobenius::{lee_comultiply, lee_multiply};
use crate::algebra::Label;
use crate::cube::{even_edge_map, sign_after, Cube, Generator};
use crate::diagram::{PlanarDiagram, State};
use crate::error::{Error, Result};
use crate::linalg::{GradedMatrices, Integers, Rationals, Reducer, SparseMatrix};

/// Chain complex with integer entries, read over ℚ, filtered by q.
/// `diffs[k]` maps degree `lo + k` to `lo + k + 1`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub lo: i32,
    pub gens: Vec<Vec<Generator>>,
    pub q: Vec<Vec<i32>>,
    pub diffs: Vec<SparseMatrix>,
}

/// Lee's extra terms along one edge: m′(X ⊗ X) = 1 and Δ′(X) = 1 ⊗ 1.
fn lee_edge_terms(cube: &Cube, s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>) {
    let t = s | 1 << x;
    let a = cube.circle_at(s, x, 0);
    let b = cube.circle_at(s, x, 2);
    let phi = cube.transfer(s, t);
    let mut base = 0u64;
    for k in (0..64).filter(|&k| label >> k & 1 == 1 && k != a && k != b) {
        base |= 1 << phi[k as usize];
    }
    let la = Label::from_bit(label >> a);
    if a != b {
        if let Some(l) = lee_multiply(la, Label::from_bit(label >> b)) {
            out.push((base | l.bit() << phi[a as usize], 1));
        }
    } else {
        let (c1, c2) = (cube.circle_at(t, x, 0), cube.circle_at(t, x, 1));
        for &(l1, l2) in lee_comultiply(la) {
            out.push((base | l1.bit() << c1 | l2.bit() << c2, 1));
        }
    }
}

/// The total complex d + d′ of Lee's deformation, with every generator's
/// q-degree. Fails if (d + d′)² ≠ 0.
pub fn build_lee_complex(d: &PlanarDiagram) -> Result<FilteredComplex> {
    let cube = Cube::new(d)?;
    let n = cube.n;
    let lo = (d.writhe() - n as i32) / 2;
    let mut gens: Vec<Vec<Generator>> = vec![Vec::new(); n + 1];
    let mut q: Vec<Vec<i32>> = vec![Vec::new(); n + 1];
    let mut offset = vec![0u32; 1 << n];
    for s in 0..1u64 << n {
        let r = s.count_ones() as usize;
        offset[s as usize] = gens[r].len() as u32;
        let c = cube.circle_count(s);
        let (_, j) = cube.gradings(s);
        for label in 0..1u64 << c {
            gens[r].push(Generator { state: State(s), label });
            q[r].push(j + c as i32 - 2 * label.count_ones() as i32);
        }
    }
    let diffs: Vec<SparseMatrix> = (0..n)
        .into_par_iter()
        .map(|r| {
            let mut triplets = Vec::new();
            let mut out = Vec::new();
            for (col, g) in gens[r].iter().enumerate() {
                let s = g.state.0;
                for x in (0..n).filter(|&x| s >> x & 1 == 0) {
                    out.clear();
                    even_edge_map(&cube, s, x, g.label, &mut out);
                    lee_edge_terms(&cube, s, x, g.label, &mut out);
                    let sign = sign_after(s, x);
                    let t = s | 1 << x;
                    for &(l, v) in &out {
                        triplets.push((offset[t as usize] + l as u32, col as u32, v * sign));
                    }
                }
            }
            SparseMatrix::from_triplets(gens[r + 1].len(), gens[r].len(), triplets)
        })
        .collect();
    let c = FilteredComplex { lo, gens, q, diffs };
    c.verify()?;
    Ok(c)
}

impl FilteredComplex {
    /// Checks (d + d′)² = 0. An entry of the square joining generators
    /// whose q-degrees differ by 0, 4 or 8 belongs to d², dd′ + d′d or d′²
    /// respectively, so vanishing of the square is vanishing of all three.
    pub fn verify(&self) -> Result<()> {
        for k in 0..self.diffs.len().saturating_sub(1) {
            let prod = self.diffs[k + 1]
                .checked_mul(&self.diffs[k])
                .ok_or_else(|| Error::LeeStructure("overflow squaring the differential".into()))?;
            if let Some(&(r, c, v)) = prod.entries().first() {
                let shift = self.q[k + 2][r as usize] - self.q[k][c as usize];
                let part = match shift {
                    0 => "d²",
                    4 => "dd′ + d′d",
                    8 => "d′²",
                    _ => "a term of unexpected degree",
                };
                return Err(Error::LeeStructure(format!(
                    "{part} ≠ 0 in degree {}: entry {v} at ({r}, {c})",
                    self.lo + k as i32
                )));
            }
        }
        Ok(())
    }

    fn matrices(&self) -> GradedMatrices {
        GradedMatrices { lo: self.lo, sizes: self.gens.iter().map(Vec::len).collect(), diffs: self.diffs.clone() }
    }

    /// Dimension of the total homology in each degree.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let m = self.matrices();
        let mut red = Reducer::new(&Integers, &m);
        red.run(&|_, _, _| true);
        let m = red.result();
        let mut red = Reducer::new(&Rationals, &m);
        red.run(&|_, _, _| true);
        red.survivors()
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(k, s)| (self.lo + k as i32, s.len()))
            .collect()
    }

    /// A smaller filtered complex with the same filtered homotopy type:
    /// only entries between generators of equal q-degree are cancelled,
    /// first the unit ones over ℤ, then the rest over ℚ. Returns the
    /// matrices of degrees −1 → 0 → 1 over ℚ and the q-degrees in degree 0.
    fn collapse_around_zero(&self) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<i32>) {
        let m = self.matrices();
        let lo = self.lo;
        let q0 = &self.q;
        let mut red = Reducer::new(&Integers, &m);
        red.run(&|deg, r, c| {
            let k = (deg - lo) as usize;
            q0[k + 1][r as usize] == q0[k][c as usize]
        });
        let surv = red.survivors();
        let q1: Vec<Vec<i32>> =
            surv.iter().enumerate().map(|(k, s)| s.iter().map(|&g| q0[k][g as usize]).collect()).collect();
        let m = red.result();
        let mut red = Reducer::new(&Rationals, &m);
        red.run(&|deg, r, c| {
            let k = (deg - lo) as usize;
            q1[k + 1][r as usize] == q1[k][c as usize]
        });
        let surv = red.survivors();
        let q2: Vec<Vec<i32>> =
            surv.iter().enumerate().map(|(k, s)| s.iter().map(|&g| q1[k][g as usize]).collect()).collect();
        let entries = red.entries();
        let k0 = (-lo) as usize;
        let dense = |k: usize| -> Vec<Vec<BigRational>> {
            let (rows, cols) = (surv[k + 1].len(), surv[k].len());
            let mut a = vec![vec![BigRational::zero(); cols]; rows];
            for (r, c, v) in &entries[k] {
                a[*r as usize][*c as usize] = v.clone();
            }
            a
        };
        let before = if k0 > 0 { dense(k0 - 1) } else { vec![vec![]; surv[k0].len()] };
        let after = if k0 < self.diffs.len() { dense(k0) } else { Vec::new() };
        (before, after, q2[k0].clone())
    }
}

/// Row-reduces in place; returns the pivot columns.
fn echelon(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][c].recip();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[row].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * p;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    pivots
}

/// Rank of the span of `vectors`.
fn span_rank(vectors: &[Vec<BigRational>]) -> usize {
    echelon(&mut vectors.to_vec()).len()
}

/// Basis of the kernel of `a` among vectors supported on `allowed`
/// columns, as vectors of full length.
fn kernel_on(a: &[Vec<BigRational>], allowed: &[usize], width: usize) -> Vec<Vec<BigRational>> {
    let mut sub: Vec<Vec<BigRational>> = a.iter().map(|row| allowed.iter().map(|&c| row[c].clone()).collect()).collect();
    let pivots = echelon(&mut sub);
    let mut basis = Vec::new();
    for f in (0..allowed.len()).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); width];
        v[allowed[f]] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[allowed[p]] = -sub[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rasmussen's s: the mean q-degree of the two generators of Lee homology
/// in degree 0, located by the ranks r_j of H⁰(F_j) → H⁰ where F_j is
/// spanned by generators of q-degree at least j.
pub fn rasmussen_s(d: &PlanarDiagram) -> Result<i32> {
    if d.component_count() != 1 {
        return Err(Error::NotAKnot(d.component_count()));
    }
    let c = build_lee_complex(d)?;
    let (before, after, q) = c.collapse_around_zero();
    let width = q.len();
    let boundaries: Vec<Vec<BigRational>> =
        (0..before.first().map_or(0, Vec::len)).map(|k| before.iter().map(|row| row[k].clone()).collect()).collect();
    let b_rank = span_rank(&boundaries);
    let all: Vec<usize> = (0..width).collect();
    let cycles = kernel_on(&after, &all, width);
    let total = cycles.len() - b_rank;
    if total != 2 {
        return Err(Error::LeeStructure(format!("Lee homology in degree 0 has dimension {total}, expected 2")));
    }
    let mut levels: Vec<i32> = q.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut s_max = None;
    let mut s_min = None;
    for &j in levels.iter().rev() {
        let allowed: Vec<usize> = (0..width).filter(|&k| q[k] >= j).collect();
        let mut span = kernel_on(&after, &allowed, width);
        span.extend(boundaries.iter().cloned());
        let r = span_rank(&span) - b_rank;
        if r >= 1 && s_max.is_none() {
            s_max = Some(j);
        }
        if r == 2 {
            s_min = Some(j);
            break;
        }
    }
    let (Some(hi), Some(lo)) = (s_max, s_min) else {
        return Err(Error::LeeStructure("filtration sweep did not reach rank 2".into()));
    };
    if hi - lo != 2 {
        return Err(Error::LeeStructure(format!("generators at q = {lo} and {hi} are not 2 apart")));
    }
    Ok((hi + lo) / 2)
}
