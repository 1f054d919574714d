//! Cubes of resolutions and the chain complexes built on them.
//!
//! Generators are pairs (state, label). For the even complex the label is
//! a bitmask over the circles of the state, bit k set meaning circle k
//! carries X; for the odd complex it is the exterior monomial whose
//! variables are the set bits, in increasing circle order. Within a
//! q-block generators are ordered by state, then by label.

mod even;
mod odd;

pub(crate) use even::sign_after;
pub use even::{build_even_complex, edge_sign, even_edge_map, state_gradings};
pub use odd::{
    build_odd_complex, build_odd_complex_with, classify_face, default_arrows, odd_constraint, odd_edge_map,
    solve_edge_signs, ArrowChoice, Constraint, FaceType, OddCube, SignAssignment, ZeroFaceRule,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Laurent;
use crate::diagram::{PlanarDiagram, State};
use crate::error::{Error, Result};
use crate::linalg::{Ring, SparseMatrix};

/// Largest crossing count for which a cube is built.
pub const MAX_CUBE_CROSSINGS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Even,
    EvenReduced,
    Odd,
    OddReduced,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Even, Variant::EvenReduced, Variant::Odd, Variant::OddReduced];

    pub fn is_reduced(self) -> bool {
        matches!(self, Variant::EvenReduced | Variant::OddReduced)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Variant::Odd | Variant::OddReduced)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Even => "even",
            Variant::EvenReduced => "even-reduced",
            Variant::Odd => "odd",
            Variant::OddReduced => "odd-reduced",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s.trim())
            .ok_or_else(|| Error::UnknownVariant(s.trim().to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub state: State,
    pub label: u64,
}

/// The part of a complex in one q-degree. `diffs[i]` maps degree i to
/// degree i + 1, rows indexing `groups[i + 1]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QBlock {
    pub groups: BTreeMap<i32, Vec<Generator>>,
    pub diffs: BTreeMap<i32, SparseMatrix>,
}

impl QBlock {
    pub fn rank(&self, i: i32) -> usize {
        self.groups.get(&i).map_or(0, Vec::len)
    }
}

/// Bigraded chain complex with integer matrices, interpreted over `ring`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub ring: Ring,
    pub variant: Variant,
    pub blocks: BTreeMap<i32, QBlock>,
}

impl ChainComplex {
    /// Graded dimension of each chain group Cⁱ.
    pub fn graded_dims(&self) -> BTreeMap<i32, Laurent> {
        let mut out: BTreeMap<i32, Laurent> = BTreeMap::new();
        for (&j, b) in &self.blocks {
            for (&i, g) in &b.groups {
                out.entry(i).or_default().add_term([j], g.len() as i64);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.values().flat_map(|b| b.groups.values()).map(Vec::len).sum()
    }

    pub fn rank(&self, i: i32, j: i32) -> usize {
        self.blocks.get(&j).map_or(0, |b| b.rank(i))
    }

    /// Σ (−1)ⁱ q^j rank Cⁱʲ.
    pub fn euler_characteristic(&self) -> Laurent {
        let mut p = Laurent::zero();
        for (&j, b) in &self.blocks {
            for (&i, g) in &b.groups {
                p.add_term([j], if i.rem_euclid(2) == 0 { g.len() as i64 } else { -(g.len() as i64) });
            }
        }
        p
    }

    /// Checks dⁱ⁺¹ ∘ dⁱ = 0 exactly; on failure names the first offending
    /// (i, j) and matrix entry.
    pub fn verify_d_squared(&self) -> std::result::Result<(), String> {
        for (&j, b) in &self.blocks {
            for (&i, d) in &b.diffs {
                let Some(next) = b.diffs.get(&(i + 1)) else { continue };
                let prod = next.checked_mul(d).ok_or_else(|| format!("overflow at (i={i}, j={j})"))?;
                let prod = match self.ring {
                    Ring::Fp(p) => prod.reduce_mod(p),
                    _ => prod,
                };
                if let Some(&(r, c, v)) = prod.entries().first() {
                    let src = b.groups[&i][c as usize];
                    let dst = b.groups[&(i + 2)][r as usize];
                    return Err(format!(
                        "d² ≠ 0 at (i={i}, j={j}): state {:b} label {:b} → state {:b} label {:b} with coefficient {v}",
                        src.state.0, src.label, dst.state.0, dst.label
                    ));
                }
            }
        }
        Ok(())
    }

    /// The same integer matrices, read over `ring`.
    pub fn with_ring(&self, ring: Ring) -> ChainComplex {
        ChainComplex { ring, ..self.clone() }
    }
}

/// `map(s, x, label, out)` appends the signed image of generator (s, label)
/// along the edge at crossing `x`.
pub type EdgeMap<'a> = dyn Fn(u64, usize, u64, &mut Vec<(u64, i64)>) + Sync + 'a;

/// Circle decompositions of all states of a diagram.
pub struct Cube<'a> {
    pub diagram: &'a PlanarDiagram,
    pub n: usize,
    edges: usize,
    circles: Vec<u8>,
    counts: Vec<u8>,
    marked: Vec<u8>,
    has_mark: bool,
}

pub(crate) struct Binomials([[u64; 65]; 65]);

impl Binomials {
    pub(crate) fn new() -> Self {
        let mut t = [[0u64; 65]; 65];
        for n in 0..65 {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1].saturating_add(if k < n { t[n - 1][k] } else { 0 });
            }
        }
        Binomials(t)
    }

    pub(crate) fn get(&self, n: u32, k: i64) -> u64 {
        if k < 0 || k as u32 > n { 0 } else { self.0[n as usize][k as usize] }
    }

    /// Position of a k-subset among all k-subsets in increasing numeric order.
    pub(crate) fn rank(&self, mut label: u64) -> u64 {
        let mut r = 0;
        let mut t = 1;
        while label != 0 {
            let p = label.trailing_zeros();
            r += self.0[p as usize][t];
            t += 1;
            label &= label - 1;
        }
        r
    }
}

/// Remove bit `m`, shifting higher bits down.
pub(crate) fn compress(label: u64, m: u32) -> u64 {
    let low = label & ((1u64 << m) - 1);
    let high = (label >> (m + 1)) << m;
    low | high
}

/// Insert a set bit at position `m`.
pub(crate) fn expand(label: u64, m: u32) -> u64 {
    let low = label & ((1u64 << m) - 1);
    let high = (label >> m) << (m + 1);
    low | high | 1 << m
}

/// All k-subsets of `c` bits, increasing.
pub(crate) fn subsets(c: u32, k: u32) -> impl Iterator<Item = u64> {
    let first = if k == 0 { Some(0u64) } else if k > c { None } else { Some((1u64 << k) - 1) };
    let limit = 1u64 << c;
    std::iter::successors(first, move |&v| {
        if v == 0 {
            return None;
        }
        // Gosper's hack
        let t = v | (v - 1);
        let next = (t + 1) | (((!t & (!t).wrapping_neg()) - 1) >> (v.trailing_zeros() + 1));
        (next < limit).then_some(next)
    })
}

impl<'a> Cube<'a> {
    pub fn new(d: &'a PlanarDiagram) -> Result<Self> {
        let n = d.crossing_count();
        if n > MAX_CUBE_CROSSINGS {
            return Err(Error::TooManyCrossings(n));
        }
        let edges = d.edge_count();
        let states = 1usize << n;
        let per_state: Vec<(Vec<u8>, u8, u8)> = (0..states as u64)
            .into_par_iter()
            .map(|s| {
                let r = d.resolve_state(State(s)).expect("state within range");
                let circles = r.circle_of_edge.iter().map(|&c| c as u8).collect();
                (circles, r.circle_count as u8, r.marked_circle.unwrap_or(0) as u8)
            })
            .collect();
        let mut circles = Vec::with_capacity(states * edges);
        let mut counts = Vec::with_capacity(states);
        let mut marked = Vec::with_capacity(states);
        for (c, k, m) in per_state {
            circles.extend(c);
            counts.push(k);
            marked.push(m);
        }
        Ok(Cube { diagram: d, n, edges, circles, counts, marked, has_mark: d.base_point().is_some() })
    }

    pub fn circle_count(&self, s: u64) -> u32 {
        self.counts[s as usize] as u32
    }

    pub fn circle_of_edge(&self, s: u64, e: u32) -> u32 {
        self.circles[s as usize * self.edges + e as usize] as u32
    }

    pub fn circle_at(&self, s: u64, x: usize, slot: usize) -> u32 {
        self.circle_of_edge(s, self.diagram.crossings()[x].edges[slot])
    }

    pub fn marked(&self, s: u64) -> Option<u32> {
        self.has_mark.then(|| self.marked[s as usize] as u32)
    }

    /// Image in state `t` of each circle of state `s`, along shared edges.
    /// Circles merged by the change from `s` to `t` get the same image.
    pub fn transfer(&self, s: u64, t: u64) -> [u8; 64] {
        let mut phi = [0u8; 64];
        for e in 0..self.edges {
            phi[self.circles[s as usize * self.edges + e] as usize] = self.circles[t as usize * self.edges + e];
        }
        let loops = self.diagram.free_loops() as u32;
        let (cs, ct) = (self.circle_count(s) - loops, self.circle_count(t) - loops);
        for f in 0..loops {
            phi[(cs + f) as usize] = (ct + f) as u8;
        }
        phi
    }

    /// Homological and quantum degree of the state.
    pub fn gradings(&self, s: u64) -> (i32, i32) {
        state_gradings(self.diagram, State(s))
    }

    /// Range of q-degrees of the complex.
    pub fn q_range(&self, reduced: bool) -> (i32, i32) {
        let mut lo = i32::MAX;
        let mut hi = i32::MIN;
        for s in 0..1u64 << self.n {
            let (_, j) = self.gradings(s);
            let c = self.circle_count(s) as i32;
            lo = lo.min(j - c);
            hi = hi.max(j + c);
        }
        if reduced { (lo + 1, hi - 1) } else { (lo, hi) }
    }

    /// The q-block `q` of the complex whose edge maps are given by `map`:
    /// `map(s, x, label, out)` appends the signed image of generator
    /// (s, label) under the edge from s to s with bit x set.
    pub fn block(&self, q: i32, reduced: bool, map: &EdgeMap<'_>) -> QBlock {
        if reduced {
            assert!(self.has_mark, "reduced complex needs a base point");
        }
        let binom = Binomials::new();
        let states = 1u64 << self.n;
        let w = self.diagram.writhe();
        let base_i = (w - self.n as i32) / 2;
        // number of X factors (or monomial length) in state s at degree q
        let x_count = |s: u64| -> Option<u32> {
            let (_, js) = self.gradings(s);
            let c = self.circle_count(s) as i32;
            let twice = js + c + reduced as i32 - q;
            if twice.rem_euclid(2) != 0 {
                return None;
            }
            let k = twice / 2;
            let valid = if reduced { k >= 1 && k <= c } else { k >= 0 && k <= c };
            valid.then_some(k as u32)
        };
        let count_of = |s: u64, k: u32| -> u64 {
            let c = self.circle_count(s);
            if reduced { binom.get(c - 1, k as i64 - 1) } else { binom.get(c, k as i64) }
        };
        let mut offset = vec![u32::MAX; states as usize];
        let mut groups: BTreeMap<i32, Vec<Generator>> = BTreeMap::new();
        let mut by_degree: Vec<Vec<u64>> = vec![Vec::new(); self.n + 1];
        for s in 0..states {
            by_degree[s.count_ones() as usize].push(s);
        }
        for (r, states_r) in by_degree.iter().enumerate() {
            let mut gens = Vec::new();
            for &s in states_r {
                let Some(k) = x_count(s) else { continue };
                if count_of(s, k) == 0 {
                    continue;
                }
                offset[s as usize] = gens.len() as u32;
                let c = self.circle_count(s);
                if reduced {
                    let m = self.marked(s).unwrap();
                    gens.extend(subsets(c - 1, k - 1).map(|l| Generator { state: State(s), label: expand(l, m) }));
                } else {
                    gens.extend(subsets(c, k).map(|l| Generator { state: State(s), label: l }));
                }
            }
            if !gens.is_empty() {
                groups.insert(base_i + r as i32, gens);
            }
        }
        let index = |s: u64, label: u64| -> u32 {
            let local = if reduced { binom.rank(compress(label, self.marked(s).unwrap())) } else { binom.rank(label) };
            offset[s as usize] + local as u32
        };
        let mut diffs = BTreeMap::new();
        for r in 0..self.n {
            let i = base_i + r as i32;
            let (Some(src), Some(dst)) = (groups.get(&i), groups.get(&(i + 1))) else { continue };
            let triplets: Vec<(u32, u32, i64)> = src
                .par_iter()
                .enumerate()
                .fold(Vec::new, |mut acc, (col, g)| {
                    let mut out = Vec::new();
                    for x in 0..self.n {
                        if g.state.is_negative(x) {
                            continue;
                        }
                        let t = g.state.0 | 1 << x;
                        out.clear();
                        map(g.state.0, x, g.label, &mut out);
                        for &(label, v) in &out {
                            debug_assert_ne!(offset[t as usize], u32::MAX);
                            acc.push((index(t, label), col as u32, v));
                        }
                    }
                    acc
                })
                .reduce(Vec::new, |mut a, b| {
                    a.extend(b);
                    a
                });
            diffs.insert(i, SparseMatrix::from_triplets(dst.len(), src.len(), triplets));
        }
        QBlock { groups, diffs }
    }

    /// All q-blocks, built in parallel.
    pub fn complex(
        &self,
        ring: Ring,
        variant: Variant,
        map: &EdgeMap<'_>,
    ) -> ChainComplex {
        let reduced = variant.is_reduced();
        let (lo, hi) = self.q_range(reduced);
        let parity = lo.rem_euclid(2);
        let blocks: Vec<(i32, QBlock)> = (lo..=hi)
            .into_par_iter()
            .filter(|q| q.rem_euclid(2) == parity)
            .map(|q| (q, self.block(q, reduced, map)))
            .filter(|(_, b)| !b.groups.is_empty())
            .collect();
        ChainComplex { ring, variant, blocks: blocks.into_iter().collect() }
    }
}

/// Sign of the permutation sorting `v` (distinct values): +1 or −1.
pub(crate) fn sort_sign(v: &[u8]) -> i64 {
    let mut inv = 0;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if v[a] > v[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_and_rank() {
        let b = Binomials::new();
        let all: Vec<u64> = subsets(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (k, &l) in all.iter().enumerate() {
            assert_eq!(b.rank(l), k as u64);
        }
        assert_eq!(subsets(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets(3, 3).collect::<Vec<_>>(), vec![7]);
        assert_eq!(subsets(2, 3).count(), 0);
    }

    #[test]
    fn bit_insertion() {
        assert_eq!(expand(0b101, 1), 0b1011);
        assert_eq!(compress(0b1011, 1), 0b101);
        for l in 0..64u64 {
            for m in 0..6 {
                assert_eq!(compress(expand(l, m), m), l);
            }
        }
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(sort_sign(&[0, 1, 2]), 1);
        assert_eq!(sort_sign(&[1, 0, 2]), -1);
        assert_eq!(sort_sign(&[2, 0, 1]), 1);
    }

    #[test]
    fn variant_names() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
    }
}
