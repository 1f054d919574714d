use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{sort_sign, ChainComplex, Cube, Variant};
use crate::diagram::{PlanarDiagram, SlotRef};
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// One arrow per crossing, parallel to the negative marker. In the
/// negative smoothing it joins the arcs {0,3} and {1,2}; `tail[x]` is the
/// slot (0 or 1) naming the arc it starts from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowChoice {
    tail: Vec<u8>,
}

impl ArrowChoice {
    pub fn len(&self) -> usize {
        self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tail.is_empty()
    }

    /// Slot of the negative-smoothing arc at the arrow's tail.
    pub fn tail_slot(&self, x: usize) -> usize {
        self.tail[x] as usize
    }

    /// Start slot of the tail arc in the positive smoothing: the arrow
    /// turned a quarter turn clockwise joins {2,3} to {0,1} or back.
    pub fn positive_tail_slot(&self, x: usize) -> usize {
        if self.tail[x] == 0 { 2 } else { 0 }
    }

    pub fn reversed(&self, x: usize) -> ArrowChoice {
        let mut a = self.clone();
        a.tail[x] ^= 1;
        a
    }

    /// The default arrows with those at the flagged crossings reversed.
    pub fn with_flips(d: &PlanarDiagram, flips: &[bool]) -> ArrowChoice {
        let mut a = default_arrows(d);
        for (t, &f) in a.tail.iter_mut().zip(flips) {
            *t ^= f as u8;
        }
        a
    }

    /// Same arrows after reordering crossings so that new crossing k is
    /// old crossing `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> ArrowChoice {
        ArrowChoice { tail: perm.iter().map(|&p| self.tail[p]).collect() }
    }
}

/// Each arrow leaves the negative-smoothing arc through the slot holding
/// the crossing's lowest edge label.
pub fn default_arrows(d: &PlanarDiagram) -> ArrowChoice {
    let tail = d
        .crossings()
        .iter()
        .map(|c| {
            let min = (0..4).min_by_key(|&k| c.edges[k]).unwrap();
            if min == 0 || min == 3 { 0 } else { 1 }
        })
        .collect();
    ArrowChoice { tail }
}

/// A cube of resolutions together with arrows.
pub struct OddCube<'a> {
    pub cube: Cube<'a>,
    pub arrows: ArrowChoice,
}

impl<'a> OddCube<'a> {
    pub fn new(d: &'a PlanarDiagram, arrows: ArrowChoice) -> Result<Self> {
        assert_eq!(arrows.len(), d.crossing_count(), "one arrow per crossing");
        Ok(OddCube { cube: Cube::new(d)?, arrows })
    }
}

/// Unsigned image of the monomial `label` of state `s` along the edge at
/// crossing `x`. Merges identify the two variables; splits multiply on
/// the left by X₁ − X₂, X₁ being the circle at the arrow's tail.
pub fn odd_edge_map(oc: &OddCube, s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>) {
    let cube = &oc.cube;
    let t = s | 1 << x;
    let a = cube.circle_at(s, x, 0);
    let b = cube.circle_at(s, x, 2);
    let phi = cube.transfer(s, t);
    let mut image = [0u8; 64];
    let mut len = 0;
    let mut bits = label;
    while bits != 0 {
        image[len] = phi[bits.trailing_zeros() as usize];
        len += 1;
        bits &= bits - 1;
    }
    let mask = |v: &[u8]| v.iter().fold(0u64, |m, &c| m | 1 << c);
    if a != b {
        if label >> a & 1 == 1 && label >> b & 1 == 1 {
            return;
        }
        out.push((mask(&image[..len]), sort_sign(&image[..len])));
    } else {
        let tail = oc.arrows.tail_slot(x);
        let x1 = cube.circle_at(t, x, tail) as u8;
        let x2 = cube.circle_at(t, x, 1 - tail) as u8;
        let body = mask(&image[..len]);
        let mut v = [0u8; 65];
        v[1..=len].copy_from_slice(&image[..len]);
        for (c, coef) in [(x1, 1), (x2, -1)] {
            if body >> c & 1 == 1 {
                continue;
            }
            v[0] = c;
            out.push((body | 1 << c, coef * sort_sign(&v[..=len])));
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceType {
    Commuting,
    Anticommuting,
    /// Both composites vanish.
    Zero,
}

fn compose(oc: &OddCube, s: u64, x: usize, y: usize, label: u64) -> BTreeMap<u64, i64> {
    let mut mid = Vec::new();
    odd_edge_map(oc, s, x, label, &mut mid);
    let mut out = BTreeMap::new();
    let mut buf = Vec::new();
    for (l, c) in mid {
        buf.clear();
        odd_edge_map(oc, s | 1 << x, y, l, &mut buf);
        for &(l2, c2) in &buf {
            *out.entry(l2).or_insert(0) += c * c2;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Type of the square with bottom `s` spanned by crossings `x` and `y`.
/// Both composites are computed on every monomial in the circles that
/// meet the two crossings; the remaining variables factor out on the right.
pub fn classify_face(oc: &OddCube, s: u64, x: usize, y: usize) -> Result<FaceType> {
    let cube = &oc.cube;
    let n = cube.n;
    if x == y || x >= n || y >= n {
        return Err(Error::CrossingIndex { index: x.max(y), count: n });
    }
    if s >> x & 1 == 1 {
        return Err(Error::MarkerNotPositive(x));
    }
    if s >> y & 1 == 1 {
        return Err(Error::MarkerNotPositive(y));
    }
    let mut involved: Vec<u32> = [(x, 0), (x, 2), (y, 0), (y, 2)].iter().map(|&(c, k)| cube.circle_at(s, c, k)).collect();
    involved.sort_unstable();
    involved.dedup();
    let (mut same, mut opposite, mut zero) = (true, true, true);
    for sub in 0..1u64 << involved.len() {
        let label = involved.iter().enumerate().filter(|(k, _)| sub >> k & 1 == 1).fold(0u64, |m, (_, &c)| m | 1 << c);
        let p = compose(oc, s, x, y, label);
        let q = compose(oc, s, y, x, label);
        zero &= p.is_empty() && q.is_empty();
        same &= p == q;
        opposite &= p.len() == q.len() && p.iter().all(|(l, v)| q.get(l) == Some(&-v));
    }
    match (zero, same, opposite) {
        (true, _, _) => Ok(FaceType::Zero),
        (_, true, _) => Ok(FaceType::Commuting),
        (_, _, true) => Ok(FaceType::Anticommuting),
        _ => Err(Error::FaceClassification { state: s, first: x, second: y }),
    }
}

/// Walk along the circle of `s` through the positive-smoothing tail arc
/// at `x`, keeping the arrow on the left, and report whether the first
/// arc met at `y` is its tail arc. `None` unless `x` and `y` both lie on
/// a single circle met in the order x, y, x, y.
fn ladybug_orientation(oc: &OddCube, s: u64, x: usize, y: usize) -> Option<bool> {
    let d = oc.cube.diagram;
    let partner = |c: usize, slot: usize| -> usize { if s >> c & 1 == 1 { 3 - slot } else { slot ^ 1 } };
    let start = oc.arrows.positive_tail_slot(x);
    let x_head = start ^ 2;
    let y_tail = oc.arrows.positive_tail_slot(y);
    let mut at = SlotRef { crossing: x as u32, slot: (start ^ 1) as u8 };
    let mut first_y = None;
    let mut seen_x_head = false;
    loop {
        let e = d.crossings()[at.crossing as usize].edges[at.slot as usize];
        let [tl, hd] = d.edge_ends(e);
        let far = if tl == at { hd } else { tl };
        let c = far.crossing as usize;
        let slot = far.slot as usize;
        if c == x {
            if slot == start {
                break;
            }
            // the split leaves the other arc traversed from its even slot
            if slot != x_head || seen_x_head || first_y.is_none() {
                return None;
            }
            seen_x_head = true;
        } else if c == y {
            let arc = slot & 2;
            match first_y {
                None => first_y = Some(arc),
                Some(f) if f != arc && seen_x_head => {}
                _ => return None,
            }
        }
        at = SlotRef { crossing: c as u32, slot: partner(c, slot) as u8 };
    }
    let first = first_y?;
    seen_x_head.then_some(first == y_tail)
}

/// How faces whose composites both vanish enter the sign equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ZeroFaceRule {
    /// No equation.
    #[default]
    Unconstrained,
    /// Treated as commuting when the ladybug orientation equals `parity`,
    /// anticommuting otherwise.
    Typed { parity: bool },
}

/// What a face demands of its four edge signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    /// Sign product −1.
    Flip,
    /// Sign product +1.
    Keep,
    Free,
}

/// Face constraint for the odd cube under `rule`.
pub fn odd_constraint(oc: &OddCube, s: u64, x: usize, y: usize, rule: ZeroFaceRule) -> Result<Constraint> {
    Ok(match classify_face(oc, s, x, y)? {
        FaceType::Commuting => Constraint::Flip,
        FaceType::Anticommuting => Constraint::Keep,
        FaceType::Zero => match (rule, ladybug_orientation(oc, s, x, y)) {
            (ZeroFaceRule::Typed { parity }, Some(o)) => {
                if o == parity { Constraint::Flip } else { Constraint::Keep }
            }
            _ => Constraint::Free,
        },
    })
}

/// Edge signs of an n-dimensional cube, one bit per edge (bit set = −1).
/// Edge (s, x) runs from s to s with bit x set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    n: usize,
    negative: Vec<bool>,
}

impl SignAssignment {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn sign(&self, s: u64, x: usize) -> i64 {
        if self.negative[s as usize * self.n + x] { -1 } else { 1 }
    }

    /// Every face satisfies its constraint.
    pub fn satisfies(&self, face: impl Fn(u64, usize, usize) -> Result<Constraint>) -> Result<bool> {
        for s in 0..1u64 << self.n {
            for x in 0..self.n {
                for y in x + 1..self.n {
                    if s >> x & 1 == 1 || s >> y & 1 == 1 {
                        continue;
                    }
                    let prod = self.sign(s, x) * self.sign(s | 1 << x, y) * self.sign(s, y) * self.sign(s | 1 << y, x);
                    let ok = match face(s, x, y)? {
                        Constraint::Flip => prod == -1,
                        Constraint::Keep => prod == 1,
                        Constraint::Free => true,
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Solves the face equations over 𝔽₂.
///
/// A product of face values around any 3-cube is forced, so first the
/// unconstrained faces get values making every 3-cube consistent (sparse
/// elimination, free variables from `free`). With every face then fixed,
/// edges are settled one top vertex at a time in order of height: the
/// edges into t are linked by the faces with top t, each connected group
/// takes one value from `free` and the rest follow.
pub fn solve_edge_signs(
    n: usize,
    face: impl Fn(u64, usize, usize) -> Result<Constraint> + Sync,
    mut free: impl FnMut() -> bool,
) -> Result<SignAssignment> {
    let states = 1usize << n;
    let mut faces: Vec<Vec<(u8, u8, Constraint)>> = (0..states as u64)
        .into_par_iter()
        .map(|t| {
            let mut v = Vec::new();
            for x in 0..n {
                for y in x + 1..n {
                    if t >> x & 1 == 1 && t >> y & 1 == 1 {
                        v.push((x as u8, y as u8, face(t & !(1 << x) & !(1 << y), x, y)?));
                    }
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    fix_free_faces(n, &mut faces, &mut free)?;

    let mut negative = vec![false; states * n];
    let mut order: Vec<u64> = (1..states as u64).collect();
    order.sort_by_key(|t| t.count_ones());
    let mut value: Vec<Option<bool>> = vec![None; n];
    let mut links: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for t in order {
        links.iter_mut().for_each(Vec::clear);
        for &(x, y, c) in &faces[t as usize] {
            let (x, y) = (x as usize, y as usize);
            let bottom = (t & !(1 << x) & !(1 << y)) as usize;
            // e(t−x, x) + e(t−y, y) = rhs
            let known = negative[bottom * n + x] ^ negative[bottom * n + y];
            let rhs = match c {
                Constraint::Flip => !known,
                Constraint::Keep => known,
                Constraint::Free => unreachable!("free faces are fixed first"),
            };
            links[x].push((y, rhs));
            links[y].push((x, rhs));
        }
        value.iter_mut().for_each(|v| *v = None);
        for x in 0..n {
            if t >> x & 1 == 0 || value[x].is_some() {
                continue;
            }
            value[x] = Some(free());
            let mut stack = vec![x];
            while let Some(u) = stack.pop() {
                let vu = value[u].unwrap();
                for &(w, rhs) in &links[u] {
                    match value[w] {
                        None => {
                            value[w] = Some(vu ^ rhs);
                            stack.push(w);
                        }
                        Some(vw) if vw != vu ^ rhs => return Err(Error::InconsistentSigns(t)),
                        _ => {}
                    }
                }
            }
        }
        for (x, v) in value.iter().enumerate() {
            if let Some(v) = v {
                negative[(t & !(1 << x)) as usize * n + x] = *v;
            }
        }
    }
    Ok(SignAssignment { n, negative })
}

/// Choose Flip or Keep for every free face so that each 3-cube has an
/// even number of Flip faces.
fn fix_free_faces(n: usize, faces: &mut [Vec<(u8, u8, Constraint)>], free: &mut impl FnMut() -> bool) -> Result<()> {
    let mut var: HashMap<(u64, u8, u8), usize> = HashMap::new();
    let mut where_: Vec<(usize, usize)> = Vec::new();
    for (t, v) in faces.iter().enumerate() {
        for (k, &(x, y, c)) in v.iter().enumerate() {
            if c == Constraint::Free {
                var.insert((t as u64, x, y), where_.len());
                where_.push((t, k));
            }
        }
    }
    if where_.is_empty() {
        return Ok(());
    }
    let face_at = |faces: &[Vec<(u8, u8, Constraint)>], t: u64, x: usize, y: usize| -> Constraint {
        let (x, y) = (x.min(y) as u8, x.max(y) as u8);
        faces[t as usize].iter().find(|f| (f.0, f.1) == (x, y)).expect("face present").2
    };
    // one equation per 3-cube touching a free face
    let mut cubes = std::collections::HashSet::new();
    for &(t, k) in &where_ {
        let (x, y, _) = faces[t][k];
        for z in 0..n as u8 {
            if z != x && z != y {
                let mut tri = [x, y, z];
                tri.sort_unstable();
                let top = t as u64 | 1 << z;
                cubes.insert((top, tri));
            }
        }
    }
    let mut cubes: Vec<(u64, [u8; 3])> = cubes.into_iter().collect();
    cubes.sort_unstable();
    let mut pivots: BTreeMap<usize, (Vec<usize>, bool)> = BTreeMap::new();
    for (top, [a, b, c]) in cubes {
        let (a, b, c) = (a as usize, b as usize, c as usize);
        let mut row = Vec::new();
        let mut rhs = false;
        // top faces and bottom faces of the cube
        for (t, x, y) in [
            (top, a, b),
            (top, a, c),
            (top, b, c),
            (top & !(1 << c), a, b),
            (top & !(1 << b), a, c),
            (top & !(1 << a), b, c),
        ] {
            match face_at(faces, t, x, y) {
                Constraint::Flip => rhs ^= true,
                Constraint::Keep => {}
                Constraint::Free => row.push(var[&(t, x as u8, y as u8)]),
            }
        }
        row.sort_unstable();
        reduce_row(&mut row, &mut rhs, &pivots);
        match row.last() {
            Some(&p) => {
                pivots.insert(p, (row, rhs));
            }
            None if rhs => return Err(Error::InconsistentSigns(top)),
            None => {}
        }
    }
    // back substitution, lowest pivot first
    let mut val = vec![None; where_.len()];
    for v in 0..where_.len() {
        let bit = match pivots.get(&v) {
            None => free(),
            Some((row, rhs)) => row[..row.len() - 1].iter().fold(*rhs, |acc, &u| acc ^ val[u].unwrap()),
        };
        val[v] = Some(bit);
    }
    for (v, &(t, k)) in where_.iter().enumerate() {
        faces[t][k].2 = if val[v].unwrap() { Constraint::Flip } else { Constraint::Keep };
    }
    Ok(())
}

/// Reduce a sorted sparse 𝔽₂ row against rows keyed by their largest entry.
fn reduce_row(row: &mut Vec<usize>, rhs: &mut bool, pivots: &BTreeMap<usize, (Vec<usize>, bool)>) {
    while let Some(&p) = row.last() {
        let Some((prow, prhs)) = pivots.get(&p) else { break };
        *rhs ^= prhs;
        let mut merged = Vec::with_capacity(row.len() + prow.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < prow.len() {
            match (row.get(i), prow.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    merged.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    merged.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    merged.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    merged.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        *row = merged;
    }
}

/// Odd complex with the default arrows and the first sign solution.
pub fn build_odd_complex(d: &PlanarDiagram, ring: Ring, reduced: bool) -> Result<ChainComplex> {
    build_odd_complex_with(d, ring, reduced, &default_arrows(d), ZeroFaceRule::default(), || false)
}

/// Odd complex for the given arrows, zero-face rule and source of free
/// sign choices. The reduced complex is spanned by the monomials that
/// contain the marked circle's variable.
pub fn build_odd_complex_with(
    d: &PlanarDiagram,
    ring: Ring,
    reduced: bool,
    arrows: &ArrowChoice,
    rule: ZeroFaceRule,
    free: impl FnMut() -> bool,
) -> Result<ChainComplex> {
    if reduced && d.base_point().is_none() {
        return Err(Error::MissingBasePoint);
    }
    let oc = OddCube::new(d, arrows.clone())?;
    let signs = solve_edge_signs(oc.cube.n, |s, x, y| odd_constraint(&oc, s, x, y, rule), free)?;
    let variant = if reduced { Variant::OddReduced } else { Variant::Odd };
    let map = |s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>| {
        let start = out.len();
        odd_edge_map(&oc, s, x, label, out);
        let sign = signs.sign(s, x);
        for e in &mut out[start..] {
            e.1 *= sign;
        }
    };
    Ok(oc.cube.complex(ring, variant, &map))
}
