//! Oriented link diagrams.
//!
//! A crossing is stored as a PD 4-tuple: the four half-edges around the
//! crossing listed counterclockwise, starting at the incoming under-strand.
//! Slots 0 and 2 therefore carry the under-strand (in at 0, out at 2) and
//! slots 1 and 3 the over-strand. The crossing is positive when the
//! over-strand runs from slot 3 to slot 1 and negative when it runs from
//! slot 1 to slot 3, so `X[a,b,c,d]` with `b = d + 1` is positive.
//!
//! Edge labels are canonicalized on construction: edges are renumbered
//! 0, 1, 2, ... in order of first appearance when the tuples are scanned
//! crossing by crossing, slot by slot.

mod braid;
mod pd;
mod pretzel;
mod resolve;

pub use braid::BraidWord;
pub use pd::parse_pd;
pub use pretzel::{parse_pretzel, pretzel};
pub use resolve::{Resolution, State};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type EdgeId = u32;

/// Largest crossing count accepted; states are stored as 64-bit masks.
pub const MAX_CROSSINGS: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Where an edge goes when a crossing is resolved: an edge of the new
/// diagram, or its k-th crossingless circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeImage {
    Edge(EdgeId),
    Loop(usize),
}

struct Smoothing {
    kept: Vec<usize>,
    tuples: Vec<[u32; 4]>,
    roots: Vec<u32>,
    loops: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub edges: [EdgeId; 4],
    pub sign: Sign,
}

impl Crossing {
    /// Whether the oriented strand enters the crossing through `slot`.
    pub fn is_incoming(&self, slot: usize) -> bool {
        match (slot, self.sign) {
            (0, _) => true,
            (2, _) => false,
            (1, s) => s == Sign::Negative,
            (3, s) => s == Sign::Positive,
            _ => unreachable!("slot index {slot}"),
        }
    }

    /// The same crossing with over- and under-strand exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.edges;
        match self.sign {
            // over-strand d -> b becomes the under-strand
            Sign::Positive => Crossing { edges: [d, a, b, c], sign: Sign::Negative },
            // over-strand b -> d becomes the under-strand
            Sign::Negative => Crossing { edges: [b, c, d, a], sign: Sign::Positive },
        }
    }
}

/// A position on the diagram: crossing index plus slot 0..4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlotRef {
    pub crossing: u32,
    pub slot: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasePoint {
    pub component: usize,
    /// `None` when the component is a crossingless circle.
    pub edge: Option<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct PlanarDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    /// `[tail, head]` of every edge.
    ends: Vec<[SlotRef; 2]>,
    /// Edges of each component in traversal order; free loops come last
    /// and have no edges.
    components: Vec<Vec<EdgeId>>,
    edge_component: Vec<usize>,
    base_point: Option<BasePoint>,
}

impl PartialEq for PlanarDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings
            && self.free_loops == other.free_loops
            && self.base_point == other.base_point
    }
}

impl Eq for PlanarDiagram {}

/// Relabel edges by order of first appearance. Every label must occur
/// exactly twice.
fn canonical_labels(tuples: &[[u32; 4]]) -> Result<Vec<[EdgeId; 4]>> {
    let mut count: HashMap<u32, usize> = HashMap::new();
    let mut order: HashMap<u32, EdgeId> = HashMap::new();
    for t in tuples {
        for &e in t {
            *count.entry(e).or_default() += 1;
            let next = order.len() as EdgeId;
            order.entry(e).or_insert(next);
        }
    }
    if let Some((&e, &c)) = count.iter().filter(|(_, &c)| c != 2).min_by_key(|(&e, _)| e) {
        return Err(Error::EdgeMultiplicity { edge: e as i64, count: c });
    }
    Ok(tuples.iter().map(|t| t.map(|e| order[&e])).collect())
}

/// Orient unoriented tuples (see [`PlanarDiagram::from_unoriented`]).
/// Returns the tuples turned so that slot 0 is incoming, labels unchanged,
/// and their signs.
fn orient_tuples(tuples: &[[u32; 4]]) -> Result<(Vec<[u32; 4]>, Vec<Sign>)> {
    if tuples.len() > MAX_CROSSINGS {
        return Err(Error::TooManyCrossings(tuples.len()));
    }
    let labels = canonical_labels(tuples)?;
    let edge_count = labels.len() * 2;
    let mut slots: Vec<Vec<SlotRef>> = vec![Vec::new(); edge_count];
    for (x, t) in labels.iter().enumerate() {
        for (s, &e) in t.iter().enumerate() {
            slots[e as usize].push(SlotRef { crossing: x as u32, slot: s as u8 });
        }
    }
    // incoming[x][s]
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[None; 4]; labels.len()];
    for start in 0..edge_count {
        let a = slots[start][0];
        if incoming[a.crossing as usize][a.slot as usize].is_some() {
            continue;
        }
        // walk the component; edge `e` runs from `tail` to its other end
        let mut e = start;
        let mut tail = a;
        loop {
            let head = if slots[e][0] == tail { slots[e][1] } else { slots[e][0] };
            incoming[tail.crossing as usize][tail.slot as usize] = Some(false);
            incoming[head.crossing as usize][head.slot as usize] = Some(true);
            let out = SlotRef { crossing: head.crossing, slot: (head.slot + 2) % 4 };
            if incoming[out.crossing as usize][out.slot as usize].is_some() {
                break;
            }
            tail = out;
            e = labels[out.crossing as usize][out.slot as usize] as usize;
        }
    }
    let mut oriented = Vec::with_capacity(labels.len());
    let mut signs = Vec::with_capacity(labels.len());
    for (x, t) in tuples.iter().enumerate() {
        let inc = incoming[x].map(|v| v.expect("every slot is visited"));
        let t = if inc[0] { *t } else { [t[2], t[3], t[0], t[1]] };
        let inc = if inc[0] { inc } else { [inc[2], inc[3], inc[0], inc[1]] };
        oriented.push(t);
        signs.push(if inc[3] { Sign::Positive } else { Sign::Negative });
    }
    Ok((oriented, signs))
}

impl PlanarDiagram {
    /// The crossingless diagram of the unknot.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `loops` disjoint crossingless circles.
    pub fn unlink(loops: usize) -> Self {
        Self::from_signed(Vec::new(), Vec::new(), loops).expect("empty diagram is valid")
    }

    /// Build a diagram from PD tuples whose crossing signs are already known.
    pub fn from_signed(tuples: Vec<[u32; 4]>, signs: Vec<Sign>, free_loops: usize) -> Result<Self> {
        assert_eq!(tuples.len(), signs.len());
        if tuples.len() > MAX_CROSSINGS {
            return Err(Error::TooManyCrossings(tuples.len()));
        }
        let labels = canonical_labels(&tuples)?;
        let crossings: Vec<Crossing> = labels
            .into_iter()
            .zip(signs)
            .map(|(edges, sign)| Crossing { edges, sign })
            .collect();
        Self::assemble(crossings, free_loops)
    }

    /// Build a diagram from tuples whose slots 0 and 2 carry the
    /// under-strand but whose orientation is unknown. Each component is
    /// oriented starting from its lowest edge, which runs away from its
    /// smaller (crossing, slot) end.
    pub fn from_unoriented(tuples: Vec<[u32; 4]>, free_loops: usize) -> Result<Self> {
        let (oriented, signs) = orient_tuples(&tuples)?;
        Self::from_signed(oriented, signs, free_loops)
    }

    fn assemble(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let edge_count = crossings.len() * 2;
        let mut tail: Vec<Option<SlotRef>> = vec![None; edge_count];
        let mut head: Vec<Option<SlotRef>> = vec![None; edge_count];
        for (x, c) in crossings.iter().enumerate() {
            for s in 0..4 {
                let e = c.edges[s] as usize;
                let r = SlotRef { crossing: x as u32, slot: s as u8 };
                let target = if c.is_incoming(s) { &mut head[e] } else { &mut tail[e] };
                if target.replace(r).is_some() {
                    return Err(Error::InconsistentOrientation(e as i64 + 1));
                }
            }
        }
        let ends: Vec<[SlotRef; 2]> = (0..edge_count)
            .map(|e| match (tail[e], head[e]) {
                (Some(t), Some(h)) => Ok([t, h]),
                _ => Err(Error::InconsistentOrientation(e as i64 + 1)),
            })
            .collect::<Result<_>>()?;

        let mut edge_component = vec![usize::MAX; edge_count];
        let mut components = Vec::new();
        for start in 0..edge_count {
            if edge_component[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut comp = Vec::new();
            let mut e = start;
            loop {
                edge_component[e] = id;
                comp.push(e as EdgeId);
                let h = ends[e][1];
                e = crossings[h.crossing as usize].edges[((h.slot + 2) % 4) as usize] as usize;
                if e == start {
                    break;
                }
            }
            components.push(comp);
        }
        components.extend(std::iter::repeat_with(Vec::new).take(free_loops));
        let base_point = components
            .first()
            .map(|c| BasePoint { component: 0, edge: c.iter().min().copied() });
        Ok(PlanarDiagram { crossings, free_loops, ends, components, edge_component, base_point })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<EdgeId>] {
        &self.components
    }

    pub fn component_of_edge(&self, e: EdgeId) -> usize {
        self.edge_component[e as usize]
    }

    /// `[tail, head]` of an edge.
    pub fn edge_ends(&self, e: EdgeId) -> [SlotRef; 2] {
        self.ends[e as usize]
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign.value()).sum()
    }

    pub fn negative_crossings(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign == Sign::Negative).count()
    }

    pub fn base_point(&self) -> Option<BasePoint> {
        self.base_point
    }

    /// Move the base point to the lowest edge of `component`.
    pub fn with_base_point(mut self, component: usize) -> Result<Self> {
        let comp = self.components.get(component).ok_or(Error::BadBasePoint { component })?;
        self.base_point = Some(BasePoint { component, edge: comp.iter().min().copied() });
        Ok(self)
    }

    pub fn without_base_point(mut self) -> Self {
        self.base_point = None;
        self
    }

    /// All crossings switched; the mirror image of the link.
    pub fn mirror(&self) -> Self {
        let crossings = self.crossings.iter().map(Crossing::switched).collect();
        let mut d = Self::rebuild(crossings, self.free_loops);
        d.base_point = self.base_point;
        d
    }

    fn rebuild(crossings: Vec<Crossing>, free_loops: usize) -> Self {
        let tuples = crossings.iter().map(|c| c.edges).collect();
        let signs = crossings.iter().map(|c| c.sign).collect();
        Self::from_signed(tuples, signs, free_loops).expect("rebuilding a valid diagram")
    }

    /// Diagram with crossing `x` switched (orientation preserved).
    pub fn switch_crossing(&self, x: usize) -> Self {
        let mut crossings = self.crossings.clone();
        crossings[x] = crossings[x].switched();
        Self::rebuild(crossings, self.free_loops)
    }

    /// Crossings reordered so that new crossing `k` is old crossing `perm[k]`.
    pub fn permute_crossings(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.crossings.len());
        let crossings = perm.iter().map(|&k| self.crossings[k]).collect();
        let mut d = Self::rebuild(crossings, self.free_loops);
        if let Some(bp) = self.base_point {
            // keep the base point on the same strand
            if let Some(e) = bp.edge {
                let [t, _] = self.ends[e as usize];
                let new_x = perm.iter().position(|&k| k == t.crossing as usize).unwrap();
                let ne = d.crossings[new_x].edges[t.slot as usize];
                d.base_point = Some(BasePoint { component: d.component_of_edge(ne), edge: Some(ne) });
            } else {
                let comp = d.components.len() - (self.components.len() - bp.component);
                d.base_point = Some(BasePoint { component: comp, edge: None });
            }
        }
        d
    }

    /// Remove crossing `x`, joining the slot pairs `pairs`. Returns the
    /// remaining crossings, their tuples relabelled through the joins, the
    /// new label of every old edge and the roots that became closed loops.
    fn smoothing_parts(&self, x: usize, pairs: [(usize, usize); 2]) -> Smoothing {
        let n_edges = self.edge_count();
        let mut parent: Vec<usize> = (0..n_edges).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        let c = &self.crossings[x];
        for (s, t) in pairs {
            let (a, b) = (find(&mut parent, c.edges[s] as usize), find(&mut parent, c.edges[t] as usize));
            parent[a] = b;
        }
        let kept: Vec<usize> = (0..self.crossings.len()).filter(|&k| k != x).collect();
        let tuples: Vec<[u32; 4]> = kept
            .iter()
            .map(|&k| self.crossings[k].edges.map(|e| find(&mut parent, e as usize) as u32))
            .collect();
        let used: std::collections::HashSet<u32> = tuples.iter().flatten().copied().collect();
        let mut loops: Vec<usize> = c.edges.iter().map(|&e| find(&mut parent, e as usize)).collect();
        loops.sort_unstable();
        loops.dedup();
        loops.retain(|r| !used.contains(&(*r as u32)));
        let roots = (0..n_edges).map(|e| find(&mut parent, e) as u32).collect();
        Smoothing { kept, tuples, roots, loops: loops.into_iter().map(|r| r as u32).collect() }
    }

    /// Oriented smoothing of crossing `x` (the `L_0` term of the skein relation).
    pub fn smooth_oriented(&self, x: usize) -> Self {
        let pairs = match self.crossings[x].sign {
            Sign::Positive => [(0, 1), (2, 3)],
            Sign::Negative => [(0, 3), (1, 2)],
        };
        let sm = self.smoothing_parts(x, pairs);
        let signs = sm.kept.iter().map(|&k| self.crossings[k].sign).collect();
        Self::from_signed(sm.tuples, signs, self.free_loops + sm.loops.len())
            .expect("oriented smoothing keeps orientations consistent")
    }

    /// Resolve crossing `x` by the positive (`negative = false`) or the
    /// negative marker. The result is re-oriented component by component.
    pub fn resolve_crossing(&self, x: usize, negative: bool) -> Self {
        self.resolve_crossing_tracked(x, negative).0
    }

    /// [`PlanarDiagram::resolve_crossing`] together with the image of every
    /// edge of `self`.
    pub fn resolve_crossing_tracked(&self, x: usize, negative: bool) -> (Self, Vec<EdgeImage>) {
        let pairs = if negative { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] };
        let sm = self.smoothing_parts(x, pairs);
        let (oriented, signs) = orient_tuples(&sm.tuples).expect("resolution of a valid diagram");
        let mut label: HashMap<u32, EdgeId> = HashMap::new();
        for &e in oriented.iter().flatten() {
            let next = label.len() as EdgeId;
            label.entry(e).or_insert(next);
        }
        let images = sm
            .roots
            .iter()
            .map(|r| match label.get(r) {
                Some(&e) => EdgeImage::Edge(e),
                None => EdgeImage::Loop(self.free_loops + sm.loops.iter().position(|l| l == r).unwrap()),
            })
            .collect();
        let d = Self::from_signed(oriented, signs, self.free_loops + sm.loops.len()).expect("resolution of a valid diagram");
        (d, images)
    }

    /// Whether the resolution of crossing `x` by the given marker is the
    /// oriented smoothing.
    pub fn is_oriented_resolution(&self, x: usize, negative: bool) -> bool {
        (self.crossings[x].sign == Sign::Negative) == negative
    }

    /// PD code with 1-based canonical labels.
    pub fn to_pd_string(&self) -> String {
        let mut parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X[{},{},{},{}]", c.edges[0] + 1, c.edges[1] + 1, c.edges[2] + 1, c.edges[3] + 1))
            .collect();
        parts.extend(std::iter::repeat_n("O".to_string(), self.free_loops));
        parts.join(" ")
    }

    /// Stable textual key: canonical PD code, signs and base point.
    pub fn canonical_key(&self) -> String {
        let signs: String = self
            .crossings
            .iter()
            .map(|c| if c.sign == Sign::Positive { '+' } else { '-' })
            .collect();
        let bp = match self.base_point {
            Some(BasePoint { component, edge }) => format!("{component}:{edge:?}"),
            None => "none".into(),
        };
        format!("{}|{}|{}", self.to_pd_string(), signs, bp)
    }

    /// Hex SHA-256 of the canonical key.
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_key().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Linking data: number of crossings between each pair of components,
    /// keyed by component pair, as a signed sum.
    pub fn pairwise_crossing_signs(&self) -> BTreeMap<(usize, usize), i32> {
        let mut out = BTreeMap::new();
        for c in &self.crossings {
            let a = self.component_of_edge(c.edges[0]);
            let b = self.component_of_edge(c.edges[1]);
            if a != b {
                *out.entry((a.min(b), a.max(b))).or_insert(0) += c.sign.value();
            }
        }
        out
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() && self.free_loops == 0 {
            return write!(f, "(empty)");
        }
        f.write_str(&self.to_pd_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> PlanarDiagram {
        BraidWord::new(2, vec![1, 1, 1]).unwrap().closure()
    }

    #[test]
    fn switching_is_an_involution() {
        let c = Crossing { edges: [0, 5, 1, 4], sign: Sign::Positive };
        assert_eq!(c.switched().switched(), c);
        assert_eq!(c.switched().sign, Sign::Negative);
    }

    #[test]
    fn mirror_negates_writhe() {
        let d = trefoil();
        assert_eq!(d.writhe(), 3);
        let m = d.mirror();
        assert_eq!(m.writhe(), -3);
        assert_eq!(m.component_count(), 1);
        assert_eq!(m.mirror(), d);
        assert_eq!(PlanarDiagram::unknot().mirror(), PlanarDiagram::unknot());
    }

    #[test]
    fn oriented_smoothing_of_trefoil_gives_hopf_link() {
        let d = trefoil();
        let s = d.smooth_oriented(0);
        assert_eq!(s.crossing_count(), 2);
        assert_eq!(s.component_count(), 2);
        assert_eq!(s.writhe(), 2);
    }

    #[test]
    fn smoothing_a_kink_leaves_a_loop() {
        let d = parse_pd("X[1,1,2,2]").unwrap();
        assert_eq!(d.crossing_count(), 1);
        let s = d.smooth_oriented(0);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.component_count(), 2);
        let r = d.resolve_crossing(0, true);
        assert_eq!(r.component_count(), 1);
    }

    #[test]
    fn unoriented_resolution_is_reoriented() {
        let d = trefoil();
        for x in 0..3 {
            let r = d.resolve_crossing(x, true);
            assert_eq!(r.crossing_count(), 2);
        }
    }

    #[test]
    fn hashing_ignores_input_labels() {
        let a = parse_pd("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        let b = parse_pd("X[10,50,20,40] X[30,10,40,60] X[50,30,60,20]").unwrap();
        assert_eq!(a.content_hash(), b.content_hash());
    }

    #[test]
    fn permuting_crossings_keeps_invariants() {
        let d = trefoil();
        let p = d.permute_crossings(&[2, 0, 1]);
        assert_eq!(p.writhe(), 3);
        assert_eq!(p.component_count(), 1);
    }
}
