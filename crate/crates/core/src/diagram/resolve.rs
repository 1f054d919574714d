use serde::{Deserialize, Serialize};

use super::{PlanarDiagram, SlotRef};
use crate::error::{Error, Result};

/// A Kauffman state: bit `x` set means the negative marker at crossing `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State(pub u64);

impl State {
    pub fn from_markers(negative: &[bool]) -> Self {
        State(negative.iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (k, _)| acc | 1 << k))
    }

    pub fn is_negative(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn negative_count(self) -> u32 {
        self.0.count_ones()
    }

    pub fn with(self, x: usize, negative: bool) -> State {
        if negative { State(self.0 | 1 << x) } else { State(self.0 & !(1 << x)) }
    }
}

/// Slot pairs joined by each marker.
pub const POSITIVE_PAIRS: [(usize, usize); 2] = [(0, 1), (2, 3)];
pub const NEGATIVE_PAIRS: [(usize, usize); 2] = [(0, 3), (1, 2)];

/// The circles of a resolved diagram. Circles meeting crossings are
/// numbered by their smallest edge; crossingless components follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub circle_count: usize,
    pub circle_of_edge: Vec<u32>,
    /// Circle carrying the base point, if the diagram has one.
    pub marked_circle: Option<usize>,
}

impl Resolution {
    pub fn circle_at(&self, d: &PlanarDiagram, x: usize, slot: usize) -> u32 {
        self.circle_of_edge[d.crossings[x].edges[slot] as usize]
    }
}

impl PlanarDiagram {
    fn check_state(&self, s: State) -> Result<()> {
        let n = self.crossing_count();
        if n < 64 && s.0 >> n != 0 {
            return Err(Error::StateLength { expected: n, got: 64 - s.0.leading_zeros() as usize });
        }
        Ok(())
    }

    /// Resolve every crossing by the marker chosen in `s`.
    pub fn resolve_state(&self, s: State) -> Result<Resolution> {
        self.check_state(s)?;
        let m = self.edge_count();
        let mut parent: Vec<u32> = (0..m as u32).collect();
        fn find(p: &mut [u32], mut a: u32) -> u32 {
            while p[a as usize] != a {
                p[a as usize] = p[p[a as usize] as usize];
                a = p[a as usize];
            }
            a
        }
        for (x, c) in self.crossings.iter().enumerate() {
            let pairs = if s.is_negative(x) { NEGATIVE_PAIRS } else { POSITIVE_PAIRS };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, c.edges[a]), find(&mut parent, c.edges[b]));
                if ra != rb {
                    // keep the smaller edge as root so roots are circle minima
                    let (lo, hi) = (ra.min(rb), ra.max(rb));
                    parent[hi as usize] = lo;
                }
            }
        }
        let mut index = vec![u32::MAX; m];
        let mut circle_of_edge = vec![0u32; m];
        let mut count = 0u32;
        for e in 0..m as u32 {
            let r = find(&mut parent, e) as usize;
            if index[r] == u32::MAX {
                index[r] = count;
                count += 1;
            }
            circle_of_edge[e as usize] = index[r];
        }
        let marked_circle = self.base_point.map(|bp| match bp.edge {
            Some(e) => circle_of_edge[e as usize] as usize,
            None => count as usize + (bp.component - (self.components.len() - self.free_loops)),
        });
        Ok(Resolution { circle_count: count as usize + self.free_loops, circle_of_edge, marked_circle })
    }

    /// Circle count of `s` by walking the boundary of the resolved
    /// diagram, independent of [`PlanarDiagram::resolve_state`].
    pub fn trace_circle_count(&self, s: State) -> Result<usize> {
        self.check_state(s)?;
        let mut seen = vec![false; self.edge_count()];
        let mut circles = self.free_loops;
        for start in 0..self.edge_count() {
            if seen[start] {
                continue;
            }
            circles += 1;
            // enter the edge at its tail end, walk to the other end
            let mut at = self.ends[start][0];
            let mut e = start;
            loop {
                seen[e] = true;
                let [t, h] = self.ends[e];
                let far = if t == at { h } else { t };
                let x = far.crossing as usize;
                let pairs = if s.is_negative(x) { NEGATIVE_PAIRS } else { POSITIVE_PAIRS };
                let slot = far.slot as usize;
                let partner = pairs.iter().find_map(|&(a, b)| {
                    if a == slot { Some(b) } else if b == slot { Some(a) } else { None }
                });
                let partner = partner.expect("every slot is paired");
                at = SlotRef { crossing: far.crossing, slot: partner as u8 };
                e = self.crossings[x].edges[partner] as usize;
                if seen[e] {
                    break;
                }
            }
        }
        Ok(circles)
    }
}
