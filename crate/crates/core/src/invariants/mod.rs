//! Invariants derived from the complexes and their homology tables.

mod lee;
mod qa;
mod report;
mod skein;
mod structure;

pub use lee::{build_lee_complex, rasmussen_s, FilteredComplex};
pub use qa::{qa_search, Certificate, QAResult, QaVerdict};
pub use report::{invariant_report, table_entries, InvariantReport, TableEntry, TbBounds};
pub use skein::{jones_by_skein, skein_exactness_check, unknot};
pub use structure::{verify_structural_identities, StructuralReport};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Laurent, Laurent2};
use crate::cube::{build_even_complex, build_odd_complex, ChainComplex, Variant};
use crate::diagram::PlanarDiagram;
use crate::error::{Error, Result};
use crate::linalg::{homology, reduce_complex, HomologyTable, Ring};

/// Outcome of one consistency check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// The chain complex of `variant`.
pub fn build_complex(d: &PlanarDiagram, ring: Ring, variant: Variant) -> Result<ChainComplex> {
    match variant {
        Variant::Even | Variant::EvenReduced => build_even_complex(d, ring, variant.is_reduced()),
        Variant::Odd | Variant::OddReduced => build_odd_complex(d, ring, variant.is_reduced()),
    }
}

/// Homology of `variant` over `ring`, computed after cancelling units.
pub fn khovanov_homology(d: &PlanarDiagram, ring: Ring, variant: Variant) -> Result<HomologyTable> {
    homology(&reduce_complex(&build_complex(d, ring, variant)?))
}

/// Σ (−1)ⁱ q^j rank Cⁱʲ.
pub fn euler_characteristic(c: &ChainComplex) -> Laurent {
    c.euler_characteristic()
}

/// Σ tⁱ q^j dim Hⁱʲ, using free ranks.
pub fn poincare_polynomial(t: &HomologyTable) -> Laurent2 {
    Laurent2::from_terms(t.iter().filter(|(_, g)| g.rank > 0).map(|((i, j), g)| ([i, j], g.rank as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthReport {
    pub variant: Variant,
    pub ring: Ring,
    pub width: u32,
    /// Occupied diagonals j − 2i, ascending.
    pub diagonals: Vec<i32>,
}

/// Number of adjacent diagonals j − 2i = const needed to hold the table.
pub fn homological_width(t: &HomologyTable, variant: Variant, count_torsion: bool) -> Result<WidthReport> {
    let mut diagonals: Vec<i32> = t.support(count_torsion).into_iter().map(|(i, j)| j - 2 * i).collect();
    diagonals.sort_unstable();
    diagonals.dedup();
    let (Some(&lo), Some(&hi)) = (diagonals.first(), diagonals.last()) else { return Err(Error::EmptyTable) };
    Ok(WidthReport { variant, ring: t.ring, width: ((hi - lo) / 2 + 1) as u32, diagonals })
}

/// Khovanov bound on the Thurston–Bennequin number from the lowest
/// occupied diagonal j − i; torsion counts as nonzero. Reduced tables are
/// shifted down by one.
pub fn tb_bound(t: &HomologyTable, variant: Variant) -> Result<i32> {
    let min = t.support(true).into_iter().map(|(i, j)| j - i).min().ok_or(Error::EmptyTable)?;
    Ok(if variant.is_reduced() { min - 1 } else { min })
}

/// A pairing of the generators of a knot's rational homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnightMoveDecomposition {
    /// (0, j₀) and (0, j₀ + 2).
    pub pawn: [(i32, i32); 2],
    /// (i, j) and (i + 1, j + 4).
    pub knights: Vec<[(i32, i32); 2]>,
}

/// Exact cover of the free part of a knot's table by one pawn-move pair
/// and knight-move pairs, or `None` if there is none.
///
/// Once the pawn pair is fixed the cover is forced: the lowest remaining
/// generator can only be the lower end of a knight move.
pub fn knight_move_decomposition(t: &HomologyTable, knot: bool) -> Option<KnightMoveDecomposition> {
    if !knot {
        return None;
    }
    let ranks: BTreeMap<(i32, i32), u64> = t.iter().filter(|(_, g)| g.rank > 0).map(|(k, g)| (k, g.rank)).collect();
    let take = |m: &mut BTreeMap<(i32, i32), u64>, k: (i32, i32)| -> bool {
        match m.get_mut(&k) {
            Some(r) => {
                *r -= 1;
                if *r == 0 {
                    m.remove(&k);
                }
                true
            }
            None => false,
        }
    };
    'pawns: for &(i, j0) in ranks.keys() {
        if i != 0 || !ranks.contains_key(&(0, j0 + 2)) {
            continue;
        }
        let mut rest = ranks.clone();
        take(&mut rest, (0, j0));
        take(&mut rest, (0, j0 + 2));
        let mut knights = Vec::new();
        while let Some(&(a, b)) = rest.keys().next() {
            take(&mut rest, (a, b));
            if !take(&mut rest, (a + 1, b + 4)) {
                continue 'pawns;
            }
            knights.push([(a, b), (a + 1, b + 4)]);
        }
        return Some(KnightMoveDecomposition { pawn: [(0, j0), (0, j0 + 2)], knights });
    }
    None
}

/// |J̃(i)| where J̃ = J / (q + q⁻¹).
pub fn determinant(d: &PlanarDiagram) -> Result<u64> {
    let j = jones_by_skein(d)?;
    let reduced = j.div_exact(&unknot()).ok_or_else(|| Error::NotDivisible(j.to_string()))?;
    let v = reduced.eval_gaussian();
    v.axis_abs().ok_or_else(|| Error::BadDeterminant(v.to_string()))
}

/// Whether the reduced integral homology of a knot diagram is a single ℤ.
pub fn is_unknot(d: &PlanarDiagram) -> Result<bool> {
    if d.component_count() != 1 {
        return Err(Error::NotAKnot(d.component_count()));
    }
    let t = khovanov_homology(d, Ring::Z, Variant::EvenReduced)?;
    Ok(t.total_rank() == 1 && !t.has_torsion())
}
