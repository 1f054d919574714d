use serde::{Deserialize, Serialize};

use super::{
    determinant, homological_width, jones_by_skein, khovanov_homology, poincare_polynomial, qa_search, rasmussen_s,
    tb_bound, QAResult,
};
use crate::cube::Variant;
use crate::diagram::PlanarDiagram;
use crate::error::Result;
use crate::linalg::{HomologyGroup, HomologyTable, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub i: i32,
    pub j: i32,
    pub rank: u64,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TbBounds {
    pub even: i32,
    pub reduced: i32,
    pub odd_reduced: i32,
}

/// Everything computed for one diagram, in the JSON layout of the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub diagram_hash: String,
    pub variant: Variant,
    pub ring: Ring,
    pub table: Vec<TableEntry>,
    pub jones: String,
    pub poincare: String,
    pub width: u32,
    pub tb_bounds: TbBounds,
    /// Rasmussen's s; absent for links.
    pub s: Option<i32>,
    pub det: u64,
    pub qa: QAResult,
}

impl InvariantReport {
    pub fn homology_table(&self) -> HomologyTable {
        HomologyTable::from_entries(
            self.ring,
            self.table.iter().map(|e| ((e.i, e.j), HomologyGroup { rank: e.rank, torsion: e.torsion.clone() })),
        )
    }
}

pub fn table_entries(t: &HomologyTable) -> Vec<TableEntry> {
    t.iter().map(|((i, j), g)| TableEntry { i, j, rank: g.rank, torsion: g.torsion.clone() }).collect()
}

/// Computes the full report. TB bounds use `ring`; the thinness test in
/// the quasi-alternating search always uses ℤ.
pub fn invariant_report(d: &PlanarDiagram, ring: Ring, variant: Variant, qa_budget: usize) -> Result<InvariantReport> {
    let d = match d.base_point() {
        Some(_) => d.clone(),
        None => d.clone().with_base_point(0)?,
    };
    let table = khovanov_homology(&d, ring, variant)?;
    let tb = |v| -> Result<i32> { tb_bound(&khovanov_homology(&d, ring, v)?, v) };
    Ok(InvariantReport {
        diagram_hash: d.content_hash(),
        variant,
        ring,
        table: table_entries(&table),
        jones: jones_by_skein(&d)?.to_string(),
        poincare: poincare_polynomial(&table).to_string(),
        width: homological_width(&table, variant, ring == Ring::Z)?.width,
        tb_bounds: TbBounds {
            even: tb(Variant::Even)?,
            reduced: tb(Variant::EvenReduced)?,
            odd_reduced: tb(Variant::OddReduced)?,
        },
        s: if d.component_count() == 1 { Some(rasmussen_s(&d)?) } else { None },
        det: determinant(&d)?,
        qa: qa_search(&d, qa_budget)?,
    })
}
