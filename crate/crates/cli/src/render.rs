//! Homology tables as text grids: i across, j down (largest first).

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use kho_core::linalg::{normalize_torsion, HomologyGroup};
use kho_core::{HomologyTable, Ring};

const SUBSCRIPTS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];

fn subscript(n: u64) -> String {
    n.to_string().chars().map(|c| SUBSCRIPTS[c.to_digit(10).unwrap() as usize]).collect()
}

/// `a, b₂, c₃` for ℤᵃ ⊕ ℤ₂ᵇ ⊕ ℤ₃ᶜ, torsion as prime powers.
pub fn render_group(g: &HomologyGroup) -> String {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for p in g.primary_torsion() {
        *counts.entry(p).or_default() += 1;
    }
    let mut parts = Vec::new();
    if g.rank > 0 {
        parts.push(g.rank.to_string());
    }
    parts.extend(counts.into_iter().map(|(p, b)| format!("{b}{}", subscript(p))));
    parts.join(", ")
}

pub fn parse_group(cell: &str) -> Result<HomologyGroup> {
    let mut g = HomologyGroup::default();
    let mut orders = Vec::new();
    for part in cell.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let normal: String = part
            .chars()
            .map(|c| match SUBSCRIPTS.iter().position(|&s| s == c) {
                Some(d) => format!("_{d}"),
                None => c.to_string(),
            })
            .collect();
        // `_1_2` style runs of subscripts collapse to one order
        let (count, order) = match normal.split_once('_') {
            Some((b, p)) => (b, Some(p.replace('_', ""))),
            None => (normal.as_str(), None),
        };
        let count: u64 = count.parse().with_context(|| format!("bad entry `{part}`"))?;
        match order {
            None => g.rank += count,
            Some(p) => {
                let p: u64 = p.parse().with_context(|| format!("bad torsion order in `{part}`"))?;
                orders.extend(std::iter::repeat_n(p, count as usize));
            }
        }
    }
    g.torsion = normalize_torsion(&orders);
    Ok(g)
}

/// Grid with a `ring` header line; rows are the j of one parity between
/// the extreme occupied degrees.
pub fn render_table(t: &HomologyTable) -> String {
    let mut out = format!("ring {}\n", t.ring);
    let keys: Vec<(i32, i32)> = t.iter().map(|(k, _)| k).collect();
    if keys.is_empty() {
        out.push_str("(empty)\n");
        return out;
    }
    let (imin, imax) = (keys.iter().map(|k| k.0).min().unwrap(), keys.iter().map(|k| k.0).max().unwrap());
    let (jmin, jmax) = (keys.iter().map(|k| k.1).min().unwrap(), keys.iter().map(|k| k.1).max().unwrap());
    let step = if keys.iter().all(|k| (k.1 - jmin) % 2 == 0) { 2 } else { 1 };
    let rows: Vec<i32> = (jmin..=jmax).rev().filter(|j| (j - jmin) % step == 0).collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|&j| (imin..=imax).map(|i| render_group(&t.get(i, j))).collect())
        .collect();
    let mut width = vec![0usize; (imax - imin + 1) as usize];
    for (c, i) in (imin..=imax).enumerate() {
        width[c] = i.to_string().len();
        for row in &cells {
            width[c] = width[c].max(row[c].chars().count());
        }
    }
    let jw = rows.iter().map(|j| j.to_string().len()).max().unwrap().max(3);
    let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w - s.chars().count()));
    let header: Vec<String> = (imin..=imax).zip(&width).map(|(i, &w)| pad(&i.to_string(), w)).collect();
    out.push_str(&format!("{} | {}\n", pad("j\\i", jw), header.join(" | ")));
    for (row, j) in cells.iter().zip(&rows) {
        let line: Vec<String> = row.iter().zip(&width).map(|(c, &w)| pad(c, w)).collect();
        let text = format!("{} | {}", pad(&j.to_string(), jw), line.join(" | "));
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

/// Inverse of [`render_table`].
pub fn parse_table(text: &str) -> Result<HomologyTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let ring: Ring = lines
        .next()
        .and_then(|l| l.trim().strip_prefix("ring "))
        .ok_or_else(|| anyhow!("missing ring line"))?
        .parse()?;
    let mut t = HomologyTable::new(ring);
    let Some(header) = lines.next() else { bail!("missing header") };
    if header.trim() == "(empty)" {
        return Ok(t);
    }
    let is: Vec<i32> = header
        .split('|')
        .skip(1)
        .map(|c| c.trim().parse::<i32>().with_context(|| format!("bad column `{c}`")))
        .collect::<Result<_>>()?;
    for line in lines {
        let mut cells = line.split('|');
        let j: i32 = cells.next().unwrap_or("").trim().parse().with_context(|| format!("bad row `{line}`"))?;
        for (c, i) in cells.zip(&is) {
            t.insert(*i, j, parse_group(c)?);
        }
    }
    Ok(t)
}
