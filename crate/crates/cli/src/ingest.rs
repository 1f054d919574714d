//! Knot tables: one `name: PD code` record per line.

use std::path::Path;

use anyhow::{Context, Result};
use kho_core::diagram::parse_pd;
use kho_core::PlanarDiagram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IngestError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub diagrams: Vec<(String, PlanarDiagram)>,
    pub errors: Vec<IngestError>,
}

/// Parses every record; bad lines are collected, not fatal. Blank lines
/// and lines starting with `#` are skipped.
pub fn ingest_str(text: &str) -> Ingested {
    let mut out = Ingested::default();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed = match line.split_once(':') {
            None => Err("expected `name: PD`".to_string()),
            Some((name, _)) if name.trim().is_empty() => Err("empty name".to_string()),
            Some((name, pd)) => parse_pd(pd).map(|d| (name.trim().to_string(), d)).map_err(|e| e.to_string()),
        };
        match parsed {
            Ok(entry) => out.diagrams.push(entry),
            Err(message) => out.errors.push(IngestError { line: n + 1, message }),
        }
    }
    out
}

pub fn ingest_table(path: &Path) -> Result<Ingested> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ingest_str(&text))
}
