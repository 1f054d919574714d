//! Command-line front end: argument handling, knot-table ingestion, text
//! rendering of homology tables and a persistent result cache.

pub mod cache;
pub mod ingest;
pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kho_core::diagram::{parse_pd, parse_pretzel};
use kho_core::invariants::{
    build_complex, invariant_report, jones_by_skein, khovanov_homology, qa_search, table_entries,
    verify_structural_identities, InvariantReport, QaVerdict,
};
use kho_core::{BraidWord, HomologyTable, PlanarDiagram, Ring, Variant};
use rayon::prelude::*;
use serde::Serialize;

use cache::{cache_key, Cache};
use render::render_table;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pd,
    Braid,
    Pretzel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Table,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "kho", version, about = "Even, reduced and odd Khovanov homology of links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the homology table.
    Compute(CommonArgs),
    /// Print the Jones polynomial from the skein relation.
    Jones(CommonArgs),
    /// Print every derived invariant as JSON.
    Invariants(CommonArgs),
    /// Run the structural identities; exits 1 if any fails.
    Verify(CommonArgs),
    /// Look for a quasi-alternating certificate.
    Qa(CommonArgs),
    /// Compute tables for every diagram of a `name: PD` file.
    Batch(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Diagram text, or a path to a file holding it.
    #[arg(long)]
    pub input: String,
    #[arg(long, value_enum, default_value = "pd")]
    pub format: Format,
    /// Z, Q or Fp:<p>.
    #[arg(long, default_value = "Z")]
    pub ring: Ring,
    /// even, even-reduced, odd or odd-reduced.
    #[arg(long, default_value = "even")]
    pub variant: Variant,
    #[arg(long)]
    pub json: bool,
    /// Diagrams the quasi-alternating search may examine.
    #[arg(long, default_value_t = 10_000)]
    pub qa_budget: usize,
    /// Print chain group ranks and differential sizes first.
    #[arg(long)]
    pub dump_chain: bool,
    /// Worker threads for batch runs; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, env = "KHO_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

/// One unit of work after argument parsing.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub source: String,
    pub format: Format,
    pub ring: Ring,
    pub variant: Variant,
    pub output: Output,
}

impl JobSpec {
    pub fn from_args(a: &CommonArgs) -> Self {
        JobSpec {
            source: a.input.clone(),
            format: a.format,
            ring: a.ring,
            variant: a.variant,
            output: if a.json { Output::Json } else { Output::Table },
        }
    }

    /// The literal input, or the contents of the file it names.
    pub fn text(&self) -> Result<String> {
        let path = Path::new(&self.source);
        if path.is_file() {
            return std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()));
        }
        Ok(self.source.clone())
    }

    pub fn diagram(&self) -> Result<PlanarDiagram> {
        let text = self.text()?;
        Ok(match self.format {
            Format::Pd => parse_pd(&text)?,
            Format::Braid => text.trim().parse::<BraidWord>()?.closure(),
            Format::Pretzel => parse_pretzel(text.trim())?,
        })
    }
}

#[derive(Serialize)]
struct TableJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    diagram_hash: String,
    ring: Ring,
    variant: Variant,
    table: Vec<kho_core::invariants::TableEntry>,
}

fn open_cache(a: &CommonArgs) -> Result<Option<Cache>> {
    a.cache_dir.as_deref().map(Cache::open).transpose()
}

fn table_for(d: &PlanarDiagram, ring: Ring, variant: Variant, cache: Option<&Cache>) -> Result<HomologyTable> {
    let compute = || Ok(khovanov_homology(d, ring, variant)?);
    match cache {
        Some(c) => c.get_or_insert(&cache_key(d, ring, variant, "table"), compute),
        None => compute(),
    }
}

fn dump_chain(d: &PlanarDiagram, ring: Ring, variant: Variant, out: &mut dyn Write) -> Result<()> {
    let c = build_complex(d, ring, variant)?;
    writeln!(out, "chain complex: {variant} over {ring}, {} generators", c.total_rank())?;
    for (i, p) in c.graded_dims() {
        writeln!(out, "C^{i}: {p}")?;
    }
    let mut sizes: std::collections::BTreeMap<i32, (usize, usize, usize)> = Default::default();
    for b in c.blocks.values() {
        for (&i, m) in &b.diffs {
            let s = sizes.entry(i).or_default();
            s.0 += m.rows();
            s.1 += m.cols();
            s.2 += m.nnz();
        }
    }
    for (i, (r, c, nnz)) in sizes {
        writeln!(out, "d^{i}: {r} x {c} in q-blocks, {nnz} nonzero")?;
    }
    Ok(())
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn compute(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let job = JobSpec::from_args(a);
    let d = job.diagram()?;
    if a.dump_chain {
        dump_chain(&d, job.ring, job.variant, out)?;
    }
    let t = table_for(&d, job.ring, job.variant, open_cache(a)?.as_ref())?;
    match job.output {
        Output::Table => write!(out, "{}", render_table(&t))?,
        Output::Json => print_json(
            out,
            &TableJson {
                name: None,
                diagram_hash: d.content_hash(),
                ring: t.ring,
                variant: job.variant,
                table: table_entries(&t),
            },
        )?,
    }
    Ok(0)
}

fn jones(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let j = jones_by_skein(&JobSpec::from_args(a).diagram()?)?;
    if a.json {
        print_json(out, &serde_json::json!({ "jones": j.to_string() }))?;
    } else {
        writeln!(out, "{j}")?;
    }
    Ok(0)
}

fn invariants(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let job = JobSpec::from_args(a);
    let d = job.diagram()?;
    let compute = || Ok(invariant_report(&d, job.ring, job.variant, a.qa_budget)?);
    let report: InvariantReport = match open_cache(a)? {
        Some(c) => c.get_or_insert(&cache_key(&d, job.ring, job.variant, &format!("report/{}", a.qa_budget)), compute)?,
        None => compute()?,
    };
    print_json(out, &report)?;
    Ok(0)
}

fn verify(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let r = verify_structural_identities(&JobSpec::from_args(a).diagram()?)?;
    if a.json {
        print_json(out, &r)?;
    } else {
        for c in &r.checks {
            match (c.passed, c.detail.is_empty()) {
                (true, _) => writeln!(out, "PASS {}", c.name)?,
                (false, true) => writeln!(out, "FAIL {}", c.name)?,
                (false, false) => writeln!(out, "FAIL {}: {}", c.name, c.detail)?,
            }
        }
    }
    Ok(if r.all_passed() { 0 } else { 1 })
}

fn qa(a: &CommonArgs, out: &mut dyn Write) -> Result<i32> {
    let r = qa_search(&JobSpec::from_args(a).diagram()?, a.qa_budget)?;
    if a.json {
        print_json(out, &r)?;
        return Ok(0);
    }
    match &r.verdict {
        QaVerdict::ProvenQa { certificate } => {
            writeln!(out, "quasi-alternating: certificate with {} nodes", certificate.node_count())?
        }
        QaVerdict::Obstructed { variant, ring, mirrored, witness } => writeln!(
            out,
            "not quasi-alternating: {variant} homology over {ring}{} is thick at {witness:?}",
            if *mirrored { " of the mirror" } else { "" }
        )?,
        QaVerdict::Unknown => writeln!(out, "unknown after examining {} diagrams", r.nodes)?,
    }
    Ok(0)
}

fn batch(a: &CommonArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let job = JobSpec::from_args(a);
    let ingested = ingest::ingest_str(&job.text()?);
    for e in &ingested.errors {
        writeln!(err, "line {}: {}", e.line, e.message)?;
    }
    let cache = open_cache(a)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build()?;
    let results: Vec<Result<HomologyTable>> = pool.install(|| {
        ingested
            .diagrams
            .par_iter()
            .map(|(_, d)| table_for(d, job.ring, job.variant, cache.as_ref()))
            .collect()
    });
    let mut failed = !ingested.errors.is_empty();
    for ((name, d), r) in ingested.diagrams.iter().zip(results) {
        match r {
            Err(e) => {
                failed = true;
                writeln!(err, "{name}: {e:#}")?;
            }
            Ok(t) if job.output == Output::Json => {
                serde_json::to_writer(
                    &mut *out,
                    &TableJson {
                        name: Some(name),
                        diagram_hash: d.content_hash(),
                        ring: t.ring,
                        variant: job.variant,
                        table: table_entries(&t),
                    },
                )?;
                writeln!(out)?;
            }
            Ok(t) => writeln!(out, "== {name} ==\n{}", render_table(&t))?,
        }
    }
    Ok(if failed { 1 } else { 0 })
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code: 0 on success, 1 for failed checks or partially failed
/// batches, 2 for bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a, out),
        Command::Jones(a) => jones(a, out),
        Command::Invariants(a) => invariants(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Qa(a) => qa(a, out),
        Command::Batch(a) => batch(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
