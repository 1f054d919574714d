use std::path::Path;

use kho_cli::cache::{cache_key, Cache};
use kho_cli::ingest::{ingest_str, ingest_table};
use kho_cli::render::{parse_table, render_table};
use kho_cli::run;
use kho_core::invariants::khovanov_homology;
use kho_core::linalg::HomologyGroup;
use kho_core::{BraidWord, HomologyTable, Ring, Variant};

const PD_12N475: &str = include_str!("../../core/tests/data/12n475.pd");

fn kho(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("kho").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn trefoil_args(dir: &Path) -> Vec<String> {
    ["compute", "--format", "braid", "--input", "2: 1 1 1", "--cache-dir", dir.to_str().unwrap()]
        .map(String::from)
        .to_vec()
}

fn kho_owned(args: &[String]) -> (i32, String, String) {
    kho(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn g(rank: u64, torsion: &[u64]) -> HomologyGroup {
    HomologyGroup { rank, torsion: torsion.to_vec() }
}

#[test]
fn trefoil_table_is_printed_as_a_grid() {
    let (code, out, _) = kho(&["compute", "--format", "braid", "--input", "2: 1 1 1", "--ring", "Z", "--variant", "even"]);
    assert_eq!(code, 0);
    let want = HomologyTable::from_entries(
        Ring::Z,
        [((0, 1), g(1, &[])), ((0, 3), g(1, &[])), ((2, 5), g(1, &[])), ((3, 7), g(0, &[2])), ((3, 9), g(1, &[]))],
    );
    assert_eq!(parse_table(&out).unwrap(), want);
    assert!(out.contains("1₂"), "{out}");
}

#[test]
fn pretzel_invariants_report_three_torsion() {
    let (code, out, _) =
        kho(&["invariants", "--format", "pretzel", "--input", "P(3,3,-3)", "--variant", "odd-reduced"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let entry = v["table"].as_array().unwrap().iter().find(|e| e["i"] == 0 && e["j"] == -2).unwrap();
    assert_eq!(entry["rank"], 0);
    assert_eq!(entry["torsion"], serde_json::json!([3]));
    assert_eq!(v["qa"]["verdict"], "obstructed");
}

#[test]
fn hopf_link_verifies() {
    let (code, out, _) = kho(&["verify", "--format", "braid", "--input", "2: 1 1"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn jones_and_qa_subcommands() {
    assert_eq!(kho(&["jones", "--format", "braid", "--input", "2: 1 1 1"]).1.trim(), "q + q^3 + q^5 - q^9");
    let (code, out, _) = kho(&["qa", "--format", "braid", "--input", "2: 1 1 1", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "proven-qa");
    assert_eq!(v["certificate"]["det"], 3);
}

#[test]
fn bad_input_exits_nonzero_with_a_diagnostic() {
    let (code, _, err) = kho(&["compute", "--input", "X[1,2,3]"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let (code, _, err) = kho(&["compute", "--input", "X[1,1,2,2]", "--ring", "Fp:4"]);
    assert_ne!(code, 0);
    assert!(!err.is_empty());
    assert_ne!(kho(&["compute", "--input", "O", "--variant", "sideways"]).0, 0);
    assert_ne!(kho(&["frobnicate"]).0, 0);
}

#[test]
fn input_may_name_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.pd");
    std::fs::write(&path, PD_12N475).unwrap();
    let (code, out, _) = kho(&["jones", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains('q'));
}

#[test]
fn ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.txt");
    std::fs::write(&path, format!("12n475: {PD_12N475}\n")).unwrap();
    let got = ingest_table(&path).unwrap();
    assert!(got.errors.is_empty());
    assert_eq!(got.diagrams.len(), 1);
    assert_eq!(got.diagrams[0].0, "12n475");
    assert_eq!(got.diagrams[0].1.crossing_count(), 12);

    let empty = ingest_str("");
    assert!(empty.diagrams.is_empty() && empty.errors.is_empty());

    let mixed = ingest_str("3_1: X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\nbad: X[1,2,3]\n\n# note\nu: X[1,1,2,2]\nno colon here\n");
    assert_eq!(mixed.diagrams.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(), ["3_1", "u"]);
    assert_eq!(mixed.errors.iter().map(|e| e.line).collect::<Vec<_>>(), [2, 6]);
    assert!(ingest_table(&dir.path().join("missing")).is_err());
}

#[test]
fn batch_reports_bad_lines_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.txt");
    std::fs::write(&path, "t: X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\nbroken: X[1,2\nh: X[4,1,3,2] X[2,3,1,4]\n").unwrap();
    let (code, out, err) = kho(&["batch", "--input", path.to_str().unwrap(), "--jobs", "2", "--json"]);
    assert_eq!(code, 1);
    assert!(err.contains("line 2"), "{err}");
    let names: Vec<String> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, ["t", "h"]);
    let (_, text, _) = kho(&["batch", "--input", path.to_str().unwrap()]);
    assert!(text.contains("== t ==") && text.contains("== h =="));
}

#[test]
fn second_run_is_served_from_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = trefoil_args(dir.path());
    let (_, first, _) = kho_owned(&args);
    let file = dir.path().join("cache.jsonl");
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), 1);
    assert_eq!(kho_owned(&args).1, first);
    assert_eq!(std::fs::read_to_string(&file).unwrap().lines().count(), 1);

    // a planted value shows the table is read back rather than recomputed
    let d = BraidWord::new(2, vec![1, 1, 1]).unwrap().closure();
    let planted = HomologyTable::from_entries(Ring::Z, [((7, 7), g(5, &[]))]);
    Cache::open(dir.path()).unwrap().put(&cache_key(&d, Ring::Z, Variant::Even, "table"), &planted).unwrap();
    assert_eq!(parse_table(&kho_owned(&args).1).unwrap(), planted);
}

#[test]
fn version_bump_misses() {
    let dir = tempfile::tempdir().unwrap();
    let old = Cache::with_version(dir.path(), "0.0.1").unwrap();
    old.put("k", &1u32).unwrap();
    assert_eq!(old.get::<u32>("k").unwrap(), Some(1));
    assert_eq!(Cache::with_version(dir.path(), "0.0.2").unwrap().get::<u32>("k").unwrap(), None);
}

#[test]
fn corrupted_entry_is_recomputed_and_rewritten() {
    let dir = tempfile::tempdir().unwrap();
    let args = trefoil_args(dir.path());
    let (_, first, _) = kho_owned(&args);
    let file = dir.path().join("cache.jsonl");
    let damaged = std::fs::read_to_string(&file).unwrap().replace("\"rank\":1", "\"rank\":4");
    std::fs::write(&file, damaged).unwrap();
    assert_eq!(kho_owned(&args).1, first);
    let text = std::fs::read_to_string(&file).unwrap();
    assert_eq!(text.lines().count(), 2);
    std::fs::write(&file, "{not json\n").unwrap();
    assert_eq!(kho_owned(&args).1, first);
}

#[test]
fn concurrent_writers_leave_whole_records() {
    let dir = tempfile::tempdir().unwrap();
    std::thread::scope(|s| {
        for t in 0..8 {
            let path = dir.path().to_path_buf();
            s.spawn(move || {
                let c = Cache::open(&path).unwrap();
                for k in 0..25 {
                    c.put(&format!("{t}/{k}"), &vec![t; 200]).unwrap();
                }
            });
        }
    });
    let c = Cache::open(dir.path()).unwrap();
    for t in 0..8 {
        for k in 0..25 {
            assert_eq!(c.get::<Vec<i32>>(&format!("{t}/{k}")).unwrap(), Some(vec![t; 200]));
        }
    }
}

#[test]
fn unwritable_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    assert!(Cache::open(&blocker.join("sub")).is_err());
    let (code, _, err) = kho(&["compute", "--input", "O", "--cache-dir", blocker.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("cache"), "{err}");
}

#[test]
fn produced_tables_survive_cache_and_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let words: [(u32, &[i32]); 4] = [(2, &[1, 1, 1]), (3, &[1, -2, 1, -2]), (3, &[1, 1, 2, 1, 1, 2]), (2, &[1, 1])];
    for (strands, w) in words {
        let d = BraidWord::new(strands, w.to_vec()).unwrap().closure().with_base_point(0).unwrap();
        for ring in [Ring::Z, Ring::Q, Ring::Fp(3)] {
            for v in Variant::ALL {
                let t = khovanov_homology(&d, ring, v).unwrap();
                let key = cache_key(&d, ring, v, "table");
                cache.put(&key, &t).unwrap();
                assert_eq!(cache.get::<HomologyTable>(&key).unwrap().as_ref(), Some(&t));
                assert_eq!(parse_table(&render_table(&t)).unwrap(), t);
            }
        }
    }
}

mod grid {
    use proptest::prelude::*;

    use super::*;

    fn table() -> impl Strategy<Value = HomologyTable> {
        let ring = prop_oneof![Just(Ring::Z), Just(Ring::Q), Just(Ring::Fp(2)), Just(Ring::Fp(5))];
        let entry = (-4i32..5, -6i32..7, 0u64..4, prop::collection::vec(2u64..30, 0..3));
        (ring, prop::collection::vec(entry, 0..8)).prop_map(|(ring, es)| {
            let mut t = HomologyTable::new(ring);
            for (i, j, rank, torsion) in es {
                let torsion = if ring == Ring::Z { kho_core::linalg::normalize_torsion(&torsion) } else { vec![] };
                t.insert(i, j, HomologyGroup { rank, torsion });
            }
            t
        })
    }

    proptest! {
        #[test]
        fn rendering_round_trips(t in table()) {
            prop_assert_eq!(parse_table(&render_table(&t)).unwrap(), t);
        }
    }
}
