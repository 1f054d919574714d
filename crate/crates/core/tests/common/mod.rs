#![allow(dead_code)]

use kho_core::diagram::{parse_pd, pretzel};
use kho_core::{BraidWord, PlanarDiagram};

pub fn closure(strands: u32, letters: &[i32]) -> PlanarDiagram {
    BraidWord::new(strands, letters.to_vec()).unwrap().closure()
}

pub fn repeat(word: &[i32], times: usize) -> Vec<i32> {
    word.iter().copied().cycle().take(word.len() * times).collect()
}

pub fn data(name: &str) -> PlanarDiagram {
    let path = format!("{}/tests/data/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    parse_pd(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Named diagrams of at most ten crossings: braid closures, a kink, an
/// unlink and the two pretzel knots.
pub fn corpus() -> Vec<(String, PlanarDiagram)> {
    let braids: Vec<(u32, Vec<i32>)> = vec![
        (2, vec![1, 1]),
        (2, vec![-1, -1]),
        (2, vec![1, 1, 1]),
        (2, vec![-1, -1, -1]),
        (2, vec![1, 1, 1, 1]),
        (3, vec![1, -2, 1, -2]),
        (2, vec![1; 5]),
        (3, vec![1, 1, 1, 2, -1, 2]),
        (3, vec![1, 1, 1, -2, 1, -2]),
        (3, vec![1, 1, -2, 1, -2, -2]),
        (3, repeat(&[1, -2], 3)),
        (4, vec![1, 1, 2, -1, -3, 2, -3]),
        (2, vec![1; 7]),
        (3, repeat(&[1, 2], 4)),
        (3, vec![1, 1, 1, -2, -1, -1, -1, -2]),
        (3, vec![1, 2, 2, 1, 2, 2, 1, 2, 2]),
        (3, repeat(&[1, 2], 5)),
        (4, vec![1, -2, 3, -2, 1, -2, 3, 1, 2, -3]),
    ];
    let mut out = vec![
        ("unknot".to_string(), PlanarDiagram::unknot()),
        ("kink".to_string(), parse_pd("X[1,1,2,2]").unwrap()),
        ("two-component unlink".to_string(), PlanarDiagram::unlink(2)),
    ];
    for (strands, w) in braids {
        let name = format!("{strands}: {}", w.iter().map(i32::to_string).collect::<Vec<_>>().join(" "));
        out.push((name, closure(strands, &w)));
    }
    out.push(("P(3,3,-3)".into(), pretzel(&[3, 3, -3]).unwrap()));
    out.push(("P(3,4,-3)".into(), pretzel(&[3, 4, -3]).unwrap()));
    out
}
