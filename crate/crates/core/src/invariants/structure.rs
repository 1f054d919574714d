//! Identities relating the four homology theories of one diagram.

use serde::{Deserialize, Serialize};

use super::{build_complex, jones_by_skein, khovanov_homology, unknot, Check};
use crate::cube::{build_odd_complex_with, default_arrows, Variant, ZeroFaceRule};
use crate::diagram::PlanarDiagram;
use crate::error::Result;
use crate::linalg::{homology, reduce_complex, HomologyTable, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub checks: Vec<Check>,
}

impl StructuralReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn ranks(t: &HomologyTable) -> Vec<((i32, i32), u64)> {
    t.iter().map(|(k, g)| (k, g.rank)).collect()
}

fn compare(name: &str, a: &HomologyTable, b: &HomologyTable) -> Check {
    if a == b {
        return Check::new(name, true, "");
    }
    let diff: Vec<String> = a
        .iter()
        .map(|(k, _)| k)
        .chain(b.iter().map(|(k, _)| k))
        .filter(|&(i, j)| a.get(i, j) != b.get(i, j))
        .take(3)
        .map(|(i, j)| format!("({i}, {j}): {:?} vs {:?}", a.get(i, j), b.get(i, j)))
        .collect();
    Check::new(name, false, diff.join("; "))
}

/// Runs every identity on `d`. A missing base point is placed on the
/// first component.
pub fn verify_structural_identities(d: &PlanarDiagram) -> Result<StructuralReport> {
    let d = match d.base_point() {
        Some(_) => d.clone(),
        None => d.clone().with_base_point(0)?,
    };
    let mut checks = Vec::new();
    let table = |ring, variant| khovanov_homology(&d, ring, variant);

    let f2 = Ring::Fp(2);
    let even_f2 = table(f2, Variant::Even)?;
    let red_f2 = table(f2, Variant::EvenReduced)?;
    let split_f2 = red_f2.shift_j(1).direct_sum(&red_f2.shift_j(-1));
    checks.push(Check::new(
        "F2 tensor identity",
        ranks(&even_f2) == ranks(&split_f2),
        if ranks(&even_f2) == ranks(&split_f2) { String::new() } else { format!("{even_f2:?} vs {split_f2:?}") },
    ));

    let odd_f2 = table(f2, Variant::Odd)?;
    checks.push(compare("odd equals even over F2", &odd_f2, &even_f2));

    let odd_z = table(Ring::Z, Variant::Odd)?;
    let odd_red_z = table(Ring::Z, Variant::OddReduced)?;
    checks.push(compare("odd splitting over Z", &odd_z, &odd_red_z.shift_j(1).direct_sum(&odd_red_z.shift_j(-1))));

    let links = d.component_count() as i32;
    let even_z = table(Ring::Z, Variant::Even)?;
    let red_z = table(Ring::Z, Variant::EvenReduced)?;
    let mut bad = Vec::new();
    for (t, reduced) in [(&even_z, false), (&red_z, true), (&odd_z, false), (&odd_red_z, true)] {
        for ((i, j), _) in t.iter() {
            if ((j - links).rem_euclid(2) == 1) != reduced {
                bad.push(format!("({i}, {j})"));
            }
        }
    }
    checks.push(Check::new("q-parity", bad.is_empty(), bad.join(", ")));

    let mut complexes = Vec::new();
    for v in Variant::ALL {
        complexes.push((v, build_complex(&d, Ring::Z, v)?));
    }
    let jones = jones_by_skein(&d)?;
    let reduced_jones = jones.div_exact(&unknot());
    let mut mismatches = Vec::new();
    for (v, c) in &complexes {
        let chi = c.euler_characteristic();
        let want = if v.is_reduced() { reduced_jones.clone() } else { Some(jones.clone()) };
        if Some(&chi) != want.as_ref() {
            mismatches.push(format!("{v}: {chi}"));
        }
    }
    checks.push(Check::new(
        "Euler characteristic equals skein Jones polynomial",
        mismatches.is_empty(),
        format!("skein gives {jones}; {}", mismatches.join("; ")),
    ));

    let broken: Vec<String> = complexes
        .iter()
        .filter_map(|(v, c)| c.verify_d_squared().err().map(|e| format!("{v}: {e}")))
        .collect();
    checks.push(Check::new("d² = 0", broken.is_empty(), broken.join("; ")));

    let n = d.crossing_count();
    let reversed: Vec<usize> = (0..n).rev().collect();
    let p = d.permute_crossings(&reversed);
    checks.push(compare("crossing order, even", &even_z, &khovanov_homology(&p, Ring::Z, Variant::Even)?));
    checks.push(compare("crossing order, odd reduced", &odd_red_z, &khovanov_homology(&p, Ring::Z, Variant::OddReduced)?));

    let mut arrows = default_arrows(&d);
    for x in 0..n {
        arrows = arrows.reversed(x);
    }
    let flipped = build_odd_complex_with(&d, Ring::Z, true, &arrows, ZeroFaceRule::Unconstrained, || true)?;
    checks.push(compare("arrow choice, odd reduced", &odd_red_z, &homology(&reduce_complex(&flipped))?));

    Ok(StructuralReport { checks })
}
