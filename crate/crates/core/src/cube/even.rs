use super::{ChainComplex, Cube, Variant};
use crate::diagram::{PlanarDiagram, State};
use crate::error::{Error, Result};
use crate::linalg::Ring;

/// (i(s), j(s)) = ((w − σ)/2, (3w − σ)/2) with σ(s) = n − 2·#negative markers.
pub fn state_gradings(d: &PlanarDiagram, s: State) -> (i32, i32) {
    let n = d.crossing_count() as i32;
    let w = d.writhe();
    let r = s.negative_count() as i32;
    let sigma = n - 2 * r;
    ((w - sigma) / 2, (3 * w - sigma) / 2)
}

/// Sign of the cube edge leaving `s_plus` at crossing `x`: −1 to the
/// number of negative markers at crossings after `x`.
pub fn edge_sign(d: &PlanarDiagram, s_plus: State, x: usize) -> Result<i64> {
    let n = d.crossing_count();
    if x >= n {
        return Err(Error::CrossingIndex { index: x, count: n });
    }
    if s_plus.is_negative(x) {
        return Err(Error::MarkerNotPositive(x));
    }
    Ok(sign_after(s_plus.0, x))
}

pub(crate) fn sign_after(s: u64, x: usize) -> i64 {
    if (s >> (x + 1)).count_ones().is_multiple_of(2) { 1 } else { -1 }
}

/// Unsigned image of generator (s, label) along the edge at crossing `x`:
/// m on a merge, Δ on a split.
pub fn even_edge_map(cube: &Cube, s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>) {
    let t = s | 1 << x;
    let a = cube.circle_at(s, x, 0);
    let b = cube.circle_at(s, x, 2);
    let phi = cube.transfer(s, t);
    let mut base = 0u64;
    let mut bits = label;
    while bits != 0 {
        let k = bits.trailing_zeros();
        if k != a && k != b {
            base |= 1 << phi[k as usize];
        }
        bits &= bits - 1;
    }
    let has = |k: u32| label >> k & 1 == 1;
    if a != b {
        // merge: 1·1 = 1, 1·X = X, X·X = 0
        let m = phi[a as usize];
        match (has(a), has(b)) {
            (true, true) => {}
            (false, false) => out.push((base, 1)),
            _ => out.push((base | 1 << m, 1)),
        }
    } else {
        // split: Δ(1) = 1⊗X + X⊗1, Δ(X) = X⊗X
        let c1 = cube.circle_at(t, x, 0);
        let c2 = cube.circle_at(t, x, 1);
        if has(a) {
            out.push((base | 1 << c1 | 1 << c2, 1));
        } else {
            out.push((base | 1 << c1, 1));
            out.push((base | 1 << c2, 1));
        }
    }
}

/// The even complex, or its reduced subcomplex when `reduced` is set.
pub fn build_even_complex(d: &PlanarDiagram, ring: Ring, reduced: bool) -> Result<ChainComplex> {
    if reduced && d.base_point().is_none() {
        return Err(Error::MissingBasePoint);
    }
    let cube = Cube::new(d)?;
    let variant = if reduced { Variant::EvenReduced } else { Variant::Even };
    let map = |s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>| {
        let start = out.len();
        even_edge_map(&cube, s, x, label, out);
        let sign = sign_after(s, x);
        for e in &mut out[start..] {
            e.1 *= sign;
        }
    };
    Ok(cube.complex(ring, variant, &map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{graded_dim_of_state, Laurent};
    use crate::diagram::BraidWord;
    use crate::linalg::{homology, HomologyGroup, HomologyTable};

    fn hopf() -> PlanarDiagram {
        BraidWord::new(2, vec![1, 1]).unwrap().closure()
    }

    #[test]
    fn hopf_gradings_and_signs() {
        let d = hopf();
        assert_eq!(state_gradings(&d, State(0b00)), (0, 2));
        assert_eq!(state_gradings(&d, State(0b10)), (1, 3));
        assert_eq!(state_gradings(&d, State(0b11)), (2, 4));
        // s₊₋ → s₋₋ flips crossing 0 with crossing 1 negative
        assert_eq!(edge_sign(&d, State(0b10), 0).unwrap(), -1);
        assert_eq!(edge_sign(&d, State(0b00), 1).unwrap(), 1);
        assert_eq!(edge_sign(&d, State(0b00), 0).unwrap(), 1);
        assert!(matches!(edge_sign(&d, State(0b01), 0), Err(Error::MarkerNotPositive(0))));
    }

    #[test]
    fn hopf_graded_dimensions() {
        let c = build_even_complex(&hopf(), Ring::Z, false).unwrap();
        let dims = c.graded_dims();
        assert_eq!(dims[&0], graded_dim_of_state(2, 2));
        assert_eq!(dims[&1], graded_dim_of_state(3, 1).scale(2));
        assert_eq!(dims[&2], graded_dim_of_state(4, 2));
    }

    #[test]
    fn unknot_complex() {
        let c = build_even_complex(&PlanarDiagram::unknot(), Ring::Z, false).unwrap();
        assert_eq!(c.euler_characteristic(), Laurent::from_terms([([1], 1), ([-1], 1)]));
        let t = homology(&c).unwrap();
        let one = HomologyGroup { rank: 1, torsion: vec![] };
        assert_eq!(t, HomologyTable::from_entries(Ring::Z, [((0, -1), one.clone()), ((0, 1), one)]));
    }

    #[test]
    fn reduced_requires_base_point() {
        let d = hopf().without_base_point();
        assert!(matches!(build_even_complex(&d, Ring::Z, true), Err(Error::MissingBasePoint)));
    }

    #[test]
    fn flipped_sign_breaks_d_squared() {
        let d = BraidWord::new(2, vec![1, 1, 1]).unwrap().closure();
        let cube = Cube::new(&d).unwrap();
        let map = |s: u64, x: usize, label: u64, out: &mut Vec<(u64, i64)>| {
            let start = out.len();
            even_edge_map(&cube, s, x, label, out);
            let mut sign = sign_after(s, x);
            if s == 0 && x == 0 {
                sign = -sign;
            }
            for e in &mut out[start..] {
                e.1 *= sign;
            }
        };
        let c = cube.complex(Ring::Z, Variant::Even, &map);
        let err = c.verify_d_squared().unwrap_err();
        assert!(err.contains("state 0 "), "{err}");
    }
}
