//! Structure tables of A = R[X]/X² and of its Lee deformation.
//!
//! Basis elements are encoded as bits: 0 is `1`, 1 is `X`. A tensor
//! power of A is then indexed by a bitmask over its factors.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    One,
    X,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::One, Label::X];

    pub fn degree(self) -> i32 {
        match self {
            Label::One => 1,
            Label::X => -1,
        }
    }

    pub fn bit(self) -> u64 {
        self as u64
    }

    pub fn from_bit(bit: u64) -> Label {
        if bit & 1 == 1 { Label::X } else { Label::One }
    }
}

/// Degree of m and Δ.
pub const MAP_DEGREE: i32 = -1;
/// Degree of ι and ε.
pub const UNIT_DEGREE: i32 = 1;

/// m(a ⊗ b) with coefficient 1, or `None` when it vanishes.
pub fn multiply(a: Label, b: Label) -> Option<Label> {
    match (a, b) {
        (Label::One, Label::One) => Some(Label::One),
        (Label::One, Label::X) | (Label::X, Label::One) => Some(Label::X),
        (Label::X, Label::X) => None,
    }
}

/// Δ(a) as a sum of tensors with coefficient 1.
pub fn comultiply(a: Label) -> &'static [(Label, Label)] {
    match a {
        Label::One => &[(Label::One, Label::X), (Label::X, Label::One)],
        Label::X => &[(Label::X, Label::X)],
    }
}

pub fn unit() -> Label {
    Label::One
}

pub fn counit(a: Label) -> i64 {
    match a {
        Label::One => 0,
        Label::X => 1,
    }
}

/// Lee's extra multiplication m′: only m′(X ⊗ X) = 1 is nonzero.
pub fn lee_multiply(a: Label, b: Label) -> Option<Label> {
    match (a, b) {
        (Label::X, Label::X) => Some(Label::One),
        _ => None,
    }
}

/// Lee's extra comultiplication Δ′: only Δ′(X) = 1 ⊗ 1 is nonzero.
pub fn lee_comultiply(a: Label) -> &'static [(Label, Label)] {
    match a {
        Label::One => &[],
        Label::X => &[(Label::One, Label::One)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    // linear combinations of tensors of labels
    type Vector = BTreeMap<Vec<Label>, i64>;

    fn basis(k: usize) -> Vec<Vec<Label>> {
        (0..1u32 << k).map(|m| (0..k).map(|i| Label::from_bit((m >> i) as u64)).collect()).collect()
    }

    fn add(v: &mut Vector, key: Vec<Label>, c: i64) {
        *v.entry(key.clone()).or_default() += c;
        if v[&key] == 0 {
            v.remove(&key);
        }
    }

    /// Apply a map on factors `at..at+width` of every tensor.
    fn apply(v: &Vector, at: usize, width: usize, f: &dyn Fn(&[Label]) -> Vec<(Vec<Label>, i64)>) -> Vector {
        let mut out = Vector::new();
        for (t, &c) in v {
            for (img, k) in f(&t[at..at + width]) {
                let mut key = t[..at].to_vec();
                key.extend(img);
                key.extend_from_slice(&t[at + width..]);
                add(&mut out, key, c * k);
            }
        }
        out
    }

    fn m(x: &[Label]) -> Vec<(Vec<Label>, i64)> {
        multiply(x[0], x[1]).map(|l| (vec![l], 1)).into_iter().collect()
    }

    fn delta(x: &[Label]) -> Vec<(Vec<Label>, i64)> {
        comultiply(x[0]).iter().map(|&(a, b)| (vec![a, b], 1)).collect()
    }

    fn single(t: &[Label]) -> Vector {
        Vector::from([(t.to_vec(), 1)])
    }

    #[test]
    fn tables() {
        use Label::*;
        assert_eq!(multiply(One, One), Some(One));
        assert_eq!(multiply(One, X), Some(X));
        assert_eq!(multiply(X, One), Some(X));
        assert_eq!(multiply(X, X), None);
        assert_eq!(comultiply(One), &[(One, X), (X, One)]);
        assert_eq!(comultiply(X), &[(X, X)]);
        assert_eq!((counit(One), counit(X)), (0, 1));
        assert_eq!(unit(), One);
        assert_eq!((MAP_DEGREE, UNIT_DEGREE), (-1, 1));
    }

    #[test]
    fn maps_have_stated_degrees() {
        let deg = |t: &[Label]| t.iter().map(|l| l.degree()).sum::<i32>();
        for t in basis(2) {
            if let Some(l) = multiply(t[0], t[1]) {
                assert_eq!(l.degree(), deg(&t) + MAP_DEGREE);
            }
        }
        for t in basis(1) {
            for &(a, b) in comultiply(t[0]) {
                assert_eq!(a.degree() + b.degree(), deg(&t) + MAP_DEGREE);
            }
            if counit(t[0]) != 0 {
                assert_eq!(0, t[0].degree() + UNIT_DEGREE);
            }
        }
        assert_eq!(unit().degree(), UNIT_DEGREE);
    }

    #[test]
    fn associative_and_commutative() {
        for t in basis(3) {
            let left = apply(&apply(&single(&t), 0, 2, &m), 0, 2, &m);
            let right = apply(&apply(&single(&t), 1, 2, &m), 0, 2, &m);
            assert_eq!(left, right);
        }
        for t in basis(2) {
            assert_eq!(multiply(t[0], t[1]), multiply(t[1], t[0]));
        }
    }

    #[test]
    fn coassociative_and_cocommutative() {
        for t in basis(1) {
            let d = apply(&single(&t), 0, 1, &delta);
            assert_eq!(apply(&d, 0, 1, &delta), apply(&d, 1, 1, &delta));
            let swapped: Vector = d.iter().map(|(k, &c)| (vec![k[1], k[0]], c)).collect();
            assert_eq!(swapped, d);
        }
    }

    #[test]
    fn frobenius_relation_and_counit() {
        for t in basis(2) {
            // (m ⊗ id)(id ⊗ Δ) = Δ m
            let lhs = apply(&apply(&single(&t), 1, 1, &delta), 0, 2, &m);
            let rhs = apply(&apply(&single(&t), 0, 2, &m), 0, 1, &delta);
            assert_eq!(lhs, rhs);
        }
        for t in basis(1) {
            // (ε ⊗ id)Δ = id
            let d = apply(&single(&t), 0, 1, &delta);
            let eps = apply(&d, 0, 1, &|x: &[Label]| vec![(vec![], counit(x[0]))]);
            assert_eq!(eps, single(&t));
        }
    }

    #[test]
    fn lee_deformation_tables() {
        use Label::*;
        assert_eq!(lee_multiply(X, X), Some(One));
        assert_eq!(lee_multiply(One, X), None);
        assert_eq!(lee_comultiply(X), &[(One, One)]);
        assert!(lee_comultiply(One).is_empty());
        // m + m′ and Δ + Δ′ form the Frobenius algebra R[X]/(X² − 1)
        let mt = |x: &[Label]| -> Vec<(Vec<Label>, i64)> {
            let mut v = m(x);
            v.extend(lee_multiply(x[0], x[1]).map(|l| (vec![l], 1)));
            v
        };
        let dt = |x: &[Label]| -> Vec<(Vec<Label>, i64)> {
            let mut v = delta(x);
            v.extend(lee_comultiply(x[0]).iter().map(|&(a, b)| (vec![a, b], 1)));
            v
        };
        for t in basis(3) {
            let left = apply(&apply(&single(&t), 0, 2, &mt), 0, 2, &mt);
            let right = apply(&apply(&single(&t), 1, 2, &mt), 0, 2, &mt);
            assert_eq!(left, right);
        }
        for t in basis(2) {
            let lhs = apply(&apply(&single(&t), 1, 1, &dt), 0, 2, &mt);
            let rhs = apply(&apply(&single(&t), 0, 2, &mt), 0, 1, &dt);
            assert_eq!(lhs, rhs);
        }
    }
}
