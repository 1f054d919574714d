use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Arithmetic used by elimination. Operations return `None` on overflow.
pub trait CoeffRing: Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn from_i64(&self, v: i64) -> Self::E;
    fn to_i64(&self, e: &Self::E) -> Option<i64>;
    fn is_zero(&self, e: &Self::E) -> bool;
    /// Inverse of `e` when `e` is a unit.
    fn unit_inverse(&self, e: &Self::E) -> Option<Self::E>;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Option<Self::E>;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Option<Self::E>;
}

/// ℤ with 64-bit entries; only ±1 are units.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type E = i64;

    fn from_i64(&self, v: i64) -> i64 {
        v
    }

    fn to_i64(&self, e: &i64) -> Option<i64> {
        Some(*e)
    }

    fn is_zero(&self, e: &i64) -> bool {
        *e == 0
    }

    fn unit_inverse(&self, e: &i64) -> Option<i64> {
        (e.abs() == 1).then_some(*e)
    }

    fn mul(&self, a: &i64, b: &i64) -> Option<i64> {
        a.checked_mul(*b)
    }

    fn sub(&self, a: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(*b)
    }
}

/// 𝔽ₚ with representatives in `0..p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    pub p: u64,
}

impl CoeffRing for PrimeField {
    type E = u64;

    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn to_i64(&self, e: &u64) -> Option<i64> {
        i64::try_from(*e).ok()
    }

    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }

    fn unit_inverse(&self, e: &u64) -> Option<u64> {
        if *e == 0 {
            return None;
        }
        // extended Euclid on (e, p)
        let (mut a, mut b) = (*e as i128, self.p as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        Some(x0.rem_euclid(self.p as i128) as u64)
    }

    fn mul(&self, a: &u64, b: &u64) -> Option<u64> {
        Some((*a as u128 * *b as u128 % self.p as u128) as u64)
    }

    fn sub(&self, a: &u64, b: &u64) -> Option<u64> {
        Some(((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64)
    }
}

/// ℚ with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl CoeffRing for Rationals {
    type E = BigRational;

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_i64(&self, e: &BigRational) -> Option<i64> {
        if e.is_integer() { e.to_integer().to_i64() } else { None }
    }

    fn is_zero(&self, e: &BigRational) -> bool {
        e.is_zero()
    }

    fn unit_inverse(&self, e: &BigRational) -> Option<BigRational> {
        (!e.is_zero()).then(|| e.recip())
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a * b)
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        Some(a - b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverses() {
        let f = PrimeField { p: 7 };
        for a in 1..7u64 {
            let inv = f.unit_inverse(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), Some(1));
        }
        assert_eq!(f.unit_inverse(&0), None);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.sub(&2, &5), Some(4));
    }

    #[test]
    fn integer_units_and_overflow() {
        assert_eq!(Integers.unit_inverse(&-1), Some(-1));
        assert_eq!(Integers.unit_inverse(&2), None);
        assert_eq!(Integers.mul(&i64::MAX, &2), None);
        let q = Rationals;
        let half = q.unit_inverse(&q.from_i64(2)).unwrap();
        assert_eq!(q.mul(&half, &q.from_i64(4)).and_then(|v| q.to_i64(&v)), Some(2));
    }
}
