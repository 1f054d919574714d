use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Sparse Laurent polynomial in `N` variables with integer coefficients.
/// Zero coefficients are never stored. Exponent or coefficient overflow
/// panics.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly<const N: usize> {
    terms: BTreeMap<[i32; N], i64>,
}

/// Polynomial in q.
pub type Laurent = LaurentPoly<1>;
/// Polynomial in (t, q), used for Poincaré polynomials.
pub type Laurent2 = LaurentPoly<2>;

const NAMES_1: [&str; 1] = ["q"];
const NAMES_2: [&str; 2] = ["t", "q"];

fn names<const N: usize>() -> &'static [&'static str] {
    match N {
        1 => &NAMES_1,
        2 => &NAMES_2,
        _ => panic!("no variable names for {N} variables"),
    }
}

fn add_exps<const N: usize>(a: [i32; N], b: [i32; N]) -> [i32; N] {
    let mut out = [0; N];
    for k in 0..N {
        out[k] = a[k].checked_add(b[k]).expect("Laurent exponent overflow");
    }
    out
}

impl<const N: usize> LaurentPoly<N> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, [0; N])
    }

    pub fn monomial(coeff: i64, exps: [i32; N]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, coeff);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ([i32; N], i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exps: [i32; N], coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0);
        *entry = entry.checked_add(coeff).expect("Laurent coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: [i32; N]) -> i64 {
        self.terms.get(&exps).copied().unwrap_or(0)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = ([i32; N], i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply by the monomial with exponents `exps`.
    pub fn shift(&self, exps: [i32; N]) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (add_exps(e, exps), c)).collect() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c.checked_mul(k).expect("Laurent coefficient overflow"))))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitute variable `var` by its negative.
    pub fn negate_variable(&self, var: usize) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, if e[var] % 2 == 0 { c } else { -c })))
    }

    /// Substitute variable `var` by its inverse.
    pub fn invert_variable(&self, var: usize) -> Self {
        Self::from_terms(self.terms().map(|(mut e, c)| {
            e[var] = e[var].checked_neg().expect("Laurent exponent overflow");
            (e, c)
        }))
    }
}

impl Laurent {
    pub fn q(exp: i32) -> Self {
        Self::monomial(1, [exp])
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().map(|e| e[0])
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().map(|e| e[0])
    }

    /// Exact evaluation at q = i.
    pub fn eval_gaussian(&self) -> GaussianInt {
        let mut z = GaussianInt::default();
        for ([e], c) in self.terms() {
            z = z + GaussianInt::i_pow(e).scale(c);
        }
        z
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves
    /// a remainder.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        let (lead_e, lead_c) = divisor.terms().next().map(|([e], c)| (e, c))?;
        let top = self.max_degree().unwrap_or(0) - divisor.max_degree()?;
        let mut rem = self.clone();
        let mut quot = Laurent::zero();
        loop {
            let Some(([e], c)) = rem.terms().next() else { break };
            let k = e - lead_e;
            if c % lead_c != 0 || k > top {
                return None;
            }
            let t = Laurent::monomial(c / lead_c, [k]);
            rem = &rem - &(&t * divisor);
            quot += &t;
        }
        Some(quot)
    }
}

impl Laurent2 {
    /// Substitute t = `t`.
    pub fn specialize_t(&self, t: i64) -> Laurent {
        let mut out = Laurent::zero();
        for ([a, b], c) in self.terms() {
            let f = if a >= 0 {
                t.checked_pow(a as u32)
            } else if t == 1 || t == -1 {
                t.checked_pow(a.unsigned_abs())
            } else {
                panic!("t = {t} is not invertible over the integers")
            };
            out.add_term([b], c.checked_mul(f.expect("Laurent coefficient overflow")).expect("Laurent coefficient overflow"));
        }
        out
    }
}

impl<const N: usize> Add for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(self, rhs: Self) -> LaurentPoly<N> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<const N: usize> Add for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn add(mut self, rhs: Self) -> LaurentPoly<N> {
        self += &rhs;
        self
    }
}

impl<const N: usize> AddAssign<&LaurentPoly<N>> for LaurentPoly<N> {
    fn add_assign(&mut self, rhs: &LaurentPoly<N>) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl<const N: usize> Neg for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        self.scale(-1)
    }
}

impl<const N: usize> Neg for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn neg(self) -> LaurentPoly<N> {
        self.scale(-1)
    }
}

impl<const N: usize> Sub for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(self, rhs: Self) -> LaurentPoly<N> {
        self + &(-rhs)
    }
}

impl<const N: usize> Sub for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn sub(self, rhs: Self) -> LaurentPoly<N> {
        &self - &rhs
    }
}

impl<const N: usize> Mul for &LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: Self) -> LaurentPoly<N> {
        let mut out = LaurentPoly::zero();
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &rhs.terms {
                out.add_term(add_exps(ea, eb), ca.checked_mul(cb).expect("Laurent coefficient overflow"));
            }
        }
        out
    }
}

impl<const N: usize> Mul for LaurentPoly<N> {
    type Output = LaurentPoly<N>;
    fn mul(self, rhs: Self) -> LaurentPoly<N> {
        &self * &rhs
    }
}

fn format_monomial<const N: usize>(exps: [i32; N], sep: &str) -> String {
    let mut parts = Vec::new();
    for (k, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names::<N>()[k].to_string()),
            _ => parts.push(format!("{}^{}", names::<N>()[k], e)),
        }
    }
    parts.join(sep)
}

impl<const N: usize> fmt::Display for LaurentPoly<N> {
    /// Human form such as `q + q^3 + t^2q^5 - q^-1`, ascending exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mono = format_monomial(e, "");
            let mag = c.unsigned_abs();
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag, mono.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => write!(f, "{mono}")?,
                (_, false) => write!(f, "{mag}{mono}")?,
            }
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Debug for LaurentPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<const N: usize> LaurentPoly<N> {
    /// Term strings `c·q^e` (or `c·t^a·q^b`) in ascending exponent order.
    pub fn term_strings(&self) -> Vec<String> {
        self.terms()
            .map(|(e, c)| {
                let vars: Vec<String> = (0..N).map(|k| format!("{}^{}", names::<N>()[k], e[k])).collect();
                format!("{}·{}", c, vars.join("·"))
            })
            .collect()
    }

    fn parse_term(s: &str) -> Result<([i32; N], i64), String> {
        let mut parts = s.split('·');
        let c = parts
            .next()
            .and_then(|c| c.trim().parse::<i64>().ok())
            .ok_or_else(|| format!("bad coefficient in `{s}`"))?;
        let mut exps = [0; N];
        for (k, part) in parts.enumerate() {
            let (name, e) = part.split_once('^').ok_or_else(|| format!("bad factor `{part}`"))?;
            if k >= N || name.trim() != names::<N>()[k] {
                return Err(format!("unexpected variable `{name}`"));
            }
            exps[k] = e.trim().parse().map_err(|_| format!("bad exponent `{e}`"))?;
        }
        Ok((exps, c))
    }
}

impl<const N: usize> FromStr for LaurentPoly<N> {
    type Err = String;

    /// Parses the display form, e.g. `q + q^3 + t^2q^5 - 2q^-1`.
    fn from_str(s: &str) -> Result<Self, String> {
        let text: String = s.chars().filter(|c| !c.is_whitespace() && *c != '·' && *c != '*').collect();
        if text.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in text.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut p = Self::zero();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            let digits = body.chars().take_while(|c| c.is_ascii_digit()).count();
            let (coeff, mut rest) = body.split_at(digits);
            let mut c: i64 = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| format!("bad term `{t}`"))? };
            if coeff.is_empty() && rest.is_empty() {
                return Err(format!("bad term `{t}`"));
            }
            if neg {
                c = -c;
            }
            let mut exps = [0; N];
            while !rest.is_empty() {
                let k = names::<N>()
                    .iter()
                    .position(|n| rest.starts_with(n))
                    .ok_or_else(|| format!("unexpected variable in `{t}`"))?;
                rest = &rest[names::<N>()[k].len()..];
                let e = if let Some(r) = rest.strip_prefix('^') {
                    let len = r.char_indices().take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-')).count();
                    let e = r[..len].parse::<i32>().map_err(|_| format!("bad exponent in `{t}`"))?;
                    rest = &r[len..];
                    e
                } else {
                    1
                };
                exps[k] += e;
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }
}

impl<const N: usize> Serialize for LaurentPoly<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.term_strings().serialize(s)
    }
}

impl<'de, const N: usize> Deserialize<'de> for LaurentPoly<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<String>::deserialize(d)?;
        let mut p = Self::zero();
        for t in terms {
            let (e, c) = Self::parse_term(&t).map_err(serde::de::Error::custom)?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// q^{j_shift}·(q + 1/q)^{circles}: the graded dimension of a state's
/// chain group.
pub fn graded_dim_of_state(j_shift: i32, circles: u32) -> Laurent {
    let circle = Laurent::from_terms([([1], 1), ([-1], 1)]);
    circle.pow(circles).shift([j_shift])
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub fn new(re: i64, im: i64) -> Self {
        GaussianInt { re, im }
    }

    /// i^e for any integer e.
    pub fn i_pow(e: i32) -> Self {
        match e.rem_euclid(4) {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, 1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, -1),
        }
    }

    pub fn scale(self, k: i64) -> Self {
        GaussianInt::new(
            self.re.checked_mul(k).expect("Gaussian integer overflow"),
            self.im.checked_mul(k).expect("Gaussian integer overflow"),
        )
    }

    pub fn norm(self) -> i128 {
        self.re as i128 * self.re as i128 + self.im as i128 * self.im as i128
    }

    /// |z| when z lies on an axis, so that the modulus is an integer.
    pub fn axis_abs(self) -> Option<u64> {
        match (self.re, self.im) {
            (r, 0) => Some(r.unsigned_abs()),
            (0, i) => Some(i.unsigned_abs()),
            _ => None,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: Self) -> Self {
        GaussianInt::new(
            self.re.checked_add(o.re).expect("Gaussian integer overflow"),
            self.im.checked_add(o.im).expect("Gaussian integer overflow"),
        )
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: Self) -> Self {
        GaussianInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r} - {}i", -i),
            (r, i) => write!(f, "{r} + {i}i"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i32, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|&(e, c)| ([e], c)))
    }

    #[test]
    fn arithmetic() {
        let a = lp(&[(1, 1), (-1, 1)]);
        assert_eq!(&a * &a, lp(&[(2, 1), (0, 2), (-2, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).len(), 0);
        assert_eq!(a.shift([3]), lp(&[(4, 1), (2, 1)]));
        assert_eq!(lp(&[(1, 1), (2, 1)]).negate_variable(0), lp(&[(1, -1), (2, 1)]));
        assert_eq!(lp(&[(1, 1), (2, 3)]).invert_variable(0), lp(&[(-1, 1), (-2, 3)]));
    }

    #[test]
    fn gaussian_evaluation() {
        assert_eq!(lp(&[(2, 1), (6, 1), (8, -1)]).eval_gaussian(), GaussianInt::new(-3, 0));
        assert_eq!(lp(&[(1, 1), (-1, 1)]).eval_gaussian(), GaussianInt::new(0, 0));
        assert_eq!(Laurent::one().eval_gaussian(), GaussianInt::new(1, 0));
        assert_eq!(lp(&[(1, 1), (5, 1)]).eval_gaussian().axis_abs(), Some(2));
    }

    #[test]
    fn graded_dimensions() {
        assert_eq!(graded_dim_of_state(2, 2), lp(&[(4, 1), (2, 2), (0, 1)]));
        assert_eq!(graded_dim_of_state(3, 1), lp(&[(4, 1), (2, 1)]));
        assert_eq!(graded_dim_of_state(0, 0), Laurent::one());
    }

    #[test]
    fn exact_division() {
        let circle = lp(&[(1, 1), (-1, 1)]);
        let j = lp(&[(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(j.div_exact(&circle), Some(lp(&[(2, 1), (6, 1), (8, -1)])));
        assert_eq!(lp(&[(0, 1)]).div_exact(&circle), None);
        assert_eq!(Laurent::zero().div_exact(&circle), Some(Laurent::zero()));
    }

    #[test]
    fn display_and_serialization() {
        let p = Laurent2::from_terms([([0, 1], 1), ([0, 3], 1), ([2, 5], 1), ([3, 9], 1)]);
        assert_eq!(p.to_string(), "q + q^3 + t^2q^5 + t^3q^9");
        assert_eq!(lp(&[(-1, -2), (0, 3)]).to_string(), "-2q^-1 + 3");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1·t^0·q^1","1·t^0·q^3","1·t^2·q^5","1·t^3·q^9"]"#);
        let back: Laurent2 = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.specialize_t(-1), lp(&[(1, 1), (3, 1), (5, 1), (9, -1)]));
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn exponent_overflow_is_fatal() {
        let _ = Laurent::q(i32::MAX).shift([1]);
    }

    fn arb_poly() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-20i32..20, -50i64..50), 0..8).prop_map(|t| lp(&t))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!(a.terms().all(|(_, c)| c != 0));
        }

        #[test]
        fn shift_multiplies_graded_dimension(k in -10i32..10, c in 0u32..6, j in -10i32..10) {
            prop_assert_eq!(graded_dim_of_state(j, c).shift([k]), graded_dim_of_state(j + k, c));
        }

        #[test]
        fn tensor_dimensions_multiply(j1 in -5i32..5, c1 in 0u32..4, j2 in -5i32..5, c2 in 0u32..4) {
            prop_assert_eq!(
                &graded_dim_of_state(j1, c1) * &graded_dim_of_state(j2, c2),
                graded_dim_of_state(j1 + j2, c1 + c2)
            );
        }

        #[test]
        fn division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).eval_gaussian(), a.eval_gaussian() * b.eval_gaussian());
        }
    }
}
