use std::fmt;
use std::str::FromStr;

use super::{PlanarDiagram, Sign};
use crate::error::{Error, Result};

/// A braid word on `strands` strands. Letter `i > 0` is the generator
/// σᵢ crossing strands `i` and `i + 1`; `-i` is its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(Error::BraidLetterOutOfRange { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Full twist power word of the (p, q) torus link as a braid on `p`
    /// strands: (σ₁⋯σ_{p−1})^|q| with the sign of q.
    pub fn torus(p: u32, q: i32) -> Result<Self> {
        if p < 2 {
            return Err(Error::MalformedBraid(format!("torus braid needs 2 or more strands, got {p}")));
        }
        let sign = q.signum();
        let letters = (0..q.unsigned_abs()).flat_map(|_| (1..p as i32).map(move |i| i * sign)).collect();
        Self::new(p, letters)
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// The oriented closure, strands running downward.
    pub fn closure(&self) -> PlanarDiagram {
        let k = self.strands as usize;
        let mut current: Vec<u32> = (0..k as u32).collect();
        let mut touched = vec![false; k];
        let mut next = k as u32;
        let mut tuples = Vec::with_capacity(self.letters.len());
        let mut signs = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            let b = l.unsigned_abs() as usize;
            let a = b - 1;
            touched[a] = true;
            touched[b] = true;
            let (ea, eb) = (current[a], current[b]);
            let (fa, fb) = (next, next + 1);
            next += 2;
            if l > 0 {
                tuples.push([eb, fb, fa, ea]);
                signs.push(Sign::Positive);
            } else {
                tuples.push([ea, eb, fb, fa]);
                signs.push(Sign::Negative);
            }
            current[a] = fa;
            current[b] = fb;
        }
        // close: the final edge at each position is the initial one
        let close: std::collections::HashMap<u32, u32> =
            (0..k).filter(|&p| touched[p]).map(|p| (current[p], p as u32)).collect();
        for t in &mut tuples {
            for e in t.iter_mut() {
                if let Some(&p) = close.get(e) {
                    *e = p;
                }
            }
        }
        let loops = touched.iter().filter(|&&t| !t).count();
        PlanarDiagram::from_signed(tuples, signs, loops).expect("braid closures are valid diagrams")
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Accepts `k: l1 l2 ...` or a bare list `[l1, l2, ...]`, in which
    /// case the strand count is one more than the largest letter.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedBraid(m.to_string());
        let (strands, body) = match s.split_once(':') {
            Some((k, rest)) => (Some(k.trim().parse::<u32>().map_err(|_| bad("bad strand count"))?), rest),
            None => (None, s),
        };
        let letters = body
            .split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']' || c == '{' || c == '}')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i32>().map_err(|_| bad(&format!("bad letter `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let strands = strands.unwrap_or_else(|| letters.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0) + 1);
        BraidWord::new(strands, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}
