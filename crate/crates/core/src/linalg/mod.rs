//! Exact linear algebra over ℤ, ℚ and 𝔽ₚ.

mod coeff;
mod homology;
mod reduce;
mod smith;
mod sparse;

pub use coeff::{CoeffRing, Integers, PrimeField, Rationals};
pub use homology::{homology, homology_of_block, normalize_torsion, HomologyGroup, HomologyTable};
pub use reduce::{reduce_complex, GradedMatrices, Reducer};
pub use smith::{invariant_factors, normalize_diagonal, smith_normal_form, smith_with_transforms, SmithTransforms};
pub use sparse::{rank_mod_p, SparseMatrix};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ring {
    Z,
    Q,
    Fp(u64),
}

impl Ring {
    pub fn fp(p: u64) -> Result<Ring> {
        if is_prime(p) { Ok(Ring::Fp(p)) } else { Err(Error::NotPrime(p)) }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Z)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix("F"))
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::UnknownRing(other.to_string()))?;
                Ring::fp(p)
            }
        }
    }
}
