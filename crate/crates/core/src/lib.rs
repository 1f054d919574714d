//! Khovanov homology of oriented links: planar diagrams, the even and odd
//! cubes of resolutions, exact sparse linear algebra over ℤ, ℚ and 𝔽ₚ, and
//! the invariants derived from the homology tables.

pub mod algebra;
pub mod cube;
pub mod diagram;
mod error;
pub mod invariants;
pub mod linalg;

pub use algebra::laurent::{GaussianInt, Laurent, Laurent2};
pub use cube::{build_even_complex, build_odd_complex, ChainComplex, Variant};
pub use diagram::{BraidWord, PlanarDiagram, Resolution, Sign, State};
pub use error::{Error, Result};
pub use linalg::{homology, HomologyTable, Ring};
