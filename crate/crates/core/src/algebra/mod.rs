//! The Frobenius algebra A = R[X]/X² and Laurent polynomial arithmetic.

pub mod frobenius;
pub mod laurent;

pub use frobenius::Label;
pub use laurent::{graded_dim_of_state, GaussianInt, Laurent, Laurent2, LaurentPoly};
