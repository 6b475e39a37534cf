//! Exact verification and fixed-point stabilization for the multi-cubic
//! functional equation.
//!
//! The crate enumerates the equation's node sets and checks their weight
//! identities with arbitrary-precision integers, evaluates both sides of
//! the characterizing equation over exact rational or float scalars,
//! classifies candidate mappings at grid level, and recovers multi-cubic
//! approximants from bounded perturbations via the contraction iteration,
//! certifying the resulting error bounds.

pub mod cli;
pub mod combinatorics;
pub mod equation;
pub mod error;
pub mod grid;
pub mod mappings;
pub mod point;
pub mod rat;
pub mod report;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use rat::Rat;
pub use scalar::{Mode, Scalar};
