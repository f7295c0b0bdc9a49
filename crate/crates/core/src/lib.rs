//! Exact construction and certification of bi-Hamiltonian hierarchies for a
//! six-parameter family of compatible Poisson structures on two fields.
//!
//! The crate is layered bottom-up: [`diffalg`] holds the scalar arithmetic
//! and variational calculus, [`oreops`] the matrix differential operators,
//! [`poisson`] the family of structures and its certificates, and [`lenard`]
//! the recursion engine. [`emit`] renders results as JSON, LaTeX or text.

// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod diffalg;
pub mod emit;
pub mod frac;
pub mod lenard;
pub mod oreops;
pub mod poisson;
pub mod span;

pub use diffalg::{Field, GradientVector, Param, Scalar};
pub use frac::Frac;
pub use oreops::{DiffOp, OrePoly};
