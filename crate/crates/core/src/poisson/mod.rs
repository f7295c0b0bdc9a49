//! The six-parameter family of Poisson structures on two fields: operators,
//! λ-bracket certificates, Casimirs and their Lie algebra.

mod casimir;
mod conformal;
mod params;

pub use casimir::{
    bracket, bracket_in, casimir_check, casimir_check_in, casimir_lie_algebra, kernel_basis, KernelBasis, KernelCase,
    LieTable,
};
pub use conformal::{
    verify_compatibility, verify_compatibility_ops, verify_conformal_jacobi, ConformalBracket, ConformalReport,
};
pub use params::{build_h, pair_a, pair_r, pair_s, PoissonError, PoissonParams, Variant};
