//! Matrix differential operators over an algebra of differential functions
//! and its fraction field.

mod kernel;
mod matrix;
mod orepoly;
mod pseudo;
mod ring;
mod text;
mod triangular;

pub use kernel::{
    factor_by_kernel, frac_vectors, is_strongly_skew_adjoint, peel_kernel, FactorizationResult, KernelError,
    StrongSkewCertificate,
};
pub use matrix::DiffOp;
pub use orepoly::OrePoly;
pub use ring::{DiffField, DiffRing};
pub use text::{parse_operator, parse_orepoly};
pub use triangular::{
    dieudonne_det, dieudonne_det_by, lowest_order_pivot, triangularize, triangularize_by, DetResult, PivotRule,
    Triangularization,
};
