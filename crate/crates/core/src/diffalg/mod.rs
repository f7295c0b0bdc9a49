//! Algebras of differential functions: exact scalars, the total and partial
//! derivatives, variational calculus, gradings and chart changes.

mod calculus;
mod chart;
mod grading;
mod integrate;
mod monomial;
mod parse;
mod scalar;
mod signature;
mod symbol;

pub use calculus::{
    evolutionary_apply, evolutionary_commutator, frechet, reconstruct_density, variational_derivative,
    variational_derivative_in, GradientVector, LocalFunctional,
};
pub use chart::{ChartError, ChartMap, Coordinates};
pub use grading::{Degree, Grading};
pub use integrate::{antiderivative, IntegrationError};
pub use monomial::Monomial;
pub(crate) use parse::{parse_expr, Expr};
pub use parse::{parse_scalar, ParseError};
pub use scalar::{int, rat, Rational, Scalar, SubstitutionError};
pub use signature::{AlgebraSignature, Chart, GeneratorSpec, Quasiconstants, SignatureError};
pub use symbol::{Exp, Field, Param, Var};
