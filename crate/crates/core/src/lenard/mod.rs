//! Lenard-Magri recursion for compatible pairs, certification of the
//! resulting hierarchies and substitutions between them.

mod case;
mod state;
mod subst;
mod verify;

pub use case::{classify_case, CaseTag, LenardError};
pub use state::{seed_pair, HierarchyState};
pub use subst::{substitute_flow, SubstitutionSpec};
pub use verify::{verify_hierarchy, Certificate, CheckKind, HierarchyReport};
