use std::fmt;

use crate::diffalg::Scalar;
use crate::poisson::{pair_a, pair_r, pair_s, PoissonParams};

/// Which branch of the scheme a pair `(H₀, H₁)` falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `H₀` reduced with `ε = 0, p = 0`; `v` invertible.
    A1,
    /// `H₀` reduced with `ε ≠ 0, p = 0`; works in the `Q, v` chart.
    A2,
    /// `H₀` constant with `p = 0, q ≠ 0`; polynomial chart.
    B,
    /// `H₀` constant with `p ≠ 0`: the scheme never leaves `F∫v`.
    BBlocked,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::A1 => "A1",
            CaseTag::A2 => "A2",
            CaseTag::B => "B",
            CaseTag::BBlocked => "B-blocked",
        }
    }

    pub fn from_name(s: &str) -> Option<CaseTag> {
        [CaseTag::A1, CaseTag::A2, CaseTag::B, CaseTag::BBlocked].into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    pub fn explanation(self) -> &'static str {
        match self {
            CaseTag::A1 => "H0 reduced with ep = 0 and p = 0; v is inverted",
            CaseTag::A2 => "H0 reduced with ep != 0 and p = 0; computed in the Q, v chart",
            CaseTag::B => "H0 constant with p = 0 and q != 0",
            CaseTag::BBlocked => {
                "H0 constant with p != 0: the only central Casimir is the integral of v, so every step \
                 of the scheme stays in the span of the integral of v and no integrable hierarchy arises"
            }
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LenardError {
    #[error("H0 is not strongly skew-adjoint in a supported chart: {0}")]
    NotStronglySkew(String),
    #[error("unsupported pair: {0}")]
    Unsupported(String),
    #[error("H1 vanishes identically")]
    DegenerateH1,
    #[error("case {0} cannot produce a hierarchy: {1}")]
    Blocked(CaseTag, String),
    #[error("integration failed at step {step}: {reason}")]
    Integration { step: usize, reason: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("substitution: {0}")]
    Substitution(String),
}

fn is_reduced(p: &PoissonParams) -> bool {
    p.a.is_one() && p.al.is_zero() && p.be.is_zero()
}

fn is_all_zero(p: &PoissonParams) -> bool {
    [&p.a, &p.c, &p.al, &p.be, &p.ga, &p.ep].iter().all(|x| x.is_zero())
}

/// Tags the pair from recomputed `p, q`.
pub fn classify_case(p0: &PoissonParams, p1: &PoissonParams) -> Result<CaseTag, LenardError> {
    let (p, q) = (p0.p(), p0.q());
    if is_reduced(p0) {
        if !p.is_zero() {
            return Err(LenardError::NotStronglySkew(format!("reduced H0 needs p = 0, got p = {p}")));
        }
        if !p1.a.is_zero() {
            return Err(LenardError::Unsupported(
                "H1 must have constant coefficients; subtract a multiple of H0 first".into(),
            ));
        }
        if is_all_zero(p1) {
            return Err(LenardError::DegenerateH1);
        }
        if p0.ep.is_zero() {
            return Ok(CaseTag::A1);
        }
        let a = pair_a(p0, p1).unwrap_or_else(Scalar::zero);
        if pair_r(p0, p1).is_zero() && pair_s(p0, p1).is_zero() && a.is_zero() {
            return Err(LenardError::DegenerateH1);
        }
        return Ok(CaseTag::A2);
    }
    if p0.a.is_zero() {
        if !p.is_zero() {
            return Ok(CaseTag::BBlocked);
        }
        if q.is_zero() {
            return Err(LenardError::NotStronglySkew("constant H0 with p = q = 0 is degenerate".into()));
        }
        if !is_reduced(p1) {
            return Err(LenardError::Unsupported("case B needs H1 from the reduced family".into()));
        }
        return Ok(CaseTag::B);
    }
    Err(LenardError::Unsupported("H0 must be from the reduced or the constant family".into()))
}
