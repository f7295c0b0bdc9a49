use std::fmt;

use crate::diffalg::{Field, Param, Scalar};
use crate::oreops::{DiffOp, OrePoly};

/// The tuple `(a, c, α, β, γ, ε)` of the family
///
/// ```text
/// H = [[a(u' + 2u∂) + α∂ + c∂³,  a v∂ + β∂ + γ∂²],
///      [a ∂∘v + β∂ - γ∂²,        ε∂            ]]
/// ```
///
/// Entries are scalars free of jet variables: rationals or expressions in
/// the symbolic parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonParams {
    pub a: Scalar,
    pub c: Scalar,
    pub al: Scalar,
    pub be: Scalar,
    pub ga: Scalar,
    pub ep: Scalar,
}

/// Which display of the family an operator is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Full,
    /// `a = 1`, `α = β = 0`.
    Reduced,
    /// `a = 0`.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PoissonError {
    #[error("parameters do not fit the {variant:?} variant: {reason}")]
    InconsistentVariant { variant: Variant, reason: String },
    #[error("parameter {0} must not contain jet variables")]
    NotConstant(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("bracket of basis elements {0} and {1} is not in their span")]
    NotInSpan(usize, usize),
}

impl PoissonParams {
    pub fn new(a: Scalar, c: Scalar, al: Scalar, be: Scalar, ga: Scalar, ep: Scalar) -> Self {
        PoissonParams { a, c, al, be, ga, ep }
    }

    pub fn reduced(c: Scalar, ga: Scalar, ep: Scalar) -> Self {
        PoissonParams::new(Scalar::one(), c, Scalar::zero(), Scalar::zero(), ga, ep)
    }

    pub fn constant(c: Scalar, al: Scalar, be: Scalar, ga: Scalar, ep: Scalar) -> Self {
        PoissonParams::new(Scalar::zero(), c, al, be, ga, ep)
    }

    /// Every entry a distinct symbol: `a, c, al, be, ga, ep`.
    pub fn symbolic() -> Self {
        let p = Scalar::param;
        PoissonParams::new(p(Param::A), p(Param::C), p(Param::Al), p(Param::Be), p(Param::Ga), p(Param::Ep))
    }

    /// The subscripted symbols `a_1, c1, al1, be1, ga1, ep1`.
    pub fn symbolic_second() -> Self {
        let p = Scalar::param;
        PoissonParams::new(p(Param::A1), p(Param::C1), p(Param::Al1), p(Param::Be1), p(Param::Ga1), p(Param::Ep1))
    }

    pub fn from_ints(a: i64, c: i64, al: i64, be: i64, ga: i64, ep: i64) -> Self {
        let s = Scalar::from_int;
        PoissonParams::new(s(a), s(c), s(al), s(be), s(ga), s(ep))
    }

    /// `(name, value)` for `a, c, al, be, ga, ep`.
    pub fn entries(&self) -> [(&'static str, &Scalar); 6] {
        [("a", &self.a), ("c", &self.c), ("al", &self.al), ("be", &self.be), ("ga", &self.ga), ("ep", &self.ep)]
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        PoissonParams::new(f(&self.a), f(&self.c), f(&self.al), f(&self.be), f(&self.ga), f(&self.ep))
    }

    /// `p = cε + γ²`.
    pub fn p(&self) -> Scalar {
        &(&self.c * &self.ep) + &(&self.ga * &self.ga)
    }

    /// `q = αε - β²`.
    pub fn q(&self) -> Scalar {
        &(&self.al * &self.ep) - &(&self.be * &self.be)
    }

    pub fn add(&self, o: &PoissonParams) -> Self {
        PoissonParams::new(
            &self.a + &o.a,
            &self.c + &o.c,
            &self.al + &o.al,
            &self.be + &o.be,
            &self.ga + &o.ga,
            &self.ep + &o.ep,
        )
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        self.map(|x| k * x)
    }

    /// Substitutes a symbolic parameter everywhere.
    pub fn subs(&self, p: Param, value: &Scalar) -> Self {
        self.map(|x| x.subs_param(p, value).expect("parameters enter polynomially"))
    }

    pub fn validate(&self, variant: Variant) -> Result<(), PoissonError> {
        for (name, v) in self.entries() {
            if v.vars().iter().any(|x| x.is_differential()) {
                return Err(PoissonError::NotConstant(name.into()));
            }
        }
        let bad = |reason: &str| Err(PoissonError::InconsistentVariant { variant, reason: reason.into() });
        match variant {
            Variant::Full => Ok(()),
            Variant::Reduced if !self.a.is_one() => bad("a must be 1"),
            Variant::Reduced if !self.al.is_zero() || !self.be.is_zero() => bad("al and be must vanish"),
            Variant::Constant if !self.a.is_zero() => bad("a must be 0"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PoissonParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `r = εc₁ + 2γγ₁ + cε₁` for the pair `(H₀, H₁)`.
pub fn pair_r(p0: &PoissonParams, p1: &PoissonParams) -> Scalar {
    Scalar::sum([&p0.ep * &p1.c, (&p0.ga * &p1.ga).scale_int(2), &p0.c * &p1.ep])
}

/// `s = γε₁ - εγ₁`.
pub fn pair_s(p0: &PoissonParams, p1: &PoissonParams) -> Scalar {
    &(&p0.ga * &p1.ep) - &(&p0.ep * &p1.ga)
}

/// `A = εα₁ - 2β₁v + (ε₁/ε)v² + 2(s/ε)v'`; `None` when `ε` is not invertible.
pub fn pair_a(p0: &PoissonParams, p1: &PoissonParams) -> Option<Scalar> {
    let inv = p0.ep.inverse().filter(|_| !p0.ep.is_zero())?;
    let v = Scalar::jet(Field::V, 0);
    Some(Scalar::sum([
        &p0.ep * &p1.al,
        (&p1.be * &v).scale_int(-2),
        &(&(&p1.ep * &inv) * &v) * &v,
        (&(&pair_s(p0, p1) * &inv) * &Scalar::jet(Field::V, 1)).scale_int(2),
    ]))
}

/// The operator of the chosen display.
pub fn build_h(params: &PoissonParams, variant: Variant) -> Result<DiffOp<Scalar>, PoissonError> {
    params.validate(variant)?;
    let PoissonParams { a, c, al, be, ga, ep } = params;
    let (u0, u1) = (Scalar::jet(Field::U, 0), Scalar::jet(Field::U, 1));
    let (v0, v1) = (Scalar::jet(Field::V, 0), Scalar::jet(Field::V, 1));
    let z = Scalar::zero;
    let h00 = OrePoly::new(vec![a * &u1, &(a * &u0).scale_int(2) + al, z(), c.clone()]);
    let h01 = OrePoly::new(vec![z(), &(a * &v0) + be, ga.clone()]);
    let h10 = OrePoly::new(vec![a * &v1, &(a * &v0) + be, -ga]);
    let h11 = OrePoly::new(vec![z(), ep.clone()]);
    Ok(DiffOp::from_rows(vec![vec![h00, h01], vec![h10, h11]]))
}
