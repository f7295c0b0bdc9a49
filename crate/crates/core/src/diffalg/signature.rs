use std::fmt;

use super::scalar::Scalar;
use super::symbol::{Field, Var};

/// The coordinate systems the engine works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Polynomials in `u, v` and their derivatives.
    UvPoly,
    /// Polynomials in `u, v` and derivatives with `v` invertible.
    UvLaurentV,
    /// `Q, v` coordinates with `Q^{1/2}` and `Q^{-1/2}` adjoined.
    QvHalfPower,
    /// Polynomial chart used by the constant-coefficient family.
    BPoly,
    /// Target coordinates of a change of variables.
    Substituted,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::UvPoly => "UV-poly",
            Chart::UvLaurentV => "UV-laurent-v",
            Chart::QvHalfPower => "QV-halfpower",
            Chart::BPoly => "B-poly",
            Chart::Substituted => "substituted",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One jet family of a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSpec {
    pub field: Field,
    /// Negative exponents allowed on the zeroth jet.
    pub negative: bool,
    /// Half-integer exponents allowed on the zeroth jet.
    pub half: bool,
}

impl GeneratorSpec {
    pub fn plain(field: Field) -> GeneratorSpec {
        GeneratorSpec { field, negative: false, half: false }
    }
}

/// Field of quasiconstants adjoined to the constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quasiconstants {
    None,
    /// `Q[x]` with `∂x = 1`.
    PolynomialX,
    Trigonometric,
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("quasiconstant field {0:?} is not supported; only polynomials in x are")]
    UnsupportedQuasiconstants(Quasiconstants),
    #[error("generator {0} is not part of the {1} signature")]
    UnknownGenerator(Var, Chart),
    #[error("exponent {exp} on {var} is not allowed in the {chart} signature")]
    BadExponent { var: Var, exp: String, chart: Chart },
    #[error("parameter {0} carries a half-integer exponent")]
    HalfParameter(Var),
}

/// Which generators an algebra has and which exponents they may carry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraSignature {
    chart: Chart,
    generators: Vec<GeneratorSpec>,
    quasiconstants: Quasiconstants,
}

impl AlgebraSignature {
    pub fn new(chart: Chart, quasiconstants: Quasiconstants) -> Result<Self, SignatureError> {
        use Field::*;
        let generators = match chart {
            Chart::UvPoly | Chart::BPoly => {
                vec![GeneratorSpec::plain(U), GeneratorSpec::plain(V)]
            }
            Chart::UvLaurentV => vec![GeneratorSpec::plain(U), GeneratorSpec { field: V, negative: true, half: false }],
            Chart::QvHalfPower => vec![GeneratorSpec { field: Q, negative: true, half: true }, GeneratorSpec::plain(V)],
            Chart::Substituted => vec![GeneratorSpec::plain(W), GeneratorSpec::plain(V)],
        };
        AlgebraSignature::with_generators(chart, generators, quasiconstants)
    }

    pub fn with_generators(
        chart: Chart,
        generators: Vec<GeneratorSpec>,
        quasiconstants: Quasiconstants,
    ) -> Result<Self, SignatureError> {
        match quasiconstants {
            Quasiconstants::None | Quasiconstants::PolynomialX => {}
            other => return Err(SignatureError::UnsupportedQuasiconstants(other)),
        }
        Ok(AlgebraSignature { chart, generators, quasiconstants })
    }

    /// Shorthand for the charts without `x`.
    pub fn of(chart: Chart) -> Self {
        AlgebraSignature::new(chart, Quasiconstants::None).expect("built-in chart")
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn fields(&self) -> Vec<Field> {
        self.generators.iter().map(|g| g.field).collect()
    }

    pub fn has_x(&self) -> bool {
        self.quasiconstants == Quasiconstants::PolynomialX
    }

    fn spec(&self, f: Field) -> Option<&GeneratorSpec> {
        self.generators.iter().find(|g| g.field == f)
    }

    /// Checks every term of `s` against the exponent rules.
    pub fn validate(&self, s: &Scalar) -> Result<(), SignatureError> {
        for (m, _) in s.terms() {
            for &(v, e) in m.factors() {
                let bad = || SignatureError::BadExponent { var: v, exp: e.to_string(), chart: self.chart };
                match v {
                    Var::Param(_) => {
                        if !e.is_integer() {
                            return Err(SignatureError::HalfParameter(v));
                        }
                    }
                    Var::X => {
                        if !self.has_x() {
                            return Err(SignatureError::UnknownGenerator(v, self.chart));
                        }
                        if !e.is_integer() || e.0 < 0 {
                            return Err(bad());
                        }
                    }
                    Var::Jet(f, n) => {
                        let spec = self.spec(f).ok_or(SignatureError::UnknownGenerator(v, self.chart))?;
                        let zeroth = n == 0;
                        if !e.is_integer() && !(zeroth && spec.half) {
                            return Err(bad());
                        }
                        if e.0 < 0 && !(zeroth && spec.negative) {
                            return Err(bad());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
