//! Generators of the coefficient rings: jet variables, the quasiconstant `x`,
//! and central symbolic parameters.

use std::fmt;

use num_rational::Rational64;

/// A dependent-variable family. The derived order is the printing and
/// canonical-form order of jet families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    U,
    Q,
    V,
    W,
    Z,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::U, Field::Q, Field::V, Field::W, Field::Z];

    pub fn name(self) -> &'static str {
        match self {
            Field::U => "u",
            Field::Q => "Q",
            Field::V => "v",
            Field::W => "w",
            Field::Z => "z",
        }
    }

    pub fn from_name(s: &str) -> Option<Field> {
        Field::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Symbolic constants. They commute with everything, are killed by the total
/// derivative and by every jet partial derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    A,
    C,
    Al,
    Be,
    Ga,
    Ep,
    A1,
    C1,
    Al1,
    Be1,
    Ga1,
    Ep1,
    /// `q = al*ep - be^2`, used as an independent symbol when `al` is eliminated.
    Q,
    /// Pencil parameter.
    T,
    Lambda,
    Mu,
}

impl Param {
    pub const ALL: [Param; 16] = [
        Param::A,
        Param::C,
        Param::Al,
        Param::Be,
        Param::Ga,
        Param::Ep,
        Param::A1,
        Param::C1,
        Param::Al1,
        Param::Be1,
        Param::Ga1,
        Param::Ep1,
        Param::Q,
        Param::T,
        Param::Lambda,
        Param::Mu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::C => "c",
            Param::Al => "al",
            Param::Be => "be",
            Param::Ga => "ga",
            Param::Ep => "ep",
            Param::A1 => "a_1",
            Param::C1 => "c1",
            Param::Al1 => "al1",
            Param::Be1 => "be1",
            Param::Ga1 => "ga1",
            Param::Ep1 => "ep1",
            Param::Q => "q",
            Param::T => "t",
            Param::Lambda => "lambda",
            Param::Mu => "mu",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == s)
    }

    fn latex(self) -> &'static str {
        match self {
            Param::A => "a",
            Param::C => "c",
            Param::Al => "\\alpha",
            Param::Be => "\\beta",
            Param::Ga => "\\gamma",
            Param::Ep => "\\epsilon",
            Param::A1 => "a_1",
            Param::C1 => "c_1",
            Param::Al1 => "\\alpha_1",
            Param::Be1 => "\\beta_1",
            Param::Ga1 => "\\gamma_1",
            Param::Ep1 => "\\epsilon_1",
            Param::Q => "q",
            Param::T => "t",
            Param::Lambda => "\\lambda",
            Param::Mu => "\\mu",
        }
    }
}

/// One generator of a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Param(Param),
    X,
    Jet(Field, u16),
}

impl Var {
    pub fn jet(field: Field, order: u16) -> Var {
        Var::Jet(field, order)
    }

    pub fn is_jet(self) -> bool {
        matches!(self, Var::Jet(..))
    }

    /// True for generators the total derivative acts on (jets and `x`).
    pub fn is_differential(self) -> bool {
        !matches!(self, Var::Param(_))
    }

    /// Image under the total derivative, `None` when it is zero, `Some(None)`
    /// when it is the constant 1 (the `x` case).
    pub(crate) fn derivative(self) -> Option<Option<Var>> {
        match self {
            Var::Param(_) => None,
            Var::X => Some(None),
            Var::Jet(f, n) => Some(Some(Var::Jet(f, n + 1))),
        }
    }

    pub fn latex(self) -> String {
        match self {
            Var::Param(p) => p.latex().to_string(),
            Var::X => "x".to_string(),
            Var::Jet(f, 0) => f.name().to_string(),
            Var::Jet(f, n) if n <= 3 => format!("{}{}", f.name(), "'".repeat(n as usize)),
            Var::Jet(f, n) => format!("{}^{{({})}}", f.name(), n),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Param(p) => write!(f, "{}", p.name()),
            Var::X => write!(f, "x"),
            Var::Jet(field, n) => write!(f, "{}{}", field.name(), n),
        }
    }
}

/// Exponent measured in halves, so `Exp(1)` is `1/2` and `Exp(-4)` is `-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exp(pub i32);

impl Exp {
    pub const ZERO: Exp = Exp(0);
    pub const ONE: Exp = Exp(2);

    pub fn int(k: i32) -> Exp {
        Exp(2 * k)
    }

    pub fn half(h: i32) -> Exp {
        Exp(h)
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_rational(self) -> Rational64 {
        Rational64::new(self.0 as i64, 2)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{{{}/2}}", self.0)
        }
    }
}

impl std::ops::Add for Exp {
    type Output = Exp;
    fn add(self, o: Exp) -> Exp {
        Exp(self.0 + o.0)
    }
}

impl std::ops::Sub for Exp {
    type Output = Exp;
    fn sub(self, o: Exp) -> Exp {
        Exp(self.0 - o.0)
    }
}

impl std::ops::Neg for Exp {
    type Output = Exp;
    fn neg(self) -> Exp {
        Exp(-self.0)
    }
}
