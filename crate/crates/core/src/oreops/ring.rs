use std::fmt;

use crate::diffalg::{int, Scalar};
use crate::frac::Frac;

/// A commutative differential ring: the coefficient domain of [`OrePoly`].
///
/// [`OrePoly`]: super::OrePoly
pub trait DiffRing: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    /// The derivation `∂`.
    fn derive(&self) -> Self;
    fn from_int(k: i64) -> Self;
    fn from_scalar(s: &Scalar) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Division where it exists. For a field `try_div` always succeeds on a
/// nonzero divisor.
pub trait DiffField: DiffRing {
    fn try_div(&self, o: &Self) -> Option<Self>;
}

impl DiffRing for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn derive(&self) -> Self {
        self.d_total()
    }
    fn from_int(k: i64) -> Self {
        Scalar::constant(int(k))
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
}

impl DiffField for Scalar {
    fn try_div(&self, o: &Self) -> Option<Self> {
        self.div_exact(o)
    }
}

impl DiffRing for Frac {
    fn zero() -> Self {
        Frac::zero()
    }
    fn one() -> Self {
        Frac::one()
    }
    fn is_zero(&self) -> bool {
        Frac::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn derive(&self) -> Self {
        self.d_total()
    }
    fn from_int(k: i64) -> Self {
        Frac::from_scalar(Scalar::from_int(k))
    }
    fn from_scalar(s: &Scalar) -> Self {
        Frac::from_scalar(s.clone())
    }
}

impl DiffField for Frac {
    fn try_div(&self, o: &Self) -> Option<Self> {
        self.div(o)
    }
}
