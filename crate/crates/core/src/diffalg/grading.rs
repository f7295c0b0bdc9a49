use num_rational::Rational64;

use super::monomial::Monomial;
use super::scalar::Scalar;
use super::symbol::{Field, Var};

/// Degree of an element; `None` stands for the degree of zero.
pub type Degree = Option<Rational64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    /// Every jet has degree 1, so `v^{-1}` has degree -1. Parameters and `x`
    /// have degree 0.
    TotalPolynomial,
    /// `deg(Q^k) = -k`; every other generator has degree 0.
    QHalfInteger,
}

impl Grading {
    pub fn monomial_degree(self, m: &Monomial) -> Rational64 {
        let mut halves: i64 = 0;
        for &(v, e) in m.factors() {
            match (self, v) {
                (Grading::TotalPolynomial, Var::Jet(..)) => halves += e.0 as i64,
                (Grading::QHalfInteger, Var::Jet(Field::Q, 0)) => halves -= e.0 as i64,
                _ => {}
            }
        }
        Rational64::new(halves, 2)
    }

    /// Maximum degree over the terms of `f`.
    pub fn degree(self, f: &Scalar) -> Degree {
        f.terms().iter().map(|(m, _)| self.monomial_degree(m)).max()
    }

    /// Minimum degree over the terms of `f`.
    pub fn low_degree(self, f: &Scalar) -> Degree {
        f.terms().iter().map(|(m, _)| self.monomial_degree(m)).min()
    }

    /// The homogeneous component `f[k]`.
    pub fn component(self, f: &Scalar, k: Rational64) -> Scalar {
        Scalar::from_terms(f.terms().iter().filter(|(m, _)| self.monomial_degree(m) == k).cloned())
    }

    pub fn is_homogeneous(self, f: &Scalar) -> bool {
        self.degree(f) == self.low_degree(f)
    }
}
