//! Variational derivative, Fréchet operator, evolutionary vector fields.

use std::fmt;

use rayon::prelude::*;

use super::scalar::{Rational, Scalar};
use super::signature::AlgebraSignature;
use super::symbol::{Field, Var};
use crate::oreops::{DiffOp, OrePoly};

/// A tuple of scalars read as `(δh/δu_1, ..., δh/δu_ℓ)`, or as a flow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradientVector {
    pub components: Vec<Scalar>,
}

impl GradientVector {
    pub fn new(components: Vec<Scalar>) -> Self {
        GradientVector { components }
    }

    pub fn pair(f: Scalar, g: Scalar) -> Self {
        GradientVector { components: vec![f, g] }
    }

    pub fn zero(len: usize) -> Self {
        GradientVector { components: vec![Scalar::zero(); len] }
    }

    /// The constant vector with a 1 in slot `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = GradientVector::zero(len);
        v.components[i] = Scalar::one();
        v
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn f(&self) -> &Scalar {
        &self.components[0]
    }

    pub fn g(&self) -> &Scalar {
        &self.components[1]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &GradientVector) -> GradientVector {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &GradientVector) -> GradientVector {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> GradientVector {
        self.map(|a| a * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> GradientVector {
        self.map(|a| a.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> GradientVector {
        GradientVector { components: self.components.iter().map(f).collect() }
    }

    pub fn try_map<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<GradientVector, E> {
        Ok(GradientVector { components: self.components.iter().map(f).collect::<Result<_, _>>()? })
    }

    fn zip(&self, o: &GradientVector, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> GradientVector {
        assert_eq!(self.len(), o.len(), "vector lengths differ");
        GradientVector { components: self.components.iter().zip(&o.components).map(|(a, b)| f(a, b)).collect() }
    }

    /// `Σ a_i b_i`.
    pub fn dot(&self, o: &GradientVector) -> Scalar {
        Scalar::sum(self.components.iter().zip(&o.components).map(|(a, b)| a * b))
    }

    pub fn d_total(&self) -> GradientVector {
        self.map(Scalar::d_total)
    }
}

impl fmt::Display for GradientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A density `∫h`, compared modulo total derivatives and constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalFunctional {
    pub density: Scalar,
}

impl LocalFunctional {
    pub fn new(density: Scalar) -> Self {
        LocalFunctional { density }
    }

    pub fn gradient(&self, sig: &AlgebraSignature) -> GradientVector {
        variational_derivative(&self.density, sig)
    }

    /// Equal in `V/∂V` up to an additive constant.
    pub fn equivalent(&self, other: &LocalFunctional, sig: &AlgebraSignature) -> bool {
        let diff = &self.density - &other.density;
        variational_derivative(&diff, sig).is_zero()
    }
}

/// `δf/δu = Σ_n (-∂)^n ∂f/∂u^{(n)}` for one jet family.
pub fn euler_operator(f: &Scalar, field: Field) -> Scalar {
    let Some(top) = f.max_order(field) else {
        return Scalar::zero();
    };
    let mut acc = f.d_partial(Var::Jet(field, top));
    for n in (0..top).rev() {
        acc = &f.d_partial(Var::Jet(field, n)) - &acc.d_total();
    }
    acc
}

/// Variational derivative in the generator families of `sig`.
pub fn variational_derivative(f: &Scalar, sig: &AlgebraSignature) -> GradientVector {
    variational_derivative_in(f, &sig.fields())
}

pub fn variational_derivative_in(f: &Scalar, fields: &[Field]) -> GradientVector {
    GradientVector { components: fields.iter().map(|&fl| euler_operator(f, fl)).collect() }
}

/// `(D_F)_{ij} = Σ_n (∂F_i/∂u_j^{(n)}) ∂^n`.
pub fn frechet(components: &[Scalar], fields: &[Field]) -> DiffOp<Scalar> {
    let rows = components
        .iter()
        .map(|fi| {
            fields
                .iter()
                .map(|&fl| {
                    let top = fi.max_order(fl).map(|t| t as usize + 1).unwrap_or(0);
                    OrePoly::new((0..top).map(|n| fi.d_partial(Var::Jet(fl, n as u16))).collect())
                })
                .collect()
        })
        .collect();
    DiffOp::from_rows(rows)
}

/// `X_P(f) = Σ_i Σ_n (∂^n P_i) ∂f/∂u_i^{(n)}`.
pub fn evolutionary_apply(p: &GradientVector, fields: &[Field], f: &Scalar) -> Scalar {
    let mut parts = Vec::new();
    for (pi, &fl) in p.components.iter().zip(fields) {
        let Some(top) = f.max_order(fl) else { continue };
        let mut dp = pi.clone();
        for n in 0..=top {
            let partial = f.d_partial(Var::Jet(fl, n));
            if !partial.is_zero() {
                parts.push(&dp * &partial);
            }
            if n < top {
                dp = dp.d_total();
            }
        }
    }
    Scalar::sum(parts)
}

/// `[P, Q] = X_P(Q) - X_Q(P)`, componentwise.
pub fn evolutionary_commutator(p: &GradientVector, q: &GradientVector, fields: &[Field]) -> GradientVector {
    GradientVector {
        components: p
            .components
            .par_iter()
            .zip(q.components.par_iter())
            .map(|(pi, qi)| &evolutionary_apply(p, fields, qi) - &evolutionary_apply(q, fields, pi))
            .collect(),
    }
}

/// Degree of a monomial in each of `fields`, counting all jets of a field.
fn multidegree(m: &super::monomial::Monomial, fields: &[Field]) -> Vec<num_rational::Rational64> {
    fields
        .iter()
        .map(|&fl| {
            m.factors()
                .iter()
                .filter(|(v, _)| matches!(v, Var::Jet(g, _) if *g == fl))
                .map(|(_, e)| e.to_rational())
                .sum()
        })
        .collect()
}

/// Finds `h` with `δh = f` from the Euler identity `∫ u_i δh/δu_i = d_i ∫h`,
/// where `d_i` is the degree of a homogeneous `h` in the jets of `u_i`.
/// Returns `None` when some component has degree zero in every field or
/// when the result fails the final check `δh = f`.
pub fn reconstruct_density(f: &GradientVector, fields: &[Field]) -> Option<Scalar> {
    use std::collections::BTreeMap;
    type Key = Vec<num_rational::Rational64>;
    let mut groups: BTreeMap<Key, Vec<Vec<(super::monomial::Monomial, Rational)>>> = BTreeMap::new();
    for (i, c) in f.components.iter().enumerate() {
        for (m, coeff) in c.terms() {
            let mut d = multidegree(m, fields);
            d[i] += 1;
            groups.entry(d).or_insert_with(|| vec![Vec::new(); fields.len()])[i].push((m.clone(), coeff.clone()));
        }
    }
    let mut parts = Vec::new();
    for (d, comps) in groups {
        let i = d.iter().position(|k| *k != num_rational::Rational64::from_integer(0))?;
        let k = Rational::new((*d[i].numer()).into(), (*d[i].denom()).into());
        let fi = Scalar::from_terms(comps[i].clone());
        parts.push((&Scalar::jet(fields[i], 0) * &fi).scale(&k.recip()));
    }
    let h = Scalar::sum(parts);
    (variational_derivative_in(&h, fields) == *f).then_some(h)
}
