//! Inversion of the total derivative.

use num_traits::Zero;

use super::calculus::variational_derivative_in;
use super::monomial::Monomial;
use super::scalar::{rat, Scalar};
use super::symbol::{Exp, Field, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IntegrationError {
    #[error("not a total derivative: {0}")]
    NotExact(String),
    #[error("integration needs a logarithm of {0}")]
    NeedsLog(Var),
}

/// Returns `g` with `∂g = f`, normalized to have no constant term.
///
/// `with_x` says whether the quasiconstant `x` may be used, which makes
/// every polynomial in `x` (including constants) exact.
pub fn antiderivative(f: &Scalar, with_x: bool) -> Result<Scalar, IntegrationError> {
    let fields: Vec<Field> = jet_fields(f);
    let delta = variational_derivative_in(f, &fields);
    if !delta.is_zero() {
        return Err(IntegrationError::NotExact(format!("variational derivative {delta}")));
    }
    let mut rest = f.clone();
    let mut acc = Vec::new();
    while let Some(z) = top_jet(&rest) {
        let Var::Jet(field, n) = z else { unreachable!() };
        if n == 0 {
            return Err(IntegrationError::NotExact(format!("leftover {rest}")));
        }
        let (coeff, _) = split_linear(&rest, z)?;
        if coeff.vars().iter().any(|v| matches!(v, Var::Jet(_, k) if *k >= n)) {
            return Err(IntegrationError::NotExact(format!("nonlinear in {z}")));
        }
        let g = integrate_in(&coeff, Var::Jet(field, n - 1))?;
        rest = &rest - &g.d_total();
        acc.push(g);
    }
    // only x and parameters remain
    if !rest.is_zero() {
        if !with_x {
            return Err(IntegrationError::NotExact(format!("constant obstruction {rest}")));
        }
        acc.push(integrate_in(&rest, Var::X)?);
    }
    Ok(Scalar::sum(acc))
}

fn jet_fields(f: &Scalar) -> Vec<Field> {
    let mut out: Vec<Field> = f
        .vars()
        .into_iter()
        .filter_map(|v| match v {
            Var::Jet(fl, _) => Some(fl),
            _ => None,
        })
        .collect();
    out.dedup();
    out
}

/// Highest jet by (order, family).
fn top_jet(f: &Scalar) -> Option<Var> {
    f.vars().into_iter().filter(|v| v.is_jet()).max_by_key(|v| match v {
        Var::Jet(fl, n) => (*n, *fl),
        _ => unreachable!(),
    })
}

/// Writes `f = a z + b` with `a, b` free of `z`.
fn split_linear(f: &Scalar, z: Var) -> Result<(Scalar, Scalar), IntegrationError> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (m, c) in f.terms() {
        let (e, rest) = m.split_off(z);
        if e.is_zero() {
            b.push((m.clone(), c.clone()));
        } else if e == Exp::ONE {
            a.push((rest, c.clone()));
        } else {
            return Err(IntegrationError::NotExact(format!("{z} appears with exponent {e}")));
        }
    }
    Ok((Scalar::from_terms(a), Scalar::from_terms(b)))
}

/// Antiderivative with respect to one generator, others held fixed.
fn integrate_in(a: &Scalar, y: Var) -> Result<Scalar, IntegrationError> {
    let mut out = Vec::with_capacity(a.len());
    for (m, c) in a.terms() {
        let e = m.exponent(y);
        if e == -Exp::ONE {
            return Err(IntegrationError::NeedsLog(y));
        }
        let e1 = e + Exp::ONE;
        let factor = rat(2, e1.0 as i64);
        debug_assert!(!factor.is_zero());
        out.push((m.mul(&Monomial::var(y, Exp::ONE)), c * factor));
    }
    Ok(Scalar::from_terms(out))
}
