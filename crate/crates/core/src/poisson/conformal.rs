//! λ-brackets of generators and the Lie conformal algebra axioms.
//!
//! The bracket is stored on generators as `{u_i λ u_j} = H_ji(λ)`, with
//! `λ` (and `μ`) realized as central symbols, so sesquilinearity holds by
//! construction. Skewsymmetry and the Jacobi identity are checked through
//! the master formula, which is complete for structures whose coefficients
//! are affine in the fields.

use rayon::prelude::*;

use super::params::{build_h, PoissonParams, Variant};
use crate::diffalg::{Field, Param, Scalar, Var};
use crate::oreops::{DiffOp, OrePoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalBracket {
    fields: Vec<Field>,
    /// `table[i][j] = {u_i λ u_j}` as a polynomial in `λ`.
    table: Vec<Vec<Scalar>>,
}

fn lambda() -> Scalar {
    Scalar::param(Param::Lambda)
}

fn mu() -> Scalar {
    Scalar::param(Param::Mu)
}

/// `(s + ∂)^n x` for a central `s`.
fn shifted(x: &Scalar, s: &Scalar, n: usize) -> Scalar {
    let mut out = x.clone();
    for _ in 0..n {
        out = &(s * &out) + &out.d_total();
    }
    out
}

/// Coefficients of the powers of `p` in `x`.
fn coefficients_in(x: &Scalar, p: Param) -> Vec<Scalar> {
    let mut parts: Vec<Vec<_>> = Vec::new();
    for (m, c) in x.terms() {
        let (e, rest) = m.split_off(Var::Param(p));
        let k = e.as_integer().filter(|k| *k >= 0).expect("polynomial in the bracket variable") as usize;
        if parts.len() <= k {
            parts.resize(k + 1, Vec::new());
        }
        parts[k].push((rest, c.clone()));
    }
    parts.into_iter().map(Scalar::from_terms).collect()
}

impl ConformalBracket {
    pub fn from_table(fields: Vec<Field>, table: Vec<Vec<Scalar>>) -> Self {
        assert!(table.len() == fields.len() && table.iter().all(|r| r.len() == fields.len()));
        ConformalBracket { fields, table }
    }

    /// The bracket of the Poisson structure `h`.
    pub fn from_operator(h: &DiffOp<Scalar>, fields: &[Field]) -> Self {
        let n = fields.len();
        assert!(h.is_square() && h.rows() == n, "operator size does not match the fields");
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = h.entry(j, i);
                        Scalar::sum(e.coeffs().iter().enumerate().map(|(k, c)| c * &lambda().pow(k as u32)))
                    })
                    .collect()
            })
            .collect();
        ConformalBracket { fields: fields.to_vec(), table }
    }

    /// The bracket of a member of the family.
    pub fn of_family(params: &PoissonParams) -> Self {
        let h = build_h(params, Variant::Full).expect("family parameters");
        ConformalBracket::from_operator(&h, &[Field::U, Field::V])
    }

    pub fn to_operator(&self) -> DiffOp<Scalar> {
        let n = self.fields.len();
        DiffOp::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| OrePoly::new(coefficients_in(&self.table[j][i], Param::Lambda))).collect())
                .collect(),
        )
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    /// `{u_i λ u_j}`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.table[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.table[i][j] = value;
    }

    /// The central part: the terms free of jet variables.
    pub fn cocycle(&self) -> Vec<Vec<Scalar>> {
        self.table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|b| Scalar::from_terms(b.terms().iter().filter(|(m, _)| !m.has_differential()).cloned()))
                    .collect()
            })
            .collect()
    }

    /// `{u_i x u_j}` with `λ` replaced by `x`.
    fn at(&self, i: usize, j: usize, x: &Scalar) -> Scalar {
        self.table[i][j].subs_param(Param::Lambda, x).expect("polynomial in lambda")
    }

    /// `{u_i x P} = Σ_{j,n} ∂P/∂u_j^(n) (x+∂)^n {u_i x u_j}`.
    fn left(&self, i: usize, x: &Scalar, p: &Scalar) -> Scalar {
        let mut parts = Vec::new();
        for (j, &fl) in self.fields.iter().enumerate() {
            let Some(top) = p.max_order(fl) else { continue };
            let b = self.at(i, j, x);
            for n in 0..=top {
                let partial = p.d_partial(Var::Jet(fl, n));
                if !partial.is_zero() {
                    parts.push(&partial * &shifted(&b, x, n as usize));
                }
            }
        }
        Scalar::sum(parts)
    }

    /// `{R x u_k} = Σ_{j,m} {u_j x+∂ u_k}→ (-x-∂)^m ∂R/∂u_j^(m)`.
    fn right(&self, r: &Scalar, x: &Scalar, k: usize) -> Scalar {
        let mut parts = Vec::new();
        for (j, &fl) in self.fields.iter().enumerate() {
            let Some(top) = r.max_order(fl) else { continue };
            let coeffs = coefficients_in(&self.table[j][k], Param::Lambda);
            for m in 0..=top {
                let partial = r.d_partial(Var::Jet(fl, m));
                if partial.is_zero() {
                    continue;
                }
                let inner = shifted(&partial, x, m as usize).scale_int(if m % 2 == 0 { 1 } else { -1 });
                for (e, b) in coeffs.iter().enumerate() {
                    if !b.is_zero() {
                        parts.push(b * &shifted(&inner, x, e));
                    }
                }
            }
        }
        Scalar::sum(parts)
    }

    /// `{u_j λ u_i} + {u_i -λ-∂ u_j}`, zero when skewsymmetric.
    pub fn skew_residual(&self, i: usize, j: usize) -> Scalar {
        let coeffs = coefficients_in(&self.table[i][j], Param::Lambda);
        let mut acc = self.table[j][i].clone();
        for (k, b) in coeffs.iter().enumerate() {
            // (-λ-∂)^k b = (-1)^k (λ+∂)^k b
            let t = shifted(b, &lambda(), k);
            acc = if k % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    /// `{u_i λ {u_j μ u_k}} - {u_j μ {u_i λ u_k}} - {{u_i λ u_j} λ+μ u_k}`.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Scalar {
        let (l, m) = (lambda(), mu());
        let nu = &l + &m;
        let a = self.left(i, &l, &self.at(j, k, &m));
        let b = self.left(j, &m, &self.at(i, k, &l));
        let c = self.right(&self.table[i][j], &nu, k);
        &(&a - &b) - &c
    }
}

/// Outcome of [`verify_conformal_jacobi`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalReport {
    pub fields: Vec<Field>,
    pub skew_failures: Vec<((usize, usize), Scalar)>,
    pub jacobi_failures: Vec<((usize, usize, usize), Scalar)>,
}

impl ConformalReport {
    pub fn holds(&self) -> bool {
        self.skew_failures.is_empty() && self.jacobi_failures.is_empty()
    }

    /// Description of the first violation.
    pub fn violation(&self) -> Option<String> {
        let name = |i: usize| self.fields[i].name();
        if let Some(((i, j), r)) = self.skew_failures.first() {
            return Some(format!("skewsymmetry fails for ({}, {}): residual {r}", name(*i), name(*j)));
        }
        self.jacobi_failures.first().map(|((i, j, k), r)| {
            format!("Jacobi identity fails for ({}, {}, {}): residual {r}", name(*i), name(*j), name(*k))
        })
    }
}

/// Checks skewsymmetry on all pairs and the Jacobi identity on all triples
/// of generators, with `λ, μ` formal. Sesquilinearity is built into the
/// representation.
pub fn verify_conformal_jacobi(b: &ConformalBracket) -> ConformalReport {
    let n = b.fields.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let skew_failures = pairs
        .into_iter()
        .filter_map(|(i, j)| {
            let r = b.skew_residual(i, j);
            (!r.is_zero()).then_some(((i, j), r))
        })
        .collect();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
    let mut jacobi_failures: Vec<_> = triples
        .into_par_iter()
        .filter_map(|(i, j, k)| {
            let r = b.jacobi_residual(i, j, k);
            (!r.is_zero()).then_some(((i, j, k), r))
        })
        .collect();
    jacobi_failures.sort_by_key(|(t, _)| *t);
    ConformalReport { fields: b.fields.clone(), skew_failures, jacobi_failures }
}

/// Every member of the pencil `H(params0) + t·H(params1)` is Poisson.
pub fn verify_compatibility(params0: &PoissonParams, params1: &PoissonParams) -> ConformalReport {
    let pencil = params0.add(&params1.scale(&Scalar::param(Param::T)));
    verify_conformal_jacobi(&ConformalBracket::of_family(&pencil))
}

/// Operator-level version: checks the pencil `h0 + t·h1`.
pub fn verify_compatibility_ops(h0: &DiffOp<Scalar>, h1: &DiffOp<Scalar>, fields: &[Field]) -> ConformalReport {
    let pencil = h0.add(&h1.scale_left(&Scalar::param(Param::T)));
    verify_conformal_jacobi(&ConformalBracket::from_operator(&pencil, fields))
}
