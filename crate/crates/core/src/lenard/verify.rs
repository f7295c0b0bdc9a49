//! Exact certificates for a computed hierarchy.

use std::fmt;

use num_rational::Rational64;
use rayon::prelude::*;

use super::case::CaseTag;
use super::state::HierarchyState;
use crate::diffalg::{evolutionary_commutator, variational_derivative_in, Field, GradientVector, Grading, Scalar};
use crate::poisson::{kernel_basis, pair_r, pair_s, Variant};
use crate::span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    /// `H₀F_n = H₁F_{n-1}`, and `H₀F₀ = 0`.
    Recursion,
    /// The Fréchet operator of `F_n` is self-adjoint.
    Helmholtz,
    /// `{h_m, h_n}₀ = 0`.
    InvolutionH0,
    /// `{h_m, h_n}₁ = 0`.
    InvolutionH1,
    /// `{h_n, C}₁ = 0` for every Casimir `C` of `H₀`.
    CasimirStep,
    /// `[P_m, P_n] = 0`.
    Commutator,
    /// `[P_n, ∂] = 0`: flows commute with the translation flow.
    Translation,
    /// The case's degree law for `F_n`.
    Degree,
    /// `F₀, …, F_N` are linearly independent over the constants.
    Independence,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Recursion => "recursion",
            CheckKind::Helmholtz => "helmholtz",
            CheckKind::InvolutionH0 => "involution_h0",
            CheckKind::InvolutionH1 => "involution_h1",
            CheckKind::CasimirStep => "casimir_step",
            CheckKind::Commutator => "commutator",
            CheckKind::Translation => "translation",
            CheckKind::Degree => "degree",
            CheckKind::Independence => "independence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CheckKind,
    /// The hierarchy indices involved, ascending.
    pub indices: Vec<usize>,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    fn new(kind: CheckKind, indices: Vec<usize>, passed: bool, detail: impl Into<String>) -> Self {
        Certificate { kind, indices, passed, detail: detail.into() }
    }

    /// The largest index involved; certificates are filed under it.
    pub fn top(&self) -> usize {
        self.indices.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "{} [{}] {}", self.kind.name(), idx.join(","), if self.passed { "ok" } else { "FAILED" })?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub case: CaseTag,
    pub depth: usize,
    pub certificates: Vec<Certificate>,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Certificate> {
        self.certificates.iter().filter(|c| !c.passed).collect()
    }

    pub fn of_kind(&self, kind: CheckKind) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(move |c| c.kind == kind)
    }

    pub fn kind_passed(&self, kind: CheckKind) -> bool {
        self.of_kind(kind).all(|c| c.passed)
    }

    /// Certificates whose largest index is `n`.
    pub fn for_index(&self, n: usize) -> Vec<&Certificate> {
        self.certificates.iter().filter(|c| c.top() == n).collect()
    }
}

/// Exact: `δ` in the native generators vanishes.
fn is_exact(density: &Scalar, fields: &[Field]) -> bool {
    variational_derivative_in(density, fields).is_zero()
}

fn translation_flow(fields: &[Field]) -> GradientVector {
    GradientVector::new(fields.iter().map(|&f| Scalar::jet(f, 1)).collect())
}

fn r64(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn show(d: Option<Rational64>) -> String {
    d.map_or_else(|| "-inf".into(), |x| x.to_string())
}

/// Runs every certificate on `F₀..F_N`, `N = min(n, depth)`.
pub fn verify_hierarchy(state: &HierarchyState, n: usize) -> HierarchyReport {
    let n = n.min(state.depth());
    let fields = state.coords.fields();
    let grads = &state.gradients[..=n];
    let h0f: Vec<GradientVector> = grads.par_iter().map(|f| state.h0.apply_gradient(f)).collect();
    let h1f: Vec<GradientVector> = grads.par_iter().map(|f| state.h1.apply_gradient(f)).collect();
    let mut out = Vec::new();

    out.push(Certificate::new(CheckKind::Recursion, vec![0], h0f[0].is_zero(), "H0 F0 = 0"));
    for k in 1..=n {
        let ok = h0f[k] == h1f[k - 1];
        out.push(Certificate::new(CheckKind::Recursion, vec![k - 1, k], ok, ""));
    }
    let helm: Vec<bool> = grads.par_iter().map(|f| state.coords.is_gradient(f)).collect();
    for (k, ok) in helm.into_iter().enumerate() {
        out.push(Certificate::new(CheckKind::Helmholtz, vec![k], ok, ""));
    }

    // Under H₁ every pair is computed. Under H₀, once the recursion holds,
    // `F_i·H₀F_j` is the very same integrand as `F_i·H₁F_{j-1}`.
    let pairs: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
    let exact1: Vec<bool> = pairs.par_iter().map(|&(i, j)| is_exact(&grads[i].dot(&h1f[j]), &fields)).collect();
    let lookup = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).map(|k| exact1[k]);
    let recursion_ok: Vec<bool> = (0..=n).map(|j| j == 0 || h0f[j] == h1f[j - 1]).collect();
    let exact0: Vec<(bool, &str)> = pairs
        .par_iter()
        .map(|&(i, j)| match (j > 0 && recursion_ok[j]).then(|| lookup(i, j - 1)).flatten() {
            Some(ok) => (ok, "same integrand as under H1"),
            None => (is_exact(&grads[i].dot(&h0f[j]), &fields), ""),
        })
        .collect();
    let mut inv = Vec::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        inv.push(Certificate::new(CheckKind::InvolutionH0, vec![i, j], exact0[k].0, exact0[k].1));
        inv.push(Certificate::new(CheckKind::InvolutionH1, vec![i, j], exact1[k], ""));
    }
    out.extend(inv);

    out.extend(casimir_step(state, &h1f, &fields));

    let native: Vec<GradientVector> = (0..=n).map(|k| state.native_flow(k)).collect();
    let top = n.min(3);
    let comm_pairs: Vec<(usize, usize)> = (0..=top).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let comm: Vec<Certificate> = comm_pairs
        .par_iter()
        .map(|&(i, j)| {
            let ok = evolutionary_commutator(&native[i], &native[j], &fields).is_zero();
            Certificate::new(CheckKind::Commutator, vec![i, j], ok, "")
        })
        .collect();
    out.extend(comm);
    let px = translation_flow(&fields);
    for (k, p) in native.iter().enumerate().take(top + 1) {
        let ok = evolutionary_commutator(p, &px, &fields).is_zero();
        out.push(Certificate::new(CheckKind::Translation, vec![k], ok, ""));
    }

    out.extend(degree_laws(state, n));
    out.push(Certificate::new(
        CheckKind::Independence,
        (0..=n).collect(),
        span::independent(grads),
        "over the constants",
    ));
    HierarchyReport { case: state.case, depth: n, certificates: out }
}

fn casimir_step(state: &HierarchyState, h1f: &[GradientVector], fields: &[Field]) -> Vec<Certificate> {
    let kb = match kernel_basis(&state.params0, Variant::Full) {
        Ok(kb) if kb.coords.signature() == state.coords.signature() => kb,
        Ok(_) => {
            return vec![Certificate::new(CheckKind::CasimirStep, vec![0], false, "kernel basis in another chart")]
        }
        Err(e) => return vec![Certificate::new(CheckKind::CasimirStep, vec![0], false, e.to_string())],
    };
    h1f.par_iter()
        .enumerate()
        .map(|(k, hf)| {
            let ok = kb.vectors.iter().all(|c| is_exact(&c.dot(hf), fields));
            Certificate::new(CheckKind::CasimirStep, vec![k], ok, format!("{} Casimirs", kb.vectors.len()))
        })
        .collect()
}

fn degree_laws(state: &HierarchyState, n: usize) -> Vec<Certificate> {
    let mut out = Vec::new();
    let g = &state.gradients;
    match state.case {
        CaseTag::A1 => {
            let gr = Grading::TotalPolynomial;
            for k in 1..=n {
                let d = r64(-(k as i64), 1);
                let (f, h) = (g[k].f(), g[k].g());
                let bounded = gr.degree(f).is_none_or(|x| x <= d) && gr.degree(h).is_none_or(|x| x <= d);
                let top = !gr.component(f, d).is_zero() || !gr.component(h, d).is_zero();
                let detail = format!("deg f = {}, deg g = {}, bound {d}", show(gr.degree(f)), show(gr.degree(h)));
                out.push(Certificate::new(CheckKind::Degree, vec![k], bounded && top, detail));
            }
        }
        CaseTag::A2 => {
            let gr = Grading::QHalfInteger;
            let (p0, p1) = (&state.params0, &state.params1);
            let r = pair_r(p0, p1);
            let s = pair_s(p0, p1);
            let deg = |k: usize| gr.degree(g[k].f());
            for k in 1..=n {
                let kk = k as i64;
                let df = deg(k);
                let (ok, detail) = if !r.is_zero() {
                    if k == 1 {
                        (df == Some(r64(1, 2)), format!("r != 0; deg f = {}", show(df)))
                    } else {
                        let bump = if p0.ga.is_zero() { 0 } else { 1 };
                        let dg = gr.degree(g[k].g());
                        let ok = match (df, deg(k - 1)) {
                            (Some(a), Some(b)) => a - b == r64(3, 1) && dg == Some(a + bump),
                            _ => false,
                        };
                        (ok, format!("r != 0; deg f = {}, deg g = {}", show(df), show(dg)))
                    }
                } else if !s.is_zero() {
                    let ok = if kk % 2 == 1 {
                        df == Some(r64(3 * kk - 2, 2))
                    } else {
                        df.is_none_or(|x| x <= r64(3 * kk - 3, 2))
                    };
                    (ok, format!("r = 0, s != 0; deg f = {}", show(df)))
                } else {
                    (df == Some(r64(2 * kk - 1, 2)), format!("r = s = 0; deg f = {}", show(df)))
                };
                out.push(Certificate::new(CheckKind::Degree, vec![k], ok, detail));
            }
        }
        CaseTag::B => {
            let gr = Grading::TotalPolynomial;
            for k in 1..=n {
                let d = r64(k as i64 - 1, 1);
                let degs: Vec<Option<Rational64>> = g[k].components.iter().map(|c| gr.degree(c)).collect();
                let ok = degs.iter().all(|x| x.is_none_or(|x| x <= d)) && degs.contains(&Some(d));
                let shown: Vec<String> = degs.into_iter().map(show).collect();
                out.push(Certificate::new(
                    CheckKind::Degree,
                    vec![k],
                    ok,
                    format!("top degree {d}, got ({})", shown.join(", ")),
                ));
            }
        }
        CaseTag::BBlocked => {}
    }
    out
}
