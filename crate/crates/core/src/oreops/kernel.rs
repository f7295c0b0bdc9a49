//! Factorization `H = A·B` through kernel vectors and the strong
//! skew-adjointness certificate.

use super::matrix::DiffOp;
use super::orepoly::OrePoly;
use super::ring::{DiffField, DiffRing};
use super::triangular::dieudonne_det;
use crate::diffalg::{GradientVector, LocalFunctional, Scalar};
use crate::frac::Frac;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("the vector is zero")]
    ZeroVector,
    #[error("the vector is not annihilated by the operator")]
    NotInKernel,
    #[error("basis vector {0} is dependent on the previous ones")]
    DependentBasis(usize),
    #[error("operator and vector sizes do not match")]
    Shape,
}

/// Splits `h = h1 · k1`, where `k1` is the elementary matrix built on the
/// last nonzero component `f_k` of `f`: identity off column `k`, entries
/// `-f_i/f_k` above and below, and `-∂ + f_k'/f_k` in the corner.
pub fn peel_kernel<R: DiffField>(h: &DiffOp<R>, f: &[R]) -> Result<(DiffOp<R>, DiffOp<R>), KernelError> {
    let n = f.len();
    if h.cols() != n {
        return Err(KernelError::Shape);
    }
    let k = f.iter().rposition(|c| !c.is_zero()).ok_or(KernelError::ZeroVector)?;
    if h.apply(f).iter().any(|c| !c.is_zero()) {
        return Err(KernelError::NotInKernel);
    }
    let fk = &f[k];
    let ratio = |c: &R| c.try_div(fk).expect("pivot is nonzero");
    let mut k1 = DiffOp::identity(n);
    for (i, fi) in f.iter().enumerate() {
        if i != k {
            k1.set(i, k, OrePoly::constant(ratio(fi).negate()));
        }
    }
    let corner = OrePoly::new(vec![ratio(&fk.derive()), R::one().negate()]);
    k1.set(k, k, corner.clone());

    let mut h1 = h.clone();
    for i in 0..h.rows() {
        let mut rhs = h.entry(i, k).clone();
        for (j, fj) in f.iter().enumerate() {
            if j != k && !fj.is_zero() {
                rhs = rhs.add(&h.entry(i, j).mul(&OrePoly::constant(ratio(fj))));
            }
        }
        let (q, r) = rhs.right_divide(&corner).ok_or(KernelError::NotInKernel)?;
        if !r.is_zero() {
            return Err(KernelError::NotInKernel);
        }
        h1.set(i, k, q);
    }
    Ok((h1, k1))
}

/// `h = a · b` with `b = k_s ⋯ k_1`, one elementary factor per basis vector.
#[derive(Clone, Debug)]
pub struct FactorizationResult<R> {
    pub a: DiffOp<R>,
    pub b: DiffOp<R>,
    /// The vectors actually peeled: `k_{i-1} ⋯ k_1 F_i`.
    pub peeled: Vec<Vec<R>>,
    pub factors: Vec<DiffOp<R>>,
}

pub fn factor_by_kernel<R: DiffField>(h: &DiffOp<R>, basis: &[Vec<R>]) -> Result<FactorizationResult<R>, KernelError> {
    let n = h.cols();
    let mut a = h.clone();
    let mut b = DiffOp::identity(n);
    let mut peeled = Vec::new();
    let mut factors = Vec::new();
    for (idx, f) in basis.iter().enumerate() {
        if f.len() != n {
            return Err(KernelError::Shape);
        }
        if h.apply(f).iter().any(|c| !c.is_zero()) {
            return Err(KernelError::NotInKernel);
        }
        let pushed = b.apply(f);
        if pushed.iter().all(DiffRing::is_zero) {
            return Err(KernelError::DependentBasis(idx));
        }
        let (h1, k1) = peel_kernel(&a, &pushed)?;
        a = h1;
        b = k1.mul(&b);
        factors.push(k1);
        peeled.push(pushed);
    }
    Ok(FactorizationResult { a, b, peeled, factors })
}

/// Which conditions of strong skew-adjointness hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongSkewCertificate {
    pub skew_adjoint: bool,
    /// Per basis vector: equals the variational derivative of its density.
    pub gradients: Vec<bool>,
    /// Per basis vector: annihilated by the operator.
    pub annihilated: Vec<bool>,
    pub kernel_dim: usize,
    pub degree: usize,
    pub degenerate: bool,
}

impl StrongSkewCertificate {
    pub fn holds(&self) -> bool {
        self.failure().is_none()
    }

    /// The first condition that fails.
    pub fn failure(&self) -> Option<String> {
        if !self.skew_adjoint {
            return Some("operator is not skew-adjoint".into());
        }
        if let Some(i) = self.gradients.iter().position(|ok| !ok) {
            return Some(format!("basis vector {i} is not the gradient of its density"));
        }
        if let Some(i) = self.annihilated.iter().position(|ok| !ok) {
            return Some(format!("basis vector {i} is not in the kernel"));
        }
        if self.degenerate {
            return Some("operator is degenerate".into());
        }
        if self.kernel_dim != self.degree {
            return Some(format!(
                "kernel dimension {} differs from the determinant degree {}",
                self.kernel_dim, self.degree
            ));
        }
        None
    }
}

/// Checks skew-adjointness, that each basis vector is `gradient(density)`
/// and lies in the kernel, and that the basis size equals `deg det h`.
pub fn is_strongly_skew_adjoint(
    h: &DiffOp<Scalar>,
    basis: &[GradientVector],
    densities: &[LocalFunctional],
    gradient: &dyn Fn(&Scalar) -> GradientVector,
) -> StrongSkewCertificate {
    let det = dieudonne_det(&h.to_frac());
    StrongSkewCertificate {
        skew_adjoint: h.is_skew_adjoint(),
        gradients: basis
            .iter()
            .zip(densities)
            .map(|(f, d)| gradient(&d.density) == *f)
            .chain(std::iter::repeat_n(false, basis.len().saturating_sub(densities.len())))
            .collect(),
        annihilated: basis.iter().map(|f| h.apply_gradient(f).is_zero()).collect(),
        kernel_dim: basis.len(),
        degree: det.degree,
        degenerate: det.degenerate,
    }
}

/// Converts gradient vectors to fraction-field vectors.
pub fn frac_vectors(basis: &[GradientVector]) -> Vec<Vec<Frac>> {
    basis.iter().map(|g| g.components.iter().map(|c| Frac::from_scalar(c.clone())).collect()).collect()
}
