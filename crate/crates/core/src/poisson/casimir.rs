//! Local brackets, Casimir elements and kernels of the family.

use super::params::{build_h, PoissonError, PoissonParams, Variant};
use crate::diffalg::{
    AlgebraSignature, Chart, ChartMap, Coordinates, GradientVector, LocalFunctional, Quasiconstants, Scalar,
};
use crate::frac::Frac;
use crate::oreops::DiffOp;
use crate::span::decompose;

/// `{∫f, ∫g}_H = ∫ δg · H(∂) δf`, as a density modulo total derivatives.
pub fn bracket(
    f: &LocalFunctional,
    g: &LocalFunctional,
    h: &DiffOp<Scalar>,
    sig: &AlgebraSignature,
) -> LocalFunctional {
    bracket_in(f, g, h, &Coordinates::Plain(sig.clone()))
}

/// [`bracket`] with densities written in arbitrary coordinates; `h` has UV
/// coefficients.
pub fn bracket_in(f: &LocalFunctional, g: &LocalFunctional, h: &DiffOp<Scalar>, co: &Coordinates) -> LocalFunctional {
    let hf = co.operator(h).apply_gradient(&co.gradient(&f.density));
    LocalFunctional::new(co.gradient(&g.density).dot(&hf))
}

/// `H(∂) δh = 0`.
pub fn casimir_check(h: &LocalFunctional, op: &DiffOp<Scalar>, sig: &AlgebraSignature) -> bool {
    casimir_check_in(h, op, &Coordinates::Plain(sig.clone()))
}

pub fn casimir_check_in(h: &LocalFunctional, op: &DiffOp<Scalar>, co: &Coordinates) -> bool {
    co.operator(op).apply_gradient(&co.gradient(&h.density)).is_zero()
}

/// Which closed form a kernel basis comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelCase {
    /// Reduced family, `p ≠ 0`: only `δv`.
    ReducedGeneric,
    /// Reduced family, `ε = γ = 0`, with `v` invertible.
    ReducedLaurent,
    /// Reduced family, `ε ≠ 0`, `p = 0`, in the `Q, v` chart.
    ReducedHalfPower,
    /// Constant family, `p = 0`, `q ≠ 0`: `δv, δu`.
    ConstantNondegenerate,
    /// Constant family, `p ≠ 0`, `ε ≠ 0`, `q = 0`, with `x` adjoined.
    ConstantLinearX,
    /// Constant family, `p ≠ 0`, `ε = q = 0`, with `x` adjoined.
    ConstantQuadraticX,
}

/// A basis of `ker H` with the densities it is the gradient of. Vectors and
/// densities are written in `coords`; `operator` is `H` with its
/// coefficients rewritten there.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    pub case: KernelCase,
    pub coords: Coordinates,
    pub operator: DiffOp<Scalar>,
    pub vectors: Vec<GradientVector>,
    pub densities: Vec<LocalFunctional>,
}

fn sym(src: &str, vars: &[(&str, &Scalar)]) -> Scalar {
    // small closed forms are written out with the parameter values spliced in
    let mut out = src.to_string();
    for (name, value) in vars {
        out = out.replace(&format!("{{{name}}}"), &format!("({value})"));
    }
    out.parse().expect("closed-form density")
}

fn nonzero_inverse(x: &Scalar, name: &str) -> Result<Scalar, PoissonError> {
    if x.is_zero() {
        return Err(PoissonError::Internal(format!("{name} vanishes")));
    }
    x.inverse()
        .ok_or_else(|| PoissonError::Unsupported(format!("{name} = {x} is not a single term; substitute values")))
}

/// Closed-form kernel basis for the supported cases, each vector re-checked
/// against the operator and against the gradient of its density.
pub fn kernel_basis(params: &PoissonParams, variant: Variant) -> Result<KernelBasis, PoissonError> {
    params.validate(variant)?;
    let variant = match variant {
        Variant::Full if params.a.is_one() && params.al.is_zero() && params.be.is_zero() => Variant::Reduced,
        Variant::Full if params.a.is_zero() => Variant::Constant,
        Variant::Full => {
            return Err(PoissonError::Unsupported("kernels are tabulated for the reduced and constant families".into()))
        }
        v => v,
    };
    let h = build_h(params, variant)?;
    let (p, q) = (params.p(), params.q());
    let PoissonParams { c, al, be, ga, ep, .. } = params;
    let (case, coords, densities): (KernelCase, Coordinates, Vec<Scalar>) = match variant {
        Variant::Reduced if !p.is_zero() => {
            (KernelCase::ReducedGeneric, Coordinates::Plain(AlgebraSignature::of(Chart::UvPoly)), vec![sym("v0", &[])])
        }
        Variant::Reduced if ep.is_zero() => (
            KernelCase::ReducedLaurent,
            Coordinates::Plain(AlgebraSignature::of(Chart::UvLaurentV)),
            vec![sym("v0", &[]), sym("u0*v0^-1 - 1/2*{c}*v1^2*v0^-3", &[("c", c)])],
        ),
        Variant::Reduced => {
            let chart = ChartMap::new(ep.clone(), ga.clone()).map_err(|e| PoissonError::Unsupported(e.to_string()))?;
            (KernelCase::ReducedHalfPower, Coordinates::HalfPower(chart), vec![sym("v0", &[]), sym("Q0^{1/2}", &[])])
        }
        _ if p.is_zero() && q.is_zero() => {
            return Err(PoissonError::Unsupported("the constant operator with p = q = 0 is degenerate".into()))
        }
        _ if p.is_zero() => (
            KernelCase::ConstantNondegenerate,
            Coordinates::Plain(AlgebraSignature::of(Chart::UvPoly)),
            vec![sym("v0", &[]), sym("u0", &[])],
        ),
        _ if !q.is_zero() => {
            return Err(PoissonError::Unsupported(
                "p != 0 and q != 0 needs trigonometric or exponential quasiconstants".into(),
            ))
        }
        _ => {
            let sig = AlgebraSignature::new(Chart::UvPoly, Quasiconstants::PolynomialX).expect("x is supported");
            let coords = Coordinates::Plain(sig);
            if !ep.is_zero() {
                let inv = nonzero_inverse(ep, "ep")?;
                let b = be * &inv;
                let g = ga * &inv;
                (
                    KernelCase::ConstantLinearX,
                    coords,
                    vec![
                        sym("v0", &[]),
                        sym("u0", &[]),
                        sym("-x^2*u0 + ({b}*x^2 - 2*{g}*x)*v0", &[("b", &b), ("g", &g)]),
                        sym("-x*u0 + {b}*x*v0", &[("b", &b)]),
                    ],
                )
            } else {
                let k = &(al * &nonzero_inverse(ga, "ga")?) * &Scalar::from_ratio(1, 2);
                (
                    KernelCase::ConstantQuadraticX,
                    coords,
                    vec![sym("v0", &[]), sym("u0", &[]), sym("-x*u0 + {k}*x^2*v0", &[("k", &k)]), sym("x*v0", &[])],
                )
            }
        }
    };
    let operator = coords.operator(&h);
    let vectors: Vec<GradientVector> = densities.iter().map(|d| coords.gradient(d)).collect();
    for (i, f) in vectors.iter().enumerate() {
        if !operator.apply_gradient(f).is_zero() {
            return Err(PoissonError::Internal(format!("kernel vector {i} is not annihilated")));
        }
    }
    Ok(KernelBasis {
        case,
        coords,
        operator,
        vectors,
        densities: densities.into_iter().map(LocalFunctional::new).collect(),
    })
}

/// Structure constants of `(C(H₀), {·,·}₁)` in a kernel basis:
/// `{∫f_i, ∫f_j}₁ = Σ_k constants[i][j][k] ∫f_k`, with the bracket
/// `{∫f, ∫g} = ∫ δg · H₁ δf`.
#[derive(Clone, Debug)]
pub struct LieTable {
    pub basis: KernelBasis,
    pub constants: Vec<Vec<Vec<Frac>>>,
}

impl LieTable {
    pub fn is_abelian(&self) -> bool {
        self.constants.iter().flatten().flatten().all(Frac::is_zero)
    }

    /// Basis elements whose brackets with everything vanish.
    pub fn center(&self) -> Vec<usize> {
        (0..self.constants.len()).filter(|&i| self.constants[i].iter().flatten().all(Frac::is_zero)).collect()
    }
}

pub fn casimir_lie_algebra(params0: &PoissonParams, params1: &PoissonParams) -> Result<LieTable, PoissonError> {
    let basis = kernel_basis(params0, Variant::Full)?;
    let h1 = build_h(params1, Variant::Full)?;
    let n = basis.vectors.len();
    let mut constants = vec![vec![vec![Frac::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = bracket_in(&basis.densities[i], &basis.densities[j], &h1, &basis.coords);
            let grad = basis.coords.gradient(&b.density);
            constants[i][j] = decompose(&grad, &basis.vectors).ok_or(PoissonError::NotInSpan(i, j))?;
        }
    }
    Ok(LieTable { basis, constants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{parse_scalar, variational_derivative};

    fn s(src: &str) -> Scalar {
        parse_scalar(src).unwrap()
    }

    fn uv() -> AlgebraSignature {
        AlgebraSignature::of(Chart::UvPoly)
    }

    #[test]
    fn v_is_a_casimir_and_brackets_trivially() {
        let h = build_h(&PoissonParams::reduced(s("c"), s("ga"), s("ep")), Variant::Reduced).unwrap();
        let v = LocalFunctional::new(s("v0"));
        assert!(casimir_check(&v, &h, &uv()));
        assert!(bracket(&v, &v, &h, &uv()).density.is_zero());
        let any = LocalFunctional::new(s("u0^2*v1 + u2*v0"));
        let b = bracket(&any, &v, &h, &uv());
        assert!(variational_derivative(&b.density, &uv()).is_zero());
    }

    #[test]
    fn u_is_not_a_casimir() {
        let h = build_h(&PoissonParams::reduced(s("1"), s("0"), s("0")), Variant::Reduced).unwrap();
        assert!(!casimir_check(&LocalFunctional::new(s("u0")), &h, &uv()));
        assert_eq!(h.apply_gradient(&GradientVector::pair(s("1"), s("0"))), GradientVector::pair(s("u1"), s("v1")));
    }

    #[test]
    fn skewsymmetry_of_the_bracket() {
        let h = build_h(&PoissonParams::reduced(s("1"), s("0"), s("0")), Variant::Reduced).unwrap();
        let f = LocalFunctional::new(s("u0^2"));
        let g = LocalFunctional::new(s("v0^2"));
        let fg = bracket(&f, &g, &h, &uv());
        let gf = bracket(&g, &f, &h, &uv());
        assert!(variational_derivative(&(&fg.density + &gf.density), &uv()).is_zero());
        assert!(!variational_derivative(&fg.density, &uv()).is_zero());
    }

    #[test]
    fn reduced_kernels() {
        let k = kernel_basis(&PoissonParams::reduced(s("c"), s("ga"), s("ep")), Variant::Reduced).unwrap();
        assert_eq!(k.case, KernelCase::ReducedGeneric);
        assert_eq!(k.vectors, vec![GradientVector::pair(s("0"), s("1"))]);

        let k = kernel_basis(&PoissonParams::reduced(s("c"), s("0"), s("0")), Variant::Reduced).unwrap();
        assert_eq!(k.case, KernelCase::ReducedLaurent);
        assert_eq!(k.vectors[1], GradientVector::pair(s("v0^-1"), s("-u0*v0^-2 + c*v2*v0^-3 - 3/2*c*v1^2*v0^-4")));

        let k = kernel_basis(&PoissonParams::reduced(s("-ga^2*ep^-1"), s("ga"), s("ep")), Variant::Reduced).unwrap();
        assert_eq!(k.case, KernelCase::ReducedHalfPower);
        assert_eq!(k.vectors[1].f(), &s("1/2*ep*Q0^{-1/2}"));
    }

    #[test]
    fn constant_kernels() {
        let k =
            kernel_basis(&PoissonParams::constant(s("0"), s("1"), s("0"), s("0"), s("1")), Variant::Constant).unwrap();
        assert_eq!(k.case, KernelCase::ConstantNondegenerate);
        // ε ≠ 0, q = 0: α = β²/ε
        let p = PoissonParams::constant(s("c"), s("be^2*ep^-1"), s("be"), s("ga"), s("ep"));
        let k = kernel_basis(&p, Variant::Constant).unwrap();
        assert_eq!(k.case, KernelCase::ConstantLinearX);
        assert_eq!(k.vectors[3], GradientVector::pair(s("-x"), s("be*ep^-1*x")));
        let p = PoissonParams::constant(s("c"), s("al"), s("0"), s("ga"), s("0"));
        assert_eq!(kernel_basis(&p, Variant::Constant).unwrap().case, KernelCase::ConstantQuadraticX);
        let p = PoissonParams::constant(s("1"), s("1"), s("0"), s("0"), s("1"));
        assert!(matches!(kernel_basis(&p, Variant::Constant), Err(PoissonError::Unsupported(_))));
    }

    #[test]
    fn abelian_casimir_algebra() {
        let p0 = PoissonParams::constant(s("0"), s("1"), s("0"), s("0"), s("1"));
        let p1 = PoissonParams::reduced(s("c1"), s("ga1"), s("ep1"));
        let t = casimir_lie_algebra(&p0, &p1).unwrap();
        assert_eq!(t.constants.len(), 2);
        assert!(t.is_abelian());
    }

    #[test]
    fn linear_x_casimir_algebra() {
        let p0 = PoissonParams::constant(s("c"), s("be^2*ep^-1"), s("be"), s("ga"), s("ep"));
        let p1 = PoissonParams::reduced(s("c1"), s("ga1"), s("ep1"));
        let t = casimir_lie_algebra(&p0, &p1).unwrap();
        assert_eq!(t.center(), vec![0]);
        let fr = |x: &str| Frac::from_scalar(s(x));
        // with {∫f, ∫g} = ∫δg·H₁δf
        assert_eq!(t.constants[2][3], vec![fr("0"), fr("0"), fr("-1"), fr("0")]);
        assert_eq!(t.constants[1][3], vec![fr("-be*ep^-1"), fr("1"), fr("0"), fr("0")]);
        assert_eq!(t.constants[1][2], vec![fr("2*ga*ep^-1"), fr("0"), fr("0"), fr("-2")]);
    }

    #[test]
    fn quadratic_x_casimir_algebra() {
        let p0 = PoissonParams::constant(s("c"), s("al"), s("0"), s("ga"), s("0"));
        let p1 = PoissonParams::reduced(s("c1"), s("ga1"), s("ep1"));
        let t = casimir_lie_algebra(&p0, &p1).unwrap();
        let fr = |x: &str| Frac::from_scalar(s(x));
        assert_eq!(t.constants[1][2], vec![fr("0"), fr("1"), fr("0"), fr("-al*ga^-1")]);
        assert_eq!(t.constants[1][3], vec![fr("-1"), fr("0"), fr("0"), fr("0")]);
        assert_eq!(t.constants[2][3], vec![fr("0"), fr("0"), fr("0"), fr("1")]);
    }
}
