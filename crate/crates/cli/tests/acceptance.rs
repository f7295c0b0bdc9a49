//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the lines always show.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use bihamil::diffalg::{
    antiderivative, variational_derivative, AlgebraSignature, Chart, ChartMap, Field, LocalFunctional, Param,
    Quasiconstants,
};
use bihamil::lenard::{
    substitute_flow, verify_hierarchy, CaseTag, CheckKind, HierarchyState, LenardError, SubstitutionSpec,
};
use bihamil::oreops::{dieudonne_det, factor_by_kernel, frac_vectors};
use bihamil::poisson::{
    bracket, build_h, kernel_basis, pair_r, pair_s, verify_compatibility, verify_conformal_jacobi, ConformalBracket,
    KernelCase, PoissonParams, Variant,
};
use bihamil::span::decompose;
use bihamil::{DiffOp, Frac, GradientVector, Scalar};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limits.
const DET_LIMIT: Duration = Duration::from_secs(1);
const JACOBI_LIMIT: Duration = Duration::from_secs(10);
const RANDOM_INSTANCES: usize = 200;
const DEPTH: usize = 5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair(f: &str, g: &str) -> GradientVector {
    GradientVector::pair(s(f), s(g))
}

fn times(g: &GradientVector, n: i64) -> GradientVector {
    g.map(|c| c.scale_int(n))
}

fn frac_of(x: &Scalar) -> Frac {
    Frac::from_scalar(x.clone())
}

fn uv_poly() -> AlgebraSignature {
    AlgebraSignature::of(Chart::UvPoly)
}

fn state(p0: PoissonParams, p1: PoissonParams, depth: usize) -> Result<HierarchyState, String> {
    let mut st = HierarchyState::new(p0, p1).map_err(|e| e.to_string())?;
    st.extend_to(depth).map_err(|e| e.to_string())?;
    Ok(st)
}

fn generic_constant_second() -> PoissonParams {
    PoissonParams::constant(s("c1"), s("al1"), s("be1"), s("ga1"), s("ep1"))
}

/// `target - Σ k_i basis_i` vanishes for constants `k`; returns the `k`.
fn span_coefficients(target: &GradientVector, basis: &[GradientVector]) -> Option<Vec<String>> {
    decompose(target, basis).map(|ks| ks.iter().map(|k| k.to_string()).collect())
}

// 1. Dieudonné determinant of the reduced family.

fn det_check(c: Scalar, ga: Scalar, ep: Scalar) -> Result<Duration, String> {
    let p = PoissonParams::reduced(c, ga, ep);
    let h = build_h(&p, Variant::Reduced).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let det = dieudonne_det(&h.to_frac());
    if p.p().is_zero() {
        let chart = ChartMap::new(p.ep.clone(), p.ga.clone()).map_err(|e| e.to_string())?;
        let two_q = chart.q_in_uv().scale_int(2);
        ensure(det.degree == 2 && det.det1 == frac_of(&two_q), || format!("p = 0 at {p:?}: got {det}"))?;
        let in_qv = dieudonne_det(&chart.op_to_qv(&h).to_frac());
        ensure(in_qv.to_string() == "2*Q0*xi^2", || format!("QV chart gives {in_qv}"))?;
    } else {
        ensure(det.degree == 4 && det.det1 == frac_of(&p.p()), || format!("p != 0 at {p:?}: got {det}"))?;
    }
    Ok(t.elapsed())
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut slowest = Duration::ZERO;
    let mut zero_p = 0;
    for i in 0..20 {
        let (c, ga, ep) = if i % 4 == 3 {
            let (ga, ep) = (nonzero_rational(&mut rng), nonzero_rational(&mut rng));
            let c = &(&ga * &ga).scale_int(-1) * &ep.inverse().expect("nonzero");
            (c, ga, ep)
        } else {
            (rational(&mut rng), rational(&mut rng), rational(&mut rng))
        };
        if (&(&c * &ep) + &(&ga * &ga)).is_zero() {
            zero_p += 1;
        }
        slowest = slowest.max(det_check(c, ga, ep)?);
    }
    slowest = slowest.max(det_check(s("c"), s("ga"), s("ep"))?);
    slowest = slowest.max(det_check(s("-ga^2*ep^-1"), s("ga"), s("ep"))?);
    ensure(slowest < DET_LIMIT, || format!("slowest determinant took {slowest:?}"))?;
    Ok(format!("20 random triples ({zero_p} with p = 0) and both symbolic branches; slowest {slowest:?}"))
}

// 2. Kernel bases.

fn kernel_check(params: PoissonParams, case: KernelCase, expected: &[GradientVector]) -> Result<(), String> {
    let kb = kernel_basis(&params, Variant::Full).map_err(|e| format!("{case:?}: {e}"))?;
    ensure(kb.case == case, || format!("expected {case:?}, got {:?}", kb.case))?;
    let op = kb.coords.operator(&build_h(&params, Variant::Full).map_err(|e| e.to_string())?);
    let imported: Vec<GradientVector> = expected.iter().map(|v| v.map(|c| kb.coords.import(c))).collect();
    ensure(kb.vectors == imported, || format!("{case:?}: basis {:?}", kb.vectors))?;
    for (v, d) in imported.iter().zip(&kb.densities) {
        ensure(op.apply_gradient(v).is_zero(), || format!("{case:?}: {v} not annihilated"))?;
        ensure(kb.coords.gradient(&d.density) == *v, || format!("{case:?}: {v} is not the gradient of {}", d.density))?;
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let dv = pair("0", "1");
    let du = pair("1", "0");
    kernel_check(
        PoissonParams::reduced(s("c"), s("ga"), s("ep")),
        KernelCase::ReducedGeneric,
        std::slice::from_ref(&dv),
    )?;
    kernel_check(
        PoissonParams::reduced(s("c"), s("0"), s("0")),
        KernelCase::ReducedLaurent,
        &[dv.clone(), pair("v0^-1", "-u0*v0^-2 + c*v0^-3*v2 - 3/2*c*v0^-4*v1^2")],
    )?;
    kernel_check(
        PoissonParams::reduced(s("-ga^2*ep^-1"), s("ga"), s("ep")),
        KernelCase::ReducedHalfPower,
        &[dv.clone(), pair("1/2*ep*Q0^{-1/2}", "-1/4*ga*Q0^{-3/2}*Q1 - 1/2*v0*Q0^{-1/2}")],
    )?;
    kernel_check(
        PoissonParams::constant(s("-ga^2*ep^-1"), s("al"), s("be"), s("ga"), s("ep")),
        KernelCase::ConstantNondegenerate,
        &[dv.clone(), du.clone()],
    )?;
    kernel_check(
        PoissonParams::constant(s("c"), s("be^2*ep^-1"), s("be"), s("ga"), s("ep")),
        KernelCase::ConstantLinearX,
        &[dv.clone(), du.clone(), pair("-x^2", "be*ep^-1*x^2 - 2*ga*ep^-1*x"), pair("-x", "be*ep^-1*x")],
    )?;
    kernel_check(
        PoissonParams::constant(s("c"), s("al"), s("0"), s("ga"), s("0")),
        KernelCase::ConstantQuadraticX,
        &[dv, du, pair("-x", "1/2*al*ga^-1*x^2"), pair("0", "x")],
    )?;
    // the x-extended algebra is the one the kernel lives in
    AlgebraSignature::new(Chart::UvPoly, Quasiconstants::PolynomialX).map_err(|e| e.to_string())?;
    Ok("six tabulated bases, symbolic parameters, exact zero residuals".into())
}

// 3. Jacobi identity and compatibility.

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let jac = verify_conformal_jacobi(&ConformalBracket::of_family(&PoissonParams::symbolic()));
    ensure(jac.holds(), || format!("Jacobi: {}", jac.violation().unwrap_or_default()))?;
    let comp = verify_compatibility(&PoissonParams::symbolic(), &PoissonParams::symbolic_second());
    ensure(comp.holds(), || format!("pencil: {}", comp.violation().unwrap_or_default()))?;
    let took = t.elapsed();
    ensure(took < JACOBI_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("all six parameters and their subscripted copies symbolic; {took:?}"))
}

// 4. Case A1 at (c, c1, al1, be1, ga1, ep1) = (1, 1, 2, 3, 5, 7).

const A1_VALUES: [(Param, &str); 6] =
    [(Param::C, "1"), (Param::C1, "1"), (Param::Al1, "2"), (Param::Be1, "3"), (Param::Ga1, "5"), (Param::Ep1, "7")];

const A1_REF_UT: &str = "c*ga1*v4*v0^-3 - 9*c*ga1*v3*v1*v0^-4 - c1*v3*v0^-2 + c*be1*v3*v0^-3 \
    - 6*c*ga1*v2^2*v0^-4 + 42*c*ga1*v2*v1^2*v0^-5 + 6*c1*v2*v1*v0^-3 - 6*c*be1*v2*v1*v0^-4 \
    + 2*ga1*v2*u0*v0^-3 - ga1*u2*v0^-2 - 30*c*ga1*v1^4*v0^-6 - 6*c1*v1^3*v0^-4 + 6*c*be1*v1^3*v0^-5 \
    - 6*ga1*v1^2*u0*v0^-4 + 4*ga1*u1*v1*v0^-3 - al1*v1*v0^-2 + 2*be1*v1*u0*v0^-3 - be1*u1*v0^-2";

const A1_REF_VT: &str = "c*ep1*v3*v0^-3 - 6*c*ep1*v2*v1*v0^-4 + ga1*v2*v0^-2 + 6*c*ep1*v1^3*v0^-5 \
    - 2*ga1*v1^2*v0^-3 - be1*v1*v0^-2 + 2*ep1*v1*u0*v0^-3 - ep1*u1*v0^-2";

/// The reference density as given, including the term `5cε₁/2 v'²/v⁵`.
const A1_REF_H2: &str = "-1/2*c^2*ep1*v2^2*v0^-5 + 15/8*c^2*ep1*v1^4*v0^-7 - 1/2*c*ga1*v1^3*v0^-5 \
    + 1/2*c1*v1^2*v0^-3 - 3/2*c*be1*v1^2*v0^-4 + 5/2*c*ep1*v1^2*v0^-5 - c*ep1*v1*u1*v0^-4 + ga1*v1*u0*v0^-3 \
    - 1/2*al1*v0^-1 + be1*u0*v0^-2 - 1/2*ep1*u0^2*v0^-3";

fn criterion_4() -> Outcome {
    let inst = |x: &str| subs(&s(x), &A1_VALUES);
    let st = state(
        PoissonParams::reduced(s("1"), s("0"), s("0")),
        PoissonParams::constant(s("1"), s("2"), s("3"), s("5"), s("7")),
        2,
    )?;
    ensure(st.case == CaseTag::A1, || format!("classified as {}", st.case))?;
    let f1 = pair("v0^-1", "-u0*v0^-2 + v0^-3*v2 - 3/2*v0^-4*v1^2");
    ensure(st.gradients[1] == f1, || format!("F1 = {}", st.gradients[1]))?;
    let p2 = GradientVector::pair(inst(A1_REF_UT), inst(A1_REF_VT));
    ensure(st.flows[2] == p2, || format!("P2 = {}", st.flows[2]))?;

    let sig = st.coords.signature();
    let (f0, f2) = (&st.gradients[0], &st.gradients[2]);
    let basis = [f0.clone(), f1.clone()];
    let reference = variational_derivative(&inst(A1_REF_H2), &sig);
    if let Some(ks) = span_coefficients(&reference.sub(f2), &basis) {
        return Ok(format!("F1, P2 exact; delta h2 - F2 = {ks:?} in F0, F1"));
    }
    // Discrepancy protocol: the engine's F2 satisfies the recursion and is a
    // gradient, the reference density does not satisfy the recursion, and the
    // single term missing its factor u accounts for the whole difference.
    ensure(st.h0.apply_gradient(f2) == st.h1.apply_gradient(&f1), || "F2 fails the recursion".into())?;
    ensure(st.coords.is_gradient(f2), || "F2 fails Helmholtz".into())?;
    ensure(st.h0.apply_gradient(&reference) != st.h1.apply_gradient(&f1), || {
        "reference h2 satisfies the recursion yet differs from F2".into()
    })?;
    let fixed = A1_REF_H2.replace("5/2*c*ep1*v1^2*v0^-5", "5/2*c*ep1*u0*v1^2*v0^-5");
    let corrected = variational_derivative(&inst(&fixed), &sig);
    let ks = span_coefficients(&corrected.sub(f2), &basis)
        .ok_or_else(|| "corrected h2 is still off the span of F0, F1".to_string())?;
    Ok(format!(
        "F1, P2 exact; reference h2 fails the recursion, F2 passes it and Helmholtz; with the factor u restored in \
         the 5c*ep1/2 term, delta h2 - F2 = {ks:?} in F0, F1"
    ))
}

// 5. Case A2 with ep = ga = 1, c = -1.

const A2_REF_UT: &str = "Q0^{-3/2}*(ga*(ga*ga1 + ep*c1)*v4 + ep*c1*v3*v0 + ga^2*be1*v3 - ep*(ga*ga1 + ep*c1)*u3 \
    + (ga*ga1 + 3*ep*c1)*v2*v1 - ga1*v2*v0^2 + ga*ep*al1*v2 + ep*ga1*u2*v0 - ga*ep*be1*u2 \
    - 3*ga1*v1^2*v0 + ga*be1*v1^2 + 2*ep*ga1*v1*u1 - be1*v1*v0^2 + ep*al1*v1*v0 + ep*be1*u1*v0 - ep^2*al1*u1) \
    + 3/2*Q0^{-5/2}*(3*ga*(ga*ga1 + ep*c1)*(ga*v3*v2 + v3*v1*v0 - ep*v3*u1) \
    + ga*(2*ga*ga1 + 3*ep*c1)*v2^2*v0 + ga^3*be1*v2^2 - 3*ga*(ga*ga1 + ep*c1)*(ep*v2*u2 - v2*v1^2) \
    + (ga*ga1 + 3*ep*c1)*v2*v1*v0^2 + 2*ga^2*be1*v2*v1*v0 - ep*(ga*ga1 + 3*ep*c1)*v2*u1*v0 \
    - 2*ga^2*ep*be1*v2*u1 - 3*(ga*ga1 + ep*c1)*(ep*u2*v1*v0 - ep^2*u2*u1 - v1^3*v0 + ep*v1^2*u1) \
    - ga1*v1^2*v0^3 + ga*be1*v1^2*v0^2 + 2*ep*ga1*v1*u1*v0^2 - 2*ga*ep*be1*v1*u1*v0 - ep^2*ga1*u1^2*v0 \
    + ga*ep^2*be1*u1^2) \
    + 15/4*Q0^{-7/2}*(ga*ga1 + ep*c1)*(ga^3*v2^3 + 3*ga^2*v2^2*v1*v0 - 3*ga^2*ep*v2^2*u1 \
    + 3*ga*v2*v1^2*v0^2 - 6*ga*ep*v2*v1*u1*v0 + 3*ga*ep^2*v2*u1^2 + v1^3*v0^3 - 3*ep*v1^2*u1*v0^2 \
    + 3*ep^2*v1*u1^2*v0 - ep^3*u1^3) \
    - 2*Q0^{-1/2}*(ga1*v2 + be1*v1)";

const A2_REF_VT: &str = "Q0^{-3/2}*(ga*(ga*ep1 - ep*ga1)*v3 - ep*ga1*v2*v0 + ga*ep*be1*v2 \
    - ep*(ga*ep1 - ep*ga1)*u2 + (ga*ep1 - ep*ga1)*v1^2 - ep1*v1*v0^2 + ep*be1*v1*v0 + ep*ep1*u1*v0 \
    - ep^2*be1*u1) \
    + 3/2*Q0^{-5/2}*(ga*ep1 - ep*ga1)*(ga^2*v2^2 + 2*ga*v2*v1*v0 - 2*ga*ep*v2*u1 + v1^2*v0^2 \
    - 2*ep*v1*u1*v0 + ep^2*u1^2) \
    - 2*Q0^{-1/2}*(ep1*v1)";

/// Read with a single leading `1/4 Q^{-5/2}(`.
const A2_REF_H2: &str = "1/4*Q0^{-5/2}*(ga^2*(ep*c1 - ga^2*ep^-1*ep1 + 2*ga*ga1)*v2^2 \
    + (ga^2*ep^-1*ep1 - 2*ga*ga1 - ep*c1)*v1^2*v0^2 - 2*(ga^2*ep1 - 2*ep*ga*ga1 - ep^2*c1)*v1*u1*v0 \
    + ep*(ga^2*ep1 - 2*ep*ga*ga1 - ep^2*c1)*u1^2) \
    + 1/3*Q0^{-3/2}*((ep^2*c1 - ga^2*ep1 + 2*ep*ga*ga1)*u2 - ep*c1*v2*v0 \
    + (ga^2*ep^-1*ep1 - 2*ga*ga1 - ep*c1)*v1^2 + (2*ga1 - ga*ep^-1*ep1)*v1*v0^2 + (ga*ep1 - 2*ep*ga1)*u1*v0) \
    + 1/3*Q0^{-1/2}*((10*ga1 - 8*ga*ep^-1*ep1)*v1 - 3*ep1*ep^-1*v0^2 + 6*be1*v0 - 3*ep*al1) \
    + 2/3*ep1*ep^-1*Q0^{1/2}";

/// The reference A2 flow `(u_t, v_t)` at given `ε, γ`, in QV variables.
fn a2_reference_flow(chart: &ChartMap, ep: &str, ga: &str) -> GradientVector {
    let vals = [(Param::Ep, ep), (Param::Ga, ga)];
    GradientVector::pair(subs(&s(A2_REF_UT), &vals), subs(&s(A2_REF_VT), &vals)).map(|c| chart.from_mixed(c))
}

fn criterion_5() -> Outcome {
    let st = state(PoissonParams::reduced(s("-1"), s("1"), s("1")), generic_constant_second(), 2)?;
    ensure(st.case == CaseTag::A2, || format!("classified as {}", st.case))?;
    let chart = st.coords.chart_map().ok_or("A2 runs in the QV chart")?.clone();
    let f1 = pair("1/2*Q0^{-1/2}", "-1/4*Q0^{-3/2}*Q1 - 1/2*v0*Q0^{-1/2}");
    ensure(st.gradients[1] == f1, || format!("f1, g1 = {}", st.gradients[1]))?;

    let reference = a2_reference_flow(&chart, "1", "1");
    let ours = &st.flows[2];
    let mut notes = vec!["f1, g1 exact".to_string()];
    if reference == *ours {
        notes.push("P2 exact".into());
    } else {
        // Discrepancy protocol.
        let rhs = st.h1.apply_gradient(&f1);
        ensure(*ours == rhs && st.h0.apply_gradient(&st.gradients[2]) == rhs, || {
            "engine F2 fails the recursion".into()
        })?;
        ensure(st.coords.is_gradient(&st.gradients[2]), || "F2 fails Helmholtz".into())?;
        ensure(reference != st.h1.apply_gradient(&f1), || "reference P2 is inconsistent".into())?;
        ensure(reference == times(ours, 4), || "reference P2 is not a multiple of the engine's".into())?;
        notes.push(
            "reference P2 = 4 H1 F1 exactly (fails the recursion with the reference seed; engine P2 passes)".into(),
        );
    }

    let vals = [(Param::Ep, "1"), (Param::Ga, "1")];
    let h2 = chart.from_mixed(&subs(&s(A2_REF_H2), &vals));
    let dh2 = st.coords.gradient(&h2);
    let basis = [st.gradients[0].clone(), f1];
    match span_coefficients(&dh2.sub(&st.gradients[2]), &basis) {
        Some(ks) => notes.push(format!("delta h2 - F2 = {ks:?} in F0, F1")),
        None => {
            ensure(st.h0.apply_gradient(&dh2) != st.h1.apply_gradient(&basis[1]), || {
                "reference h2 satisfies the recursion yet differs from F2".into()
            })?;
            let ks = span_coefficients(&dh2.sub(&times(&st.gradients[2], 4)), &basis)
                .ok_or("reference h2 is off the span even after the factor 4")?;
            notes.push(format!(
                "reference h2 fails the recursion; delta h2 - 4 F2 = {ks:?} in F0, F1, the same factor 4 as P2"
            ));
        }
    }
    Ok(notes.join("; "))
}

// 6. Case B, symbolic, p = 0, alpha = (q + be^2)/ep.

fn b_symbolic() -> PoissonParams {
    PoissonParams::constant(s("-ga^2*ep^-1"), s("q*ep^-1 + be^2*ep^-1"), s("be"), s("ga"), s("ep"))
}

fn criterion_6() -> Outcome {
    let p0 = b_symbolic();
    let (al, c) = (p0.al.clone(), p0.c.clone());
    let st = state(p0, PoissonParams::reduced(s("c1"), s("ga1"), s("ep1")), 3)?;
    ensure(st.case == CaseTag::B, || format!("classified as {}", st.case))?;
    let h2 = Scalar::sum([
        (&c * &s("v1^2")).scale(&bihamil::diffalg::rat(-1, 2)),
        s("-ga*v1*u0"),
        (&al * &s("v0^2")).scale(&bihamil::diffalg::rat(1, 2)),
        s("-be*u0*v0 + 1/2*ep*u0^2"),
    ]);
    let dh2 = variational_derivative(&h2, &uv_poly());
    let by_hand = GradientVector::pair(s("-ga*v1 - be*v0 + ep*u0"), &(&al * &s("v0")) + &(&c * &s("v2")))
        .add(&pair("0", "-be*u0 + ga*u1"));
    ensure(dh2 == by_hand, || format!("delta h2 = {dh2}"))?;
    let q = s("q");
    let scaled = st.gradients[2].scale(&q);
    ensure(scaled == dh2, || format!("q F2 = {scaled}"))?;
    ensure(st.flows[2] == pair("u1", "v1"), || format!("P2 = {}", st.flows[2]))?;
    let ut = Scalar::sum([
        &(&(&c * &s("ga1")) - &s("c1*ga")) * &s("v4"),
        &c * &s("v3*v0"),
        s("-be*c1*v3 + ep*c1*u3 + ga*ga1*u3 - 2*ga*v2*u0"),
        &(&al * &s("ga1")) * &s("v2"),
        s("ga*u2*v0 - be*ga1*u2 - ga*v1*u1"),
        &al * &s("v1*v0"),
        s("-2*be*v1*u0 - 2*be*v0*u1 + 3*ep*u1*u0"),
    ]);
    let vt = Scalar::sum([
        &(&(&c * &s("ep1")) + &s("ga*ga1")) * &s("v3"),
        s("-ga*v2*v0 + be*ga1*v2 + ga*ep1*u2 - ep*ga1*u2 - ga*v1^2 - 2*be*v1*v0 + ep*v1*u0 + ep*v0*u1"),
        &(&al * &s("ep1")) * &s("v1"),
        s("-be*ep1*u1"),
    ]);
    let p3 = st.flows[3].scale(&q);
    ensure(p3 == GradientVector::pair(ut, vt), || format!("q P3 = {p3}"))?;
    Ok("with the step normalized by q = al*ep - be^2: q F2 = delta h2, P2 = (u', v'), q P3 all exact".into())
}

// 7. Certification to depth 5.

fn certify(label: &str, p0: PoissonParams, p1: PoissonParams, expect: CaseTag) -> Result<String, String> {
    let (r, sv) = (pair_r(&p0, &p1), pair_s(&p0, &p1));
    let st = state(p0, p1, DEPTH)?;
    ensure(st.case == expect, || format!("{label}: classified as {}", st.case))?;
    let rep = verify_hierarchy(&st, DEPTH);
    let failures: Vec<String> = rep.failures().iter().map(|c| c.to_string()).collect();
    ensure(failures.is_empty(), || format!("{label}: {}", failures.join("; ")))?;
    let pairs = (DEPTH + 1) * (DEPTH + 2) / 2;
    for kind in [CheckKind::InvolutionH0, CheckKind::InvolutionH1] {
        let n = rep.of_kind(kind).count();
        ensure(n == pairs, || format!("{label}: {n} {} checks, expected {pairs}", kind.name()))?;
    }
    let commutators = rep.of_kind(CheckKind::Commutator).count() + rep.of_kind(CheckKind::Translation).count();
    ensure(commutators > 0, || format!("{label}: no commutator checks"))?;
    let degrees = rep.of_kind(CheckKind::Degree).count();
    ensure(degrees >= DEPTH, || format!("{label}: {degrees} degree checks"))?;
    let extra = if expect == CaseTag::A2 { format!(", r = {r}, s = {sv}") } else { String::new() };
    Ok(format!("{label}{extra}: {} certificates", rep.certificates.len()))
}

fn criterion_7() -> Outcome {
    let c = |x: i64| Scalar::from_int(x);
    let runs = [
        certify(
            "A1",
            PoissonParams::reduced(c(1), c(0), c(0)),
            PoissonParams::constant(c(1), c(2), c(3), c(5), c(7)),
            CaseTag::A1,
        )?,
        certify(
            "A2",
            PoissonParams::reduced(c(-1), c(1), c(1)),
            PoissonParams::constant(c(2), c(3), c(5), c(7), c(11)),
            CaseTag::A2,
        )?,
        certify(
            "A2",
            PoissonParams::reduced(c(-1), c(1), c(1)),
            PoissonParams::constant(c(1), c(3), c(5), c(1), c(3)),
            CaseTag::A2,
        )?,
        certify(
            "B",
            PoissonParams::constant(c(-1), c(3), c(1), c(1), c(1)),
            PoissonParams::reduced(c(2), c(3), c(5)),
            CaseTag::B,
        )?,
    ];
    Ok(format!("depth {DEPTH}: {}", runs.join("; ")))
}

// 8. Changes of variables.

fn a1_triangular_pair() -> Result<(), String> {
    let st = state(PoissonParams::reduced(s("c"), s("0"), s("0")), generic_constant_second(), 2)?;
    let spec = SubstitutionSpec::new(
        vec![Field::U, Field::V],
        vec![Field::W, Field::V],
        vec![s("u0 - be1*ep1^-1*v0 - ga1*ep1^-1*v1"), s("v0")],
        vec![s("w0 + be1*ep1^-1*v0 + ga1*ep1^-1*v1"), s("v0")],
    );
    let out = substitute_flow(&st.flows[2], &spec).map_err(|e| e.to_string())?;
    let iv = s("v0^-1");
    let wt = &(&s("c1 + ga1^2*ep1^-1") * &iv.d_total_n(3)) + &(&s("al1 - be1^2*ep1^-1") * &iv.d_total());
    let vt = &(&s("-c*ep1") * &(&iv * &iv.d_total_n(3))) - &(&s("ep1") * &s("w0*v0^-2").d_total());
    ensure(out == GradientVector::pair(wt, vt), || format!("triangular pair: got {out}"))
}

fn a2_w_pair() -> Result<(), String> {
    let (ep, ga) = ("2", "3");
    let st = state(PoissonParams::reduced(s("-9/2"), s(ga), s(ep)), generic_constant_second(), 2)?;
    let chart = st.coords.chart_map().ok_or("A2 runs in the QV chart")?.clone();
    let spec = SubstitutionSpec::new(
        vec![Field::Q, Field::V],
        vec![Field::W, Field::V],
        vec![s("Q0^{-1/2}"), s("v0")],
        vec![s("w0^-2"), s("v0")],
    );
    let vals = [(Param::Ep, ep), (Param::Ga, ga)];
    let wt = subs(
        &s("(ga^2*ep1 - 2*ep*ga*ga1 - ep^2*c1)*w0^3*w3 + (ep*ga1 - ga*ep1)*(w0^4*v2 + 2*w0^3*w1*v1) \
            - ep1*(w0^4*v0*v1 + w0^3*w1*v0^2) + ep*be1*(w0^4*v1 + 2*w0^3*w1*v0) - ep^2*al1*w0^3*w1"),
        &vals,
    );
    let vt = subs(&s("2*(ga*ep1 - ep*ga1)*w2 - 2*ep1*(w1*v0 + w0*v1) + 2*ep*be1*w1"), &vals);
    let expected = GradientVector::pair(wt, vt);
    let ours = substitute_flow(&st.native_flow(2), &spec).map_err(|e| e.to_string())?;
    ensure(times(&ours, 4) == expected, || format!("w pair: 4 x transform = {}", times(&ours, 4)))?;
    let reference = chart.flow_uv_to_qv(&a2_reference_flow(&chart, ep, ga));
    let from_reference = substitute_flow(&reference, &spec).map_err(|e| e.to_string())?;
    ensure(from_reference == expected, || format!("w pair from the reference flow: {from_reference}"))
}

/// Instance with `c = γ = 0` and `q` a perfect square.
struct KInstance {
    al: i64,
    be: i64,
    ep: i64,
    c1: i64,
    ga1: i64,
    ep1: i64,
    sqrt_q: i64,
}

fn k_system(k: &KInstance) -> Result<(bool, bool), String> {
    let r = |n: i64, d: i64| Scalar::from_ratio(n, d);
    let q = k.al * k.ep - k.be * k.be;
    assert_eq!(k.sqrt_q * k.sqrt_q, q);
    let p0 = PoissonParams::constant(r(0, 1), r(k.al, 1), r(k.be, 1), r(0, 1), r(k.ep, 1));
    let st = state(p0, PoissonParams::reduced(r(k.c1, 1), r(k.ga1, 1), r(k.ep1, 1)), 3)?;
    let flow = times(&st.flows[3], q);
    // w = (ep^2 c1 u - be ep c1 v + be^2 ep1 c1 / 3) / q, z = (ep c1 v - be ep1 c1) / sqrt q
    let (ec1, sq) = (k.ep * k.c1, k.sqrt_q);
    let w =
        Scalar::sum([s("u0").scale_int(k.ep * ec1), s("v0").scale_int(-k.be * ec1), r(k.be * k.be * k.ep1 * k.c1, 3)])
            .scale(&bihamil::diffalg::rat(1, q));
    let z = (&s("v0").scale_int(ec1) - &r(k.be * k.ep1 * k.c1, 1)).scale(&bihamil::diffalg::rat(1, sq));
    let v = (&s("z0").scale_int(sq) + &r(k.be * k.ep1 * k.c1, 1)).scale(&bihamil::diffalg::rat(1, ec1));
    let u = Scalar::sum([s("w0").scale_int(q), r(-k.be * k.be * k.ep1 * k.c1, 3), v.scale_int(k.be * ec1)])
        .scale(&bihamil::diffalg::rat(1, k.ep * ec1));
    let kk = r(k.ep1 * k.c1 * (3 * k.al * k.ep - 4 * k.be * k.be), 3 * q);
    let expected = GradientVector::pair(
        Scalar::sum([s("w3 + 3*w0*w1 + z0*z1"), s("z2").scale_int(k.ga1)]),
        Scalar::sum([s("w0*z0").d_total(), &kk * &s("z1"), s("w2").scale_int(-k.ga1)]),
    );
    let q32 = q * sq;
    let run = |kx: Scalar, kt: Scalar| -> Result<bool, String> {
        let spec = SubstitutionSpec::new(
            vec![Field::U, Field::V],
            vec![Field::W, Field::Z],
            vec![w.clone(), z.clone()],
            vec![u.clone(), v.clone()],
        )
        .with_scaling(kx, kt);
        Ok(substitute_flow(&flow, &spec).map_err(|e| e.to_string())? == expected)
    };
    let as_stated = run(r(1, ec1 * sq), r(ec1 * ec1, q32))?;
    let derived = run(r(sq, ec1), r(q32, ec1 * ec1))?;
    Ok((as_stated, derived))
}

fn criterion_8() -> Outcome {
    a1_triangular_pair()?;
    a2_w_pair()?;
    let instances = [
        KInstance { al: 4, be: 0, ep: 1, c1: 1, ga1: 3, ep1: 5, sqrt_q: 2 },
        KInstance { al: 5, be: 1, ep: 2, c1: 2, ga1: 1, ep1: 3, sqrt_q: 3 },
        KInstance { al: 5, be: 1, ep: 1, c1: 2, ga1: 0, ep1: 1, sqrt_q: 2 },
    ];
    let mut stated_ok = true;
    for k in &instances {
        let (as_stated, derived) = k_system(k)?;
        ensure(derived, || format!("K system not reproduced at q = {}", k.sqrt_q * k.sqrt_q))?;
        stated_ok &= as_stated;
    }
    Ok(format!(
        "triangular A1 pair exact; w = Q^(-1/2) pair exact from the reference A2 flow (= 4 x engine P2); \
         K, ga1 system exact on three instances (q = 4, 9, 4) with the stated w, z and \
         y = sqrt(q) x/(ep c1), tau = q^(3/2) t/(ep c1)^2; the scalings y = x/(ep c1 sqrt q), \
         tau = ep^2 c1^2 t/q^(3/2) {}",
        if stated_ok { "also match" } else { "do not reproduce it" }
    ))
}

// 9. Property suites on seeded random instances.

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut failures: Vec<String> = Vec::new();
    let sig = AlgebraSignature::of(Chart::UvLaurentV);
    for i in 0..RANDOM_INSTANCES {
        let h = operator(&mut rng, 2);
        if h.adjoint().adjoint() != h {
            failures.push(format!("{i}: adjoint involution"));
        }
        let (a, b) = (operator(&mut rng, 1), operator(&mut rng, 1));
        let (da, db) = (dieudonne_det(&a.to_frac()), dieudonne_det(&b.to_frac()));
        let dab = dieudonne_det(&a.mul(&b).to_frac());
        if dab.degree != da.degree + db.degree || dab.det1 != da.det1.mul(&db.det1) {
            failures.push(format!("{i}: det multiplicativity"));
        }
        let f = laurent(&mut rng, 4, 2);
        if !variational_derivative(&f.d_total(), &sig).is_zero() {
            failures.push(format!("{i}: delta of a total derivative"));
        }
        let g = polynomial(&mut rng, 4, 2);
        if antiderivative(&g.d_total(), false).ok() != Some(&g - &g.constant_part()) {
            failures.push(format!("{i}: antiderivative round trip"));
        }
        let fam = build_h(&family(&mut rng), Variant::Full).map_err(|e| e.to_string())?;
        let (x, y) =
            (LocalFunctional::new(polynomial(&mut rng, 3, 1)), LocalFunctional::new(polynomial(&mut rng, 3, 1)));
        let sum = &bracket(&x, &y, &fam, &uv_poly()).density + &bracket(&y, &x, &fam, &uv_poly()).density;
        if !variational_derivative(&sum, &uv_poly()).is_zero() {
            failures.push(format!("{i}: bracket skew-symmetry"));
        }
        let (h, basis) = planted_kernel(&mut rng);
        let hf = h.to_frac();
        match factor_by_kernel(&hf, &frac_vectors(&basis)) {
            Ok(fr) if fr.a.mul(&fr.b) == hf => {}
            _ => failures.push(format!("{i}: factor_by_kernel")),
        }
    }
    ensure(failures.is_empty(), || failures.join(", "))?;
    Ok(format!("{RANDOM_INSTANCES} instances x 6 properties, zero failures"))
}

fn planted_kernel(r: &mut ChaCha8Rng) -> (DiffOp<Scalar>, Vec<GradientVector>) {
    let (ga, ep) = (rational(r), nonzero_rational(r));
    let dv = pair("0", "1");
    if r.gen_bool(0.5) {
        let mut p = PoissonParams::reduced(nonzero_rational(r), ga, ep);
        if p.p().is_zero() {
            p.c = &p.c + &Scalar::one();
        }
        (build_h(&p, Variant::Full).expect("family"), vec![dv])
    } else {
        let c = &(&ga * &ga).scale_int(-1) * &ep.inverse().expect("nonzero");
        let mut p = PoissonParams::constant(c, nonzero_rational(r), rational(r), ga, ep);
        if p.q().is_zero() {
            p.al = &p.al + &Scalar::one();
        }
        (build_h(&p, Variant::Full).expect("family"), vec![dv, pair("1", "0")])
    }
}

// 10. Constant H0 with p != 0.

fn criterion_10() -> Outcome {
    let p0 = PoissonParams::constant(s("1"), s("1"), s("0"), s("0"), s("1"));
    match HierarchyState::new(p0, PoissonParams::reduced(s("1"), s("1"), s("1"))) {
        Err(LenardError::Blocked(CaseTag::BBlocked, why)) => {
            ensure(why.contains("integral of v"), || format!("explanation: {why}"))?
        }
        other => return Err(format!("expected B-blocked, got {:?}", other.map(|st| st.case))),
    }
    let out = Command::new(env!("CARGO_BIN_EXE_bihamil"))
        .args(["hierarchy", "c=1", "al=1", "ep=1", "c1=1", "ga1=1", "ep1=1"])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(3), || format!("exit status {:?}", out.status.code()))?;
    ensure(stderr.contains("B-blocked") && stderr.contains("integral of v"), || format!("stderr: {stderr}"))?;
    Ok("engine reports B-blocked (confined to the span of the integral of v); CLI exits with 3".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Dieudonné determinant of the reduced family", criterion_1),
        ("kernel bases annihilated and variational", criterion_2),
        ("Jacobi identity and compatible pencil", criterion_3),
        ("case A1 first gradient, flow and density", criterion_4),
        ("case A2 first gradient, flow and density", criterion_5),
        ("case B density, translation flow and first equation", criterion_6),
        ("depth-5 certification in every case", criterion_7),
        ("changes of variables", criterion_8),
        ("property suites", criterion_9),
        ("blocked constant case", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS ({secs:.1}s) {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({secs:.1}s) {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
