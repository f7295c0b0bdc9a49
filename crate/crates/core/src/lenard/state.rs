//! Seeds and step solvers of the recursion `H₀F_n = H₁F_{n-1}`.

use super::case::{classify_case, CaseTag, LenardError};
use crate::diffalg::{
    antiderivative, AlgebraSignature, Chart, ChartMap, Coordinates, Field, GradientVector, IntegrationError,
    LocalFunctional, Scalar,
};
use crate::oreops::DiffOp;
use crate::poisson::{build_h, PoissonParams, Variant};

/// The hierarchy built so far. Gradients `F_n = (f_n, g_n)` keep their
/// `(δ/δu, δ/δv)` meaning; their entries are written in `coords`, as are
/// the operators and flows.
#[derive(Clone, Debug)]
pub struct HierarchyState {
    pub case: CaseTag,
    pub params0: PoissonParams,
    pub params1: PoissonParams,
    pub coords: Coordinates,
    pub h0: DiffOp<Scalar>,
    pub h1: DiffOp<Scalar>,
    pub gradients: Vec<GradientVector>,
    pub densities: Vec<Option<LocalFunctional>>,
    /// `P_n = H₀F_n`.
    pub flows: Vec<GradientVector>,
}

fn jet(f: Field, n: u16) -> Scalar {
    Scalar::jet(f, n)
}

/// The starting pair `(∫h₀, ∫h₁)`, written in the case's coordinates.
pub fn seed_pair(case: CaseTag, params0: &PoissonParams) -> Result<(LocalFunctional, LocalFunctional), LenardError> {
    let h1 = match case {
        CaseTag::A1 => {
            let half_c = params0.c.scale(&crate::diffalg::rat(1, 2));
            &(&jet(Field::U, 0) * &jet(Field::V, 0).pow_ratio(-1, 1).expect("monomial"))
                - &(&(&half_c * &jet(Field::V, 1).pow(2)) * &jet(Field::V, 0).pow_ratio(-3, 1).expect("monomial"))
        }
        CaseTag::A2 => jet(Field::Q, 0).pow_ratio(1, 2).expect("monomial"),
        CaseTag::B => jet(Field::U, 0),
        CaseTag::BBlocked => return Err(LenardError::Blocked(case, case.explanation().into())),
    };
    Ok((LocalFunctional::new(jet(Field::V, 0)), LocalFunctional::new(h1)))
}

fn coordinates_for(case: CaseTag, params0: &PoissonParams) -> Result<Coordinates, LenardError> {
    Ok(match case {
        CaseTag::A1 => Coordinates::Plain(AlgebraSignature::of(Chart::UvLaurentV)),
        CaseTag::A2 => Coordinates::HalfPower(
            ChartMap::new(params0.ep.clone(), params0.ga.clone())
                .map_err(|e| LenardError::Unsupported(e.to_string()))?,
        ),
        CaseTag::B | CaseTag::BBlocked => Coordinates::Plain(AlgebraSignature::of(Chart::UvPoly)),
    })
}

fn integrate(f: &Scalar, step: usize) -> Result<Scalar, LenardError> {
    antiderivative(f, false).map_err(|e| LenardError::Integration {
        step,
        reason: match e {
            IntegrationError::NotExact(s) => format!("not a total derivative ({s})"),
            IntegrationError::NeedsLog(v) => format!("needs log({v})"),
        },
    })
}

fn invert(x: &Scalar, what: &str) -> Result<Scalar, LenardError> {
    x.inverse()
        .filter(|_| !x.is_zero())
        .ok_or_else(|| LenardError::Unsupported(format!("{what} = {x} must be a nonzero single term")))
}

impl HierarchyState {
    /// Classifies the pair and installs `F₀, F₁` with their densities.
    pub fn new(params0: PoissonParams, params1: PoissonParams) -> Result<Self, LenardError> {
        let case = classify_case(&params0, &params1)?;
        HierarchyState::with_case(case, params0, params1)
    }

    /// As [`HierarchyState::new`], but insists on a given case.
    pub fn with_case(case: CaseTag, params0: PoissonParams, params1: PoissonParams) -> Result<Self, LenardError> {
        let found = classify_case(&params0, &params1)?;
        if found != case {
            return Err(LenardError::Unsupported(format!("parameters give case {found}, not {case}")));
        }
        let (h0_seed, h1_seed) = seed_pair(case, &params0)?;
        let coords = coordinates_for(case, &params0)?;
        let to_err = |e: crate::poisson::PoissonError| LenardError::Internal(e.to_string());
        let h0 = coords.operator(&build_h(&params0, Variant::Full).map_err(to_err)?);
        let h1 = coords.operator(&build_h(&params1, Variant::Full).map_err(to_err)?);
        let f0 = coords.gradient(&h0_seed.density);
        let f1 = coords.gradient(&h1_seed.density);
        for (name, f) in [("h0", &f0), ("h1", &f1)] {
            if !h0.apply_gradient(f).is_zero() {
                return Err(LenardError::Internal(format!("seed {name} is not a Casimir of H0")));
            }
        }
        if !h1.apply_gradient(&f0).is_zero() {
            return Err(LenardError::Internal("seed h0 is not a Casimir of H1".into()));
        }
        let flows = vec![h0.apply_gradient(&f0), h0.apply_gradient(&f1)];
        Ok(HierarchyState {
            case,
            params0,
            params1,
            coords,
            h0,
            h1,
            gradients: vec![f0, f1],
            densities: vec![Some(h0_seed), Some(h1_seed)],
            flows,
        })
    }

    /// Index of the last gradient.
    pub fn depth(&self) -> usize {
        self.gradients.len() - 1
    }

    /// Adds `F_{n+1}` for the current depth `n`.
    pub fn step(&mut self) -> Result<(), LenardError> {
        let f = match self.case {
            CaseTag::A1 => self.step_a1()?,
            CaseTag::A2 => self.step_a2()?,
            CaseTag::B => self.step_b()?,
            CaseTag::BBlocked => return Err(LenardError::Blocked(self.case, self.case.explanation().into())),
        };
        let flow = self.h0.apply_gradient(&f);
        if flow != self.h1.apply_gradient(self.gradients.last().expect("seeded")) {
            return Err(LenardError::Internal(format!("recursion fails at step {}", self.depth() + 1)));
        }
        let density = self.coords.density(&f).map(LocalFunctional::new);
        self.gradients.push(f);
        self.densities.push(density);
        self.flows.push(flow);
        Ok(())
    }

    /// Steps until `F_n` exists.
    pub fn extend_to(&mut self, n: usize) -> Result<(), LenardError> {
        while self.depth() < n {
            self.step()?;
        }
        Ok(())
    }

    fn rhs(&self) -> GradientVector {
        self.h1.apply_gradient(self.gradients.last().expect("seeded"))
    }

    /// `∂(vf) = R₁`, then `(u' + 2u∂ + c∂³)f + v g' = R₀`.
    fn step_a1(&self) -> Result<GradientVector, LenardError> {
        let n = self.depth() + 1;
        let r = self.rhs();
        let v_inv = jet(Field::V, 0).inverse().expect("monomial");
        let f = &integrate(r.g(), n)? * &v_inv;
        let k = &(&(&jet(Field::U, 1) * &f) + &(&jet(Field::U, 0) * &f.d_total()).scale_int(2))
            + &(&self.params0.c * &f.d_total_n(3));
        let g = integrate(&(&(r.f() - &k) * &v_inv), n)?;
        Ok(GradientVector::pair(f, g))
    }

    /// In the `Q, v` chart, with `M = [[ε, -v-γ∂], [0, 1]]` and `MH₀` lower
    /// triangular: `(Q' + 2Q∂)f = (MH₁F)₀` is solved as
    /// `f = ½Q^{-1/2} ∫ Q^{-1/2}(MH₁F)₀`, and `g` from the integrated
    /// second row with constant 0.
    fn step_a2(&self) -> Result<GradientVector, LenardError> {
        let n = self.depth() + 1;
        let chart = self.coords.chart_map().expect("A2 uses the QV chart");
        let prev = self.gradients.last().expect("seeded");
        let r = chart.flow_uv_to_qv(&self.rhs());
        let q_m = jet(Field::Q, 0).pow_ratio(-1, 2).expect("monomial");
        let f = (&q_m * &integrate(&(&q_m * r.f()), n)?).scale(&crate::diffalg::rat(1, 2));
        let p0 = &self.params0;
        let p1 = &self.params1;
        let ep_inv = invert(&p0.ep, "ep")?;
        let v = jet(Field::V, 0);
        let (fp, gp) = (prev.f(), prev.g());
        let g = Scalar::sum([&p0.ga * &f.d_total(), -(&v * &f), -(&p1.ga * &fp.d_total()), &p1.be * fp, &p1.ep * gp]);
        Ok(GradientVector::pair(f, &g * &ep_inv))
    }

    /// `H₀ = ∂K` with `K = [[α + c∂², β + γ∂], [β - γ∂, ε]]` and
    /// `det K = q + p∂² = q`; so `F = q⁻¹ adj(K) ∫H₁F_{n-1}`.
    fn step_b(&self) -> Result<GradientVector, LenardError> {
        let n = self.depth() + 1;
        let r = self.rhs();
        let s0 = integrate(r.f(), n)?;
        let s1 = integrate(r.g(), n)?;
        let PoissonParams { c, al, be, ga, ep, .. } = &self.params0;
        let q_inv = invert(&self.params0.q(), "q")?;
        let f = Scalar::sum([ep * &s0, -(be * &s1), -(ga * &s1.d_total())]);
        let g = Scalar::sum([-(be * &s0), ga * &s0.d_total(), al * &s1, c * &s1.d_total_n(2)]);
        Ok(GradientVector::pair(&f * &q_inv, &g * &q_inv))
    }

    /// A flow written for display: UV, or the mixed `Q^k`/UV form.
    pub fn exported_flow(&self, n: usize) -> GradientVector {
        self.flows[n].map(|c| self.coords.export(c))
    }

    pub fn exported_gradient(&self, n: usize) -> GradientVector {
        self.gradients[n].map(|c| self.coords.export(c))
    }

    pub fn exported_density(&self, n: usize) -> Option<Scalar> {
        self.densities[n].as_ref().map(|d| self.coords.export(&d.density))
    }

    /// A flow as `(∂_t` of the native generators`)`: `(Q_t, v_t)` in A2.
    pub fn native_flow(&self, n: usize) -> GradientVector {
        match self.coords.chart_map() {
            Some(c) => c.flow_uv_to_qv(&self.flows[n]),
            None => self.flows[n].clone(),
        }
    }
}
