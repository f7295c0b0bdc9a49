//! The change of coordinates `Q = εu - v²/2 - γv'` between the UV and QV charts.

use super::calculus::{frechet, reconstruct_density, variational_derivative_in, GradientVector};
use super::scalar::{Scalar, SubstitutionError};
use super::signature::{AlgebraSignature, Chart};
use super::symbol::{Field, Var};
use crate::oreops::DiffOp;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("the QV chart needs an invertible single-term epsilon, got {0}")]
    DegenerateEpsilon(String),
    #[error(transparent)]
    Substitution(#[from] SubstitutionError),
}

/// Substitution data for `u = (Q + v²/2 + γv')/ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMap {
    ep: Scalar,
    ep_inv: Scalar,
    ga: Scalar,
    /// `u` written in QV variables.
    u_image: Scalar,
    /// `Q` written in UV variables.
    q_image: Scalar,
}

fn jet(f: Field, n: u16) -> Scalar {
    Scalar::jet(f, n)
}

impl ChartMap {
    pub fn new(ep: Scalar, ga: Scalar) -> Result<ChartMap, ChartError> {
        let ep_inv = ep
            .inverse()
            .filter(|_| !ep.is_zero() && ep.is_constant())
            .ok_or_else(|| ChartError::DegenerateEpsilon(ep.to_string()))?;
        let v = jet(Field::V, 0);
        let half_v2 = (&v * &v).scale(&super::scalar::rat(1, 2));
        let u_image = &(&(&jet(Field::Q, 0) + &half_v2) + &(&ga * &jet(Field::V, 1))) * &ep_inv;
        let q_image = &(&(&ep * &jet(Field::U, 0)) - &half_v2) - &(&ga * &jet(Field::V, 1));
        Ok(ChartMap { ep, ep_inv, ga, u_image, q_image })
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.ep
    }

    pub fn gamma(&self) -> &Scalar {
        &self.ga
    }

    /// `Q` as an element of the UV chart.
    pub fn q_in_uv(&self) -> &Scalar {
        &self.q_image
    }

    /// `u` as an element of the QV chart.
    pub fn u_in_qv(&self) -> &Scalar {
        &self.u_image
    }

    fn substitute_family(s: &Scalar, from: Field, image: &Scalar) -> Result<Scalar, SubstitutionError> {
        let top = match s.max_order(from) {
            Some(t) => t,
            None => return Ok(s.clone()),
        };
        let mut images = Vec::with_capacity(top as usize + 1);
        let mut cur = image.clone();
        for _ in 0..=top {
            images.push(cur.clone());
            cur = cur.d_total();
        }
        s.substitute(&|v| match v {
            Var::Jet(f, n) if f == from => Some(images[n as usize].clone()),
            _ => None,
        })
    }

    /// Rewrites a UV scalar in QV variables.
    pub fn to_qv(&self, s: &Scalar) -> Scalar {
        ChartMap::substitute_family(s, Field::U, &self.u_image).expect("u enters polynomially")
    }

    /// Rewrites a QV scalar in UV variables; fails on negative or half powers of `Q`.
    pub fn to_uv(&self, s: &Scalar) -> Result<Scalar, ChartError> {
        Ok(ChartMap::substitute_family(s, Field::Q, &self.q_image)?)
    }

    /// Applies `M* = [[ε, 0], [-v + γ∂, 1]]`: a QV gradient becomes the UV
    /// gradient of the same density, still written in QV variables.
    pub fn gradient_qv_to_uv(&self, g: &GradientVector) -> GradientVector {
        let (g0, g1) = (g.f(), g.g());
        let f = &self.ep * g0;
        let g = &(&(&self.ga * &g0.d_total()) - &(&jet(Field::V, 0) * g0)) + g1;
        GradientVector::pair(f, g)
    }

    /// Inverse of [`ChartMap::gradient_qv_to_uv`].
    pub fn gradient_uv_to_qv(&self, f: &GradientVector) -> GradientVector {
        let g0 = f.f() * &self.ep_inv;
        let g1 = &(f.g() + &(&jet(Field::V, 0) * &g0)) - &(&self.ga * &g0.d_total());
        GradientVector::pair(g0, g1)
    }

    /// Pushes a flow `(u_t, v_t)` forward to `(Q_t, v_t)` with
    /// `M = [[ε, -v - γ∂], [0, 1]]`.
    pub fn flow_uv_to_qv(&self, p: &GradientVector) -> GradientVector {
        let (pu, pv) = (p.f(), p.g());
        let q = &(&(&self.ep * pu) - &(&jet(Field::V, 0) * pv)) - &(&self.ga * &pv.d_total());
        GradientVector::pair(q, pv.clone())
    }

    pub fn flow_qv_to_uv(&self, p: &GradientVector) -> GradientVector {
        let (pq, pv) = (p.f(), p.g());
        let u = &(&(pq + &(&jet(Field::V, 0) * pv)) + &(&self.ga * &pv.d_total())) * &self.ep_inv;
        GradientVector::pair(u, pv.clone())
    }

    /// Converts UV-variable coefficients of an operator to QV variables.
    pub fn op_to_qv(&self, h: &DiffOp<Scalar>) -> DiffOp<Scalar> {
        h.map_coefficients(|c| self.to_qv(c))
    }

    /// The matrix `M` with coefficients in QV variables.
    pub fn m_operator(&self) -> DiffOp<Scalar> {
        use crate::oreops::OrePoly;
        DiffOp::from_rows(vec![
            vec![OrePoly::constant(self.ep.clone()), OrePoly::new(vec![-jet(Field::V, 0), -self.ga.clone()])],
            vec![OrePoly::zero(), OrePoly::constant(Scalar::one())],
        ])
    }

    /// `M H M*`: the Poisson structure `H` written for the QV generators.
    pub fn poisson_to_qv(&self, h: &DiffOp<Scalar>) -> DiffOp<Scalar> {
        let m = self.m_operator();
        m.mul(&self.op_to_qv(h)).mul(&m.adjoint())
    }
}

impl ChartMap {
    /// Rewrites `Q', Q'', ...` in UV variables but keeps the powers of `Q`
    /// itself, giving the mixed form in which hierarchies are usually written.
    pub fn to_mixed(&self, s: &Scalar) -> Scalar {
        let Some(top) = s.max_order(Field::Q) else {
            return s.clone();
        };
        let mut images = vec![Scalar::zero()];
        let mut cur = self.q_image.d_total();
        for _ in 1..=top {
            images.push(cur.clone());
            cur = cur.d_total();
        }
        s.substitute(&|v| match v {
            Var::Jet(Field::Q, n) if n > 0 => Some(images[n as usize].clone()),
            _ => None,
        })
        .expect("integer powers of derivatives")
    }

    /// Inverse of [`ChartMap::to_mixed`] (and of [`ChartMap::to_uv`]).
    pub fn from_mixed(&self, s: &Scalar) -> Scalar {
        self.to_qv(s)
    }
}

/// The coordinates a computation runs in. Gradients and flows always keep
/// their `(u, v)` meaning; only the variables their entries are written in
/// change.
#[derive(Clone, Debug)]
pub enum Coordinates {
    Plain(AlgebraSignature),
    /// `Q, v` variables via the chart map.
    HalfPower(ChartMap),
}

impl Coordinates {
    pub fn signature(&self) -> AlgebraSignature {
        match self {
            Coordinates::Plain(sig) => sig.clone(),
            Coordinates::HalfPower(_) => AlgebraSignature::of(Chart::QvHalfPower),
        }
    }

    /// The generator families entries are written in.
    pub fn fields(&self) -> Vec<Field> {
        self.signature().fields()
    }

    pub fn chart_map(&self) -> Option<&ChartMap> {
        match self {
            Coordinates::Plain(_) => None,
            Coordinates::HalfPower(c) => Some(c),
        }
    }

    /// Rewrites a UV scalar in these coordinates.
    pub fn import(&self, s: &Scalar) -> Scalar {
        match self {
            Coordinates::Plain(_) => s.clone(),
            Coordinates::HalfPower(c) => c.to_qv(s),
        }
    }

    /// Writes a scalar for display: UV, or the mixed `Q^k`/UV form.
    pub fn export(&self, s: &Scalar) -> Scalar {
        match self {
            Coordinates::Plain(_) => s.clone(),
            Coordinates::HalfPower(c) => c.to_mixed(s),
        }
    }

    /// Operator coefficients rewritten in these coordinates.
    pub fn operator(&self, h: &DiffOp<Scalar>) -> DiffOp<Scalar> {
        h.map_coefficients(|c| self.import(c))
    }

    /// The `(δ/δu, δ/δv)` gradient of a density written in these coordinates.
    pub fn gradient(&self, density: &Scalar) -> GradientVector {
        let native = variational_derivative_in(density, &self.fields());
        match self {
            Coordinates::Plain(_) => native,
            Coordinates::HalfPower(c) => c.gradient_qv_to_uv(&native),
        }
    }

    /// The gradient in the native generators of these coordinates.
    pub fn native_gradient(&self, f: &GradientVector) -> GradientVector {
        match self {
            Coordinates::Plain(_) => f.clone(),
            Coordinates::HalfPower(c) => c.gradient_uv_to_qv(f),
        }
    }

    /// Helmholtz test: the Fréchet operator of the native gradient is
    /// self-adjoint.
    pub fn is_gradient(&self, f: &GradientVector) -> bool {
        frechet(&self.native_gradient(f).components, &self.fields()).is_self_adjoint()
    }

    /// A density with gradient `f`, when the grading procedure finds one.
    pub fn density(&self, f: &GradientVector) -> Option<Scalar> {
        reconstruct_density(&self.native_gradient(f), &self.fields())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{parse_scalar, variational_derivative_in};

    fn s(src: &str) -> Scalar {
        parse_scalar(src).unwrap()
    }

    fn chart() -> ChartMap {
        ChartMap::new(s("ep"), s("ga")).unwrap()
    }

    #[test]
    fn q_in_uv() {
        assert_eq!(chart().q_in_uv(), &s("ep*u0 - 1/2*v0^2 - ga*v1"));
    }

    #[test]
    fn unit_gradient() {
        let g = chart().gradient_qv_to_uv(&GradientVector::pair(Scalar::one(), Scalar::zero()));
        assert_eq!(g, GradientVector::pair(s("ep"), s("-v0")));
    }

    #[test]
    fn variational_derivative_commutes_with_chart() {
        let c = ChartMap::new(s("3"), s("2")).unwrap();
        let h = s("u0^2*v1 + u2*v0^3");
        let uv = variational_derivative_in(&h, &[Field::U, Field::V]);
        let qv = variational_derivative_in(&c.to_qv(&h), &[Field::Q, Field::V]);
        let uv_in_qv = uv.map(|x| c.to_qv(x));
        assert_eq!(c.gradient_qv_to_uv(&qv), uv_in_qv);
        assert_eq!(c.gradient_uv_to_qv(&uv_in_qv), qv);
    }

    #[test]
    fn round_trip_and_homomorphism() {
        let c = chart();
        let f = s("u0^2*v1 + ga*u3 - v0");
        assert_eq!(c.to_uv(&c.to_qv(&f)).unwrap(), f);
        assert_eq!(c.to_qv(&f.d_total()), c.to_qv(&f).d_total());
        let g = s("u1*v0");
        assert_eq!(c.to_qv(&(&f * &g)), &c.to_qv(&f) * &c.to_qv(&g));
    }

    #[test]
    fn mixed_form() {
        let c = chart();
        let q = s("Q0^{-1/2}*Q1 + Q0*v0");
        let m = c.to_mixed(&q);
        assert_eq!(m, s("Q0^{-1/2}*(ep*u1 - v0*v1 - ga*v2) + Q0*v0"));
        assert_eq!(c.from_mixed(&m), q);
    }

    #[test]
    fn half_power_coordinates() {
        let co = Coordinates::HalfPower(chart());
        let g = co.gradient(&s("Q0^{1/2}"));
        assert_eq!(g.f(), &s("1/2*ep*Q0^{-1/2}"));
        assert!(co.is_gradient(&g));
        let h = co.density(&g).unwrap();
        assert_eq!(co.gradient(&h), g);
    }

    #[test]
    fn degenerate_epsilon_rejected() {
        assert!(ChartMap::new(Scalar::zero(), s("1")).is_err());
    }
}
