//! Changes of dependent variables, with rescalings of `x` and `t`, applied
//! to evolution equations.

use super::case::LenardError;
use crate::diffalg::{evolutionary_apply, Field, GradientVector, Scalar, Var};

/// New variables `targets = forward(sources)` with inverse
/// `sources = inverse(targets)`, new space variable `y` with `dy/dx = k_x`
/// and new time `τ` with `dτ/dt = k_t`.
#[derive(Clone, Debug)]
pub struct SubstitutionSpec {
    pub source_fields: Vec<Field>,
    pub target_fields: Vec<Field>,
    /// Each target in the source jets.
    pub forward: Vec<Scalar>,
    /// Each source in the target jets.
    pub inverse: Vec<Scalar>,
    pub k_x: Scalar,
    pub k_t: Scalar,
}

fn jet_image(fields: &[Field], images: &[Scalar], v: Var) -> Option<Scalar> {
    match v {
        Var::Jet(f, n) => fields.iter().position(|&g| g == f).map(|i| images[i].d_total_n(n as usize)),
        _ => None,
    }
}

fn err(e: impl std::fmt::Display) -> LenardError {
    LenardError::Substitution(e.to_string())
}

impl SubstitutionSpec {
    /// No rescaling of `x` or `t`.
    pub fn new(
        source_fields: Vec<Field>,
        target_fields: Vec<Field>,
        forward: Vec<Scalar>,
        inverse: Vec<Scalar>,
    ) -> Self {
        SubstitutionSpec { source_fields, target_fields, forward, inverse, k_x: Scalar::one(), k_t: Scalar::one() }
    }

    pub fn with_scaling(mut self, k_x: Scalar, k_t: Scalar) -> Self {
        self.k_x = k_x;
        self.k_t = k_t;
        self
    }

    pub fn identity(fields: Vec<Field>) -> Self {
        let jets: Vec<Scalar> = fields.iter().map(|&f| Scalar::jet(f, 0)).collect();
        SubstitutionSpec::new(fields.clone(), fields, jets.clone(), jets)
    }

    /// Rewrites a source expression in the target jets (`x`-derivatives).
    pub fn to_target(&self, s: &Scalar) -> Result<Scalar, LenardError> {
        s.substitute(&|v| jet_image(&self.source_fields, &self.inverse, v)).map_err(err)
    }

    /// Rewrites a target expression in the source jets.
    pub fn to_source(&self, s: &Scalar) -> Result<Scalar, LenardError> {
        s.substitute(&|v| jet_image(&self.target_fields, &self.forward, v)).map_err(err)
    }

    /// Both compositions of the maps are the identity on generators.
    pub fn check_invertible(&self) -> Result<(), LenardError> {
        let n = self.source_fields.len();
        if self.target_fields.len() != n || self.forward.len() != n || self.inverse.len() != n {
            return Err(LenardError::Substitution("field and map counts differ".into()));
        }
        if self.k_x.is_zero() || self.k_t.is_zero() || self.k_x.inverse().is_none() || self.k_t.inverse().is_none() {
            return Err(LenardError::Substitution("k_x and k_t must be nonzero single terms".into()));
        }
        for (i, f) in self.forward.iter().enumerate() {
            if self.to_target(f)? != Scalar::jet(self.target_fields[i], 0) {
                return Err(LenardError::Substitution(format!("inverse does not undo target {i}")));
            }
        }
        for (i, g) in self.inverse.iter().enumerate() {
            if self.to_source(g)? != Scalar::jet(self.source_fields[i], 0) {
                return Err(LenardError::Substitution(format!("forward does not undo source {i}")));
            }
        }
        Ok(())
    }

    /// Converts `x`-derivatives of target jets to `y`-derivatives:
    /// `∂_x^n w = k_x^n ∂_y^n w`.
    fn rescale_x(&self, s: &Scalar) -> Result<Scalar, LenardError> {
        if self.k_x.is_one() {
            return Ok(s.clone());
        }
        let k = self.k_x.clone();
        s.substitute(&|v| match v {
            Var::Jet(f, n) if self.target_fields.contains(&f) && n > 0 => Some(&k.pow(n as u32) * &Scalar::jet(f, n)),
            _ => None,
        })
        .map_err(err)
    }
}

/// The evolution of the targets under `∂_t u = P`, as `∂_τ w` in `y`-derivatives.
pub fn substitute_flow(p: &GradientVector, spec: &SubstitutionSpec) -> Result<GradientVector, LenardError> {
    spec.check_invertible()?;
    let kt_inv = spec.k_t.inverse().expect("checked");
    let comps = spec
        .forward
        .iter()
        .map(|f| {
            let wt = evolutionary_apply(p, &spec.source_fields, f);
            Ok(&spec.rescale_x(&spec.to_target(&wt)?)? * &kt_inv)
        })
        .collect::<Result<Vec<_>, LenardError>>()?;
    Ok(GradientVector::new(comps))
}
