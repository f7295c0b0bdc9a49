//! `key=value` parameter assignments for the two structures.

use std::collections::BTreeMap;

use bihamil::diffalg::{parse_scalar, Param};
use bihamil::poisson::PoissonParams;
use bihamil::Scalar;

/// Canonical keys, in display order: `H₀` first, then `H₁`.
pub const KEYS: [(&str, Param); 12] = [
    ("a", Param::A),
    ("c", Param::C),
    ("al", Param::Al),
    ("be", Param::Be),
    ("ga", Param::Ga),
    ("ep", Param::Ep),
    ("a_1", Param::A1),
    ("c1", Param::C1),
    ("al1", Param::Al1),
    ("be1", Param::Be1),
    ("ga1", Param::Ga1),
    ("ep1", Param::Ep1),
];

/// Short spellings for the subscripted Greek parameters.
const ALIASES: [(&str, &str); 4] = [("a1", "al1"), ("b1", "be1"), ("g1", "ga1"), ("e1", "ep1")];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("expected key=value, got `{0}`")]
    NotAssignment(String),
    #[error("unknown parameter `{0}`; known: a c al be ga ep a_1 c1 al1 be1 ga1 ep1 (aliases a1 b1 g1 e1)")]
    UnknownKey(String),
    #[error("parameter `{0}` given twice")]
    Duplicate(String),
    #[error("malformed value `{1}` for `{0}`: expected a rational, `sym`, or an expression in the parameters")]
    BadValue(String, String),
}

fn parse_decimal(s: &str) -> Option<Scalar> {
    let (neg, body) = s.strip_prefix('-').map_or((false, s), |b| (true, b));
    let (int, frac) = body.split_once('.')?;
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int}{frac}");
    let src = format!("{}{digits}/1{}", if neg { "-" } else { "" }, "0".repeat(frac.len()));
    parse_scalar(&src).ok()
}

fn parse_value(key: &str, param: Param, raw: &str) -> Result<Scalar, ParamError> {
    if raw == "sym" {
        return Ok(Scalar::param(param));
    }
    let bad = || ParamError::BadValue(key.to_string(), raw.to_string());
    if raw.contains('.') {
        return parse_decimal(raw).ok_or_else(bad);
    }
    let v = parse_scalar(raw).map_err(|_| bad())?;
    if v.vars().iter().any(|x| x.is_differential()) {
        return Err(bad());
    }
    Ok(v)
}

/// Assignments keyed by canonical name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignments(pub BTreeMap<&'static str, Scalar>);

impl Assignments {
    pub fn parse(items: &[String]) -> Result<Self, ParamError> {
        let mut out = BTreeMap::new();
        for item in items {
            let (k, v) = item.split_once('=').ok_or_else(|| ParamError::NotAssignment(item.clone()))?;
            let k = ALIASES.iter().find(|(a, _)| *a == k).map_or(k, |(_, c)| c);
            let (key, param) =
                KEYS.iter().find(|(name, _)| *name == k).ok_or_else(|| ParamError::UnknownKey(k.to_string()))?;
            if out.insert(*key, parse_value(key, *param, v)?).is_some() {
                return Err(ParamError::Duplicate(key.to_string()));
            }
        }
        Ok(Assignments(out))
    }

    fn get(&self, key: &str, fallback: Scalar) -> Scalar {
        self.0.get(key).cloned().unwrap_or(fallback)
    }

    /// Unset entries are 0, or their symbol when `symbolic`. Unless given,
    /// `a` is 0 when `al` or `be` is nonzero and 1 otherwise, and `a_1 = 1 - a`.
    pub fn pair(&self, symbolic: bool) -> (PoissonParams, PoissonParams) {
        let dflt = |key: &str| {
            let p = KEYS.iter().find(|(n, _)| *n == key).expect("known key").1;
            if symbolic {
                Scalar::param(p)
            } else {
                Scalar::zero()
            }
        };
        let v = |key: &str| self.get(key, dflt(key));
        let constant_h0 = !v("al").is_zero() || !v("be").is_zero();
        let a = self.get("a", if constant_h0 { Scalar::zero() } else { Scalar::one() });
        let a1 = self.get("a_1", &Scalar::one() - &a);
        let h0 = PoissonParams::new(a, v("c"), v("al"), v("be"), v("ga"), v("ep"));
        let h1 = PoissonParams::new(a1, v("c1"), v("al1"), v("be1"), v("ga1"), v("ep1"));
        (h0, h1)
    }
}
