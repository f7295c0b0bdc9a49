//! Exact sparse elements of an algebra of differential functions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::symbol::{Exp, Field, Param, Var};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sum of monomials with nonzero rational coefficients, kept sorted by
/// monomial. Two equal elements have identical term lists.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    terms: Vec<(Monomial, Rational)>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Scalar {
        Scalar::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Scalar {
        Scalar::term(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::constant(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar::constant(rat(n, d))
    }

    pub fn term(m: Monomial, c: Rational) -> Scalar {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Scalar {
        Scalar::term(Monomial::var(v, Exp::ONE), Rational::one())
    }

    pub fn var_pow(v: Var, e: Exp) -> Scalar {
        Scalar::term(Monomial::var(v, e), Rational::one())
    }

    pub fn jet(f: Field, n: u16) -> Scalar {
        Scalar::var(Var::Jet(f, n))
    }

    pub fn param(p: Param) -> Scalar {
        Scalar::var(Var::Param(p))
    }

    pub fn x() -> Scalar {
        Scalar::var(Var::X)
    }

    /// Collects arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Scalar {
        let mut acc: FxHashMap<Monomial, Rational> = FxHashMap::default();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Scalar::from_map(acc)
    }

    fn from_map(acc: FxHashMap<Monomial, Rational>) -> Scalar {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Scalar { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Rational)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The rational value, if this is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &Rational)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// No jets and no `x`: an element of the constant field (possibly symbolic).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| !m.has_differential())
    }

    /// Sum of the terms free of jets and `x`.
    pub fn constant_part(&self) -> Scalar {
        Scalar { terms: self.terms.iter().filter(|(m, _)| !m.has_differential()).cloned().collect() }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    fn merge(&self, other: &Scalar, negate: bool) -> Scalar {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Scalar { terms: out }
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        self.scale(&int(k))
    }

    /// Multiplies by a single term; keeps the sorted order cheap when possible.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar::from_terms(self.terms.iter().map(|(k, d)| (k.mul(m), d * c)))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Scalar {
        self.mul_term(m, &Rational::one())
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, c);
        }
        let mut acc: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(small.len() * big.len(), Default::default());
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(e) => *e += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Scalar::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Inverse in the Laurent sense; only single terms are invertible.
    pub fn inverse(&self) -> Option<Scalar> {
        let (m, c) = self.as_term()?;
        Some(Scalar::term(m.inverse(), c.recip()))
    }

    /// Rational power of a single term, e.g. `Q0^{1/2}`.
    pub fn pow_ratio(&self, num: i64, den: i64) -> Option<Scalar> {
        if den == 1 && num >= 0 {
            return Some(self.pow(num as u32));
        }
        let (m, c) = self.as_term()?;
        let mm = m.pow_ratio(num, den)?;
        let cc = rational_pow(c, num, den)?;
        Some(Scalar::term(mm, cc))
    }

    /// Total derivative: Leibniz rule, `u_n -> u_{n+1}`, `x -> 1`, parameters to 0.
    pub fn d_total(&self) -> Scalar {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            for &(v, e) in m.factors() {
                let Some(dv) = v.derivative() else { continue };
                let coeff = c * e.to_rational_big();
                let lowered = m.mul_var(v, -Exp::ONE);
                let mono = match dv {
                    Some(w) => lowered.mul_var(w, Exp::ONE),
                    None => lowered,
                };
                out.push((mono, coeff));
            }
        }
        Scalar::from_terms(out)
    }

    pub fn d_total_n(&self, n: usize) -> Scalar {
        let mut s = self.clone();
        for _ in 0..n {
            s = s.d_total();
        }
        s
    }

    /// Formal partial derivative with respect to one generator.
    pub fn d_partial(&self, v: Var) -> Scalar {
        Scalar::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            if e.is_zero() {
                None
            } else {
                Some((m.mul_var(v, -Exp::ONE), c * e.to_rational_big()))
            }
        }))
    }

    /// Generators appearing anywhere, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.factors().iter().map(|(v, _)| *v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Highest jet order of `field` present, if any.
    pub fn max_order(&self, field: Field) -> Option<u16> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet(f, n) if f == field => Some(n),
                _ => None,
            })
            .max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| !m.exponent(v).is_zero())
    }

    /// Substitutes generators by elements. Nonnegative integer powers are
    /// expanded; negative or half powers need a single-term image.
    pub fn substitute(&self, map: &impl Fn(Var) -> Option<Scalar>) -> Result<Scalar, SubstitutionError> {
        let mut cache: FxHashMap<(Var, Exp), Scalar> = FxHashMap::default();
        let mut parts: Vec<Scalar> = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut acc = Scalar::constant(c.clone());
            let mut kept = Monomial::one();
            for &(v, e) in m.factors() {
                match map(v) {
                    None => kept = kept.mul_var(v, e),
                    Some(img) => {
                        let p = match cache.get(&(v, e)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = power_of(&img, e).ok_or(SubstitutionError::NotInvertible { var: v, exp: e })?;
                                cache.insert((v, e), p.clone());
                                p
                            }
                        };
                        acc = &acc * &p;
                    }
                }
            }
            parts.push(acc.mul_monomial(&kept));
        }
        Ok(Scalar::sum(parts))
    }

    pub fn sum(parts: impl IntoIterator<Item = Scalar>) -> Scalar {
        Scalar::from_terms(parts.into_iter().flat_map(|s| s.terms))
    }

    /// Substitutes a symbolic parameter by a value.
    pub fn subs_param(&self, p: Param, value: &Scalar) -> Result<Scalar, SubstitutionError> {
        self.substitute(&|v| (v == Var::Param(p)).then(|| value.clone()))
    }

    /// Groups terms by their jet-and-`x` part; the values are parameter-only.
    pub fn split_by_differential_part(&self) -> Vec<(Monomial, Scalar)> {
        let mut acc: FxHashMap<Monomial, Vec<(Monomial, Rational)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (p, d) = m.split_params();
            acc.entry(d).or_default().push((p, c.clone()));
        }
        let mut out: Vec<_> = acc.into_iter().map(|(d, ts)| (d, Scalar::from_terms(ts))).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Exact quotient `self / d`, if it exists in the Laurent ring.
    pub fn div_exact(&self, d: &Scalar) -> Option<Scalar> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if let Some(inv) = d.inverse() {
            return Some(self * &inv);
        }
        // clear negative exponents, then divide with a monomial order
        let shift_n = self.min_monomial().inverse();
        let shift_d = d.min_monomial().inverse();
        let num = self.mul_monomial(&shift_n);
        let den = d.mul_monomial(&shift_d);
        let (lm, lc) = den.leading_lex();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = num;
        let mut quot = Vec::new();
        let mut steps = 0usize;
        while !rem.is_zero() {
            steps += 1;
            if steps > 100_000 {
                return None;
            }
            let (rm, rc) = rem.leading_lex();
            if !lm.divides(rm) {
                return None;
            }
            let tm = rm.mul(&lm.inverse());
            let tc = rc / &lc;
            rem = &rem - &den.mul_term(&tm, &tc);
            quot.push((tm, tc));
        }
        let q = Scalar::from_terms(quot);
        // self/d = (num/den) * shift_d / shift_n
        Some(q.mul_monomial(&shift_d.mul(&shift_n.inverse())))
    }

    /// Componentwise minimum of exponents over all terms (a Laurent gcd of
    /// the monomial supports).
    pub fn min_monomial(&self) -> Monomial {
        let mut mins: Vec<(Var, Exp)> = Vec::new();
        let vars = self.vars();
        for v in vars {
            let e = self.terms.iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(Exp::ZERO);
            if !e.is_zero() {
                mins.push((v, e));
            }
        }
        Monomial::from_factors(mins)
    }

    pub fn leading_lex(&self) -> (&Monomial, &Rational) {
        let (m, c) = self.terms.iter().max_by(|a, b| a.0.lex_cmp(&b.0)).expect("leading term of zero");
        (m, c)
    }

    /// Rational content: gcd of numerators over lcm of denominators, signed
    /// so that the lex-leading coefficient becomes positive after division.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        if self.is_zero() {
            return Rational::one();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let mut content = BigRational::new(g, l);
        if self.leading_lex().1.is_negative() {
            content = -content;
        }
        content
    }

    pub fn latex(&self) -> String {
        latex_scalar(self)
    }
}

trait ExpBig {
    fn to_rational_big(self) -> Rational;
}

impl ExpBig for Exp {
    fn to_rational_big(self) -> Rational {
        rat(self.0 as i64, 2)
    }
}

fn rational_pow(c: &Rational, num: i64, den: i64) -> Option<Rational> {
    let root = if den == 1 {
        c.clone()
    } else if den == 2 {
        if c.is_negative() {
            return None;
        }
        let n = c.numer().sqrt();
        let d = c.denom().sqrt();
        if &(&n * &n) != c.numer() || &(&d * &d) != c.denom() {
            return None;
        }
        BigRational::new(n, d)
    } else {
        return None;
    };
    if root.is_zero() && num < 0 {
        return None;
    }
    let k = num.unsigned_abs() as usize;
    let mut p = Rational::one();
    for _ in 0..k {
        p *= &root;
    }
    Some(if num < 0 { p.recip() } else { p })
}

fn power_of(img: &Scalar, e: Exp) -> Option<Scalar> {
    match e.as_integer() {
        Some(k) if k >= 0 => Some(img.pow(k as u32)),
        _ => img.pow_ratio(e.0 as i64, 2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstitutionError {
    #[error("cannot raise the image of {var} to the power {exp}: image is not a single term")]
    NotInvertible { var: Var, exp: Exp },
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.merge(o, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.merge(o, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_impl(o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(c: Rational) -> Scalar {
        Scalar::constant(c)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form: terms in storage order joined by ` + ` / ` - `,
/// each `coeff*gen^exp*...` with unit coefficients and exponents omitted.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write_rational(f, &a)?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write_rational(f, &a)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for &(v, e) in m.factors() {
        let base = v.latex();
        let needs_group = base.contains('\'') || base.contains('^');
        let base = if needs_group && e != Exp::ONE { format!("({base})") } else { base };
        if e == Exp::ONE {
            parts.push(base);
        } else if e.is_integer() {
            parts.push(format!("{base}^{{{}}}", e.0 / 2));
        } else {
            parts.push(format!("{base}^{{{}/2}}", e.0));
        }
    }
    parts.join(" ")
}

fn latex_scalar(s: &Scalar) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in s.terms().iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&latex_rational(&a));
        } else {
            if !a.is_one() {
                out.push_str(&latex_rational(&a));
                out.push(' ');
            }
            out.push_str(&latex_monomial(m));
        }
    }
    out
}

impl Scalar {
    /// Small integer value, if this is one.
    pub fn as_i64(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.numer().to_i64()
        } else {
            None
        }
    }
}
