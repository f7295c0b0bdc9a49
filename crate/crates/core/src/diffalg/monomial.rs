use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::symbol::{Exp, Var};

/// Power product of generators, sorted by generator, with no zero exponents.
///
/// The derived `Ord` is the canonical storage order (lexicographic on the
/// sorted `(generator, exponent)` list). It is not a monomial order; use
/// [`Monomial::lex_cmp`] where multiplicativity matters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[(Var, Exp); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: Exp) -> Monomial {
        if e.is_zero() {
            Monomial::one()
        } else {
            let mut s = SmallVec::new();
            s.push((v, e));
            Monomial(s)
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeated generators.
    pub fn from_factors(factors: impl IntoIterator<Item = (Var, Exp)>) -> Monomial {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, Exp)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> Exp {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => Exp::ZERO,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if !e.is_zero() {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Multiplies by `v^e`.
    pub fn mul_var(&self, v: Var, e: Exp) -> Monomial {
        self.mul(&Monomial::var(v, e))
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// Raises to the rational power `num/den`; `None` if some exponent would
    /// leave the half-integer lattice.
    pub fn pow_ratio(&self, num: i64, den: i64) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        for &(v, e) in &self.0 {
            let scaled = e.0 as i64 * num;
            if scaled % den != 0 {
                return None;
            }
            let h = scaled / den;
            if h != 0 {
                out.push((v, Exp(i32::try_from(h).ok()?)));
            }
        }
        Some(Monomial(out))
    }

    /// Removes generator `v` entirely, returning its exponent and the rest.
    pub fn split_off(&self, v: Var) -> (Exp, Monomial) {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                let mut rest = self.0.clone();
                let (_, e) = rest.remove(i);
                (e, Monomial(rest))
            }
            Err(_) => (Exp::ZERO, self.clone()),
        }
    }

    /// Splits into the parameter part and the part in jets and `x`.
    pub fn split_params(&self) -> (Monomial, Monomial) {
        let (p, d): (SmallVec<_>, SmallVec<_>) = self.0.iter().copied().partition(|(v, _)| !v.is_differential());
        (Monomial(p), Monomial(d))
    }

    pub fn has_differential(&self) -> bool {
        self.0.iter().any(|(v, _)| v.is_differential())
    }

    /// Pure lexicographic monomial order: the largest generator is the most
    /// significant.
    pub fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return if b[j - 1].1 .0 > 0 { Ordering::Less } else { Ordering::Greater },
                (_, 0) => return if a[i - 1].1 .0 > 0 { Ordering::Greater } else { Ordering::Less },
                _ => {
                    let (va, ea) = a[i - 1];
                    let (vb, eb) = b[j - 1];
                    match va.cmp(&vb) {
                        Ordering::Greater => return if ea.0 > 0 { Ordering::Greater } else { Ordering::Less },
                        Ordering::Less => return if eb.0 > 0 { Ordering::Less } else { Ordering::Greater },
                        Ordering::Equal => match ea.cmp(&eb) {
                            Ordering::Equal => {
                                i -= 1;
                                j -= 1;
                            }
                            o => return o,
                        },
                    }
                }
            }
        }
    }

    /// `self` divides `other` in the monoid of nonnegative exponents.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v).0 >= e.0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == Exp::ONE {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
