//! Elements of the fraction field of an algebra of differential functions.

use std::fmt;

use crate::diffalg::Scalar;

/// `num / Π p_i^{e_i}`.
///
/// Each denominator factor `p_i` is normalized: no monomial content and a
/// lex-leading coefficient of 1. Single-term denominators are absorbed into
/// the numerator, which may carry Laurent exponents. No multivariate gcd is
/// taken: cancellation only tries the recorded factors, so equal fractions
/// can be stored differently and equality goes by cross-multiplication.
#[derive(Clone, Debug)]
pub struct Frac {
    num: Scalar,
    den: Vec<(Scalar, u32)>,
}

/// Splits `p = unit · factor` with `unit` a single term and `factor` normal.
fn normal_factor(p: &Scalar) -> (Scalar, Option<Scalar>) {
    if p.len() == 1 {
        return (p.clone(), None);
    }
    let shift = p.min_monomial();
    let q = p.mul_monomial(&shift.inverse());
    let lc = q.leading_lex().1.clone();
    let unit = Scalar::term(shift, lc.clone());
    (unit, Some(q.scale(&lc.recip())))
}

impl Frac {
    pub fn zero() -> Frac {
        Frac { num: Scalar::zero(), den: Vec::new() }
    }

    pub fn one() -> Frac {
        Frac::from_scalar(Scalar::one())
    }

    pub fn from_scalar(s: Scalar) -> Frac {
        Frac { num: s, den: Vec::new() }
    }

    /// Builds `num / den`; `None` if `den` is zero.
    pub fn new(num: Scalar, den: Scalar) -> Option<Frac> {
        if den.is_zero() {
            return None;
        }
        Some(Frac::from_scalar(num).mul(&Frac::from_scalar(den).inv()?))
    }

    pub fn numer(&self) -> &Scalar {
        &self.num
    }

    /// The expanded denominator.
    pub fn denom(&self) -> Scalar {
        let mut d = Scalar::one();
        for (p, e) in &self.den {
            d = &d * &p.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// The element as a scalar, when the denominator clears.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            Some(self.num.clone())
        } else {
            self.num.div_exact(&self.denom())
        }
    }

    /// Adds `p^e` to the denominator, splitting `p` by known factors first.
    fn push_factor(num: &mut Scalar, den: &mut Vec<(Scalar, u32)>, p: &Scalar, e: u32) {
        let (unit, factor) = normal_factor(p);
        *num = &*num * &unit.inverse().expect("single term").pow(e);
        let Some(mut f) = factor else { return };
        'outer: loop {
            for (q, k) in den.iter_mut() {
                if *q == f {
                    *k += e;
                    return;
                }
                if let Some(r) = f.div_exact(q) {
                    *k += e;
                    let (unit, rest) = normal_factor(&r);
                    *num = &*num * &unit.inverse().expect("single term").pow(e);
                    match rest {
                        None => return,
                        Some(g) => {
                            f = g;
                            continue 'outer;
                        }
                    }
                }
            }
            den.push((f, e));
            return;
        }
    }

    /// Cancels recorded denominator factors out of the numerator.
    fn reduce(mut num: Scalar, mut den: Vec<(Scalar, u32)>) -> Frac {
        if num.is_zero() {
            return Frac::zero();
        }
        for (p, e) in den.iter_mut() {
            while *e > 0 {
                match num.div_exact(p) {
                    Some(q) => {
                        num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|(_, e)| *e > 0);
        Frac { num, den }
    }

    /// Least common multiple of two factor lists.
    fn lcm(a: &[(Scalar, u32)], b: &[(Scalar, u32)]) -> Vec<(Scalar, u32)> {
        let mut out: Vec<(Scalar, u32)> = a.to_vec();
        for (p, e) in b {
            match out.iter_mut().find(|(q, _)| q == p) {
                Some((_, k)) => *k = (*k).max(*e),
                None => out.push((p.clone(), *e)),
            }
        }
        out
    }

    /// `L / den` for a multiple `L` of `den`.
    fn cofactor(l: &[(Scalar, u32)], den: &[(Scalar, u32)]) -> Scalar {
        let mut out = Scalar::one();
        for (p, e) in l {
            let have = den.iter().find(|(q, _)| q == p).map_or(0, |(_, k)| *k);
            if *e > have {
                out = &out * &p.pow(e - have);
            }
        }
        out
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Frac::from_scalar(&self.num + &o.num);
        }
        let l = Frac::lcm(&self.den, &o.den);
        let num = &(&self.num * &Frac::cofactor(&l, &self.den)) + &(&o.num * &Frac::cofactor(&l, &o.den));
        Frac::reduce(num, l)
    }

    pub fn neg(&self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        let num = &self.num * &o.num;
        if o.den.is_empty() {
            return Frac::reduce(num, self.den.clone());
        }
        let mut den = self.den.clone();
        for (p, e) in &o.den {
            match den.iter_mut().find(|(q, _)| q == p) {
                Some((_, k)) => *k += e,
                None => den.push((p.clone(), *e)),
            }
        }
        Frac::reduce(num, den)
    }

    pub fn inv(&self) -> Option<Frac> {
        if self.is_zero() {
            return None;
        }
        let mut num = self.denom();
        let mut den = Vec::new();
        Frac::push_factor(&mut num, &mut den, &self.num, 1);
        Some(Frac::reduce(num, den))
    }

    pub fn div(&self, o: &Frac) -> Option<Frac> {
        Some(self.mul(&o.inv()?))
    }

    /// `(n/Π p^e)' = (n' Π p - n Σ e p' Π_{q≠p} q) / Π p^{e+1}`.
    pub fn d_total(&self) -> Frac {
        if self.den.is_empty() {
            return Frac::from_scalar(self.num.d_total());
        }
        let all: Scalar = self.den.iter().fold(Scalar::one(), |acc, (p, _)| &acc * p);
        let mut num = &self.num.d_total() * &all;
        for (i, (p, e)) in self.den.iter().enumerate() {
            let others =
                self.den.iter().enumerate().filter(|(j, _)| *j != i).fold(Scalar::one(), |acc, (_, (q, _))| &acc * q);
            let t = &(&self.num * &p.d_total()) * &others;
            num = &num - &t.scale_int(*e as i64);
        }
        let den = self.den.iter().map(|(p, e)| (p.clone(), e + 1)).collect();
        Frac::reduce(num, den)
    }

    pub fn scale(&self, s: &Scalar) -> Frac {
        self.mul(&Frac::from_scalar(s.clone()))
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        if self.den.is_empty() && o.den.is_empty() {
            return self.num == o.num;
        }
        let l = Frac::lcm(&self.den, &o.den);
        &self.num * &Frac::cofactor(&l, &self.den) == &o.num * &Frac::cofactor(&l, &o.den)
    }
}

impl Eq for Frac {}

impl From<Scalar> for Frac {
    fn from(s: Scalar) -> Frac {
        Frac::from_scalar(s)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/", self.num)?;
        let parts: Vec<String> =
            self.den.iter().map(|(p, e)| if *e == 1 { format!("({p})") } else { format!("({p})^{e}") }).collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "({})", parts.join("*"))
        }
    }
}
