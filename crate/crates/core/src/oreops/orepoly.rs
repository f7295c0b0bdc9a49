use std::fmt;

use super::ring::{DiffField, DiffRing};

/// `Σ a_k ∂^k` with coefficients on the left, trimmed so the leading
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct OrePoly<R> {
    coeffs: Vec<R>,
}

fn binomial(n: usize, k: usize) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

impl<R: DiffRing> OrePoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OrePoly { coeffs }
    }

    pub fn zero() -> Self {
        OrePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        OrePoly::constant(R::one())
    }

    pub fn constant(c: R) -> Self {
        OrePoly::new(vec![c])
    }

    /// `∂`.
    pub fn d() -> Self {
        OrePoly::monomial(R::one(), 1)
    }

    /// `c ∂^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.push(c);
        OrePoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `∂^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `∂`; `None` for the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        OrePoly::new((0..n).map(|k| self.coeff(k).plus(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        OrePoly::new((0..n).map(|k| self.coeff(k).minus(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        OrePoly { coeffs: self.coeffs.iter().map(R::negate).collect() }
    }

    /// `c ∘ L`.
    pub fn scale_left(&self, c: &R) -> Self {
        OrePoly::new(self.coeffs.iter().map(|a| c.times(a)).collect())
    }

    /// Composition, using `∂^i ∘ b = Σ_k C(i,k) b^{(k)} ∂^{i-k}`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return OrePoly::zero();
        }
        let da = self.coeffs.len() - 1;
        let db = o.coeffs.len() - 1;
        let mut out = vec![R::zero(); da + db + 1];
        for (j, b) in o.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut derivs = Vec::with_capacity(da + 1);
            let mut cur = b.clone();
            for k in 0..=da {
                derivs.push(cur.clone());
                if k < da {
                    cur = cur.derive();
                }
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, bk) in derivs.iter().enumerate().take(i + 1) {
                    if bk.is_zero() {
                        continue;
                    }
                    let term = a.times(bk);
                    let c = binomial(i, k);
                    let term = if c == 1 { term } else { R::from_int(c).times(&term) };
                    let slot = i + j - k;
                    out[slot] = out[slot].plus(&term);
                }
            }
        }
        OrePoly::new(out)
    }

    /// `L(f) = Σ a_k f^{(k)}`.
    pub fn apply(&self, f: &R) -> R {
        let mut acc = R::zero();
        let mut cur = f.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() && !cur.is_zero() {
                acc = acc.plus(&a.times(&cur));
            }
            if k + 1 < self.coeffs.len() {
                cur = cur.derive();
            }
        }
        acc
    }

    /// Formal adjoint: `(a∂^k)* = (-∂)^k ∘ a`.
    pub fn adjoint(&self) -> Self {
        let mut out = vec![R::zero(); self.coeffs.len()];
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let mut cur = a.clone();
            // ∂^k ∘ a = Σ_m C(k,m) a^{(k-m)} ∂^m
            let mut derivs = vec![cur.clone()];
            for _ in 0..k {
                cur = cur.derive();
                derivs.push(cur.clone());
            }
            for m in 0..=k {
                let d = &derivs[k - m];
                if d.is_zero() {
                    continue;
                }
                let c = sign * binomial(k, m);
                out[m] = out[m].plus(&R::from_int(c).times(d));
            }
        }
        OrePoly::new(out)
    }

    pub fn map<S: DiffRing>(&self, f: impl Fn(&R) -> S) -> OrePoly<S> {
        OrePoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<R: DiffField> OrePoly<R> {
    /// `self = q ∘ b + r` with `deg r < deg b`.
    pub fn right_divide(&self, b: &Self) -> Option<(Self, Self)> {
        let n = b.degree()?;
        let lb = b.leading()?.clone();
        let mut r = self.clone();
        let mut q = OrePoly::zero();
        while let Some(m) = r.degree() {
            if m < n {
                break;
            }
            let c = r.leading()?.try_div(&lb)?;
            let t = OrePoly::monomial(c, m - n);
            r = r.sub(&t.mul(b));
            if r.degree() == Some(m) {
                return None;
            }
            q = q.add(&t);
        }
        Some((q, r))
    }

    /// `self = b ∘ q + r` with `deg r < deg b`.
    pub fn left_divide(&self, b: &Self) -> Option<(Self, Self)> {
        let n = b.degree()?;
        let lb = b.leading()?.clone();
        let mut r = self.clone();
        let mut q = OrePoly::zero();
        while let Some(m) = r.degree() {
            if m < n {
                break;
            }
            let c = r.leading()?.try_div(&lb)?;
            let t = OrePoly::monomial(c, m - n);
            r = r.sub(&b.mul(&t));
            if r.degree() == Some(m) {
                return None;
            }
            q = q.add(&t);
        }
        Some((q, r))
    }
}

impl<R: DiffRing> fmt::Display for OrePoly<R> {
    /// `a0 + (a1)*D + (a2)*D^2`, skipping zero coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({a})")?,
                1 if a.is_one() => write!(f, "D")?,
                1 => write!(f, "({a})*D")?,
                _ if a.is_one() => write!(f, "D^{k}")?,
                _ => write!(f, "({a})*D^{k}")?,
            }
        }
        Ok(())
    }
}
