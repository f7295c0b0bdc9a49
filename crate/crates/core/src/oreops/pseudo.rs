//! Truncated pseudo-differential operators `Σ_{k ≥ floor} a_k ∂^k` over the
//! fraction field, enough to form Schur complements of 2×2 operators.

use std::collections::BTreeMap;

use super::orepoly::OrePoly;
use crate::diffalg::Scalar;
use crate::frac::Frac;

#[derive(Clone, Debug, Default)]
pub(crate) struct Pseudo {
    terms: BTreeMap<i64, Frac>,
}

/// `m (m - 1) ⋯ (m - k + 1) / k!` for any integer `m`.
fn binomial(m: i64, k: i64) -> i64 {
    let mut out: i128 = 1;
    for i in 0..k {
        out = out * (m - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(out).expect("binomial fits in i64")
}

impl Pseudo {
    pub(crate) fn from_poly(p: &OrePoly<Frac>) -> Pseudo {
        let terms =
            p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c.clone())).collect();
        Pseudo { terms }
    }

    /// The top term `(order, coefficient)` with order at least `floor`.
    pub(crate) fn leading(&self, floor: i64) -> Option<(i64, &Frac)> {
        self.terms.iter().rev().find(|(k, c)| **k >= floor && !c.is_zero()).map(|(k, c)| (*k, c))
    }

    fn add_term(&mut self, k: i64, c: Frac) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(Frac::zero);
        *slot = slot.add(&c);
    }

    pub(crate) fn sub(&self, o: &Pseudo) -> Pseudo {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.neg());
        }
        out
    }

    /// The product with all terms below `floor` dropped, using
    /// `∂^m b = Σ_k C(m, k) b^{(k)} ∂^{m-k}`.
    pub(crate) fn mul(&self, o: &Pseudo, floor: i64) -> Pseudo {
        let mut out = Pseudo::default();
        for (&m, x) in &self.terms {
            for (&n, y) in &o.terms {
                let mut dy = y.clone();
                let mut k = 0;
                while m + n - k >= floor && !(m >= 0 && k > m) {
                    let c = binomial(m, k);
                    if c != 0 && !dy.is_zero() {
                        out.add_term(m + n - k, x.mul(&dy).scale(&Scalar::from_int(c)));
                    }
                    k += 1;
                    dy = dy.d_total();
                }
            }
        }
        out
    }

    /// Inverse of a nonzero polynomial operator down to order `floor`.
    pub(crate) fn inverse(p: &OrePoly<Frac>, floor: i64) -> Pseudo {
        let k = p.degree().expect("nonzero operator") as i64;
        let a = p.leading().expect("nonzero operator");
        let inv_a = a.inv().expect("nonzero leading coefficient");
        let l = Pseudo::from_poly(p);
        let mut x = Pseudo::default();
        x.add_term(-k, inv_a.clone());
        for j in 1..=(-k - floor).max(0) {
            let r = l.mul(&x, -j);
            if let Some(c) = r.terms.get(&-j) {
                x.add_term(-k - j, c.mul(&inv_a).neg());
            }
        }
        x
    }
}
