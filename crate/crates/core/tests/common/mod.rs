//! Seeded random instances shared by the integration tests.

#![allow(dead_code)]

use bihamil::diffalg::{parse_scalar, Field, Param, Var};
use bihamil::oreops::{DiffOp, OrePoly};
use bihamil::poisson::PoissonParams;
use bihamil::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn s(x: &str) -> Scalar {
    parse_scalar(x).unwrap_or_else(|e| panic!("{x}: {e}"))
}

/// Nonzero rational with small numerator and denominator.
pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let n = loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            break n;
        }
    };
    Scalar::from_ratio(n, rng.gen_range(1..=5))
}

pub fn rational(rng: &mut ChaCha8Rng) -> Scalar {
    if rng.gen_bool(0.2) {
        Scalar::zero()
    } else {
        nonzero_rational(rng)
    }
}

/// A random polynomial in the jets of `u, v` up to order `order`, with
/// `terms` terms of total degree at most 3.
pub fn polynomial(rng: &mut ChaCha8Rng, terms: usize, order: u16) -> Scalar {
    let mut out = Scalar::zero();
    for _ in 0..terms {
        let mut t = nonzero_rational(rng);
        for _ in 0..rng.gen_range(0..=3) {
            let f = if rng.gen_bool(0.5) { Field::U } else { Field::V };
            t = &t * &Scalar::jet(f, rng.gen_range(0..=order));
        }
        out = &out + &t;
    }
    out
}

/// As [`polynomial`], with an extra power of `v⁻¹` on some terms.
pub fn laurent(rng: &mut ChaCha8Rng, terms: usize, order: u16) -> Scalar {
    let mut out = Scalar::zero();
    for _ in 0..terms {
        let t = polynomial(rng, 1, order);
        let k: i64 = rng.gen_range(0..=2);
        out = &out + &(&t * &Scalar::jet(Field::V, 0).pow_ratio(-k, 1).expect("monomial"));
    }
    out
}

/// A 2×2 operator with entries of order at most `ord` and coefficients
/// that are constants or linear in `u, v, u'`.
pub fn operator(rng: &mut ChaCha8Rng, ord: usize) -> DiffOp<Scalar> {
    let coeff = |rng: &mut ChaCha8Rng| -> Scalar {
        let c = rational(rng);
        match rng.gen_range(0..4) {
            0 => &c * &Scalar::jet(Field::U, 0),
            1 => &c * &Scalar::jet(Field::V, 0),
            2 => &c * &Scalar::jet(Field::U, 1),
            _ => c,
        }
    };
    let entry = |rng: &mut ChaCha8Rng, diag: bool| -> OrePoly<Scalar> {
        let k = rng.gen_range(0..=ord);
        let mut cs: Vec<Scalar> = (0..=k).map(|_| coeff(rng)).collect();
        if diag {
            // keeps the operator non-degenerate
            cs[k] = nonzero_rational(rng);
        }
        OrePoly::new(cs)
    };
    let rows = (0..2).map(|i| (0..2).map(|j| entry(rng, i == j)).collect()).collect();
    DiffOp::from_rows(rows)
}

/// A random member of the family: with `a = 1` (and then `α = β = 0` half
/// the time) or `a = 0`.
pub fn family(rng: &mut ChaCha8Rng) -> PoissonParams {
    let mut r = || rational(rng);
    let (c, al, be, ga, ep) = (r(), r(), r(), r(), r());
    if rng.gen_bool(0.5) {
        PoissonParams::new(Scalar::one(), c, al, be, ga, ep)
    } else {
        PoissonParams::constant(c, al, be, ga, ep)
    }
}

/// Replaces parameters by values.
pub fn subs(x: &Scalar, values: &[(Param, &str)]) -> Scalar {
    x.substitute(&|v| match v {
        Var::Param(p) => values.iter().find(|(q, _)| *q == p).map(|(_, val)| s(val)),
        _ => None,
    })
    .expect("rational values")
}
