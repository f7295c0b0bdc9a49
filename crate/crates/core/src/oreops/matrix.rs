use std::fmt;

use super::orepoly::OrePoly;
use super::ring::DiffRing;
use crate::diffalg::{GradientVector, Scalar};
use crate::frac::Frac;

/// A matrix of Ore polynomials, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<R> {
    rows: usize,
    cols: usize,
    entries: Vec<OrePoly<R>>,
}

impl<R: DiffRing> DiffOp<R> {
    pub fn from_rows(rows: Vec<Vec<OrePoly<R>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged operator matrix");
        DiffOp { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DiffOp { rows, cols, entries: vec![OrePoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DiffOp::zeros(n, n);
        for i in 0..n {
            m.set(i, i, OrePoly::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<OrePoly<R>>) -> Self {
        let n = diag.len();
        let mut m = DiffOp::zeros(n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &OrePoly<R> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: OrePoly<R>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[OrePoly<R>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(OrePoly::is_zero)
    }

    fn zip(&self, o: &Self, f: impl Fn(&OrePoly<R>, &OrePoly<R>) -> OrePoly<R>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        DiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, OrePoly::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, OrePoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map_entries(OrePoly::neg)
    }

    pub fn map_entries(&self, f: impl Fn(&OrePoly<R>) -> OrePoly<R>) -> Self {
        DiffOp { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn map_coefficients<S: DiffRing>(&self, f: impl Fn(&R) -> S) -> DiffOp<S> {
        DiffOp { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| p.map(&f)).collect() }
    }

    /// Left multiplication of every entry by a coefficient.
    pub fn scale_left(&self, c: &R) -> Self {
        self.map_entries(|p| p.scale_left(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = DiffOp::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = OrePoly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.entry(i, k), o.entry(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Transpose of the entrywise adjoint.
    pub fn adjoint(&self) -> Self {
        let mut out = DiffOp::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).adjoint());
            }
        }
        out
    }

    pub fn is_skew_adjoint(&self) -> bool {
        self.is_square() && self.adjoint() == self.neg()
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.is_square() && self.adjoint() == *self
    }

    /// `L(F)_i = Σ_j L_ij(∂) F_j`.
    pub fn apply(&self, f: &[R]) -> Vec<R> {
        assert_eq!(self.cols, f.len(), "vector length does not match operator");
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for (j, fj) in f.iter().enumerate() {
                    let e = self.entry(i, j);
                    if !e.is_zero() && !fj.is_zero() {
                        acc = acc.plus(&e.apply(fj));
                    }
                }
                acc
            })
            .collect()
    }

    /// Largest entry order, `None` for the zero matrix.
    pub fn order(&self) -> Option<usize> {
        self.entries.iter().filter_map(OrePoly::degree).max()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.entry(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self.entry(i, j).is_zero()))
    }
}

impl DiffOp<Scalar> {
    pub fn apply_gradient(&self, f: &GradientVector) -> GradientVector {
        GradientVector::new(self.apply(&f.components))
    }

    pub fn to_frac(&self) -> DiffOp<Frac> {
        self.map_coefficients(|c| Frac::from_scalar(c.clone()))
    }
}

impl DiffOp<Frac> {
    pub fn apply_gradient(&self, f: &GradientVector) -> Vec<Frac> {
        let fr: Vec<Frac> = f.components.iter().map(|c| Frac::from_scalar(c.clone())).collect();
        self.apply(&fr)
    }

    /// Clears denominators when all of them divide exactly.
    pub fn to_scalar(&self) -> Option<DiffOp<Scalar>> {
        let entries = self
            .entries
            .iter()
            .map(|p| Some(OrePoly::new(p.coeffs().iter().map(Frac::as_scalar).collect::<Option<Vec<_>>>()?)))
            .collect::<Option<Vec<_>>>()?;
        Some(DiffOp { rows: self.rows, cols: self.cols, entries })
    }
}

impl<R: DiffRing> fmt::Display for DiffOp<R> {
    /// `[[a, b], [c, d]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
