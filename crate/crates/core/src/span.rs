//! Linear dependence over the constants (rational functions of the
//! symbolic parameters) among tuples of differential functions.

use std::collections::BTreeMap;

use crate::diffalg::{GradientVector, Monomial};
use crate::frac::Frac;

/// Coefficient rows of `vectors`, keyed by (component, differential monomial).
fn coefficient_table(vectors: &[&GradientVector]) -> BTreeMap<(usize, Monomial), Vec<Frac>> {
    let mut rows: BTreeMap<(usize, Monomial), Vec<Frac>> = BTreeMap::new();
    for (col, v) in vectors.iter().enumerate() {
        for (i, c) in v.components.iter().enumerate() {
            for (m, coeff) in c.split_by_differential_part() {
                rows.entry((i, m)).or_insert_with(|| vec![Frac::zero(); vectors.len()])[col] = Frac::from_scalar(coeff);
            }
        }
    }
    rows
}

/// Constants `k` with `target = Σ k_i basis_i`, if they exist. When the basis
/// is dependent, free coefficients are set to zero.
pub fn decompose(target: &GradientVector, basis: &[GradientVector]) -> Option<Vec<Frac>> {
    let n = basis.len();
    let mut all: Vec<&GradientVector> = basis.iter().collect();
    all.push(target);
    let mut rows: Vec<Vec<Frac>> = coefficient_table(&all).into_values().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<Frac> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let k = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut out = vec![Frac::zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        out[col] = rows[i][n].clone();
    }
    Some(out)
}

/// True when the vectors are linearly independent over the constants.
pub fn independent(vectors: &[GradientVector]) -> bool {
    let refs: Vec<&GradientVector> = vectors.iter().collect();
    let mut rows: Vec<Vec<Frac>> = coefficient_table(&refs).into_values().collect();
    // every column needs a pivot, so the pivot row is the column index
    for col in 0..vectors.len() {
        let Some(p) = (col..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            return false;
        };
        rows.swap(col, p);
        let inv = rows[col][col].inv().expect("nonzero pivot");
        let pivot_row: Vec<Frac> = rows[col].iter().map(|x| x.mul(&inv)).collect();
        for row in rows.iter_mut().skip(col + 1) {
            if !row[col].is_zero() {
                let k = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
    }
    true
}
