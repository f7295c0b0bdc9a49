//! Row reduction over the fraction field and the Dieudonné determinant.

use std::fmt;

use super::matrix::DiffOp;
use super::orepoly::OrePoly;
use super::pseudo::Pseudo;
use super::ring::{DiffField, DiffRing};
use crate::frac::Frac;

/// Output of [`triangularize`]: `u · h = t` with `t` upper triangular.
#[derive(Clone, Debug)]
pub struct Triangularization<R> {
    pub t: DiffOp<R>,
    pub u: DiffOp<R>,
    /// `-1` to the number of row swaps.
    pub sign: i64,
}

/// Chooses the pivot among candidate rows (all with a nonzero entry in the
/// current column). Receives `(row, order)` pairs in increasing row order.
pub type PivotRule<'a> = dyn FnMut(&[(usize, usize)]) -> usize + 'a;

/// Default rule: lowest order, ties broken by the topmost row.
pub fn lowest_order_pivot(cands: &[(usize, usize)]) -> usize {
    cands.iter().min_by_key(|&&(r, d)| (d, r)).expect("no candidates").0
}

/// Upper-triangularizes by elementary row operations, column by column from
/// the left, each column by a noncommutative Euclidean algorithm.
pub fn triangularize<R: DiffField>(h: &DiffOp<R>) -> Triangularization<R> {
    triangularize_by(h, &mut lowest_order_pivot)
}

pub fn triangularize_by<R: DiffField>(h: &DiffOp<R>, rule: &mut PivotRule<'_>) -> Triangularization<R> {
    reduce_rows(h, rule, true)
}

/// With `track_u` false the returned `u` is the identity and is not kept in
/// step with the row operations.
fn reduce_rows<R: DiffField>(h: &DiffOp<R>, rule: &mut PivotRule<'_>, track_u: bool) -> Triangularization<R> {
    let n = h.rows();
    let mut rows: Vec<Vec<OrePoly<R>>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    let mut u: Vec<Vec<OrePoly<R>>> = (0..n).map(|i| DiffOp::<R>::identity(n).row(i).to_vec()).collect();
    let mut sign = 1;
    let mut top = 0;
    for col in 0..h.cols() {
        if top >= n {
            break;
        }
        loop {
            let cands: Vec<(usize, usize)> = (top..n).filter_map(|r| rows[r][col].degree().map(|d| (r, d))).collect();
            if cands.is_empty() {
                break;
            }
            let p = rule(&cands);
            if p != top {
                rows.swap(p, top);
                if track_u {
                    u.swap(p, top);
                }
                sign = -sign;
            }
            if cands.len() == 1 {
                break;
            }
            let pivot = rows[top][col].clone();
            for r in (top + 1)..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let (q, _) = rows[r][col].right_divide(&pivot).expect("division by a nonzero pivot over a field");
                if q.is_zero() {
                    continue;
                }
                for c in 0..h.cols() {
                    let sub = q.mul(&rows[top][c]);
                    rows[r][c] = rows[r][c].sub(&sub);
                }
                if track_u {
                    for c in 0..n {
                        let sub = q.mul(&u[top][c]);
                        u[r][c] = u[r][c].sub(&sub);
                    }
                }
            }
        }
        // a zero column leaves a zero on the diagonal
        top += 1;
    }
    Triangularization { t: DiffOp::from_rows(rows), u: DiffOp::from_rows(u), sign }
}

/// `det H = det1 · ξ^degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetResult {
    pub det1: Frac,
    pub degree: usize,
    pub degenerate: bool,
}

impl fmt::Display for DetResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degenerate {
            return write!(f, "0");
        }
        let coeff = self.det1.to_string();
        let wrapped = if coeff.contains([' ', '/']) { format!("({coeff})") } else { coeff };
        match self.degree {
            0 => write!(f, "{}", self.det1),
            1 if self.det1.is_one() => write!(f, "xi"),
            1 => write!(f, "{wrapped}*xi"),
            k if self.det1.is_one() => write!(f, "xi^{k}"),
            k => write!(f, "{wrapped}*xi^{k}"),
        }
    }
}

/// Dieudonné determinant of a square operator over the fraction field.
pub fn dieudonne_det(h: &DiffOp<Frac>) -> DetResult {
    dieudonne_det_by(h, &mut lowest_order_pivot)
}

pub fn dieudonne_det_by(h: &DiffOp<Frac>, rule: &mut PivotRule<'_>) -> DetResult {
    assert!(h.is_square(), "determinant of a non-square operator");
    // a triangular operator needs no reduction
    if h.is_upper_triangular() || h.is_lower_triangular() {
        return det_of_triangular(h, 1);
    }
    if h.rows() == 2 {
        return schur_det(h, rule);
    }
    let (t, sign, scale) = fraction_free_rows(h, rule);
    let mut det = det_of_triangular(&t, sign);
    if !det.degenerate {
        det.det1 = det.det1.div(&scale).expect("row scalings are nonzero");
    }
    det
}

/// `det [[a, b], [c, d]] = a (d - c a⁻¹ b)` with `a⁻¹` a pseudo-differential
/// series. Only the leading coefficient of `a` is ever inverted. A
/// nondegenerate determinant has degree at least 0, so the complement is
/// needed down to order `-deg a` only.
fn schur_det(h: &DiffOp<Frac>, rule: &mut PivotRule<'_>) -> DetResult {
    let degenerate = DetResult { det1: Frac::zero(), degree: 0, degenerate: true };
    let cands: Vec<(usize, usize)> = (0..2).filter_map(|r| h.entry(r, 0).degree().map(|d| (r, d))).collect();
    if cands.is_empty() {
        return degenerate;
    }
    let p = rule(&cands);
    let (q, sign) = (1 - p, if p == 0 { 1 } else { -1 });
    let (a, b, c, d) = (h.entry(p, 0), h.entry(p, 1), h.entry(q, 0), h.entry(q, 1));
    let k = a.degree().expect("pivot") as i64;
    let floor = -k;
    let (db, dc) = (b.degree().unwrap_or(0) as i64, c.degree().unwrap_or(0) as i64);
    let inv = Pseudo::inverse(a, floor - db - dc);
    let cab = Pseudo::from_poly(c).mul(&inv.mul(&Pseudo::from_poly(b), floor - dc), floor);
    let schur = Pseudo::from_poly(d).sub(&cab);
    match schur.leading(floor) {
        None => degenerate,
        Some((ord, lc)) => DetResult {
            det1: a.leading().expect("pivot").mul(lc).scale(&crate::diffalg::Scalar::from_int(sign)),
            degree: usize::try_from(k + ord).expect("nonnegative degree"),
            degenerate: false,
        },
    }
}

/// Triangularizes without dividing: a row `r` is reduced against the pivot
/// row `p` by `r ← a·r − b·∂^k·p`, where `a, b` are the leading coefficients.
/// Each such step multiplies the determinant by `a`; the product of these
/// factors is returned with the triangular form and the swap sign.
fn fraction_free_rows(h: &DiffOp<Frac>, rule: &mut PivotRule<'_>) -> (DiffOp<Frac>, i64, Frac) {
    let n = h.rows();
    let mut rows: Vec<Vec<OrePoly<Frac>>> = (0..n).map(|i| h.row(i).to_vec()).collect();
    let mut sign = 1;
    let mut scale = Frac::one();
    for col in 0..h.cols().min(n) {
        loop {
            let cands: Vec<(usize, usize)> = (col..n).filter_map(|r| rows[r][col].degree().map(|d| (r, d))).collect();
            if cands.is_empty() {
                break;
            }
            let p = rule(&cands);
            if p != col {
                rows.swap(p, col);
                sign = -sign;
            }
            if cands.len() == 1 {
                break;
            }
            let pivot = rows[col][col].clone();
            let (k0, a) = (pivot.degree().expect("pivot"), pivot.leading().expect("pivot").clone());
            for r in (col + 1)..n {
                while let Some(m) = rows[r][col].degree().filter(|&m| m >= k0) {
                    let b = rows[r][col].leading().expect("nonzero").clone();
                    let shift = OrePoly::monomial(b, m - k0);
                    let lhs = OrePoly::constant(a.clone());
                    for c in 0..h.cols() {
                        rows[r][c] = lhs.mul(&rows[r][c]).sub(&shift.mul(&rows[col][c]));
                    }
                    scale = scale.mul(&a);
                }
            }
        }
    }
    (DiffOp::from_rows(rows), sign, scale)
}

fn det_of_triangular(t: &DiffOp<Frac>, sign: i64) -> DetResult {
    let mut det1 = Frac::from_int(sign);
    let mut degree = 0;
    for i in 0..t.rows() {
        let d = t.entry(i, i);
        match (d.degree(), d.leading()) {
            (Some(k), Some(lc)) => {
                degree += k;
                det1 = det1.times(lc);
            }
            _ => {
                return DetResult { det1: Frac::zero(), degree: 0, degenerate: true };
            }
        }
    }
    DetResult { det1, degree, degenerate: false }
}
