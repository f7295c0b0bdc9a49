//! Operator text form: entries are scalar expressions in which `D` is `∂`,
//! products compose; matrices are `[[a, b], [c, d]]`.

use super::matrix::DiffOp;
use super::orepoly::OrePoly;
use crate::diffalg::{parse_expr, Expr, ParseError, Scalar};

fn eval_op(e: &Expr) -> Result<OrePoly<Scalar>, ParseError> {
    Ok(match e {
        Expr::Ident(name) if name == "D" => OrePoly::d(),
        Expr::Add(a, b) => eval_op(a)?.add(&eval_op(b)?),
        Expr::Sub(a, b) => eval_op(a)?.sub(&eval_op(b)?),
        Expr::Mul(a, b) => eval_op(a)?.mul(&eval_op(b)?),
        Expr::Neg(a) => eval_op(a)?.neg(),
        Expr::Pow(a, n, 1) if *n >= 0 && mentions_d(a) => {
            let base = eval_op(a)?;
            let mut out = OrePoly::one();
            for _ in 0..*n {
                out = out.mul(&base);
            }
            out
        }
        Expr::Div(a, b) if !mentions_d(b) => {
            let den = b.eval_scalar()?;
            let inv = den.inverse().ok_or_else(|| ParseError::Eval(format!("cannot divide an operator by ({den})")))?;
            let num = eval_op(a)?;
            OrePoly::new(num.coeffs().iter().map(|c| c * &inv).collect())
        }
        other if !mentions_d(other) => OrePoly::constant(other.eval_scalar()?),
        _ => return Err(ParseError::Eval("unsupported operator expression".into())),
    })
}

fn mentions_d(e: &Expr) -> bool {
    match e {
        Expr::Ident(n) => n == "D",
        Expr::Num(_) => false,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => mentions_d(a) || mentions_d(b),
        Expr::Neg(a) | Expr::Pow(a, _, _) => mentions_d(a),
        Expr::Call(_, args) => args.iter().any(mentions_d),
    }
}

pub fn parse_orepoly(src: &str) -> Result<OrePoly<Scalar>, ParseError> {
    eval_op(&parse_expr(src)?)
}

/// Splits `s` at top-level commas.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn strip_brackets(s: &str) -> Result<&str, ParseError> {
    let t = s.trim();
    t.strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or(ParseError::Expected { expected: "bracketed list", pos: 0 })
}

/// Parses `[[a, b], [c, d]]` (any square or rectangular shape) or a bare
/// scalar operator, read as a 1×1 matrix.
pub fn parse_operator(src: &str) -> Result<DiffOp<Scalar>, ParseError> {
    let t = src.trim();
    if !t.starts_with('[') {
        return Ok(DiffOp::from_rows(vec![vec![parse_orepoly(t)?]]));
    }
    let inner = strip_brackets(t)?;
    let rows = split_top(inner)
        .into_iter()
        .map(|row| split_top(strip_brackets(row)?).into_iter().map(parse_orepoly).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(ParseError::Eval("rows of different lengths".into()));
    }
    Ok(DiffOp::from_rows(rows))
}
