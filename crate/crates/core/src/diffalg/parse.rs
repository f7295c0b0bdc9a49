//! Text grammar shared by scalars and operators.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := ['-'] int | '{' ['-'] int ['/' int] '}' | '(' ['-'] int ['/' int] ')'
//! atom   := int | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::scalar::{Rational, Scalar};
use super::symbol::{Field, Param, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at offset {pos}")]
    Expected { expected: &'static str, pos: usize },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("cannot evaluate: {0}")]
    Eval(String),
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Num(BigInt),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64, i64),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                i += 1;
            }
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^(){},".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(ParseError::UnexpectedChar { ch: c, pos });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.1).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::Expected { expected: what, pos: self.pos() })
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (n, d) = if self.eat('{') {
            let r = self.ratio()?;
            self.expect('}', "'}'")?;
            r
        } else if self.eat('(') {
            let r = self.ratio()?;
            self.expect(')', "')'")?;
            r
        } else {
            let neg = self.eat('-');
            let k = self.small_int()?;
            (if neg { -k } else { k }, 1)
        };
        Ok(Expr::Pow(Box::new(base), n, d))
    }

    fn ratio(&mut self) -> Result<(i64, i64), ParseError> {
        let neg = self.eat('-');
        let n = self.small_int()?;
        let d = if self.eat('/') { self.small_int()? } else { 1 };
        if d == 0 {
            return Err(ParseError::Eval("zero denominator in exponent".into()));
        }
        Ok((if neg { -n } else { n }, d))
    }

    fn small_int(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = k.to_i64().ok_or(ParseError::Expected { expected: "small integer", pos })?;
                self.i += 1;
                Ok(k)
            }
            None => Err(ParseError::UnexpectedEnd),
            _ => Err(ParseError::Expected { expected: "integer exponent", pos }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.i += 1;
                Ok(Expr::Num(k))
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')', "')'")?;
                    Ok(Expr::Call(name, args))
                } else {
                    Ok(Expr::Ident(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(e)
            }
            Some(Tok::Sym(c)) => Err(ParseError::UnexpectedChar { ch: c, pos }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

pub(crate) fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, end: src.len() };
    let e = p.expr()?;
    if p.i < p.toks.len() {
        let (t, pos) = &p.toks[p.i];
        return Err(match t {
            Tok::Sym(c) => ParseError::UnexpectedChar { ch: *c, pos: *pos },
            _ => ParseError::Expected { expected: "operator", pos: *pos },
        });
    }
    Ok(e)
}

/// Resolves a generator name: jets `u0`, `Q3`, ..., `x`, or a parameter.
pub(crate) fn resolve_ident(name: &str) -> Option<Var> {
    if name == "x" {
        return Some(Var::X);
    }
    if let Some(p) = Param::from_name(name) {
        return Some(Var::Param(p));
    }
    let (head, digits) = name.split_at(name.chars().next()?.len_utf8());
    let field = Field::from_name(head)?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    Some(Var::Jet(field, digits.parse().ok()?))
}

impl Expr {
    pub(crate) fn eval_scalar(&self) -> Result<Scalar, ParseError> {
        Ok(match self {
            Expr::Num(k) => Scalar::constant(Rational::from_integer(k.clone())),
            Expr::Ident(name) => {
                Scalar::var(resolve_ident(name).ok_or_else(|| ParseError::UnknownIdentifier(name.clone()))?)
            }
            Expr::Add(a, b) => &a.eval_scalar()? + &b.eval_scalar()?,
            Expr::Sub(a, b) => &a.eval_scalar()? - &b.eval_scalar()?,
            Expr::Mul(a, b) => &a.eval_scalar()? * &b.eval_scalar()?,
            Expr::Neg(a) => -&a.eval_scalar()?,
            Expr::Div(a, b) => {
                let num = a.eval_scalar()?;
                let den = b.eval_scalar()?;
                if den.is_zero() {
                    return Err(ParseError::Eval("division by zero".into()));
                }
                num.div_exact(&den).ok_or_else(|| ParseError::Eval(format!("({den}) does not divide ({num})")))?
            }
            Expr::Pow(a, n, d) => {
                let base = a.eval_scalar()?;
                base.pow_ratio(*n, *d)
                    .ok_or_else(|| ParseError::Eval(format!("cannot raise ({base}) to the power {n}/{d}")))?
            }
            Expr::Call(name, args) if name == "d" => {
                let (f, k) = derivative_args(args)?;
                f.eval_scalar()?.d_total_n(k)
            }
            Expr::Call(name, _) => return Err(ParseError::UnknownIdentifier(name.clone())),
        })
    }
}

pub(crate) fn derivative_args(args: &[Expr]) -> Result<(&Expr, usize), ParseError> {
    match args {
        [f] => Ok((f, 1)),
        [f, Expr::Num(k)] => {
            let k = k.to_usize().ok_or_else(|| ParseError::Eval("derivative order out of range".into()))?;
            Ok((f, k))
        }
        _ => Err(ParseError::Eval("d takes an expression and an optional integer order".into())),
    }
}

/// Parses the scalar grammar; the canonical printed form parses back to the
/// same element.
pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    parse_expr(src)?.eval_scalar()
}

impl std::str::FromStr for Scalar {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Scalar, ParseError> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{rat, Exp};

    #[test]
    fn round_trip_canonical_forms() {
        for src in ["0", "-1/2*u0", "Q0^{-3/2}*Q1", "u0*v0^-2 - 3/2*c*v0^-4*v1^2", "x^2*u0 + 7", "ga1*ep^-1*v1"] {
            let s = parse_scalar(src).unwrap();
            let printed = s.to_string();
            assert_eq!(parse_scalar(&printed).unwrap(), s, "{src} -> {printed}");
        }
    }

    #[test]
    fn derivative_call() {
        let s = parse_scalar("d(u0*u0, 2)").unwrap();
        assert_eq!(s, parse_scalar("2*u1^2 + 2*u0*u2").unwrap());
        let h = parse_scalar("Q0^{1/2}").unwrap().d_total();
        assert_eq!(h, parse_scalar("1/2*Q0^{-1/2}*Q1").unwrap());
    }

    #[test]
    fn precedence() {
        let s = parse_scalar("-v0^2").unwrap();
        assert_eq!(s, Scalar::var_pow(Var::Jet(Field::V, 0), Exp::int(2)).scale(&rat(-1, 1)));
        assert_eq!(parse_scalar("2/3*u0").unwrap(), Scalar::jet(Field::U, 0).scale(&rat(2, 3)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_scalar("u0 +"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(parse_scalar("foo"), Err(ParseError::UnknownIdentifier(_))));
        assert!(parse_scalar("1/(u0+v0)").is_err());
        assert!(parse_scalar("1.5").is_err());
    }
}
