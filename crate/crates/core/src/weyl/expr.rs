//! Expressions over positions `x_j` and momenta `p_j`, lowered to
//! normal-ordered [`WeylOp`]s with `p_j = −i ∂_j`.
//!
//! Grammar (variables are 1-based, as in `x1`, `p2`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := number | number 'i' | 'i' | 'x'N | 'p'N | 'd'N | '(' expr ')'
//! ```

use num_complex::Complex64 as C64;

use super::WeylOp;
use crate::error::{PbError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum XpExpr {
    Scalar(C64),
    X(usize),
    P(usize),
    /// Plain derivative `∂_j`.
    D(usize),
    Add(Box<XpExpr>, Box<XpExpr>),
    Mul(Box<XpExpr>, Box<XpExpr>),
    Neg(Box<XpExpr>),
    Pow(Box<XpExpr>, u32),
}

impl XpExpr {
    pub fn to_weyl(&self, nvars: usize) -> Result<WeylOp> {
        let var = |j: usize| {
            if j >= nvars {
                Err(PbError::IndexOutOfRange { index: j, nvars })
            } else {
                Ok(j)
            }
        };
        Ok(match self {
            XpExpr::Scalar(c) => WeylOp::scalar(nvars, *c),
            XpExpr::X(j) => WeylOp::x(nvars, var(*j)?),
            XpExpr::P(j) => WeylOp::p(nvars, var(*j)?),
            XpExpr::D(j) => WeylOp::d(nvars, var(*j)?),
            XpExpr::Add(a, b) => a.to_weyl(nvars)?.add(&b.to_weyl(nvars)?)?,
            XpExpr::Mul(a, b) => a.to_weyl(nvars)?.compose(&b.to_weyl(nvars)?)?,
            XpExpr::Neg(a) => a.to_weyl(nvars)?.scale(C64::new(-1.0, 0.0)),
            XpExpr::Pow(a, k) => a.to_weyl(nvars)?.pow(*k)?,
        })
    }
}

/// Parses an `x`/`p` expression and normal-orders it.
pub fn weyl_from_xp(source: &str, nvars: usize) -> Result<WeylOp> {
    parse_xp(source)?.to_weyl(nvars)
}

pub fn parse_xp(source: &str) -> Result<XpExpr> {
    let mut p = Parser { src: source.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PbError {
        PbError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<XpExpr> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                XpExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                XpExpr::Add(Box::new(lhs), Box::new(XpExpr::Neg(Box::new(rhs))))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<XpExpr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = XpExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<XpExpr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(XpExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<XpExpr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer().ok_or_else(|| self.error("expected integer exponent"))?;
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(XpExpr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn atom(&mut self) -> Result<XpExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c @ (b'x' | b'p' | b'd')) => {
                self.pos += 1;
                let j = self.integer().ok_or_else(|| self.error("expected variable number after symbol"))?;
                if j == 0 {
                    return Err(self.error("variables are numbered from 1"));
                }
                Ok(match c {
                    b'x' => XpExpr::X(j - 1),
                    b'p' => XpExpr::P(j - 1),
                    _ => XpExpr::D(j - 1),
                })
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(XpExpr::Scalar(C64::new(0.0, 1.0)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let value = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    Ok(XpExpr::Scalar(C64::new(0.0, value)))
                } else {
                    Ok(XpExpr::Scalar(C64::new(value, 0.0)))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let bytes = self.src;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let text = std::str::from_utf8(&bytes[start..end]).map_err(|_| self.error("invalid number"))?;
        let value = text.parse().map_err(|_| self.error("invalid number"))?;
        self.pos = end;
        Ok(value)
    }
}
