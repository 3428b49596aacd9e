//! Expression parser for the toolkit's input grammar.
//!
//! ```text
//! expr   := '-'? term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' uint)?
//! base   := uint | 'i' | ident | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `conj(e)` applies the conjugation involution to the parsed subexpression.
//! `/` is exact division by a nonzero constant subexpression (this also covers
//! rational literals such as `1/2`). Identifiers resolve against the arena:
//! `z1..zN`, `w` as an alias for `zN`, and auxiliary names.

use crate::arena::VariableArena;
use crate::num::GaussianRational;
use crate::poly::Polynomial;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at offset {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("exponent at offset {pos} is not a nonnegative integer")]
    BadExponent { pos: usize },
    #[error("division by zero at offset {pos}")]
    DivisionByZero { pos: usize },
    #[error("division by non-constant expression at offset {pos}")]
    NonConstantDivisor { pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    arena: Arc<VariableArena>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(ParseError::Syntax {
                pos: self.pos,
                msg: format!("expected `{}`", c as char),
            }),
        }
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::BadExponent { pos: start });
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<u32>().map_err(|_| ParseError::BadExponent { pos: start })
    }

    fn ident(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let mut end = start;
        while end < self.src.len()
            && (self.src[end].is_ascii_alphanumeric() || self.src[end] == b'_')
        {
            end += 1;
        }
        if end == start || self.src[start].is_ascii_digit() {
            return None;
        }
        self.pos = end;
        Some((start, String::from_utf8_lossy(&self.src[start..end]).into_owned()))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.bump();
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.bump();
                    let d = self.factor()?;
                    let c = d
                        .as_constant()
                        .ok_or(ParseError::NonConstantDivisor { pos: at })?;
                    let inv = c.inv().ok_or(ParseError::DivisionByZero { pos: at })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint_big()?;
                Ok(Polynomial::constant(&self.arena, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let (at, name) = self.ident().ok_or(ParseError::Syntax {
                    pos: self.pos,
                    msg: "expected identifier".into(),
                })?;
                if name == "i" {
                    return Ok(Polynomial::constant(&self.arena, GaussianRational::i()));
                }
                if name == "conj" {
                    self.expect(b'(')?;
                    let e = self.expr()?;
                    self.expect(b')')?;
                    return Ok(e.conjugate_swap());
                }
                match self.arena.lookup(&name) {
                    Some(v) => Ok(Polynomial::var(&self.arena, v)),
                    None => Err(ParseError::UnknownVariable { pos: at, name }),
                }
            }
            other => Err(ParseError::Syntax {
                pos: self.pos,
                msg: match other {
                    Some(c) => format!("unexpected `{}`", c as char),
                    None => "unexpected end of input".into(),
                },
            }),
        }
    }

    fn uint_big(&mut self) -> Result<GaussianRational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let n: num_bigint::BigInt = s.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            msg: "bad integer literal".into(),
        })?;
        Ok(GaussianRational::from_rational(num_rational::BigRational::from_integer(n)))
    }
}

/// Parse `text` into a canonical polynomial over `arena`.
///
/// ```
/// use crlab_core::{parse_expression, print_expr, VariableArena};
///
/// let arena = VariableArena::complex_space(2);
/// let rho = parse_expression("z2 + conj(z2) + z1*conj(z1)", &arena).unwrap();
/// assert!(rho.is_real());
/// assert_eq!(parse_expression(&print_expr(&rho), &arena).unwrap(), rho);
/// ```
pub fn parse_expression(
    text: &str,
    arena: &Arc<VariableArena>,
) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, arena: arena.clone() };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax {
            pos: p.pos,
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}

/// Split on top-level commas (commas inside parentheses do not split).
pub fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur.trim().to_string());
    out
}
