//! Recursive-descent parser for polynomial text.
//!
//! Grammar (whitespace free between tokens):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*' factor) | factor)*        (juxtaposition multiplies)
//! factor := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! `IDENT` is a maximal alphanumeric run starting with a letter and must name
//! a variable of the supplied order. Accepts both `4y^2` and `4*y^2`; the
//! printer always emits the explicit `*` form, and printing then reparsing is
//! the identity.

use std::sync::Arc;

use num_bigint::BigInt;

use super::Polynomial;
use crate::vars::VariableOrder;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().map_err(|_| {
                    Error::Parse(format!("bad integer at byte {start}"))
                })?;
                out.push((start, Tok::Int(n)));
            }
            _ if b.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} at byte {i}",
                    b as char
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    order: &'a Arc<VariableOrder>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or_else(|| self.toks.last().map(|(p, _)| p + 1).unwrap_or(0))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut neg = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                // Juxtaposition: `4y^2`, `2(x+1)`.
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = acc.mul(&f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let at = self.here();
            match self.next() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| {
                        Error::Parse(format!("exponent out of range at byte {at}"))
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse(format!("expected integer exponent at byte {at}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        match self.next() {
            Some(Tok::Int(n)) => Ok(Polynomial::constant(self.order, n)),
            Some(Tok::Ident(name)) => match self.order.index_of(&name) {
                Some(v) => Ok(Polynomial::var(self.order, v)),
                None => Err(Error::Parse(format!(
                    "unknown variable {name:?} at byte {at} (order: {})",
                    self.order.names().join(", ")
                ))),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                let at2 = self.here();
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse(format!("expected ')' at byte {at2}"))),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?} at byte {at}"))),
            None => Err(Error::Parse(format!("unexpected end of input at byte {at}"))),
        }
    }
}

/// Parses polynomial text over the given variable order.
pub fn parse_polynomial(s: &str, order: &Arc<VariableOrder>) -> Result<Polynomial> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0, order };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at byte {}", p.here())));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_standard_forms() {
        let ord = VariableOrder::new(["v", "u", "x", "y", "z"]).unwrap();
        let a = parse_polynomial("x - y + z^2", &ord).unwrap();
        assert_eq!(a.to_string(), "z^2 - y + x");
        let b = parse_polynomial("z^2 - u^2 + v^2 - 1", &ord).unwrap();
        assert_eq!(b.deg_in(4), 2);
        assert_eq!(b.deg_in(1), 2);
        // Optional `*` and juxtaposition.
        let c1 = parse_polynomial("4y^2", &ord).unwrap();
        let c2 = parse_polynomial("4*y^2", &ord).unwrap();
        assert_eq!(c1, c2);
        // Parenthesized powers and products.
        let d = parse_polynomial("(x - 1)(x + 1)", &ord).unwrap();
        assert_eq!(d, parse_polynomial("x^2 - 1", &ord).unwrap());
        let e = parse_polynomial("(u^2 - v^2 + x + 1)^2", &ord).unwrap();
        assert_eq!(e.total_degree(), 4);
        // Leading unary minus.
        let f = parse_polynomial("-u^2 + v^2 - x + y - 1", &ord).unwrap();
        assert_eq!(f.neg().to_string(), "u^2 - v^2 - y + x + 1");
    }

    #[test]
    fn rejects_bad_input() {
        let ord = VariableOrder::new(["x"]).unwrap();
        assert!(parse_polynomial("", &ord).is_err());
        assert!(parse_polynomial("x +", &ord).is_err());
        assert!(parse_polynomial("w + 1", &ord).is_err());
        assert!(parse_polynomial("x ^ y", &ord).is_err());
        assert!(parse_polynomial("(x + 1", &ord).is_err());
        assert!(parse_polynomial("x # 1", &ord).is_err());
    }
}
