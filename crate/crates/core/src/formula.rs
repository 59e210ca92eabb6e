//! Quantifier-free formulas over polynomial constraints: parsing,
//! structural access, and exact evaluation.
//!
//! Concrete syntax: atoms are `<poly> REL <poly>` with REL one of
//! `=  !=  <  <=  >  >=`; connectives are `~` (negation, binds tightest),
//! `/\` (conjunction), and `\/` (disjunction, binds loosest); parentheses
//! group either formulas or polynomial subexpressions.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::poly::{parse_polynomial, Polynomial};
use crate::realalg::{sign_at, RealAlg, Sign};
use crate::vars::VariableOrder;
use crate::{Error, Result};

/// Relation of a polynomial against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    pub fn holds(self, s: Sign) -> bool {
        match self {
            Rel::Lt => s == Sign::Neg,
            Rel::Le => s != Sign::Pos,
            Rel::Eq => s == Sign::Zero,
            Rel::Ne => s != Sign::Zero,
            Rel::Ge => s != Sign::Neg,
            Rel::Gt => s == Sign::Pos,
        }
    }

    fn text(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "/=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// A quantifier-free formula in negation-capable form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    /// `poly REL 0`.
    Atom { poly: Polynomial, rel: Rel },
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    /// All atoms, in textual order.
    pub fn atoms(&self) -> Vec<(&Polynomial, Rel)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(&'a Polynomial, Rel)>) {
        match self {
            Formula::Atom { poly, rel } => out.push((poly, *rel)),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_atoms(out);
                }
            }
            Formula::Not(f) => f.collect_atoms(out),
        }
    }

    /// Distinct nonzero atom polynomials, sign-normalized, in canonical
    /// order — the input set for a decomposition.
    pub fn input_polynomials(&self) -> Vec<Polynomial> {
        let mut set = std::collections::BTreeSet::new();
        for (p, _) in self.atoms() {
            if !p.is_zero() {
                set.insert(p.sign_normalize());
            }
        }
        set.into_iter().collect()
    }

    /// Top-level conjuncts (flattening nested conjunctions).
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_conjuncts(&mut out);
        out
    }

    fn collect_conjuncts<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::And(fs) => {
                for f in fs {
                    f.collect_conjuncts(out);
                }
            }
            other => out.push(other),
        }
    }

    /// Polynomials of the top-level equation conjuncts, in textual order
    /// with exact duplicates removed. These are the explicit equational
    /// constraints available for designation.
    pub fn explicit_ecs(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for c in self.conjuncts() {
            if let Formula::Atom { poly, rel: Rel::Eq } = c {
                if !poly.is_zero() && !out.contains(poly) {
                    out.push(poly.clone());
                }
            }
        }
        out
    }

    /// Exact truth value at a point with real algebraic coordinates.
    pub fn eval_at(&self, coords: &[RealAlg]) -> Result<bool> {
        Ok(match self {
            Formula::Atom { poly, rel } => rel.holds(sign_at(poly, coords)?),
            Formula::And(fs) => {
                let mut all = true;
                for f in fs {
                    if !f.eval_at(coords)? {
                        all = false;
                        break;
                    }
                }
                all
            }
            Formula::Or(fs) => {
                let mut any = false;
                for f in fs {
                    if f.eval_at(coords)? {
                        any = true;
                        break;
                    }
                }
                any
            }
            Formula::Not(f) => !f.eval_at(coords)?,
        })
    }

    /// Exact truth value at a rational point covering all variables.
    pub fn eval_rational(&self, vals: &[BigRational]) -> bool {
        match self {
            Formula::Atom { poly, rel } => {
                let v = poly.eval_rational(vals);
                let s = if v.is_zero() {
                    Sign::Zero
                } else if v.is_positive() {
                    Sign::Pos
                } else {
                    Sign::Neg
                };
                rel.holds(s)
            }
            Formula::And(fs) => fs.iter().all(|f| f.eval_rational(vals)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval_rational(vals)),
            Formula::Not(f) => !f.eval_rational(vals),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(fm: &Formula) -> u8 {
            match fm {
                Formula::Atom { .. } | Formula::Not(_) => 3,
                Formula::And(_) => 2,
                Formula::Or(_) => 1,
            }
        }
        fn write_sub(fm: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if prec(fm) < min {
                write!(f, "(")?;
                write!(f, "{fm}")?;
                write!(f, ")")
            } else {
                write!(f, "{fm}")
            }
        }
        match self {
            Formula::Atom { poly, rel } => write!(f, "{} {} 0", poly, rel.text()),
            Formula::And(fs) => {
                for (i, sub) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " /\\ ")?;
                    }
                    write_sub(sub, 2, f)?;
                }
                Ok(())
            }
            Formula::Or(fs) => {
                for (i, sub) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " \\/ ")?;
                    }
                    write_sub(sub, 1, f)?;
                }
                Ok(())
            }
            Formula::Not(inner) => {
                write!(f, "~")?;
                match **inner {
                    Formula::Atom { .. } | Formula::Not(_) => write!(f, "{inner}"),
                    _ => write!(f, "({inner})"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    And,
    Or,
    Not,
    Rel(Rel),
    Chunk,
}

#[derive(Debug, Clone, Copy)]
struct Token {
    kind: Tok,
    start: usize,
    end: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let (kind, len) = match c {
            b'(' => (Tok::LParen, 1),
            b')' => (Tok::RParen, 1),
            b'~' => (Tok::Not, 1),
            b'/' if bytes.get(i + 1) == Some(&b'\\') => (Tok::And, 2),
            b'\\' if bytes.get(i + 1) == Some(&b'/') => (Tok::Or, 2),
            b'/' if bytes.get(i + 1) == Some(&b'=') => (Tok::Rel(Rel::Ne), 2),
            b'!' if bytes.get(i + 1) == Some(&b'=') => (Tok::Rel(Rel::Ne), 2),
            b'<' if bytes.get(i + 1) == Some(&b'=') => (Tok::Rel(Rel::Le), 2),
            b'>' if bytes.get(i + 1) == Some(&b'=') => (Tok::Rel(Rel::Ge), 2),
            b'<' => (Tok::Rel(Rel::Lt), 1),
            b'>' => (Tok::Rel(Rel::Gt), 1),
            b'=' => (Tok::Rel(Rel::Eq), 1),
            b'+' | b'-' | b'*' | b'^' => (Tok::Chunk, 1),
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let mut j = i + 1;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                (Tok::Chunk, j - i)
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character '{}' at byte {} in formula",
                    other as char, i
                )))
            }
        };
        toks.push(Token { kind, start: i, end: i + len });
        i += len;
    }
    Ok(toks)
}

struct FormulaParser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    order: &'a Arc<VariableOrder>,
}

impl<'a> FormulaParser<'a> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.kind)
    }

    fn parse_or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.parse_and()?];
        while self.peek() == Some(Tok::Or) {
            self.pos += 1;
            parts.push(self.parse_and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn parse_and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.parse_not()?];
        while self.peek() == Some(Tok::And) {
            self.pos += 1;
            parts.push(self.parse_not()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn parse_not(&mut self) -> Result<Formula> {
        if self.peek() == Some(Tok::Not) {
            self.pos += 1;
            Ok(Formula::Not(Box::new(self.parse_not()?)))
        } else {
            self.parse_primary()
        }
    }

    /// Index of the matching `)` for the `(` at `open`.
    fn matching_paren(&self, open: usize) -> Result<usize> {
        let mut depth = 0usize;
        for (j, t) in self.toks.iter().enumerate().skip(open) {
            match t.kind {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(j);
                    }
                }
                _ => {}
            }
        }
        Err(Error::Parse("unbalanced '(' in formula".into()))
    }

    fn parse_primary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::LParen) => {
                let close = self.matching_paren(self.pos)?;
                // A parenthesized span is a formula iff it contains a
                // relation; otherwise the parens belong to a polynomial.
                let has_rel = self.toks[self.pos + 1..close]
                    .iter()
                    .any(|t| matches!(t.kind, Tok::Rel(_)));
                if has_rel {
                    self.pos += 1;
                    let inner = self.parse_or()?;
                    if self.peek() != Some(Tok::RParen) {
                        return Err(Error::Parse("expected ')' in formula".into()));
                    }
                    self.pos += 1;
                    Ok(inner)
                } else {
                    self.parse_atom()
                }
            }
            Some(Tok::Chunk) => self.parse_atom(),
            _ => Err(Error::Parse("expected an atom or '(' in formula".into())),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula> {
        let start = self.pos;
        // Left side: up to a depth-0 relation.
        let mut depth = 0usize;
        let mut rel_at = None;
        let mut j = start;
        while j < self.toks.len() {
            match self.toks[j].kind {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                Tok::Rel(r) if depth == 0 => {
                    rel_at = Some((j, r));
                    break;
                }
                Tok::And | Tok::Or | Tok::Not if depth == 0 => break,
                _ => {}
            }
            j += 1;
        }
        let Some((rel_pos, rel)) = rel_at else {
            return Err(Error::Parse("expected a relation (=, !=, <, <=, >, >=) in atom".into()));
        };
        if rel_pos == start {
            return Err(Error::Parse("relation with empty left side".into()));
        }
        // Right side: up to a depth-0 connective, ')', or end.
        let mut k = rel_pos + 1;
        depth = 0;
        while k < self.toks.len() {
            match self.toks[k].kind {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    if depth == 0 {
                        break;
                    }
                    depth -= 1;
                }
                Tok::Rel(_) if depth == 0 => {
                    return Err(Error::Parse("chained relations are not supported".into()));
                }
                Tok::And | Tok::Or | Tok::Not if depth == 0 => break,
                _ => {}
            }
            k += 1;
        }
        if k == rel_pos + 1 {
            return Err(Error::Parse("relation with empty right side".into()));
        }
        let lhs_src = &self.src[self.toks[start].start..self.toks[rel_pos - 1].end];
        let rhs_src = &self.src[self.toks[rel_pos + 1].start..self.toks[k - 1].end];
        let lhs = parse_polynomial(lhs_src, self.order)?;
        let rhs = parse_polynomial(rhs_src, self.order)?;
        self.pos = k;
        Ok(Formula::Atom { poly: lhs.sub(&rhs), rel })
    }
}

/// Parses a formula over the given variable order.
pub fn parse_formula(src: &str, order: &Arc<VariableOrder>) -> Result<Formula> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty formula".into()));
    }
    let mut p = FormulaParser { src, toks, pos: 0, order };
    let f = p.parse_or()?;
    if p.pos != p.toks.len() {
        let t = p.toks[p.pos];
        return Err(Error::Parse(format!(
            "unexpected trailing input at byte {}: '{}'",
            t.start,
            &src[t.start..t.end]
        )));
    }
    Ok(f)
}
