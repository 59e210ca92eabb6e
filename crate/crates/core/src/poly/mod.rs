//! Sparse multivariate polynomials with exact big-integer coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by monomial under a graded order
//! (total degree first, then exponents compared from the greatest variable
//! down), so iteration order — and therefore printing, hashing-free equality,
//! and set ordering — is canonical and deterministic.

mod gcd;
mod parse;
mod resultant;

pub use gcd::{content_in, exact_div, gcd, gcd_many, squarefree_basis, squarefree_part};
pub use parse::parse_polynomial;
pub use resultant::{discriminant, resultant, resultant_subresultant, resultant_sylvester};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::vars::{Var, VariableOrder};
use crate::{Error, Result};

/// Exponent vector; `exps[v]` is the power of variable `v`.
///
/// Ordered by total degree, ties broken by comparing exponents from the
/// greatest variable downward (larger exponent on a greater variable wins).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    fn unit(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    /// Exponent of each variable, indexed by variable.
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Componentwise division; `None` if any exponent would go negative.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(&other.exps) {
            if a < b {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial { exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.iter().rev().cmp(other.exps.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with `BigInt` coefficients over a shared
/// [`VariableOrder`]. The term map never stores zero coefficients.
#[derive(Debug, Clone)]
pub struct Polynomial {
    order: Arc<VariableOrder>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Ord for Polynomial {
    /// Canonical total order used for deterministic polynomial sets: first by
    /// main variable (constants first), then by degree in the main variable,
    /// then by the term sequences compared from the greatest term down.
    fn cmp(&self, other: &Self) -> Ordering {
        let mv = |p: &Polynomial| p.mvar().map(|v| v as isize).unwrap_or(-1);
        mv(self)
            .cmp(&mv(other))
            .then_with(|| {
                let d = |p: &Polynomial| p.mvar().map(|v| p.deg_in(v)).unwrap_or(0);
                d(self).cmp(&d(other))
            })
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero(order: &Arc<VariableOrder>) -> Self {
        Polynomial { order: order.clone(), terms: BTreeMap::new() }
    }

    /// The terms, in canonical (ascending monomial) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// The constant one.
    pub fn one(order: &Arc<VariableOrder>) -> Self {
        Self::constant(order, BigInt::one())
    }

    /// A constant polynomial.
    pub fn constant(order: &Arc<VariableOrder>, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(order.len()), c);
        }
        Polynomial { order: order.clone(), terms }
    }

    /// The polynomial `x_v`.
    pub fn var(order: &Arc<VariableOrder>, v: Var) -> Self {
        let mut m = Monomial::unit(order.len());
        m.exps[v] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(m, BigInt::one());
        Polynomial { order: order.clone(), terms }
    }

    /// Builds a polynomial from explicit `(exponents, coefficient)` terms.
    pub fn from_terms<I>(order: &Arc<VariableOrder>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Polynomial::zero(order);
        for (exps, c) in terms {
            assert_eq!(exps.len(), order.len(), "exponent vector arity mismatch");
            p.add_term(Monomial { exps }, c);
        }
        p
    }

    /// The shared variable order.
    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    /// The value of a constant polynomial (zero included); `None` otherwise.
    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree (0 for constants and zero).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Degree in variable `v` (0 if absent).
    pub fn deg_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exps[v]).max().unwrap_or(0)
    }

    /// True if `v` occurs with positive degree.
    pub fn occurs(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exps[v] > 0)
    }

    /// The greatest variable occurring, or `None` for constants.
    pub fn mvar(&self) -> Option<Var> {
        (0..self.order.len()).rev().find(|&v| self.occurs(v))
    }

    /// All variables occurring, ascending.
    pub fn vars(&self) -> Vec<Var> {
        (0..self.order.len()).filter(|&v| self.occurs(v)).collect()
    }

    /// Coefficient of the greatest monomial (sign-normalization pivot).
    /// Zero for the zero polynomial.
    pub fn leading_coeff_global(&self) -> BigInt {
        self.terms
            .last_key_value()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            order: self.order.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.order, other.order);
        let mut out = Polynomial::zero(&self.order);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.order);
        }
        Polynomial {
            order: self.order.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one(&self.order);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero(&self.order);
        for (m, c) in &self.terms {
            let e = m.exps[v];
            if e > 0 {
                let mut m2 = m.clone();
                m2.exps[v] = e - 1;
                out.add_term(m2, c * BigInt::from(e));
            }
        }
        out
    }

    /// Dense coefficient list with respect to `v`: entry `i` is the
    /// coefficient of `v^i`, a polynomial not involving `v`. Empty for zero.
    pub fn coeffs_in(&self, v: Var) -> Vec<Polynomial> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.deg_in(v) as usize;
        let mut out = vec![Polynomial::zero(&self.order); d + 1];
        for (m, c) in &self.terms {
            let e = m.exps[v] as usize;
            let mut m2 = m.clone();
            m2.exps[v] = 0;
            out[e].add_term(m2, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`]: `sum coeffs[i] * v^i`.
    pub fn from_coeffs_in(order: &Arc<VariableOrder>, v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(order);
        for (i, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                debug_assert_eq!(m.exps[v], 0);
                let mut m2 = m.clone();
                m2.exps[v] = i as u32;
                out.add_term(m2, k.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn lc_in(&self, v: Var) -> Polynomial {
        self.coeffs_in(v).into_iter().last().unwrap_or_else(|| Polynomial::zero(&self.order))
    }

    /// Positive gcd of all integer coefficients (0 for the zero polynomial).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides all coefficients by `d` exactly; `None` if any division is inexact.
    pub fn div_int_exact(&self, d: &BigInt) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(m.clone(), q);
        }
        Some(Polynomial { order: self.order.clone(), terms })
    }

    /// Flips the sign if the coefficient of the greatest monomial is negative,
    /// so the result has a positive leading coefficient under the term order.
    pub fn sign_normalize(&self) -> Polynomial {
        if self.leading_coeff_global().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Strips the integer content and sign-normalizes. Zero stays zero.
    pub fn int_primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.int_content();
        self.div_int_exact(&c).unwrap().sign_normalize()
    }

    /// Evaluates at a full rational point (`vals[v]` for every occurring `v`).
    pub fn eval_rational(&self, vals: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from(c.clone());
            for (v, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    assert!(v < vals.len(), "evaluation point misses variable");
                    t *= pow_rational(&vals[v], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes exact rational values for the given variables and clears
    /// denominators by a positive scalar, returning an integer polynomial in
    /// the remaining variables with the same sign behavior and zero set.
    pub fn substitute_rational(&self, assign: &[(Var, BigRational)]) -> Polynomial {
        if assign.is_empty() {
            return self.clone();
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = BigRational::from(c.clone());
            let mut m2 = m.clone();
            for (v, val) in assign {
                let e = m2.exps[*v];
                if e > 0 {
                    coeff *= pow_rational(val, e);
                    m2.exps[*v] = 0;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let entry = acc.entry(m2).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        acc.retain(|_, c| !c.is_zero());
        // Clear denominators with one positive multiplier.
        let mut lcm = BigInt::one();
        for c in acc.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in acc {
            let scaled = c * BigRational::from(lcm.clone());
            debug_assert!(scaled.is_integer());
            terms.insert(m, scaled.to_integer());
        }
        Polynomial { order: self.order.clone(), terms }
    }

    /// Re-expresses the polynomial over `new_order`, which must contain every
    /// occurring variable name.
    pub fn map_order(&self, new_order: &Arc<VariableOrder>) -> Result<Polynomial> {
        let map: Vec<Option<Var>> = (0..self.order.len())
            .map(|v| new_order.index_of(self.order.name(v)))
            .collect();
        let mut out = Polynomial::zero(new_order);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; new_order.len()];
            for (v, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    let nv = map[v].ok_or_else(|| {
                        Error::Internal(format!(
                            "variable {} missing from target order",
                            self.order.name(v)
                        ))
                    })?;
                    exps[nv] = e;
                }
            }
            out.add_term(Monomial { exps }, c.clone());
        }
        Ok(out)
    }
}

pub(crate) fn pow_rational(b: &BigRational, e: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= b;
    }
    out
}

impl fmt::Display for Polynomial {
    /// Canonical text: terms from the greatest monomial down, explicit `*`
    /// between all factors, `^` for powers, greater variables first within a
    /// term. Examples: `u^2 - v^2 + x - y + 1`, `-2*y^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_unit() {
                factors.push(mag.to_string());
            }
            for v in (0..m.exps.len()).rev() {
                let e = m.exps[v];
                if e == 1 {
                    factors.push(self.order.name(v).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.order.name(v), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
