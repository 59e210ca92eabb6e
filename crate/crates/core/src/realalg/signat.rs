//! Exact sign evaluation of multivariate integer polynomials at points with
//! real algebraic coordinates, and isolation of the roots a polynomial set
//! cuts into a one-dimensional fiber over such a point.
//!
//! The sign algorithm first substitutes all rational coordinates exactly,
//! then tries closed-interval arithmetic over the isolating intervals of the
//! algebraic coordinates. When intervals cannot separate the value from
//! zero, it builds a univariate eliminant for the value by a resultant
//! chain: `E0 = t - q`, then one resultant per algebraic coordinate against
//! that coordinate's defining polynomial. The exact value is a root of the
//! final eliminant, so either zero is not among the eliminant's roots (and
//! refinement must eventually resolve the sign), or a Sturm-count
//! certificate pins the value to the eliminant's root at zero.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::unipoly::{sign_variations, AlgRoot, UniPoly};
use super::{isolate_roots, RealAlg};
use crate::poly::{exact_div, gcd, resultant, Polynomial};
use crate::vars::Var;
use crate::{Error, Result};

/// Sign of an exact value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_int(s: i32) -> Sign {
        match s.cmp(&0) {
            std::cmp::Ordering::Less => Sign::Neg,
            std::cmp::Ordering::Equal => Sign::Zero,
            std::cmp::Ordering::Greater => Sign::Pos,
        }
    }

    pub fn of_bigint(v: &BigInt) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// Closed rational interval used for range evaluation.
#[derive(Debug, Clone)]
struct Iv {
    lo: BigRational,
    hi: BigRational,
}

impl Iv {
    fn point(q: BigRational) -> Iv {
        Iv { lo: q.clone(), hi: q }
    }

    fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Iv) -> Iv {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = cands[0].clone();
        let mut hi = cands[0].clone();
        for c in &cands[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Iv { lo, hi }
    }

    /// `self^e`, tightened for even exponents when the interval straddles 0.
    fn pow(&self, e: u32) -> Iv {
        if e == 0 {
            return Iv::point(BigRational::from(BigInt::from(1)));
        }
        let zero = BigRational::zero();
        let plo = crate::poly::pow_rational(&self.lo, e);
        let phi = crate::poly::pow_rational(&self.hi, e);
        if e % 2 == 1 {
            Iv { lo: plo, hi: phi }
        } else if self.lo >= zero {
            Iv { lo: plo, hi: phi }
        } else if self.hi <= zero {
            Iv { lo: phi, hi: plo }
        } else {
            Iv { lo: zero, hi: plo.max(phi) }
        }
    }
}

/// Range of `q` over the box given by the algebraic coordinates' isolating
/// intervals. Every variable of `q` must have a box entry.
fn interval_eval(q: &Polynomial, boxes: &BTreeMap<Var, AlgRoot>) -> Iv {
    let mut acc = Iv::point(BigRational::zero());
    for (m, c) in q.terms() {
        let mut t = Iv::point(BigRational::from(c.clone()));
        for (v, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                let b = boxes.get(&v).expect("box for every variable");
                let iv = Iv { lo: b.lo().clone(), hi: b.hi().clone() };
                t = t.mul(&iv.pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Number of roots of the chain's squarefree base polynomial in the closed
/// interval `[a, b]`. Endpoints may be roots: with zero entries skipped,
/// `V(a) - V(b)` counts roots in the half-open `(a, b]`, and a root at `a`
/// is added back explicitly.
fn count_roots_closed(chain: &[UniPoly], a: &BigRational, b: &BigRational) -> usize {
    if a > b {
        return 0;
    }
    let at_a = (chain[0].sign_at(a) == 0) as usize;
    if a == b {
        return at_a;
    }
    at_a + sign_variations(chain, a) - sign_variations(chain, b)
}

/// Splits coordinates into exact rational substitutions and boxes for the
/// algebraic ones.
fn split_coords(coords: &[RealAlg]) -> (Vec<(Var, BigRational)>, BTreeMap<Var, AlgRoot>) {
    let mut rat = Vec::new();
    let mut boxes = BTreeMap::new();
    for (v, c) in coords.iter().enumerate() {
        match c {
            RealAlg::Rational(q) => rat.push((v, q.clone())),
            RealAlg::Algebraic(a) => {
                boxes.insert(v, a.clone());
            }
        }
    }
    (rat, boxes)
}

const REFINE_CAP: usize = 10_000;

/// Exact sign of `p` at the point `coords` (coordinate `i` is the value of
/// variable `i`). Every variable occurring in `p` must be covered.
pub fn sign_at(p: &Polynomial, coords: &[RealAlg]) -> Result<Sign> {
    if let Some(&v) = p.vars().iter().find(|&&v| v >= coords.len()) {
        return Err(Error::Invalid(format!(
            "sample point does not cover variable {}",
            p.order().name(v)
        )));
    }
    let (rat, mut boxes) = split_coords(coords);
    let q = p.substitute_rational(&rat);
    if q.is_zero() {
        return Ok(Sign::Zero);
    }
    if let Some(c) = q.constant_value() {
        return Ok(Sign::of_bigint(&c));
    }
    // Plain interval refinement often settles the sign cheaply.
    for _ in 0..8 {
        let iv = interval_eval(&q, &boxes);
        if iv.lo.is_positive() {
            return Ok(Sign::Pos);
        }
        if iv.hi.is_negative() {
            return Ok(Sign::Neg);
        }
        for b in boxes.values_mut() {
            b.refine_step();
        }
    }
    // Eliminant for the exact value: a fresh greatest variable t carries the
    // value, and each algebraic coordinate is eliminated by a resultant
    // against its defining polynomial.
    let mut aux = String::from("@t");
    let mut n = 0usize;
    while q.order().index_of(&aux).is_some() {
        n += 1;
        aux = format!("@t{n}");
    }
    let ext = q.order().extended(&aux)?;
    let tvar: Var = ext.len() - 1;
    let q_ext = q.map_order(&ext)?;
    let e0 = Polynomial::var(&ext, tvar).sub(&q_ext);
    let e_final = 'restart: loop {
        let mut e_cur = e0.clone();
        let var_list: Vec<Var> = boxes.keys().copied().collect();
        for v in var_list {
            if !e_cur.occurs(v) {
                continue;
            }
            let d_ext = boxes[&v].poly().to_poly(&ext, v);
            let r = resultant(&d_ext, &e_cur, v)?;
            if r.is_zero() {
                // Degenerate branch: the defining polynomial shares a factor
                // with the eliminant. Split the defining polynomial and keep
                // the factor whose root lies in the isolating interval.
                let g = gcd(&d_ext, &e_cur);
                let g_uni = UniPoly::from_poly(&g, v).ok_or_else(|| {
                    Error::Internal("common factor with a defining polynomial is not univariate".into())
                })?;
                if g_uni.is_constant() {
                    return Err(Error::Internal("zero resultant without a common factor".into()));
                }
                let b = boxes.get_mut(&v).unwrap();
                let chain = g_uni.sturm_chain();
                let keep = if super::count_roots_between(&chain, b.lo(), b.hi()) >= 1 {
                    g_uni
                } else {
                    b.poly()
                        .exact_div(&g_uni)
                        .ok_or_else(|| Error::Internal("factor must divide defining polynomial".into()))?
                        .primitive()
                };
                b.set_poly(keep);
                continue 'restart;
            }
            e_cur = r;
        }
        break e_cur;
    };
    let e_uni = UniPoly::from_poly(&e_final, tvar)
        .ok_or_else(|| Error::Internal("eliminant is not univariate in the value variable".into()))?;
    if e_uni.is_zero() {
        return Err(Error::Internal("eliminant vanished identically".into()));
    }
    let e_sf = e_uni.squarefree_part();
    let zero = BigRational::zero();
    if e_sf.sign_at(&zero) != 0 {
        // The value is a root of the eliminant and zero is not, so the value
        // is nonzero: refinement must resolve the sign.
        for _ in 0..REFINE_CAP {
            let iv = interval_eval(&q, &boxes);
            if iv.lo.is_positive() {
                return Ok(Sign::Pos);
            }
            if iv.hi.is_negative() {
                return Ok(Sign::Neg);
            }
            for b in boxes.values_mut() {
                b.refine_step();
            }
        }
        return Err(Error::Internal("sign refinement did not converge".into()));
    }
    // Zero is a root of the squarefree eliminant. Certify equality: once the
    // value's range contains exactly one eliminant root, that root is both
    // the value and zero.
    let chain = e_sf.sturm_chain();
    for _ in 0..REFINE_CAP {
        let iv = interval_eval(&q, &boxes);
        if iv.lo.is_positive() {
            return Ok(Sign::Pos);
        }
        if iv.hi.is_negative() {
            return Ok(Sign::Neg);
        }
        if count_roots_closed(&chain, &iv.lo, &iv.hi) == 1 {
            return Ok(Sign::Zero);
        }
        for b in boxes.values_mut() {
            b.refine_step();
        }
    }
    Err(Error::Internal("zero certification did not converge".into()))
}

/// True when every coefficient of `p` with respect to `level_var` vanishes
/// at the point, i.e. the substituted univariate image is identically zero.
pub fn is_nullified(p: &Polynomial, coords: &[RealAlg], level_var: Var) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::Invalid("zero polynomial in a projection set".into()));
    }
    for c in p.coeffs_in(level_var) {
        if c.is_zero() {
            continue;
        }
        if sign_at(&c, coords)? != Sign::Zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A root of the fiber polynomials over a sample point, tagged with the
/// indices of the input polynomials that vanish there.
#[derive(Debug, Clone)]
pub struct TaggedRoot {
    pub value: RealAlg,
    pub origins: BTreeSet<usize>,
}

/// Isolates the real roots in `level_var` of each polynomial of `polys` over
/// the point `coords` (which fixes variables `0..level_var`), merges equal
/// roots across polynomials, and returns them in ascending order.
///
/// Callers must screen out nullified polynomials first (see
/// [`is_nullified`]); a polynomial whose image vanishes identically is an
/// internal error here.
pub fn substitute_roots(
    polys: &[Polynomial],
    coords: &[RealAlg],
    level_var: Var,
) -> Result<Vec<TaggedRoot>> {
    if level_var != coords.len() {
        return Err(Error::Invalid(format!(
            "root isolation at variable {level_var} needs exactly {level_var} fixed coordinates"
        )));
    }
    let mut out: Vec<TaggedRoot> = Vec::new();
    for (idx, p) in polys.iter().enumerate() {
        if let Some(&v) = p.vars().iter().find(|&&v| v > level_var) {
            return Err(Error::Invalid(format!(
                "polynomial {} exceeds the current level (variable {})",
                p,
                p.order().name(v)
            )));
        }
        let roots = fiber_roots(p, coords, level_var)?;
        for value in roots {
            match out.binary_search_by(|t| t.value.compare(&value)) {
                Ok(pos) => {
                    out[pos].origins.insert(idx);
                }
                Err(pos) => {
                    let mut origins = BTreeSet::new();
                    origins.insert(idx);
                    out.insert(pos, TaggedRoot { value, origins });
                }
            }
        }
    }
    Ok(out)
}

/// Roots of a single polynomial's image over the point, ascending.
fn fiber_roots(p: &Polynomial, coords: &[RealAlg], level_var: Var) -> Result<Vec<RealAlg>> {
    let (rat, boxes) = split_coords(coords);
    let q = p.substitute_rational(&rat);
    if q.is_zero() {
        return Err(Error::Internal("nullified polynomial reached root isolation".into()));
    }
    if !q.occurs(level_var) {
        // Constant image in the level variable: no roots unless it vanishes
        // everywhere, which the nullification screen must have caught.
        if q.is_constant() {
            return Ok(Vec::new());
        }
        return match sign_at(&q, coords)? {
            Sign::Zero => Err(Error::Internal("nullified polynomial reached root isolation".into())),
            _ => Ok(Vec::new()),
        };
    }
    let alg_vars: Vec<Var> = q.vars().into_iter().filter(|&v| v != level_var).collect();
    if alg_vars.is_empty() {
        // Already univariate in the level variable.
        let u = UniPoly::from_poly(&q, level_var)
            .ok_or_else(|| Error::Internal("expected univariate image".into()))?;
        return Ok(isolate_roots(&u)?.into_iter().map(RealAlg::from_repr).collect());
    }
    // Eliminate each algebraic coordinate by a resultant against its
    // defining polynomial; candidate roots of the image are among the roots
    // of the final univariate eliminant and are confirmed by exact signs.
    let mut e_cur = q.clone();
    for v in alg_vars {
        let b = boxes
            .get(&v)
            .ok_or_else(|| Error::Internal("algebraic variable without a coordinate".into()))?;
        let d = b.poly().to_poly(q.order(), v);
        loop {
            if !e_cur.occurs(v) {
                break;
            }
            let r = resultant(&d, &e_cur, v)?;
            if !r.is_zero() {
                e_cur = r;
                break;
            }
            // The eliminant shares a factor with the defining polynomial. If
            // that factor vanished at the point the polynomial would be
            // nullified (already screened), so it is safely nonzero: divide
            // it out and retry.
            let g = gcd(&d, &e_cur);
            if g.is_constant() {
                return Err(Error::Internal("zero resultant without a common factor".into()));
            }
            if sign_at(&g, coords)? == Sign::Zero {
                return Err(Error::Internal("nullified polynomial reached root isolation".into()));
            }
            e_cur = exact_div(&e_cur, &g)
                .ok_or_else(|| Error::Internal("common factor must divide eliminant".into()))?;
        }
    }
    let e_uni = UniPoly::from_poly(&e_cur, level_var)
        .ok_or_else(|| Error::Internal("eliminant is not univariate in the level variable".into()))?;
    if e_uni.is_zero() {
        return Err(Error::Internal("eliminant vanished identically".into()));
    }
    if e_uni.is_constant() {
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    let mut full = coords.to_vec();
    full.push(RealAlg::from_int(0));
    for cand in isolate_roots(&e_uni)? {
        let value = RealAlg::from_repr(cand);
        full[level_var] = value.clone();
        if sign_at(&q, &full)? == Sign::Zero {
            roots.push(value);
        }
    }
    Ok(roots)
}
