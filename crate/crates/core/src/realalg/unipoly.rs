//! Dense univariate integer polynomials: Sturm sequences, root counting,
//! rational-root extraction, and isolation of all real roots into disjoint
//! intervals with exact endpoints.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Polynomial;
use crate::vars::{Var, VariableOrder};
use crate::{Error, Result};

/// Coefficient list, index = degree, highest entry nonzero; empty = zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<BigInt>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("lc of zero polynomial")
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Extracts the univariate content of a multivariate polynomial that uses
    /// only variable `v`; `None` if any other variable occurs.
    pub fn from_poly(p: &Polynomial, v: Var) -> Option<UniPoly> {
        if p.vars().iter().any(|&w| w != v) {
            return None;
        }
        let coeffs = p
            .coeffs_in(v)
            .into_iter()
            .map(|c| c.constant_value().expect("coefficient must be constant"))
            .collect();
        Some(UniPoly::new(coeffs))
    }

    /// Embeds into a multivariate ring as a polynomial in `v`.
    pub fn to_poly(&self, order: &Arc<VariableOrder>, v: Var) -> Polynomial {
        let coeffs: Vec<Polynomial> = self
            .0
            .iter()
            .map(|c| Polynomial::constant(order, c.clone()))
            .collect();
        Polynomial::from_coeffs_in(order, v, &coeffs)
    }

    /// Renders as text in the named variable, matching the multivariate
    /// printer's conventions.
    pub fn to_text(&self, var_name: &str) -> String {
        let order = VariableOrder::new([var_name]).expect("valid order");
        self.to_poly(&order, 0).to_string()
    }

    /// Parses text containing only the named variable.
    pub fn parse(s: &str, var_name: &str) -> Result<UniPoly> {
        let order = VariableOrder::new([var_name])?;
        let p = crate::poly::parse_polynomial(s, &order)?;
        UniPoly::from_poly(&p, 0).ok_or_else(|| Error::Internal("unreachable: single-var order".into()))
    }

    /// Exact evaluation by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    /// Sign of the value at `x`: -1, 0, or 1.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.0.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * BigInt::from(i + 1))
                .collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    /// Positive gcd of the coefficients (0 for zero).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content-free with positive leading coefficient. Zero stays zero.
    pub fn primitive(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = self.int_content();
        if self.lc().is_negative() {
            c = -c;
        }
        UniPoly(self.0.iter().map(|k| k / &c).collect())
    }

    /// Exact division; `None` if not divisible.
    pub fn exact_div(&self, d: &UniPoly) -> Option<UniPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(UniPoly::zero());
        }
        let dd = d.degree().unwrap();
        let dn = self.degree().unwrap();
        if dn < dd {
            return None;
        }
        let mut rem = self.0.clone();
        let mut q = vec![BigInt::zero(); dn - dd + 1];
        for i in (0..q.len()).rev() {
            let top = rem[i + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(d.lc());
            if !r.is_zero() {
                return None;
            }
            q[i] = qc.clone();
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(UniPoly::new(q))
    }

    /// Remainder of `self / d` over the rationals, returned as an integer
    /// polynomial scaled by a positive rational (signs of values preserved).
    fn rational_rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("nonzero divisor");
        let mut rem: Vec<BigRational> = self.0.iter().map(|c| BigRational::from(c.clone())).collect();
        let dlc = BigRational::from(d.lc().clone());
        while rem.len() > dd {
            let top = rem.last().unwrap().clone();
            let k = rem.len() - 1 - dd;
            if !top.is_zero() {
                let f = top / &dlc;
                for (j, dc) in d.0.iter().enumerate() {
                    let t = &f * BigRational::from(dc.clone());
                    rem[k + j] -= t;
                }
            }
            rem.pop();
        }
        // Clear denominators with a positive multiplier and strip content.
        let mut lcm = BigInt::one();
        for c in &rem {
            if !c.is_zero() {
                lcm = lcm.lcm(c.denom());
            }
        }
        let ints: Vec<BigInt> = rem
            .into_iter()
            .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
            .collect();
        let p = UniPoly::new(ints);
        if p.is_zero() {
            return p;
        }
        let content = p.int_content();
        UniPoly(p.0.iter().map(|c| c / &content).collect())
    }

    /// Univariate gcd over the integers, primitive with positive lc.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return UniPoly::new(vec![BigInt::one()]);
            }
            let r = a.rational_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Squarefree part: `p / gcd(p, p')`, primitive, positive lc.
    pub fn squarefree_part(&self) -> UniPoly {
        let p = self.primitive();
        if p.is_constant() {
            return p;
        }
        let g = p.gcd(&p.derivative());
        p.exact_div(&g)
            .expect("gcd divides")
            .primitive()
    }

    /// Sturm chain of a squarefree primitive polynomial.
    pub fn sturm_chain(&self) -> Vec<UniPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let b = &chain[n - 1];
            if b.is_zero() || b.is_constant() {
                break;
            }
            let r = chain[n - 2].rational_rem(b).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    /// All roots are inside `(-B, B)` for this integer `B >= 1`.
    pub fn cauchy_bound(&self) -> BigInt {
        let d = self.degree().expect("nonzero");
        let lc = self.0[d].abs();
        let mut max = BigInt::zero();
        for c in &self.0[..d] {
            let a = c.abs();
            if a > max {
                max = a;
            }
        }
        // 1 + max|a_i| / |a_d|, rounded up.
        let bound = BigRational::new(max, lc) + BigRational::from(BigInt::from(2));
        bound.ceil().to_integer()
    }
}

/// Number of sign changes of the chain at `x` (zeros skipped).
pub fn sign_variations(chain: &[UniPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut prev = 0i32;
    for p in chain {
        let s = p.sign_at(x);
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

/// Number of roots of the chain's first polynomial in `(a, b)`, requiring
/// that neither endpoint is a root.
pub fn count_roots_between(chain: &[UniPoly], a: &BigRational, b: &BigRational) -> usize {
    debug_assert!(a < b);
    debug_assert!(chain[0].sign_at(a) != 0 && chain[0].sign_at(b) != 0);
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// An isolated real root of a squarefree integer polynomial with no rational
/// roots: the open interval `(lo, hi)` contains exactly one root, and the
/// polynomial has opposite nonzero signs at the endpoints.
#[derive(Debug, Clone)]
pub struct AlgRoot {
    pub(crate) poly: UniPoly,
    pub(crate) lo: BigRational,
    pub(crate) hi: BigRational,
}

impl AlgRoot {
    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    /// Replaces the defining polynomial by a factor that still has the
    /// interval's root as a simple root (used when a degenerate elimination
    /// step splits the defining polynomial).
    pub(crate) fn set_poly(&mut self, poly: UniPoly) {
        debug_assert!(poly.sign_at(&self.lo) * poly.sign_at(&self.hi) < 0);
        self.poly = poly;
    }

    /// One bisection step; the interval width halves.
    pub fn refine_step(&mut self) {
        let mid = (&self.lo + &self.hi) / BigRational::from(BigInt::from(2));
        let s_mid = self.poly.sign_at(&mid);
        debug_assert!(s_mid != 0, "defining polynomial must have no rational roots");
        if s_mid == self.poly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Refines until `hi - lo < eps`.
    pub fn refine_below(&mut self, eps: &BigRational) {
        while &self.hi - &self.lo >= *eps {
            self.refine_step();
        }
    }
}

/// Divisors of `|n|` (positive), by trial division. `n` must be nonzero and
/// fit in `u64` after absolute value.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let a: u64 = n.abs().try_into().ok()?;
    if a == 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= a {
        if a % d == 0 {
            out.push(BigInt::from(d));
            if d != a / d {
                out.push(BigInt::from(a / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a squarefree primitive polynomial, each deflated out.
/// Returns `(roots, remaining_factor)`. When the constant or leading
/// coefficient exceeds the trial-division range, extraction is skipped (the
/// isolation loop then discovers rational roots by exact midpoint hits).
fn extract_rational_roots(p: &UniPoly) -> (Vec<BigRational>, UniPoly) {
    let mut roots = Vec::new();
    let mut cur = p.clone();
    'restart: loop {
        if cur.degree().unwrap_or(0) == 0 {
            break;
        }
        let (Some(nums), Some(dens)) = (divisors(&cur.0[0]), divisors(cur.lc())) else {
            break;
        };
        for num in &nums {
            for den in &dens {
                if num.gcd(den) != BigInt::one() {
                    continue;
                }
                for sgn in [1i64, -1] {
                    let r = BigRational::new(num * BigInt::from(sgn), den.clone());
                    if cur.eval(&r).is_zero() {
                        // Deflate by (den*x - sgn*num), a primitive linear factor.
                        let lin = UniPoly::new(vec![-(num * BigInt::from(sgn)), den.clone()]);
                        cur = cur.exact_div(&lin).expect("root factor divides");
                        roots.push(r);
                        continue 'restart;
                    }
                }
            }
        }
        break;
    }
    (roots, cur)
}

/// Isolates all real roots of `p` (any nonzero integer polynomial), returning
/// rational roots exactly and irrational roots as [`AlgRoot`]s over the
/// squarefree, rational-root-free part of `p`. Output is strictly ascending.
pub fn isolate_roots(p: &UniPoly) -> Result<Vec<RootRepr>> {
    if p.is_zero() {
        return Err(Error::Internal("cannot isolate roots of the zero polynomial".into()));
    }
    let mut rational: Vec<BigRational> = Vec::new();
    let mut work = p.primitive();
    // Factor out x^k.
    let k = work.0.iter().take_while(|c| c.is_zero()).count();
    if k > 0 {
        rational.push(BigRational::zero());
        work = UniPoly::new(work.0[k..].to_vec());
    }
    let mut alg: Vec<AlgRoot> = Vec::new();
    if !work.is_constant() {
        work = work.squarefree_part();
        loop {
            let (mut found, rest) = extract_rational_roots(&work);
            rational.append(&mut found);
            work = rest;
            if work.is_constant() {
                break;
            }
            // Bisection with Sturm counts over (-B, B).
            let chain = work.sturm_chain();
            let bound = work.cauchy_bound();
            let lo = BigRational::from(-bound.clone());
            let hi = BigRational::from(bound);
            let mut stack = vec![(lo, hi)];
            let mut midpoint_root: Option<BigRational> = None;
            alg.clear();
            while let Some((a, b)) = stack.pop() {
                let n = count_roots_between(&chain, &a, &b);
                if n == 0 {
                    continue;
                }
                if n == 1 {
                    debug_assert!(work.sign_at(&a) * work.sign_at(&b) < 0);
                    alg.push(AlgRoot { poly: work.clone(), lo: a, hi: b });
                    continue;
                }
                let mid = (&a + &b) / BigRational::from(BigInt::from(2));
                if work.sign_at(&mid) == 0 {
                    // A rational root slipped past extraction (large
                    // coefficients): deflate and redo the isolation.
                    midpoint_root = Some(mid);
                    break;
                }
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
            match midpoint_root {
                Some(r) => {
                    let lin = UniPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
                    work = work.exact_div(&lin).expect("root factor divides");
                    rational.push(r);
                }
                None => break,
            }
        }
    }
    // Shrink algebraic intervals away from every rational root, then sort.
    for a in &mut alg {
        for r in &rational {
            while a.lo < *r && *r < a.hi {
                // One sign test settles which side the root is on.
                if a.poly.sign_at(r) == a.poly.sign_at(&a.lo) {
                    a.lo = r.clone();
                } else {
                    a.hi = r.clone();
                }
            }
        }
    }
    let mut out: Vec<RootRepr> = rational.into_iter().map(RootRepr::Rational).collect();
    out.extend(alg.into_iter().map(RootRepr::Algebraic));
    out.sort_by(|x, y| cmp_root_repr(x, y));
    Ok(out)
}

/// A root as produced by isolation.
#[derive(Debug, Clone)]
pub enum RootRepr {
    Rational(BigRational),
    Algebraic(AlgRoot),
}

/// Total order on isolation output (intervals are pairwise disjoint and
/// exclude all rational roots, so interval comparison suffices).
fn cmp_root_repr(a: &RootRepr, b: &RootRepr) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let key = |r: &RootRepr| match r {
        RootRepr::Rational(q) => (q.clone(), q.clone()),
        RootRepr::Algebraic(ar) => (ar.lo.clone(), ar.hi.clone()),
    };
    let (alo, ahi) = key(a);
    let (blo, bhi) = key(b);
    if ahi <= blo {
        return Ordering::Less;
    }
    if bhi <= alo {
        return Ordering::Greater;
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(coeffs: &[i64]) -> UniPoly {
        UniPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn basics() {
        let p = up(&[-1, 0, 2]); // 2x^2 - 1
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&rat(1, 1)), rat(1, 1));
        assert_eq!(p.eval(&rat(1, 2)), rat(-1, 2));
        assert_eq!(p.derivative(), up(&[0, 4]));
        assert_eq!(up(&[2, 4, 6]).primitive(), up(&[1, 2, 3]));
        assert_eq!(up(&[0, 0, -3]).primitive(), up(&[0, 0, 1]));
        assert_eq!(p.to_text("x"), "2*x^2 - 1");
        assert_eq!(UniPoly::parse("2*x^2 - 1", "x").unwrap(), p);
    }

    #[test]
    fn division_and_gcd() {
        let p = up(&[-1, 0, 1]); // x^2 - 1
        assert_eq!(p.exact_div(&up(&[-1, 1])).unwrap(), up(&[1, 1]));
        assert_eq!(p.exact_div(&up(&[1, 1])).unwrap(), up(&[-1, 1]));
        assert!(p.exact_div(&up(&[2, 1])).is_none());
        assert_eq!(up(&[0, 0, 4]).gcd(&up(&[0, 8])), up(&[0, 1]));
        assert_eq!(p.gcd(&up(&[1, 1])), up(&[1, 1]));
        assert_eq!(p.gcd(&up(&[1, 2])), up(&[1]));
        assert_eq!(up(&[1, 2, 1]).squarefree_part(), up(&[1, 1]));
        assert_eq!(up(&[0, 0, 4]).squarefree_part(), up(&[0, 1]));
    }

    #[test]
    fn sturm_counts_roots() {
        // (x^2 - 2)(x - 3) has roots -sqrt2, sqrt2, 3.
        let p = up(&[6, -2, -3, 1]);
        let chain = p.sturm_chain();
        assert_eq!(count_roots_between(&chain, &rat(-10, 1), &rat(10, 1)), 3);
        assert_eq!(count_roots_between(&chain, &rat(0, 1), &rat(10, 1)), 2);
        assert_eq!(count_roots_between(&chain, &rat(2, 1), &rat(10, 1)), 1);
        assert_eq!(count_roots_between(&chain, &rat(-1, 1), &rat(1, 1)), 0);
    }

    #[test]
    fn isolates_mixed_roots() {
        // x(x-1/2 scaled)(x^2-2): 2x^4 - x^3 - 4x^2 + 2x = x(2x-1)(x^2-2).
        let p = up(&[0, 2, -4, -1, 2]);
        let roots = isolate_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        // Ascending: -sqrt2, 0, 1/2, sqrt2.
        match &roots[0] {
            RootRepr::Algebraic(a) => {
                assert_eq!(a.poly, up(&[-2, 0, 1]));
                assert!(a.lo < rat(-14142, 10000) && rat(-14143, 10000) < a.hi);
            }
            _ => panic!("expected algebraic"),
        }
        match &roots[1] {
            RootRepr::Rational(r) => assert_eq!(*r, rat(0, 1)),
            _ => panic!("expected 0"),
        }
        match &roots[2] {
            RootRepr::Rational(r) => assert_eq!(*r, rat(1, 2)),
            _ => panic!("expected 1/2"),
        }
        match &roots[3] {
            RootRepr::Algebraic(a) => {
                let mut a = a.clone();
                a.refine_below(&rat(1, 1000));
                assert!(a.lo < rat(14143, 10000) && rat(14142, 10000) < a.hi);
            }
            _ => panic!("expected algebraic"),
        }
    }

    #[test]
    fn isolates_repeated_and_no_roots() {
        assert_eq!(isolate_roots(&up(&[0, 0, 4])).unwrap().len(), 1); // 4x^2: root 0
        assert!(isolate_roots(&up(&[1, 0, 1])).unwrap().is_empty()); // x^2+1
        assert_eq!(isolate_roots(&up(&[1, 2, 1])).unwrap().len(), 1); // (x+1)^2
        assert_eq!(isolate_roots(&up(&[5])).unwrap().len(), 0); // constant
    }

    #[test]
    fn refinement_keeps_invariants() {
        let p = up(&[-2, 0, 1]);
        let roots = isolate_roots(&p).unwrap();
        for r in roots {
            if let RootRepr::Algebraic(mut a) = r {
                let w0 = &a.hi - &a.lo;
                a.refine_step();
                assert!(&a.hi - &a.lo < w0);
                assert!(a.poly.sign_at(&a.lo) * a.poly.sign_at(&a.hi) < 0);
            }
        }
    }
}
