//! Exact real algebraic numbers: rationals plus isolated irrational roots,
//! with exact comparison, floor/ceil, and simplest-rational selection between
//! two numbers.

mod signat;
mod unipoly;

pub use signat::{is_nullified, sign_at, substitute_roots, Sign, TaggedRoot};
pub use unipoly::{count_roots_between, isolate_roots, sign_variations, AlgRoot, RootRepr, UniPoly};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact real number: either rational, or an irrational algebraic number
/// represented by a squarefree integer polynomial with no rational roots and
/// an open isolating interval containing exactly one of its roots.
#[derive(Debug, Clone)]
pub enum RealAlg {
    Rational(BigRational),
    Algebraic(AlgRoot),
}

impl RealAlg {
    pub fn from_int(n: i64) -> Self {
        RealAlg::Rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_repr(r: RootRepr) -> Self {
        match r {
            RootRepr::Rational(q) => RealAlg::Rational(q),
            RootRepr::Algebraic(a) => RealAlg::Algebraic(a),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RealAlg::Rational(q) => Some(q),
            RealAlg::Algebraic(_) => None,
        }
    }

    /// A rational strictly below the number.
    pub fn lower(&self) -> BigRational {
        match self {
            RealAlg::Rational(q) => q - BigRational::one(),
            RealAlg::Algebraic(a) => a.lo().clone(),
        }
    }

    /// A rational strictly above the number.
    pub fn upper(&self) -> BigRational {
        match self {
            RealAlg::Rational(q) => q + BigRational::one(),
            RealAlg::Algebraic(a) => a.hi().clone(),
        }
    }

    /// Halves the isolating interval (no-op on rationals).
    pub fn refine_step(&mut self) {
        if let RealAlg::Algebraic(a) = self {
            a.refine_step();
        }
    }

    /// Sign of the number itself.
    pub fn sign(&self) -> i32 {
        match self {
            RealAlg::Rational(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            RealAlg::Algebraic(a) => {
                let zero = BigRational::zero();
                if a.lo() >= &zero {
                    return 1;
                }
                if a.hi() <= &zero {
                    return -1;
                }
                // 0 inside the interval; the root is irrational, so one
                // sign test against 0 decides the side.
                if a.poly().sign_at(&zero) == a.poly().sign_at(a.lo()) {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Exact comparison.
    pub fn compare(&self, other: &RealAlg) -> Ordering {
        match (self, other) {
            (RealAlg::Rational(a), RealAlg::Rational(b)) => a.cmp(b),
            (RealAlg::Rational(q), RealAlg::Algebraic(a)) => cmp_rat_alg(q, a),
            (RealAlg::Algebraic(a), RealAlg::Rational(q)) => cmp_rat_alg(q, a).reverse(),
            (RealAlg::Algebraic(a), RealAlg::Algebraic(b)) => cmp_alg_alg(a, b),
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        match self {
            RealAlg::Rational(q) => q.floor().to_integer(),
            RealAlg::Algebraic(a) => {
                let mut a = a.clone();
                loop {
                    let fl = a.lo().floor().to_integer();
                    let fh = a.hi().floor().to_integer();
                    if fl == fh {
                        return fl;
                    }
                    // Integers in (lo, hi) are candidates for sides; an
                    // irrational root never equals one, so refinement
                    // eventually pins the integer part down.
                    a.refine_step();
                }
            }
        }
    }

    /// Exact ceiling.
    pub fn ceil(&self) -> BigInt {
        match self {
            RealAlg::Rational(q) => q.ceil().to_integer(),
            // Irrational, so ceil = floor + 1.
            RealAlg::Algebraic(_) => self.floor() + BigInt::one(),
        }
    }
}

impl fmt::Display for RealAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealAlg::Rational(q) => write!(f, "{q}"),
            RealAlg::Algebraic(a) => {
                write!(f, "root of {} in ({}, {})", a.poly().to_text("t"), a.lo(), a.hi())
            }
        }
    }
}

fn cmp_rat_alg(q: &BigRational, a: &AlgRoot) -> Ordering {
    if q <= a.lo() {
        return Ordering::Less;
    }
    if q >= a.hi() {
        return Ordering::Greater;
    }
    // q lies inside the isolating interval, so the root and q differ (the
    // defining polynomial has no rational roots) and one sign test decides.
    if a.poly().sign_at(q) == a.poly().sign_at(a.lo()) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn cmp_alg_alg(a: &AlgRoot, b: &AlgRoot) -> Ordering {
    if a.hi() <= b.lo() {
        return Ordering::Less;
    }
    if b.hi() <= a.lo() {
        return Ordering::Greater;
    }
    // Overlapping intervals: equal iff a common root of gcd(pa, pb) lies in
    // the intersection.
    let g = a.poly().gcd(b.poly());
    if !g.is_constant() {
        let ilo = a.lo().max(b.lo()).clone();
        let ihi = a.hi().min(b.hi()).clone();
        if ilo < ihi {
            let chain = g.sturm_chain();
            // Endpoints of isolating intervals are never roots of the
            // defining polynomials, but they might be roots of g only if g's
            // roots include them — g divides both defining polynomials, so
            // its roots are common roots, never rational; safe to count.
            if count_roots_between(&chain, &ilo, &ihi) >= 1 {
                return Ordering::Equal;
            }
        }
    }
    // Distinct roots: refine both until the intervals separate.
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        a.refine_step();
        b.refine_step();
        if a.hi() <= b.lo() {
            return Ordering::Less;
        }
        if b.hi() <= a.lo() {
            return Ordering::Greater;
        }
    }
}

/// The unique simplest rational in an interval: smallest denominator, and
/// among those the smallest numerator magnitude (0 beats everything; then
/// integers of least magnitude; then continued-fraction descent).
pub fn simplest_in(lo: &BigRational, hi: &BigRational, lo_strict: bool, hi_strict: bool) -> BigRational {
    let zero = BigRational::zero();
    let zero_ok = (*lo < zero || (*lo == zero && !lo_strict)) && (*hi > zero || (*hi == zero && !hi_strict));
    if zero_ok {
        return zero;
    }
    if *hi <= zero {
        return -simplest_pos(&-hi, hi_strict, Some(&-lo), lo_strict);
    }
    simplest_pos(lo, lo_strict, Some(hi), hi_strict)
}

/// Simplest rational in a positive interval (`lo >= 0`, 0 excluded);
/// `hi = None` means unbounded above.
fn simplest_pos(lo: &BigRational, lo_strict: bool, hi: Option<&BigRational>, hi_strict: bool) -> BigRational {
    // Smallest admissible integer.
    let n0 = if lo_strict {
        lo.floor() + BigRational::one()
    } else {
        lo.ceil()
    };
    match hi {
        None => n0,
        Some(h) => {
            if n0 < *h || (n0 == *h && !hi_strict) {
                return n0;
            }
            // No integer in range: descend into the fractional part.
            let k = lo.floor();
            let fl = lo - &k;
            let fh = h - &k;
            debug_assert!(fh <= BigRational::one());
            let rec_lo = fh.recip();
            if fl.is_zero() {
                let y = simplest_pos(&rec_lo, hi_strict, None, lo_strict);
                k + y.recip()
            } else {
                let rec_hi = fl.recip();
                let y = simplest_pos(&rec_lo, hi_strict, Some(&rec_hi), lo_strict);
                k + y.recip()
            }
        }
    }
}

/// The simplest rational strictly between two distinct numbers `a < b`.
pub fn simplest_rational_between(a: &RealAlg, b: &RealAlg) -> BigRational {
    debug_assert_eq!(a.compare(b), Ordering::Less);
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        // Admissible range for the sample: above a and below b. For an
        // algebraic bound the interval endpoint itself is admissible
        // (the root is strictly inside), hence non-strict.
        let (lo, lo_strict) = match &a {
            RealAlg::Rational(q) => (q.clone(), true),
            RealAlg::Algebraic(r) => (r.hi().clone(), false),
        };
        let (hi, hi_strict) = match &b {
            RealAlg::Rational(q) => (q.clone(), true),
            RealAlg::Algebraic(r) => (r.lo().clone(), false),
        };
        let nonempty = lo < hi || (lo == hi && !lo_strict && !hi_strict);
        if nonempty {
            return simplest_in(&lo, &hi, lo_strict, hi_strict);
        }
        a.refine_step();
        b.refine_step();
    }
}
