//! Exact big-integer evaluation of cell-count bounds: growth of the
//! (m,d)-property under projection, full product bounds, and their dominant
//! terms, for both the unconstrained operator and the constraint-reduced
//! operators with `l` equational constraints in the top `l` variables.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use crate::{Error, Result};

/// A set of polynomials partitionable into `m` subsets, each of combined
/// degree at most `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MDProperty {
    pub m: BigUint,
    pub d: BigUint,
}

impl MDProperty {
    pub fn new(m: u64, d: u64) -> Result<MDProperty> {
        if m == 0 || d == 0 {
            return Err(Error::Invalid(
                "an (m,d)-property needs m >= 1 and d >= 1".into(),
            ));
        }
        Ok(MDProperty { m: BigUint::from(m), d: BigUint::from(d) })
    }
}

fn pw(base: &BigUint, exp: u64) -> BigUint {
    Pow::pow(base, exp)
}

fn two() -> BigUint {
    BigUint::from(2u32)
}

/// One full-projection step: `(m, d) -> (floor((m+1)^2 / 2), 2d^2)`.
pub fn md_step_full(p: &MDProperty) -> MDProperty {
    let m1 = &p.m + 1u32;
    MDProperty { m: (&m1 * &m1) / 2u32, d: 2u32 * &p.d * &p.d }
}

/// One constraint-reduced projection step: `(m, d) -> (2m, 2d^2)`.
pub fn md_step_reduced(p: &MDProperty) -> MDProperty {
    MDProperty { m: 2u32 * &p.m, d: 2u32 * &p.d * &p.d }
}

/// Bound-mode full-projection growth after `r` steps from `(m, d)`:
/// the first step uses `(2m^2, 2d^2)` (valid even for m = 1), later steps
/// square the count. Closed form: `(2^(2^(r-1)) m^(2^r), 2^(2^r - 1) d^(2^r))`.
pub fn full_growth_row(start: &MDProperty, r: u32) -> MDProperty {
    if r == 0 {
        return start.clone();
    }
    let e = 1u64 << r;
    MDProperty {
        m: pw(&two(), 1 << (r - 1)) * pw(&start.m, e),
        d: pw(&two(), e - 1) * pw(&start.d, e),
    }
}

/// Constraint-reduced growth after `s` steps from `(m, d)`:
/// `(2^s m, 2^(2^s - 1) d^(2^s))`.
pub fn reduced_growth_row(start: &MDProperty, s: u32) -> MDProperty {
    let e = 1u64 << s;
    MDProperty {
        m: pw(&two(), s as u64) * &start.m,
        d: pw(&two(), e - 1) * pw(&start.d, e),
    }
}

/// Growth after `l` reduced steps followed by `r` full bound-mode steps:
/// `(2^(2^r l) m^(2^r), 2^(2^(l+r) - 1) d^(2^(l+r)))`.
///
/// The full steps here square the count directly (the looser doubling is
/// not needed, the reduced rows already hold several polynomials).
pub fn mixed_growth_row(start: &MDProperty, l: u32, r: u32) -> MDProperty {
    if r == 0 {
        return reduced_growth_row(start, l);
    }
    let e = 1u64 << r;
    MDProperty {
        m: pw(&two(), e * l as u64) * pw(&start.m, e),
        d: pw(&two(), (1u64 << (l + r)) - 1) * pw(&start.d, 1 << (l + r)),
    }
}

/// Inputs to a cell-count bound: `n` variables, `m` polynomials of maximum
/// degree `d`, and `l` equational constraints in the top `l` variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundParams {
    pub n: u32,
    pub m: u64,
    pub d: u64,
    pub l: u32,
}

impl BoundParams {
    pub fn new(n: u32, m: u64, d: u64, l: u32) -> Result<BoundParams> {
        if n == 0 || m == 0 || d == 0 {
            return Err(Error::Invalid(
                "a bound needs n >= 1 variables, m >= 1 polynomials, d >= 1".into(),
            ));
        }
        if n > 60 {
            return Err(Error::Invalid(
                "n > 60 makes the doubly exponential products infeasible to \
                 evaluate exactly"
                    .into(),
            ));
        }
        if l as u64 > m.min(n as u64) {
            return Err(Error::Invalid(format!(
                "l = {l} exceeds min(m, n) = {}",
                m.min(n as u64)
            )));
        }
        Ok(BoundParams { n, m, d, l })
    }
}

/// Which bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Full product bound for the unconstrained projection.
    PFull,
    /// Dominant term of [`BoundMode::PFull`]: `(2d)^(2^n - 1) m^(2^n - 1) 2^(2^(n-1) - 1)`.
    PDominant,
    /// Full product bound after `l` reduced projections (lifting with every
    /// projection polynomial).
    EcProjection,
    /// Dominant term of [`BoundMode::EcProjection`]:
    /// `(2d)^(2^n - 1) m^(2^(n-l) + l - 1) 2^(l 2^(n-l) + l(l-3)/2)`.
    EcProjectionDominant,
    /// Bound with reduced projection *and* reduced lifting: sections-only
    /// stack generation through the constrained levels.
    EcFull,
    /// Dominant term of [`BoundMode::EcFull`]:
    /// `(2d)^(2^n - 1) m^(2^(n-l) - 2) 2^(l 2^(n-l) - 3l)`.
    EcDominant,
}

/// Evaluates the chosen cell-count bound exactly.
///
/// With `l = 0` the constraint-aware modes coincide with the unconstrained
/// ones and delegate to them. The constraint-aware modes require `l <= n - 1`:
/// their derivation lifts from a base decomposition of the unconstrained
/// variables, so at least one variable must be unconstrained.
pub fn cell_bound(params: &BoundParams, mode: BoundMode) -> Result<BigUint> {
    let &BoundParams { n, m, d, l } = params;
    let ec_mode = !matches!(mode, BoundMode::PFull | BoundMode::PDominant);
    if ec_mode && l == 0 {
        let fallback = match mode {
            BoundMode::EcProjection | BoundMode::EcFull => BoundMode::PFull,
            _ => BoundMode::PDominant,
        };
        return cell_bound(params, fallback);
    }
    if ec_mode && l == n {
        return Err(Error::Invalid(format!(
            "constraint-aware bounds need l <= n - 1 (got l = {l}, n = {n}): \
             the derivation lifts from a base decomposition of the \
             unconstrained variables"
        )));
    }
    let m = BigUint::from(m);
    let d = BigUint::from(d);
    Ok(match mode {
        BoundMode::PFull => p_full(n, &m, &d),
        BoundMode::PDominant => p_dominant(n, &m, &d),
        BoundMode::EcProjection => ec_projection(n, &m, &d, l),
        BoundMode::EcProjectionDominant => ec_projection_dominant(n, &m, &d, l)?,
        BoundMode::EcFull => ec_full(n, &m, &d, l),
        BoundMode::EcDominant => ec_dominant(n, &m, &d, l)?,
    })
}

/// `(2md + 1) * prod_{r=1}^{n-1} [2 * (growth row r) + 1]`.
fn p_full(n: u32, m: &BigUint, d: &BigUint) -> BigUint {
    let start = MDProperty { m: m.clone(), d: d.clone() };
    let mut acc = 2u32 * m * d + 1u32;
    for r in 1..n {
        let row = full_growth_row(&start, r);
        acc *= 2u32 * &row.m * &row.d + 1u32;
    }
    acc
}

fn p_dominant(n: u32, m: &BigUint, d: &BigUint) -> BigUint {
    let e = (1u64 << n) - 1;
    pw(&(2u32 * d), e) * pw(m, e) * pw(&two(), (1u64 << (n - 1)) - 1)
}

/// `prod_{s=0}^{l} [2 m_s d_s + 1] * prod_{r=1}^{n-l-1} [2 M_r D_r + 1]`
/// with `(m_s, d_s)` the reduced growth rows and `(M_r, D_r)` the mixed rows.
fn ec_projection(n: u32, m: &BigUint, d: &BigUint, l: u32) -> BigUint {
    let start = MDProperty { m: m.clone(), d: d.clone() };
    let mut acc = BigUint::one();
    for s in 0..=l {
        let row = reduced_growth_row(&start, s);
        acc *= 2u32 * &row.m * &row.d + 1u32;
    }
    for r in 1..(n - l) {
        let row = mixed_growth_row(&start, l, r);
        acc *= 2u32 * &row.m * &row.d + 1u32;
    }
    acc
}

/// Evaluates `(2d)^a * m^c * 2^e` with a possibly negative power of two,
/// checking that the division is exact.
fn signed_two_power(base: BigUint, e: i64) -> Result<BigUint> {
    if e >= 0 {
        return Ok(base * pw(&two(), e as u64));
    }
    let div = pw(&two(), (-e) as u64);
    let (q, rem) = num_integer::Integer::div_rem(&base, &div);
    if !rem.is_zero() {
        return Err(Error::Internal(format!(
            "dominant term is not an integer: 2^{e} does not divide {base}"
        )));
    }
    Ok(q)
}

fn ec_projection_dominant(n: u32, m: &BigUint, d: &BigUint, l: u32) -> Result<BigUint> {
    let a = (1u64 << n) - 1;
    let c = (1u64 << (n - l)) + l as u64 - 1;
    let e = (l as i64) * (1i64 << (n - l)) + (l as i64) * (l as i64 - 3) / 2;
    signed_two_power(pw(&(2u32 * d), a) * pw(m, c), e)
}

fn ec_dominant(n: u32, m: &BigUint, d: &BigUint, l: u32) -> Result<BigUint> {
    let a = (1u64 << n) - 1;
    let c = (1u64 << (n - l)) - 2;
    let e = (l as i64) * (1i64 << (n - l)) - 3 * l as i64;
    signed_two_power(pw(&(2u32 * d), a) * pw(m, c), e)
}

/// Bound with reduced lifting. Let `t` be the full product bound for the
/// decomposition of the space of the `n - l - 1` unconstrained variables.
/// Every cell there is lifted against the single constraint of the next
/// level (at most its degree-entry `delta` in roots), and from then on only
/// the sections are split while sectors extend to one cylinder each:
///
/// `N' = (2 delta + 1) S + (N - S)`, `S' = delta S`, starting `N = S = t`.
fn ec_full(n: u32, m: &BigUint, d: &BigUint, l: u32) -> BigUint {
    let start = MDProperty { m: m.clone(), d: d.clone() };
    let mut t = BigUint::one();
    for r in 1..(n - l) {
        let row = mixed_growth_row(&start, l, r);
        t *= 2u32 * &row.m * &row.d + 1u32;
    }
    // Degree entries of the constrained rows, lowest constrained level first.
    let mut cells = t.clone();
    let mut sections = t;
    for k in (0..=l).rev() {
        let delta = reduced_growth_row(&start, k).d;
        let new_cells = (2u32 * &delta + 1u32) * &sections + (&cells - &sections);
        sections *= &delta;
        cells = new_cells;
    }
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(m: u64, d: u64) -> MDProperty {
        MDProperty::new(m, d).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn single_steps_match_the_recurrences() {
        // Exact full step from (3, 2): floor(16/2) = 8 subsets, degree 8.
        assert_eq!(md_step_full(&md(3, 2)), md(8, 8));
        // The m = 1 case: floor(4/2) = 2.
        assert_eq!(md_step_full(&md(1, 5)), md(2, 50));
        // Reduced steps double the count and square-double the degree.
        assert_eq!(md_step_reduced(&md(3, 2)), md(6, 8));
        assert_eq!(md_step_reduced(&md(1, 1)), md(2, 2));
    }

    #[test]
    fn full_growth_closed_form_matches_iteration() {
        for (m0, d0) in [(3u64, 2u64), (2, 3), (1, 2), (5, 4)] {
            let start = md(m0, d0);
            // Iterated bound: first step doubles the square, later steps
            // square the count; the degree always becomes 2d^2.
            let mut row = MDProperty {
                m: 2u32 * &start.m * &start.m,
                d: 2u32 * &start.d * &start.d,
            };
            for r in 1..=4u32 {
                assert_eq!(full_growth_row(&start, r), row, "row {r} from ({m0},{d0})");
                row = MDProperty { m: &row.m * &row.m, d: 2u32 * &row.d * &row.d };
            }
            assert_eq!(full_growth_row(&start, 0), start);
        }
    }

    #[test]
    fn reduced_growth_closed_form_matches_iteration() {
        for (m0, d0) in [(3u64, 2u64), (2, 3), (1, 1)] {
            let start = md(m0, d0);
            let mut row = start.clone();
            for s in 0..=4u32 {
                assert_eq!(reduced_growth_row(&start, s), row, "row {s} from ({m0},{d0})");
                row = md_step_reduced(&row);
            }
        }
    }

    #[test]
    fn mixed_growth_continues_the_reduced_rows() {
        for (m0, d0) in [(3u64, 2u64), (2, 3)] {
            for l in 1..=3u32 {
                let start = md(m0, d0);
                let mut row = reduced_growth_row(&start, l);
                // First full step after the reduced phase squares the count.
                for r in 1..=3u32 {
                    row = MDProperty { m: &row.m * &row.m, d: 2u32 * &row.d * &row.d };
                    assert_eq!(
                        mixed_growth_row(&start, l, r),
                        row,
                        "l={l} r={r} from ({m0},{d0})"
                    );
                }
            }
        }
    }

    #[test]
    fn unconstrained_bounds_at_known_points() {
        // n = 1: only the base factor 2md + 1.
        let p = BoundParams::new(1, 3, 2, 0).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::PFull).unwrap(), big(13));
        // n = 2, m = 3, d = 2: 13 * (2 * (2*9) * (2*4) + 1) = 13 * 289.
        let p = BoundParams::new(2, 3, 2, 0).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::PFull).unwrap(), big(13 * 289));
        // Dominant terms, frozen values.
        let p = BoundParams::new(3, 3, 2, 0).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::PDominant).unwrap(), big(286_654_464));
        let p = BoundParams::new(2, 3, 2, 0).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::PDominant).unwrap(), big(3456));
    }

    #[test]
    fn dominant_term_is_the_full_product_without_the_plus_ones() {
        // Independent oracle: rebuild the product from the growth rows,
        // dropping every +1, and compare with the closed form.
        let mut points = 0;
        for n in 1..=6u32 {
            for m in [1u64, 2, 3, 5] {
                for d in [1u64, 2, 4] {
                    let start = md(m, d);
                    let mut oracle = 2u32 * &start.m * &start.d;
                    for r in 1..n {
                        let row = full_growth_row(&start, r);
                        oracle *= 2u32 * &row.m * &row.d;
                    }
                    let p = BoundParams::new(n, m, d, 0).unwrap();
                    let closed = cell_bound(&p, BoundMode::PDominant).unwrap();
                    assert_eq!(closed, oracle, "n={n} m={m} d={d}");
                    let full = cell_bound(&p, BoundMode::PFull).unwrap();
                    assert!(closed <= full);
                    points += 1;
                }
            }
        }
        assert!(points >= 20);
    }

    #[test]
    fn constrained_projection_bound_at_a_known_point() {
        // (n, m, d, l) = (3, 3, 2, 1): factors 13, 97 from the reduced rows
        // and 9217 from the single mixed row.
        let s0 = 2u64 * 3 * 2 + 1;
        let s1 = 2 * (2 * 3) * (2 * 4) + 1;
        let r1 = 2 * (4 * 9) * (8 * 16) + 1;
        assert_eq!((s0, s1, r1), (13, 97, 9217));
        let p = BoundParams::new(3, 3, 2, 1).unwrap();
        assert_eq!(
            cell_bound(&p, BoundMode::EcProjection).unwrap(),
            big(s0 * s1 * r1)
        );
    }

    #[test]
    fn constrained_dominant_terms_match_their_product_oracles() {
        let mut points = 0;
        for n in 2..=6u32 {
            for m in [2u64, 3, 5] {
                for d in [2u64, 3] {
                    for l in 1..n.min(m as u32) {
                        let start = md(m, d);
                        // Oracle for the projection-only dominant term: the
                        // full product with every +1 dropped.
                        let mut proj = BigUint::one();
                        for s in 0..=l {
                            let row = reduced_growth_row(&start, s);
                            proj *= 2u32 * &row.m * &row.d;
                        }
                        let mut tail = BigUint::one();
                        for r in 1..(n - l) {
                            let row = mixed_growth_row(&start, l, r);
                            tail *= 2u32 * &row.m * &row.d;
                        }
                        let p = BoundParams::new(n, m, d, l).unwrap();
                        assert_eq!(
                            cell_bound(&p, BoundMode::EcProjectionDominant).unwrap(),
                            &proj * &tail,
                            "projection dominant at n={n} m={m} d={d} l={l}"
                        );
                        // Oracle for the lifting-reduced dominant term:
                        // 2 * (product of constrained degree entries) * tail.
                        let mut deltas = BigUint::one();
                        for s in 0..=l {
                            deltas *= reduced_growth_row(&start, s).d;
                        }
                        assert_eq!(
                            cell_bound(&p, BoundMode::EcDominant).unwrap(),
                            2u32 * &deltas * &tail,
                            "lifting dominant at n={n} m={m} d={d} l={l}"
                        );
                        points += 1;
                    }
                }
            }
        }
        assert!(points >= 20, "only {points} grid points");
    }

    #[test]
    fn constrained_dominant_terms_at_frozen_points() {
        let p = BoundParams::new(3, 3, 2, 2).unwrap();
        assert_eq!(
            cell_bound(&p, BoundMode::EcProjectionDominant).unwrap(),
            big(3_538_944)
        );
        assert_eq!(cell_bound(&p, BoundMode::EcDominant).unwrap(), big(4096));
    }

    #[test]
    fn reduced_lifting_chain_at_a_frozen_point() {
        // (n, d, l) = (3, 2, 2): base product is empty (= 1), then
        // 1 -> 257 -> 2305 -> 6401 through the three constrained lifts.
        let p = BoundParams::new(3, 3, 2, 2).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::EcFull).unwrap(), big(6401));
        // m does not enter when every lift is constrained.
        let p = BoundParams::new(3, 5, 2, 2).unwrap();
        assert_eq!(cell_bound(&p, BoundMode::EcFull).unwrap(), big(6401));
    }

    #[test]
    fn reduced_lifting_chain_matches_a_direct_recurrence() {
        for n in 2..=5u32 {
            for m in [2u64, 3] {
                for d in [2u64, 3] {
                    for l in 1..n.min(m as u32) {
                        let start = md(m, d);
                        let mut t = BigUint::one();
                        for r in 1..(n - l) {
                            let row = mixed_growth_row(&start, l, r);
                            t *= 2u32 * &row.m * &row.d + 1u32;
                        }
                        // Direct recurrence, written out step by step.
                        let mut cells = t.clone();
                        let mut sections = t;
                        for k in (0..=l).rev() {
                            let delta = reduced_growth_row(&start, k).d;
                            let split = (2u32 * &delta + 1u32) * &sections;
                            let carried = &cells - &sections;
                            cells = split + carried;
                            sections = &sections * &delta;
                        }
                        let p = BoundParams::new(n, m, d, l).unwrap();
                        assert_eq!(
                            cell_bound(&p, BoundMode::EcFull).unwrap(),
                            cells,
                            "n={n} m={m} d={d} l={l}"
                        );
                        // The dominant term never exceeds the full bound.
                        assert!(
                            cell_bound(&p, BoundMode::EcDominant).unwrap() <=
                                cell_bound(&p, BoundMode::EcFull).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn constrained_dominant_is_strictly_below_unconstrained() {
        let mut points = 0;
        for n in 2..=6u32 {
            for m in 2..=6u64 {
                for d in 2..=4u64 {
                    for l in 1..=(m as u32).min(n - 1) {
                        let p = BoundParams::new(n, m, d, l).unwrap();
                        let with = cell_bound(&p, BoundMode::EcDominant).unwrap();
                        let without = cell_bound(&p, BoundMode::PDominant).unwrap();
                        assert!(with < without, "n={n} m={m} d={d} l={l}");
                        points += 1;
                    }
                }
            }
        }
        assert!(points >= 20);
    }

    #[test]
    fn degenerate_parameters_are_rejected_or_delegated() {
        assert!(BoundParams::new(0, 3, 2, 0).is_err());
        assert!(BoundParams::new(3, 0, 2, 0).is_err());
        assert!(BoundParams::new(3, 3, 0, 0).is_err());
        // l beyond min(m, n).
        assert!(BoundParams::new(3, 2, 2, 3).is_err());
        assert!(BoundParams::new(2, 5, 2, 3).is_err());
        // l = 0 constraint modes coincide with the unconstrained bounds.
        let p = BoundParams::new(3, 3, 2, 0).unwrap();
        assert_eq!(
            cell_bound(&p, BoundMode::EcProjection).unwrap(),
            cell_bound(&p, BoundMode::PFull).unwrap()
        );
        assert_eq!(
            cell_bound(&p, BoundMode::EcDominant).unwrap(),
            cell_bound(&p, BoundMode::PDominant).unwrap()
        );
        // l = n has no unconstrained base to lift from.
        let p = BoundParams::new(3, 3, 2, 3).unwrap();
        assert!(cell_bound(&p, BoundMode::EcFull).is_err());
        assert!(cell_bound(&p, BoundMode::EcDominant).is_err());
    }
}
