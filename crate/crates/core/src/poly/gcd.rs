//! Exact division, multivariate gcd (primitive pseudo-remainder sequences),
//! content/primitive-part splitting, squarefree parts, and finest squarefree
//! bases. Everything is computed over the integers with no rounding anywhere.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Polynomial;
use crate::vars::Var;

/// Exact multivariate division: returns `q` with `p = q * d`, or `None` when
/// `d` does not divide `p`. Runs leading-term elimination under the global
/// term order, which succeeds exactly for true multiples over an integral
/// domain.
pub fn exact_div(p: &Polynomial, d: &Polynomial) -> Option<Polynomial> {
    if d.is_zero() {
        return None;
    }
    if p.is_zero() {
        return Some(p.clone());
    }
    let order = p.order().clone();
    let mut rem = p.clone();
    let mut q = Polynomial::zero(&order);
    let (dm, dc) = {
        let (m, c) = d.terms.last_key_value().unwrap();
        (m.clone(), c.clone())
    };
    while !rem.is_zero() {
        let (rm, rc) = {
            let (m, c) = rem.terms.last_key_value().unwrap();
            (m.clone(), c.clone())
        };
        let qm = rm.div(&dm)?;
        let (qc, r) = rc.div_rem(&dc);
        if !r.is_zero() {
            return None;
        }
        let mut qt = Polynomial::zero(&order);
        qt.add_term(qm, qc);
        rem = rem.sub(&qt.mul(d));
        q = q.add(&qt);
    }
    Some(q)
}

/// Pseudo-remainder of `a` by `b` in variable `v`: the remainder of
/// `lc_v(b)^(deg_v a - deg_v b + 1) * a` divided by `b`, computed without
/// fractions. Requires `deg_v b >= 1` and `deg_v a >= deg_v b`.
fn prem(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let order = a.order().clone();
    let db = b.deg_in(v) as i64;
    debug_assert!(db >= 1);
    let lc_b = b.lc_in(v);
    let mut r = a.clone();
    let mut n = a.deg_in(v) as i64 - db + 1;
    while !r.is_zero() && r.deg_in(v) as i64 >= db {
        let dr = r.deg_in(v) as i64;
        let lc_r = r.lc_in(v);
        // r := lc_b * r - lc_r * v^(dr-db) * b
        let shift = Polynomial::from_coeffs_in(
            &order,
            v,
            &std::iter::repeat(Polynomial::zero(&order))
                .take((dr - db) as usize)
                .chain(std::iter::once(lc_r))
                .collect::<Vec<_>>(),
        );
        r = r.mul(&lc_b).sub(&shift.mul(b));
        n -= 1;
    }
    // Normalize the multiplier count so prem is exactly lc_b^N * a mod b.
    let mut out = r;
    while n > 0 {
        out = out.mul(&lc_b);
        n -= 1;
    }
    out
}

/// Content and primitive part with respect to `v`: returns `(content, prim)`
/// with `p = content * prim`, `prim` of positive leading coefficient under the
/// term order, and `content` free of `v` (it absorbs the integer content and
/// the sign). For `p = 0` returns `(0, 0)`.
pub fn content_in(p: &Polynomial, v: Var) -> (Polynomial, Polynomial) {
    let order = p.order().clone();
    if p.is_zero() {
        return (Polynomial::zero(&order), Polynomial::zero(&order));
    }
    let coeffs = p.coeffs_in(v);
    let mut c = Polynomial::zero(&order);
    for co in coeffs.iter().filter(|c| !c.is_zero()) {
        c = gcd(&c, co);
    }
    let mut prim = exact_div(p, &c).expect("content divides");
    if prim.leading_coeff_global().is_negative() {
        prim = prim.neg();
        c = c.neg();
    }
    (c, prim)
}

/// Multivariate gcd over the integers, sign-normalized to a positive leading
/// coefficient. `gcd(0, q) = ±q` normalized; `gcd(0, 0) = 0`.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let order = p.order().clone();
    if p.is_zero() {
        return q.sign_normalize();
    }
    if q.is_zero() {
        return p.sign_normalize();
    }
    if p.is_constant() || q.is_constant() {
        let g = p.int_content().gcd(&q.int_content());
        return Polynomial::constant(&order, g);
    }
    let vp = p.mvar().unwrap();
    let vq = q.mvar().unwrap();
    if vp != vq {
        // The gcd cannot involve the higher variable, hence divides the
        // content of the poly that has it.
        let (hi, lo, v) = if vp > vq { (p, q, vp) } else { (q, p, vq) };
        let (c, _) = content_in(hi, v);
        return gcd(&c, lo);
    }
    let v = vp;
    let (cp, pp) = content_in(p, v);
    let (cq, qq) = content_in(q, v);
    let c = gcd(&cp, &cq);
    // Primitive PRS on the primitive parts.
    let (mut a, mut b) = if pp.deg_in(v) >= qq.deg_in(v) { (pp, qq) } else { (qq, pp) };
    loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return c.mul(&b).sign_normalize();
        }
        if r.deg_in(v) == 0 {
            // Primitive parts are coprime in v; their gcd is constant and,
            // both being primitive, it is a unit.
            return c.sign_normalize();
        }
        let (_, rp) = content_in(&r, v);
        a = b;
        b = rp;
    }
}

/// Gcd of an arbitrary collection.
pub fn gcd_many<'a, I>(polys: I) -> Polynomial
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut it = polys.into_iter();
    let first = it.next().expect("gcd_many needs at least one input");
    let mut g = first.sign_normalize();
    for p in it {
        g = gcd(&g, p);
    }
    g
}

/// Squarefree part of `p` with respect to `v`: `p / gcd(p, dp/dv)`,
/// sign-normalized. Strips all repeated `v`-factors and the full content
/// (which divides both arguments of the gcd). Requires `deg_v p >= 1`.
pub fn squarefree_part(p: &Polynomial, v: Var) -> Polynomial {
    debug_assert!(p.deg_in(v) >= 1);
    let g = gcd(p, &p.derivative(v));
    exact_div(p, &g).expect("gcd divides").sign_normalize()
}

/// Finest squarefree basis of a set of polynomials sharing main variable `v`:
/// pairwise-coprime, squarefree, integer-primitive, sign-normalized
/// polynomials whose product has the same zero set as the product of the
/// inputs. Constants are discarded; the result is canonically sorted and
/// deduplicated.
pub fn squarefree_basis(polys: &[Polynomial], v: Var) -> Vec<Polynomial> {
    let mut work: Vec<Polynomial> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        debug_assert_eq!(p.mvar(), Some(v), "basis inputs must share the main variable");
        let s = squarefree_part(p, v);
        if !work.contains(&s) {
            work.push(s);
        }
    }
    // Split on common factors until pairwise coprime. Each replacement
    // strictly reduces the summed total degree, so this terminates.
    'outer: loop {
        for i in 0..work.len() {
            for j in (i + 1)..work.len() {
                let g = gcd(&work[i], &work[j]);
                if g.is_constant() {
                    continue;
                }
                let a = exact_div(&work[i], &g).expect("gcd divides").sign_normalize();
                let b = exact_div(&work[j], &g).expect("gcd divides").sign_normalize();
                let j_elem = work.remove(j);
                let i_elem = work.remove(i);
                debug_assert_eq!(i_elem.sign_normalize(), i_elem);
                debug_assert_eq!(j_elem.sign_normalize(), j_elem);
                for cand in [g.sign_normalize(), a, b] {
                    if !cand.is_constant() && !work.contains(&cand) {
                        work.push(cand);
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    work.sort();
    work.dedup();
    work
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::vars::VariableOrder;
    use std::sync::Arc;

    fn ord() -> Arc<VariableOrder> {
        VariableOrder::new(["v", "u", "x", "y", "z"]).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &ord()).unwrap()
    }

    #[test]
    fn exact_division() {
        let a = p("(x^2 - 1)(y - x)");
        assert_eq!(exact_div(&a, &p("x^2 - 1")).unwrap(), p("y - x"));
        assert_eq!(exact_div(&a, &p("y - x")).unwrap(), p("x^2 - 1"));
        assert!(exact_div(&a, &p("y + x")).is_none());
        assert!(exact_div(&p("x^2 + 1"), &p("x + 1")).is_none());
        assert!(exact_div(&p("2*x"), &p("0")).is_none());
        assert_eq!(exact_div(&p("0"), &p("x")).unwrap(), p("0"));
    }

    #[test]
    fn content_and_primitive_part() {
        // Split with respect to y: (x^2-1)*y - x*(x^2-1) has content x^2-1.
        let a = p("(x^2 - 1)*y - x*(x^2 - 1)");
        let (c, pr) = content_in(&a, 3);
        assert_eq!(c, p("x^2 - 1"));
        assert_eq!(pr, p("y - x"));
        assert_eq!(c.mul(&pr), a);
        // The content carries the sign so the primitive part stays positive.
        let b = p("-2*y");
        let (c2, pr2) = content_in(&b, 3);
        assert_eq!(pr2, p("y"));
        assert_eq!(c2, p("-2"));
    }

    #[test]
    fn multivariate_gcd() {
        let g = p("u^2 - v^2");
        let a = g.mul(&p("u^2 - v^2 + 2"));
        assert_eq!(gcd(&a, &g), g);
        assert_eq!(gcd(&g, &p("u^2 - v^2 + 1")), p("1"));
        assert_eq!(gcd(&p("0"), &p("-2*y")), p("2*y"));
        assert_eq!(gcd(&p("6"), &p("4*x")), p("2"));
        // Different main variables: common factor must be free of the higher.
        let b = p("(x^2 - 1)*y^2 + (x^2 - 1)");
        assert_eq!(gcd(&b, &p("x^2 - 1")), p("x^2 - 1"));
        assert_eq!(gcd(&b, &p("x - 1")), p("x - 1"));
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(&p("4*y^2"), 3), p("y"));
        assert_eq!(squarefree_part(&p("(x^2 - 1)^2"), 2), p("x^2 - 1"));
        assert_eq!(squarefree_part(&p("(u^2 - v^2 + x - y + 1)^2"), 3), p("u^2 - v^2 + x - y + 1"));
        assert_eq!(squarefree_part(&p("y^2 - 2*x"), 3), p("y^2 - 2*x"));
        // Content (even non-square) is stripped too: it divides the derivative.
        assert_eq!(squarefree_part(&p("(x - 1)^2*y"), 3), p("y"));
    }

    #[test]
    fn squarefree_basis_splits_common_factors() {
        // (u^2-v^2)(u^2-v^2+2) against u^2-v^2 splits into three coprime parts.
        let q = p("u^4 - 2*u^2*v^2 + v^4 + 2*u^2 - 2*v^2");
        let basis = squarefree_basis(&[q, p("u^2 - v^2"), p("u^2 - v^2 + 1")], 1);
        assert_eq!(
            basis.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            vec!["u^2 - v^2", "u^2 - v^2 + 1", "u^2 - v^2 + 2"]
        );
        // Squarefree-ing and dedup happen on entry.
        let basis2 = squarefree_basis(&[p("4*y^2"), p("-y"), p("y - x")], 3);
        assert_eq!(
            basis2.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            vec!["y", "y - x"]
        );
    }

    #[test]
    fn basis_product_preserves_zero_set_at_rational_points() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        // Property check against a set with shared factors.
        let inputs = [
            p("(u^2 - v^2)(u^2 - v^2 + 2)"),
            p("(u^2 - v^2)^2"),
            p("u^2 - v^2 + 1"),
        ];
        let basis = squarefree_basis(&inputs, 1);
        let pts: Vec<(i64, i64)> = vec![(0, 0), (1, 1), (2, 1), (-3, 2), (5, -5), (7, 3)];
        for (a, b) in pts {
            let at = |q: &Polynomial| {
                q.eval_rational(&[BigRational::from(BigInt::from(a)), BigRational::from(BigInt::from(b))])
                    .is_zero()
            };
            let in_zero = inputs.iter().any(at);
            let out_zero = basis.iter().any(at);
            assert_eq!(in_zero, out_zero, "zero-set mismatch at ({a},{b})");
        }
    }
}
