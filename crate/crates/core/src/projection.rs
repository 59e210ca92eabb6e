//! Level-by-level projection of a polynomial set, with operator choice
//! driven by designated equational constraints.
//!
//! Working from the greatest variable down, each level's polynomials are
//! split into a squarefree basis; the projection of that basis (leading
//! coefficients, discriminants, resultants — reduced when a designated
//! constraint is available) joins the polynomials passed down from above to
//! form the next level's set. All emitted polynomials are normalized:
//! squarefree with respect to their own main variable, integer-primitive,
//! sign-normalized, with non-constant content split off as separate set
//! elements and constants discarded.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::poly::{
    content_in, discriminant, exact_div, resultant, squarefree_basis, squarefree_part, Polynomial,
};
use crate::vars::{Var, VariableOrder};
use crate::{Error, Result};

/// Which projection operator a level used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    /// Full projection of the basis: reduced coefficients, discriminants,
    /// and all pairwise resultants.
    Full,
    /// Constraint-reduced: full projection of the constraint divisors only,
    /// plus their resultants against the rest of the basis.
    EcReduced,
    /// Constraint-reduced plus the discriminants of the non-constraint part
    /// (or, in the experimental mode, its pairwise resultants).
    EcReducedStar,
}

/// Options controlling operator details.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProjOptions {
    /// Keep every non-constant coefficient instead of stopping at the first
    /// coefficient that is a nonzero constant.
    pub strict_coeffs: bool,
    /// In the starred operator, take pairwise resultants of the
    /// non-constraint part instead of its discriminants.
    pub star_res_pairs: bool,
}

/// The computed projection: per-variable polynomial sets and bookkeeping.
/// Index `v` holds the data of the level that introduces variable `v`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub order: Arc<VariableOrder>,
    /// `a[v]`: the full polynomial set of the level of variable `v`
    /// (for the top variable: the normalized input plus injected
    /// constraints; below: pass-downs plus projected polynomials).
    pub a: Vec<Vec<Polynomial>>,
    /// `b[v]`: squarefree basis of the elements of `a[v]` with main
    /// variable `v` (empty at `v = 0`; the base level is handled directly).
    pub b: Vec<Vec<Polynomial>>,
    /// `f[v]`: basis elements dividing the designated constraint at `v`.
    pub f: Vec<Vec<Polynomial>>,
    /// Operator used when projecting from level `v` (None at `v = 0`).
    pub ops: Vec<Option<OpKind>>,
}

/// Normalizes one polynomial into canonical set elements: the squarefree
/// part of its primitive part (with respect to its own main variable), with
/// non-constant content recursively normalized into further elements.
/// Constants contribute nothing.
pub fn normalize_into(p: &Polynomial, out: &mut Vec<Polynomial>) {
    if p.is_zero() || p.is_constant() {
        return;
    }
    let v = p.mvar().expect("nonconstant");
    let (c, prim) = content_in(p, v);
    if !c.is_constant() {
        normalize_into(&c, out);
    }
    out.push(squarefree_part(&prim, v));
}

/// Normalizes a collection into a sorted, deduplicated set.
pub fn normalize_set<'a, I>(polys: I) -> Vec<Polynomial>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut out = Vec::new();
    for p in polys {
        normalize_into(p, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

/// The coefficients of `g` in `v` that projection must carry: walking from
/// the leading coefficient down, non-constant coefficients are kept, zero
/// coefficients are skipped, and the walk stops at the first coefficient
/// that is a nonzero constant (such a coefficient prevents all of them
/// vanishing simultaneously). With `strict`, every non-constant coefficient
/// is kept.
fn coeffs_reduced(g: &Polynomial, v: Var, strict: bool) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for c in g.coeffs_in(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        if c.is_constant() {
            if strict {
                continue;
            }
            break;
        }
        out.push(c.clone());
    }
    out
}

/// Full projection of a basis: reduced coefficients, discriminants, and all
/// pairwise resultants.
fn proj_full(basis: &[Polynomial], v: Var, opts: ProjOptions) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for g in basis {
        out.extend(coeffs_reduced(g, v, opts.strict_coeffs));
        out.push(discriminant(g, v)?);
    }
    for (i, g) in basis.iter().enumerate() {
        for h in &basis[i + 1..] {
            out.push(resultant(g, h, v)?);
        }
    }
    Ok(out)
}

/// Constraint-reduced projection: full projection of the constraint
/// divisors, plus one resultant per (constraint, non-constraint) pair.
fn proj_ec(basis: &[Polynomial], constr: &[Polynomial], v: Var, opts: ProjOptions) -> Result<Vec<Polynomial>> {
    let mut out = proj_full(constr, v, opts)?;
    for f in constr {
        for g in basis.iter().filter(|g| !constr.contains(g)) {
            out.push(resultant(f, g, v)?);
        }
    }
    Ok(out)
}

/// Starred variant: additionally covers the non-constraint part by its
/// discriminants (default) or its pairwise resultants (experimental).
fn proj_ec_star(
    basis: &[Polynomial],
    constr: &[Polynomial],
    v: Var,
    opts: ProjOptions,
) -> Result<Vec<Polynomial>> {
    let mut out = proj_ec(basis, constr, v, opts)?;
    let rest: Vec<&Polynomial> = basis.iter().filter(|g| !constr.contains(g)).collect();
    if opts.star_res_pairs {
        for (i, g) in rest.iter().enumerate() {
            for h in &rest[i + 1..] {
                out.push(resultant(g, h, v)?);
            }
        }
    } else {
        for g in &rest {
            out.push(discriminant(g, v)?);
        }
    }
    Ok(out)
}

/// Runs the projection phase. `input` is the polynomial set of the formula;
/// `designation` maps a variable to its designated equational constraint
/// (already validated: nonconstant, primitive, main variable as keyed).
pub fn project(
    input: &[Polynomial],
    designation: &BTreeMap<Var, Polynomial>,
    order: &Arc<VariableOrder>,
    opts: ProjOptions,
) -> Result<Projection> {
    let n = order.len();
    for p in input {
        if p.order() != order {
            return Err(Error::Internal("input polynomial under a different variable order".into()));
        }
    }
    let mut a: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
    let mut b: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
    let mut f: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
    let mut ops: Vec<Option<OpKind>> = vec![None; n];
    a[n - 1] = normalize_set(input);
    for v in (1..n).rev() {
        // Inject this level's designated constraint before splitting.
        if let Some(e) = designation.get(&v) {
            let mut pieces = Vec::new();
            normalize_into(e, &mut pieces);
            for piece in pieces {
                let pv = piece.mvar().expect("normalized pieces are nonconstant");
                if !a[pv].contains(&piece) {
                    a[pv].push(piece);
                    a[pv].sort();
                }
            }
        }
        let (tops, pass): (Vec<Polynomial>, Vec<Polynomial>) =
            a[v].iter().cloned().partition(|p| p.mvar() == Some(v));
        b[v] = squarefree_basis(&tops, v);
        if let Some(e) = designation.get(&v) {
            let e_norm = squarefree_part(&content_in(e, v).1, v);
            f[v] = b[v]
                .iter()
                .filter(|g| exact_div(&e_norm, g).is_some())
                .cloned()
                .collect();
            if f[v].is_empty() {
                return Err(Error::Internal(format!(
                    "designated constraint at {} left no basis divisors",
                    order.name(v)
                )));
            }
        }
        let op = if f[v].is_empty() {
            OpKind::Full
        } else if v == n - 1 || v == 1 {
            OpKind::EcReduced
        } else {
            OpKind::EcReducedStar
        };
        ops[v] = Some(op);
        let raw = match op {
            OpKind::Full => proj_full(&b[v], v, opts)?,
            OpKind::EcReduced => proj_ec(&b[v], &f[v], v, opts)?,
            OpKind::EcReducedStar => proj_ec_star(&b[v], &f[v], v, opts)?,
        };
        let mut next = normalize_set(raw.iter().chain(&pass));
        next.dedup();
        a[v - 1] = next;
    }
    Ok(Projection { order: order.clone(), a, b, f, ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ord(names: &[&str]) -> Arc<VariableOrder> {
        VariableOrder::new(names.iter().copied()).unwrap()
    }

    fn pp(s: &str, o: &Arc<VariableOrder>) -> Polynomial {
        parse_polynomial(s, o).unwrap()
    }

    fn strs(ps: &[Polynomial]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn normalization_splits_content_and_strips_powers() {
        let o = ord(&["x", "y"]);
        // (x^2 - 1) * y^2: content x^2 - 1 splits off; y^2 flattens to y.
        let p = pp("(x^2 - 1)*y^2", &o);
        let mut out = Vec::new();
        normalize_into(&p, &mut out);
        assert_eq!(strs(&out), ["x^2 - 1", "y"]);
        // Constants vanish; signs normalize.
        assert!(normalize_set(&[pp("7", &o)]).is_empty());
        assert_eq!(strs(&normalize_set(&[pp("-2*x + 2", &o)])), ["x - 1"]);
        // Squarefree normalization merges even-power duplicates.
        let set = normalize_set(&[pp("y^2 - x", &o), pp("(y^2 - x)^2", &o)]);
        assert_eq!(strs(&set), ["y^2 - x"]);
    }

    #[test]
    fn reduced_coefficients_stop_at_nonzero_constant() {
        let o = ord(&["x", "y", "z"]);
        // z^3*x + z*y + 1: coefficients (desc) x, 0, y, 1.
        let g = pp("x*z^3 + y*z + 1", &o);
        let cs = coeffs_reduced(&g, 2, false);
        assert_eq!(strs(&cs), ["x", "y"]);
        // Constant leading coefficient: nothing at all.
        let h = pp("z^2 + x", &o);
        assert!(coeffs_reduced(&h, 2, false).is_empty());
        // A nonzero constant in the middle cuts the walk short.
        let m = pp("x*z^2 + z + y", &o);
        assert_eq!(strs(&coeffs_reduced(&m, 2, false)), ["x"]);
        // Strict mode keeps all non-constant coefficients.
        assert_eq!(strs(&coeffs_reduced(&m, 2, true)), ["x", "y"]);
    }

    #[test]
    fn full_projection_of_a_circle_and_line() {
        let o = ord(&["x", "y"]);
        // Unit circle and the diagonal: projection must find ±1 (circle
        // extremes) and ±sqrt(1/2) (intersections).
        let b = vec![pp("x^2 + y^2 - 1", &o), pp("y - x", &o)];
        let basis = squarefree_basis(&b, 1);
        let raw = proj_full(&basis, 1, ProjOptions::default()).unwrap();
        let a1 = normalize_set(&raw);
        assert_eq!(strs(&a1), ["x^2 - 1", "2*x^2 - 1"]);
    }

    #[test]
    fn operator_selection_follows_constraints_and_boundaries() {
        // Three variables, constraint at the top level only.
        let o = ord(&["x", "y", "z"]);
        let input = vec![pp("z^2 - x^2 - y^2", &o), pp("y - x", &o)];
        let des: BTreeMap<Var, Polynomial> =
            BTreeMap::from([(2, pp("z^2 - x^2 - y^2", &o))]);
        let proj = project(&input, &des, &o, ProjOptions::default()).unwrap();
        assert_eq!(proj.ops[2], Some(OpKind::EcReduced)); // top level
        assert_eq!(proj.ops[1], Some(OpKind::Full)); // no constraint below
        assert_eq!(proj.f[2], vec![pp("z^2 - x^2 - y^2", &o)]);
        // The designated constraint is injected and split into the basis.
        assert!(proj.b[2].contains(&pp("z^2 - x^2 - y^2", &o)));
    }

    #[test]
    fn pass_down_of_lower_level_elements() {
        let o = ord(&["x", "y"]);
        // x^2 - 1 has no y: it must pass straight down to level 1.
        let input = vec![pp("y^2 - x", &o), pp("x^2 - 1", &o)];
        let proj = project(&input, &BTreeMap::new(), &o, ProjOptions::default()).unwrap();
        assert!(proj.a[0].contains(&pp("x^2 - 1", &o)));
        // Projection of y^2 - x adds disc_y = 4x -> x.
        assert!(proj.a[0].contains(&pp("x", &o)));
        assert_eq!(proj.a[0].len(), 2);
    }
}
