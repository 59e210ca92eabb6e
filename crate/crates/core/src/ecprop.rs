//! Propagation of equational constraints to lower levels and enumeration of
//! designation choices.
//!
//! The explicit equations of the formula seed a per-level candidate table;
//! resultants of same-level candidate pairs push implied equations downward
//! until no level has an unprocessed pair. A designation then picks one
//! candidate per level (where any exist) to steer the projection.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::poly::{content_in, gcd, resultant, Polynomial};
use crate::projection::normalize_into;
use crate::vars::{Var, VariableOrder};
use crate::{Error, Result};

/// Per-level designation candidates, canonically ordered.
#[derive(Debug, Clone)]
pub struct CandidateTable {
    order: Arc<VariableOrder>,
    per_var: Vec<Vec<Polynomial>>,
    pub warnings: Vec<String>,
}

/// One designation: the chosen constraint for each level that has one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Designation {
    pub per_var: BTreeMap<Var, Polynomial>,
}

/// Builds the candidate table from the formula's explicit equations.
///
/// Non-primitive equations (non-constant content in their main variable)
/// are excluded from candidacy with a warning — their content factor makes
/// them unusable as designated constraints, and silently replacing a
/// polynomial the user wrote would be misleading.
pub fn propagate(ecs: &[Polynomial], order: &Arc<VariableOrder>) -> Result<CandidateTable> {
    let n = order.len();
    let mut per_var: Vec<Vec<Polynomial>> = vec![Vec::new(); n];
    let mut warnings = Vec::new();
    for e in ecs {
        if e.is_zero() || e.is_constant() {
            warnings.push(format!("constant equation '{e} = 0' contributes no constraint"));
            continue;
        }
        let v = e.mvar().expect("nonconstant");
        let (c, _) = content_in(e, v);
        if !c.is_constant() {
            warnings.push(format!(
                "equation '{e} = 0' is not primitive in {} (content {c}); excluded from designation candidates",
                order.name(v)
            ));
            continue;
        }
        let mut pieces = Vec::new();
        normalize_into(e, &mut pieces);
        for p in pieces {
            let pv = p.mvar().expect("nonconstant");
            if !per_var[pv].contains(&p) {
                per_var[pv].push(p);
            }
        }
    }
    // Same-level pairs imply constraints below; work down one level at a
    // time. New entries may appear at the level being processed (from
    // common-factor splits), so the pair loop re-reads the length.
    for v in (1..n).rev() {
        let mut i = 0;
        while i < per_var[v].len() {
            let mut j = i + 1;
            while j < per_var[v].len() {
                let p = per_var[v][i].clone();
                let q = per_var[v][j].clone();
                let r = resultant(&p, &q, v)?;
                let mut pieces = Vec::new();
                if r.is_zero() {
                    let g = gcd(&p, &q);
                    warnings.push(format!(
                        "equations '{p}' and '{q}' share the factor '{g}'; propagating the factor instead of their vanishing resultant"
                    ));
                    normalize_into(&g, &mut pieces);
                } else {
                    normalize_into(&r, &mut pieces);
                }
                for piece in pieces {
                    let pv = piece.mvar().expect("nonconstant");
                    if !per_var[pv].contains(&piece) {
                        per_var[pv].push(piece);
                    }
                }
                j += 1;
            }
            i += 1;
        }
    }
    for level in &mut per_var {
        level.sort();
    }
    Ok(CandidateTable { order: order.clone(), per_var, warnings })
}

impl CandidateTable {
    pub fn order(&self) -> &Arc<VariableOrder> {
        &self.order
    }

    /// Candidates available at the level of variable `v`, canonically sorted.
    pub fn candidates(&self, v: Var) -> &[Polynomial] {
        &self.per_var[v]
    }

    /// Variables that have at least one candidate, greatest first.
    pub fn designated_vars(&self) -> Vec<Var> {
        (0..self.per_var.len())
            .rev()
            .filter(|&v| !self.per_var[v].is_empty())
            .collect()
    }

    /// Number of complete designations (product of per-level counts).
    pub fn total_designations(&self) -> u128 {
        self.per_var
            .iter()
            .filter(|l| !l.is_empty())
            .map(|l| l.len() as u128)
            .product()
    }

    /// Short identifier of a candidate: variable name plus canonical index.
    pub fn label(&self, v: Var, idx: usize) -> String {
        format!("{}{}", self.order.name(v), idx)
    }

    /// Label string of a full designation, greatest level first.
    pub fn designation_label(&self, d: &Designation) -> String {
        let mut parts = Vec::new();
        for v in self.designated_vars() {
            if let Some(p) = d.per_var.get(&v) {
                let idx = self.per_var[v].iter().position(|c| c == p).expect("designation from table");
                parts.push(self.label(v, idx));
            }
        }
        parts.join(",")
    }

    /// All complete designations, ordered with the greatest level varying
    /// slowest (so enumeration index 0 picks candidate 0 everywhere).
    pub fn enumerate(&self) -> Vec<Designation> {
        let vars = self.designated_vars();
        let mut out = vec![Designation { per_var: BTreeMap::new() }];
        for &v in &vars {
            let mut next = Vec::with_capacity(out.len() * self.per_var[v].len());
            for d in &out {
                for c in &self.per_var[v] {
                    let mut d2 = d.clone();
                    d2.per_var.insert(v, c.clone());
                    next.push(d2);
                }
            }
            out = next;
        }
        if vars.is_empty() {
            Vec::new()
        } else {
            out
        }
    }

    /// Heuristic designation: at each level the structurally simplest
    /// candidate (least total degree, then fewest terms, then canonical
    /// order).
    pub fn heuristic(&self) -> Designation {
        let mut per_var = BTreeMap::new();
        for v in self.designated_vars() {
            let best = self.per_var[v]
                .iter()
                .min_by_key(|p| (p.total_degree(), p.num_terms(), (*p).clone()))
                .expect("nonempty level");
            per_var.insert(v, best.clone());
        }
        Designation { per_var }
    }

    /// Validates explicit user picks: each polynomial must be nonconstant,
    /// primitive, keyed by its own main variable, and match a propagated
    /// candidate up to normalization.
    pub fn validate_explicit(&self, picks: &[(Var, Polynomial)]) -> Result<Designation> {
        let mut per_var = BTreeMap::new();
        for (v, p) in picks {
            if p.is_zero() || p.is_constant() {
                return Err(Error::Invalid(format!(
                    "designated constraint for {} must be nonconstant",
                    self.order.name(*v)
                )));
            }
            let mv = p.mvar().expect("nonconstant");
            if mv != *v {
                return Err(Error::Invalid(format!(
                    "designated constraint '{p}' has main variable {}, not {}",
                    self.order.name(mv),
                    self.order.name(*v)
                )));
            }
            let (c, _) = content_in(p, *v);
            if !c.is_constant() {
                return Err(Error::Invalid(format!(
                    "designated constraint '{p}' is not primitive in {} (content {c})",
                    self.order.name(*v)
                )));
            }
            let mut pieces = Vec::new();
            normalize_into(p, &mut pieces);
            debug_assert_eq!(pieces.len(), 1, "primitive polynomial normalizes to itself");
            let norm = pieces.pop().expect("nonconstant input");
            if !self.per_var[*v].contains(&norm) {
                return Err(Error::Invalid(format!(
                    "designated constraint '{p}' does not match any propagated candidate at {}",
                    self.order.name(*v)
                )));
            }
            if per_var.insert(*v, norm).is_some() {
                return Err(Error::Invalid(format!(
                    "two constraints designated for {}",
                    self.order.name(*v)
                )));
            }
        }
        Ok(Designation { per_var })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ord5() -> Arc<VariableOrder> {
        VariableOrder::new(["v", "u", "x", "y", "z"]).unwrap()
    }

    fn pp(s: &str, o: &Arc<VariableOrder>) -> Polynomial {
        parse_polynomial(s, o).unwrap()
    }

    fn table5() -> CandidateTable {
        let o = ord5();
        let ecs = vec![
            pp("x - y + z^2", &o),
            pp("z^2 - u^2 + v^2 - 1", &o),
            pp("x + y + z^2", &o),
            pp("z^2 + u^2 - v^2 - 1", &o),
        ];
        propagate(&ecs, &o).unwrap()
    }

    #[test]
    fn quadric_system_candidate_counts() {
        let o = ord5();
        let t = table5();
        // z: the four equations; y: 5; x: 3; u: 1; v: none.
        assert_eq!(t.candidates(4).len(), 4);
        assert_eq!(t.candidates(3).len(), 5);
        assert_eq!(t.candidates(2).len(), 3);
        assert_eq!(t.candidates(1).len(), 1);
        assert!(t.candidates(0).is_empty());
        assert_eq!(t.total_designations(), 60);
        assert_eq!(t.enumerate().len(), 60);
        // Spot-check membership (equality up to normalization).
        assert!(t.candidates(3).contains(&pp("y", &o)));
        assert!(t.candidates(3).contains(&pp("u^2 - v^2 + x - y + 1", &o)));
        assert!(t.candidates(3).contains(&pp("u^2 - v^2 - x - y - 1", &o)));
        assert!(t.candidates(2).contains(&pp("x + 1", &o)));
        assert!(t.candidates(2).contains(&pp("u^2 - v^2 + x + 1", &o)));
        assert_eq!(t.candidates(1), &[pp("u^2 - v^2", &o)]);
    }

    #[test]
    fn heuristic_prefers_low_degree_then_short() {
        let o = ord5();
        let t = table5();
        let d = t.heuristic();
        // At x the linear candidate beats both quadratics.
        assert_eq!(d.per_var[&2], pp("x + 1", &o));
        assert_eq!(d.per_var[&3], pp("y", &o));
        assert_eq!(d.per_var[&1], pp("u^2 - v^2", &o));
        assert_eq!(d.per_var.len(), 4);
    }

    #[test]
    fn labels_and_enumeration_order() {
        let t = table5();
        let all = t.enumerate();
        assert_eq!(all.len(), 60);
        // First designation picks candidate 0 at every level.
        let first = &all[0];
        assert_eq!(t.designation_label(first), "z0,y0,x0,u0");
        // The slowest-varying index is the greatest level.
        assert!(t.designation_label(&all[59]).starts_with("z3"));
        // Adjacent ids differ in the lowest level with >1 candidate.
        assert_eq!(t.designation_label(&all[1]), "z0,y0,x1,u0");
        assert_eq!(t.designation_label(&all[3]), "z0,y1,x0,u0");
    }

    #[test]
    fn nonprimitive_equations_are_excluded_with_warning() {
        let o = VariableOrder::new(["x", "z"]).unwrap();
        let ecs = vec![pp("(x - 1)*z + x - 1", &o)];
        let t = propagate(&ecs, &o).unwrap();
        assert!(t.candidates(1).is_empty());
        assert_eq!(t.warnings.len(), 1);
        assert!(t.warnings[0].contains("not primitive"), "{}", t.warnings[0]);
    }

    #[test]
    fn shared_factors_propagate_the_factor() {
        let o = VariableOrder::new(["x", "z"]).unwrap();
        // Two equations sharing z - x: resultant vanishes.
        let ecs = vec![pp("(z - x)*(z + 1)", &o), pp("(z - x)*(z - 1)", &o)];
        let t = propagate(&ecs, &o).unwrap();
        assert!(t.warnings.iter().any(|w| w.contains("share the factor")));
        assert!(t.candidates(1).contains(&pp("z - x", &o)));
    }

    #[test]
    fn validation_rejects_bad_picks() {
        let o = ord5();
        let t = table5();
        // Wrong main variable.
        assert!(t.validate_explicit(&[(4, pp("x + 1", &o))]).is_err());
        // Not a candidate.
        assert!(t.validate_explicit(&[(4, pp("z - 17", &o))]).is_err());
        // Not primitive.
        let o2 = VariableOrder::new(["x", "z"]).unwrap();
        let t2 = propagate(&[pp("x*z + 1", &o2)], &o2).unwrap();
        assert!(t2
            .validate_explicit(&[(1, pp("(x - 1)*z + x - 1", &o2))])
            .is_err());
        // A valid pick round-trips.
        let d = t.validate_explicit(&[(4, pp("x - y + z^2", &o)), (2, pp("x + 1", &o))]).unwrap();
        assert_eq!(d.per_var.len(), 2);
        assert_eq!(d.per_var[&4], pp("x - y + z^2", &o).sign_normalize());
    }
}
