//! Validation of a built decomposition: exact point location, randomized
//! truth-invariance checking, and structural auditing of the cell tree.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::lifting::{Cad, Cell};
use crate::realalg::{is_nullified, sign_at, substitute_roots, RealAlg, Sign};
use crate::{Error, Result};

/// The leaf cell that contains a queried point.
#[derive(Debug, Clone)]
pub struct Located {
    /// Index path of the leaf, one 1-based entry per level.
    pub path: Vec<u32>,
    /// The leaf's stored truth label.
    pub truth: bool,
}

/// Finds the leaf cell whose region contains `point`.
///
/// At each level the point's coordinate is compared exactly against the
/// roots of that level's lift set over the point's prefix; equality with
/// the j-th root selects section `2j + 2`, otherwise the surrounding
/// sector is selected. Cells that were extended trivially are descended
/// through directly, since their whole cylinder shares one label.
///
/// Location requires the stacks to be delineable over their base cells,
/// which the default and no-prune modes guarantee for their lift sets.
/// The full-lift comparison mode decomposes cylinders by basis polynomials
/// whose real-root count may genuinely change across a base cell (their
/// discriminants and coefficients are not carried by the reduced
/// projection), so the recomputed stack at a queried point can disagree
/// with the stored one; such a query fails loudly with an internal error
/// instead of returning a cell that does not contain the point.
pub fn locate(cad: &Cad, point: &[RealAlg]) -> Result<Located> {
    let n = cad.order.len();
    if point.len() != n {
        return Err(Error::Invalid(format!(
            "point has {} coordinates; the variable order has {}",
            point.len(),
            n
        )));
    }
    let mut cell: &Cell = &cad.root;
    for w in 0..n {
        if cell.children.len() == 1 && cell.children[0].trivial {
            cell = &cell.children[0];
            continue;
        }
        let prefix = &point[..w];
        for p in &cad.liftsets[w] {
            if is_nullified(p, prefix, w)? {
                return Err(Error::Internal(format!(
                    "lift-set polynomial {p} is identically zero over the queried \
                     point's prefix at level {}; the region structure does not \
                     extend there",
                    w + 1
                )));
            }
        }
        let tagged = substitute_roots(&cad.liftsets[w], prefix, w)?;
        let coord = &point[w];
        let mut index = 2 * tagged.len() as u32 + 1;
        for (j, t) in tagged.iter().enumerate() {
            match coord.compare(&t.value) {
                Ordering::Less => {
                    index = 2 * j as u32 + 1;
                    break;
                }
                Ordering::Equal => {
                    index = 2 * j as u32 + 2;
                    break;
                }
                Ordering::Greater => {}
            }
        }
        let child = cell.children.get(index as usize - 1).ok_or_else(|| {
            Error::Internal(format!(
                "level {}: computed child index {index} but the cell has {} children",
                w + 1,
                cell.children.len()
            ))
        })?;
        if child.index.last().copied() != Some(index) {
            return Err(Error::Internal(format!(
                "level {}: child at position {} carries index {:?}",
                w + 1,
                index,
                child.index.last()
            )));
        }
        cell = child;
    }
    let truth = cell
        .truth
        .ok_or_else(|| Error::Internal("located leaf has no truth label".into()))?;
    Ok(Located { path: cell.index.clone(), truth })
}

/// [`locate`] for a rational point.
pub fn locate_rational(cad: &Cad, point: &[BigRational]) -> Result<Located> {
    let lifted: Vec<RealAlg> = point.iter().cloned().map(RealAlg::Rational).collect();
    locate(cad, &lifted)
}

/// Outcome of a randomized truth-invariance check.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub samples: usize,
    pub mismatches: usize,
    /// The first mismatching point, if any, one display string per coordinate.
    pub first_mismatch: Option<Vec<String>>,
}

/// Samples `count` random rational points, locates each point's leaf, and
/// compares the leaf's truth label against direct evaluation of the
/// formula at the point.
///
/// Points are drawn from a ChaCha20 stream seeded with `seed`: for each
/// coordinate the numerator is uniform on `[-65536, 65536]` and the
/// denominator uniform on `[1, 256]` (numerator first), so the whole check
/// is reproducible from the seed alone.
pub fn check_truth_invariance(cad: &Cad, count: usize, seed: u64) -> Result<InvarianceReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = cad.order.len();
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for _ in 0..count {
        let mut point = Vec::with_capacity(n);
        for _ in 0..n {
            let num = (rng.next_u64() % 131_073) as i64 - 65_536;
            let den = (rng.next_u64() % 256) as i64 + 1;
            point.push(BigRational::new(BigInt::from(num), BigInt::from(den)));
        }
        let located = locate_rational(cad, &point)?;
        let direct = cad.formula.eval_rational(&point);
        if located.truth != direct {
            mismatches += 1;
            if first_mismatch.is_none() {
                first_mismatch = Some(point.iter().map(|q| q.to_string()).collect());
            }
        }
    }
    Ok(InvarianceReport { samples: count, mismatches, first_mismatch })
}

/// Counters from a clean structural audit.
#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    /// Cells below the root.
    pub cells: usize,
    pub leaves: usize,
    /// Section samples verified to be roots of their level's lift set.
    pub sections_certified: usize,
    /// Sector samples verified to avoid every lift-set root.
    pub sectors_certified: usize,
}

/// Audits the cell tree and returns counters, or the first violation found.
///
/// Checks, for every cell: leaves sit exactly at full depth and carry a
/// truth label; interior cells have an odd number of children carrying
/// consecutive indices `1..=2k+1`; sibling samples strictly increase; and
/// unless the extension was trivial, each even-indexed child's sample is a
/// root of some lift-set polynomial while odd-indexed children's samples
/// are roots of none.
pub fn audit_structure(cad: &Cad) -> Result<AuditReport> {
    let mut report = AuditReport::default();
    audit_cell(cad, &cad.root, &mut report)?;
    Ok(report)
}

fn audit_cell(cad: &Cad, cell: &Cell, report: &mut AuditReport) -> Result<()> {
    let n = cad.order.len();
    let depth = cell.depth();
    if depth >= 1 {
        report.cells += 1;
    }
    if depth == n {
        report.leaves += 1;
        if cell.truth.is_none() {
            return Err(Error::Internal(format!(
                "leaf {:?} has no truth label",
                cell.index
            )));
        }
        if !cell.children.is_empty() {
            return Err(Error::Internal(format!(
                "leaf {:?} has children",
                cell.index
            )));
        }
        return Ok(());
    }
    if cell.truth.is_some() {
        return Err(Error::Internal(format!(
            "interior cell {:?} carries a truth label",
            cell.index
        )));
    }
    let k = cell.children.len();
    if k == 0 {
        return Err(Error::Internal(format!(
            "interior cell {:?} has no children",
            cell.index
        )));
    }
    if k % 2 == 0 {
        return Err(Error::Internal(format!(
            "cell {:?} has an even number of children ({k})",
            cell.index
        )));
    }
    for (i, child) in cell.children.iter().enumerate() {
        if child.index.last().copied() != Some(i as u32 + 1) {
            return Err(Error::Internal(format!(
                "cell {:?}: child at position {i} carries index {:?}",
                cell.index,
                child.index.last()
            )));
        }
        if child.index.len() != depth + 1 || child.sample.len() != depth + 1 {
            return Err(Error::Internal(format!(
                "cell {:?}: child {i} has inconsistent depth",
                cell.index
            )));
        }
    }
    let trivial_extension = k == 1 && cell.children[0].trivial;
    if !trivial_extension {
        for pair in cell.children.windows(2) {
            let a = pair[0].sample.last().expect("child sample is nonempty");
            let b = pair[1].sample.last().expect("child sample is nonempty");
            if a.compare(b) != Ordering::Less {
                return Err(Error::Internal(format!(
                    "cell {:?}: sibling samples are not strictly increasing",
                    cell.index
                )));
            }
        }
        let liftset = &cad.liftsets[depth];
        for child in &cell.children {
            let mut any_zero = false;
            for p in liftset {
                if sign_at(p, &child.sample)? == Sign::Zero {
                    any_zero = true;
                    break;
                }
            }
            let section = child.index.last().copied().unwrap_or(1) % 2 == 0;
            if section && !any_zero {
                return Err(Error::Internal(format!(
                    "section {:?}: sample is not a root of the level's lift set",
                    child.index
                )));
            }
            if !section && any_zero {
                return Err(Error::Internal(format!(
                    "sector {:?}: sample is a root of a lift-set polynomial",
                    child.index
                )));
            }
            if section {
                report.sections_certified += 1;
            } else {
                report.sectors_certified += 1;
            }
        }
    }
    for child in &cell.children {
        audit_cell(cad, child, report)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecprop::propagate;
    use crate::formula::parse_formula;
    use crate::lifting::{build_cad, BuildOptions, LiftMode};
    use crate::poly::parse_polynomial;
    use crate::vars::VariableOrder;

    const SURFACE_PAIR: &str =
        "x + y^2 + z = 0 /\\ x - y^2 + z = 0 /\\ x^2 + y^2 + z^2 - 1 >= 0";

    fn surface_pair(mode: LiftMode) -> Cad {
        let order = VariableOrder::new(["x", "y", "z"]).unwrap();
        let formula = parse_formula(SURFACE_PAIR, &order).unwrap();
        let table = propagate(&formula.explicit_ecs(), &order).unwrap();
        let picks = vec![
            (2, parse_polynomial("x + y^2 + z", &order).unwrap()),
            (1, parse_polynomial("y", &order).unwrap()),
        ];
        let designation = table.validate_explicit(&picks).unwrap();
        build_cad(
            &formula,
            &designation,
            &order,
            BuildOptions { mode, ..BuildOptions::default() },
        )
        .unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn locate_finds_a_true_point_and_a_false_point() {
        let cad = surface_pair(LiftMode::Prune);
        // (1, 0, -1) satisfies all three constraints.
        let hit = locate_rational(&cad, &[rat(1), rat(0), rat(-1)]).unwrap();
        assert!(hit.truth);
        assert_eq!(hit.path.len(), 3);
        // The origin violates the inequality.
        let miss = locate_rational(&cad, &[rat(0), rat(0), rat(0)]).unwrap();
        assert!(!miss.truth);
    }

    #[test]
    fn locate_descends_trivially_extended_cells() {
        let cad = surface_pair(LiftMode::Prune);
        // y = 1/2 lies in a sector over x = 1, which pruning extended
        // trivially; the label there must be false.
        let point = [rat(1), BigRational::new(BigInt::from(1), BigInt::from(2)), rat(0)];
        let hit = locate_rational(&cad, &point).unwrap();
        assert!(!hit.truth);
        assert!(!cad.formula.eval_rational(&point));
    }

    #[test]
    fn every_stored_sample_locates_to_its_own_cell() {
        for mode in [LiftMode::Prune, LiftMode::NoPrune] {
            let cad = surface_pair(mode);
            let mut leaves = Vec::new();
            cad.root.walk(&mut |c| {
                if c.depth() == 3 {
                    leaves.push((c.index.clone(), c.sample.clone()));
                }
            });
            for (index, sample) in leaves {
                let hit = locate(&cad, &sample).unwrap();
                assert_eq!(hit.path, index);
            }
        }
    }

    #[test]
    fn truth_invariance_holds_on_random_samples() {
        // Full-lift builds are excluded: location is only defined where the
        // lift sets are delineable over their base cells (see `locate`).
        for mode in [LiftMode::Prune, LiftMode::NoPrune] {
            let cad = surface_pair(mode);
            let report = check_truth_invariance(&cad, 200, 42).unwrap();
            assert_eq!(report.samples, 200);
            assert_eq!(report.mismatches, 0, "mode {mode:?}: {report:?}");
        }
    }

    #[test]
    fn full_lift_audits_clean_but_may_refuse_location() {
        // The full-lift comparison build is structurally sound at its stored
        // samples, yet decomposes cylinders by polynomials the reduced
        // projection does not make delineable; locating an arbitrary point
        // must then either agree with a fresh evaluation or refuse loudly,
        // never silently misreport.
        let cad = surface_pair(LiftMode::FullLift);
        audit_structure(&cad).unwrap();
        let mut agreed = 0usize;
        let mut refused = 0usize;
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for _ in 0..200 {
            let point: Vec<BigRational> = (0..3)
                .map(|_| {
                    let num = (rng.next_u64() % 131_073) as i64 - 65_536;
                    let den = (rng.next_u64() % 256) as i64 + 1;
                    BigRational::new(BigInt::from(num), BigInt::from(den))
                })
                .collect();
            match locate_rational(&cad, &point) {
                Ok(hit) => {
                    assert_eq!(hit.truth, cad.formula.eval_rational(&point));
                    agreed += 1;
                }
                Err(Error::Internal(_)) => refused += 1,
                Err(other) => panic!("unexpected error kind: {other}"),
            }
        }
        assert_eq!(agreed + refused, 200);
        assert!(agreed > 0, "most of the plane still locates normally");
    }

    #[test]
    fn audit_passes_on_built_decompositions() {
        let pruned = surface_pair(LiftMode::Prune);
        let report = audit_structure(&pruned).unwrap();
        assert_eq!(report.cells, 5 + 15 + 25);
        assert_eq!(report.leaves, 25);
        let unpruned = surface_pair(LiftMode::NoPrune);
        let report = audit_structure(&unpruned).unwrap();
        assert_eq!(report.cells, 5 + 15 + 45);
        assert_eq!(report.leaves, 45);
        assert_eq!(report.sections_certified + report.sectors_certified, 65);
    }

    #[test]
    fn audit_rejects_a_corrupted_tree() {
        let mut cad = surface_pair(LiftMode::NoPrune);
        *cad.root.children[0].index.last_mut().unwrap() = 5;
        let err = audit_structure(&cad).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }

    #[test]
    fn sampling_is_reproducible_from_the_seed() {
        let cad = surface_pair(LiftMode::Prune);
        let a = check_truth_invariance(&cad, 50, 7).unwrap();
        let b = check_truth_invariance(&cad, 50, 7).unwrap();
        assert_eq!(a.mismatches, b.mismatches);
        assert_eq!(a.first_mismatch, b.first_mismatch);
    }
}
