//! Cell construction: base phase, level-by-level lifting over sample
//! points, pruning of cells that designated constraints rule out, and exact
//! truth labeling of the resulting leaves.
//!
//! Cells are indexed 1-based within their parent; even indices are sections
//! (the sample's last coordinate is a root of the level's lift set), odd
//! indices are sectors. A pruned cell is extended by a single trivial child
//! (index 1, sample 0) whose subtree never needs evaluation: the designated
//! constraint cannot vanish there, so the formula is false throughout.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::ecprop::Designation;
use crate::formula::Formula;
use crate::poly::Polynomial;
use crate::projection::{project, ProjOptions, Projection};
use crate::realalg::{is_nullified, simplest_rational_between, substitute_roots, RealAlg};
use crate::vars::{Var, VariableOrder};
use crate::{Error, Result};

/// How lifting treats cells that the designated constraints exclude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LiftMode {
    /// Extend excluded cells trivially (single filler child per level).
    #[default]
    Prune,
    /// Lift every cell over the constraint-reduced lift sets.
    NoPrune,
    /// Lift every cell over the full squarefree basis of every level.
    /// A comparison mode: the projection below stays constraint-reduced, so
    /// basis polynomials outside the designated chain are not guaranteed
    /// delineable over lower cells and point location on the result may
    /// fail (see [`crate::verify::locate`]); truth labels at the stored
    /// samples remain exact.
    FullLift,
}

/// Options for a decomposition build.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    pub mode: LiftMode,
    pub proj: ProjOptions,
}

/// One cell of the decomposition (the root cell has depth 0).
#[derive(Debug, Clone)]
pub struct Cell {
    /// 1-based index per level; even entries are sections.
    pub index: Vec<u32>,
    /// Sample point: one exact coordinate per level.
    pub sample: Vec<RealAlg>,
    /// This cell was created by trivial extension (its last coordinate is a
    /// filler, not a genuine sample).
    pub trivial: bool,
    /// This cell or an ancestor is trivial; the whole subtree is excluded.
    pub dead: bool,
    /// Exact truth of the formula at the sample (leaves only).
    pub truth: Option<bool>,
    pub children: Vec<Cell>,
}

impl Cell {
    fn root() -> Cell {
        Cell {
            index: Vec::new(),
            sample: Vec::new(),
            trivial: false,
            dead: false,
            truth: None,
            children: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.index.len()
    }

    /// Walks the subtree, visiting every cell.
    pub fn walk(&self, f: &mut dyn FnMut(&Cell)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }
}

/// Counters from the build.
#[derive(Debug, Clone, Default)]
pub struct Stats {
    /// Number of cells at each depth `1..=n`.
    pub cells_per_level: Vec<usize>,
    /// Leaves whose truth was evaluated exactly.
    pub evaluated: usize,
    /// Leaves labeled false without evaluation (trivial ancestry).
    pub pruned_false: usize,
    /// Leaves where the formula holds.
    pub true_cells: usize,
}

/// A completed decomposition.
#[derive(Debug, Clone)]
pub struct Cad {
    pub order: Arc<VariableOrder>,
    pub formula: Formula,
    pub designation: BTreeMap<Var, Polynomial>,
    pub projection: Projection,
    /// The polynomials each level's roots were taken from (`liftsets[0]` is
    /// the base level's set).
    pub liftsets: Vec<Vec<Polynomial>>,
    pub options: BuildOptions,
    pub root: Cell,
    pub stats: Stats,
}

fn rational(n: i64) -> RealAlg {
    RealAlg::Rational(BigRational::from(BigInt::from(n)))
}

/// Children of a lifted cell: `2r + 1` cells around the `r` roots, with
/// sector samples chosen as simple as possible.
fn children_around(parent: &Cell, roots: &[RealAlg]) -> Vec<Cell> {
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    let mut push = |idx: u32, value: RealAlg, parent: &Cell| {
        let mut index = parent.index.clone();
        index.push(idx);
        let mut sample = parent.sample.clone();
        sample.push(value);
        out.push(Cell {
            index,
            sample,
            trivial: false,
            dead: parent.dead,
            truth: None,
            children: Vec::new(),
        });
    };
    if roots.is_empty() {
        push(1, rational(0), parent);
        return out;
    }
    let below = RealAlg::Rational(BigRational::from(roots[0].floor() - BigInt::from(1)));
    push(1, below, parent);
    for (i, r) in roots.iter().enumerate() {
        push(2 * i as u32 + 2, r.clone(), parent);
        let next_idx = 2 * i as u32 + 3;
        if i + 1 < roots.len() {
            let between = simplest_rational_between(r, &roots[i + 1]);
            push(next_idx, RealAlg::Rational(between), parent);
        } else {
            let above = RealAlg::Rational(BigRational::from(r.ceil() + BigInt::from(1)));
            push(next_idx, above, parent);
        }
    }
    out
}

/// Single filler child for an excluded cell.
fn trivial_child(parent: &Cell) -> Cell {
    let mut index = parent.index.clone();
    index.push(1);
    let mut sample = parent.sample.clone();
    sample.push(rational(0));
    Cell { index, sample, trivial: true, dead: true, truth: None, children: Vec::new() }
}

fn collect_at_depth<'a>(cell: &'a mut Cell, depth: usize, out: &mut Vec<&'a mut Cell>) {
    if cell.depth() == depth {
        out.push(cell);
        return;
    }
    for c in &mut cell.children {
        collect_at_depth(c, depth, out);
    }
}

/// Builds the decomposition for `formula` under `designation`.
pub fn build_cad(
    formula: &Formula,
    designation: &Designation,
    order: &Arc<VariableOrder>,
    options: BuildOptions,
) -> Result<Cad> {
    let n = order.len();
    let input = formula.input_polynomials();
    let projection = project(&input, &designation.per_var, order, options.proj)?;
    let lowest_ec = designation.per_var.keys().min().copied();

    // Base level: roots of the designated base constraint if there is one,
    // else of every base polynomial.
    let base_polys: Vec<Polynomial> = match designation.per_var.get(&0) {
        Some(e) => vec![e.clone()],
        None => projection.a[0].clone(),
    };
    let mut liftsets: Vec<Vec<Polynomial>> = vec![base_polys.clone()];
    let mut root = Cell::root();
    {
        let tagged = substitute_roots(&base_polys, &[], 0)?;
        let values: Vec<RealAlg> = tagged.into_iter().map(|t| t.value).collect();
        root.children = children_around(&root, &values);
    }

    // Lift one variable at a time.
    for w in 1..n {
        let liftset: Vec<Polynomial> = match options.mode {
            LiftMode::FullLift => projection.b[w].clone(),
            _ => {
                if projection.f[w].is_empty() {
                    projection.b[w].clone()
                } else {
                    projection.f[w].clone()
                }
            }
        };
        // The parity filter keeps only sections of the previous level. It
        // applies when that level has a designated constraint and is either
        // the lowest constrained level or the second-highest level overall.
        let prev_designated = designation.per_var.contains_key(&(w - 1));
        let filter_sections = options.mode == LiftMode::Prune
            && prev_designated
            && (w == n - 1 || Some(w - 1) == lowest_ec);
        let mut parents = Vec::new();
        collect_at_depth(&mut root, w, &mut parents);
        for parent in parents {
            let excluded = options.mode == LiftMode::Prune
                && (parent.dead
                    || (filter_sections && parent.index.last().copied().unwrap_or(1) % 2 == 1));
            if excluded {
                parent.children = vec![trivial_child(parent)];
                continue;
            }
            for p in &liftset {
                if is_nullified(p, &parent.sample, w)? {
                    return Err(Error::Nullified {
                        level: w + 1,
                        poly: p.to_string(),
                        cell: parent.index.clone(),
                        sample: parent.sample.iter().map(|s| s.to_string()).collect(),
                    });
                }
            }
            let tagged = substitute_roots(&liftset, &parent.sample, w)?;
            let values: Vec<RealAlg> = tagged.into_iter().map(|t| t.value).collect();
            parent.children = children_around(parent, &values);
        }
        liftsets.push(liftset);
    }

    // Truth labeling.
    let mut stats = Stats { cells_per_level: vec![0; n], ..Stats::default() };
    let mut leaves = Vec::new();
    collect_at_depth(&mut root, n, &mut leaves);
    for leaf in leaves {
        if leaf.dead {
            leaf.truth = Some(false);
            stats.pruned_false += 1;
        } else {
            let t = formula.eval_at(&leaf.sample)?;
            leaf.truth = Some(t);
            stats.evaluated += 1;
            if t {
                stats.true_cells += 1;
            }
        }
    }
    root.walk(&mut |c| {
        if c.depth() >= 1 {
            stats.cells_per_level[c.depth() - 1] += 1;
        }
    });

    Ok(Cad {
        order: order.clone(),
        formula: formula.clone(),
        designation: designation.per_var.clone(),
        projection,
        liftsets,
        options,
        root,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecprop::propagate;
    use crate::formula::parse_formula;
    use crate::poly::parse_polynomial;

    fn build(
        src: &str,
        names: &[&str],
        picks: &[(&str, &str)],
        mode: LiftMode,
    ) -> Result<Cad> {
        let order = VariableOrder::new(names.iter().copied()).unwrap();
        let formula = parse_formula(src, &order).unwrap();
        let table = propagate(&formula.explicit_ecs(), &order).unwrap();
        let designation = if picks.is_empty() {
            Designation { per_var: BTreeMap::new() }
        } else {
            let picks: Vec<(Var, Polynomial)> = picks
                .iter()
                .map(|(v, p)| {
                    (order.index_of(v).unwrap(), parse_polynomial(p, &order).unwrap())
                })
                .collect();
            table.validate_explicit(&picks)?
        };
        build_cad(
            &formula,
            &designation,
            &order,
            BuildOptions { mode, ..BuildOptions::default() },
        )
    }

    const SURFACE_PAIR: &str = "x + y^2 + z = 0 /\\ x - y^2 + z = 0 /\\ x^2 + y^2 + z^2 - 1 >= 0";

    #[test]
    fn unpruned_counts_for_the_surface_pair() {
        let cad = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::NoPrune,
        )
        .unwrap();
        assert_eq!(cad.stats.cells_per_level, vec![5, 15, 45]);
        assert_eq!(cad.stats.pruned_false, 0);
        assert_eq!(cad.stats.evaluated, 45);
    }

    #[test]
    fn pruned_counts_for_the_surface_pair() {
        let cad = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::Prune,
        )
        .unwrap();
        assert_eq!(cad.stats.cells_per_level, vec![5, 15, 25]);
        // 10 trivial cylinders, 5 genuinely lifted sections (3 cells each).
        assert_eq!(cad.stats.pruned_false, 10);
        assert_eq!(cad.stats.evaluated, 15);
        let mut trivial_leaves = 0;
        cad.root.walk(&mut |c| {
            if c.depth() == 3 && c.trivial {
                trivial_leaves += 1;
            }
        });
        assert_eq!(trivial_leaves, 10);
    }

    #[test]
    fn truth_labels_match_the_variety() {
        // True cells satisfy y = 0, z = -x, 2x^2 >= 1.
        let cad = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::Prune,
        )
        .unwrap();
        let order = cad.order.clone();
        let ycheck = parse_polynomial("y", &order).unwrap();
        let zcheck = parse_polynomial("z + x", &order).unwrap();
        let xcheck = parse_polynomial("2*x^2 - 1", &order).unwrap();
        let mut seen = 0;
        cad.root.walk(&mut |c| {
            if c.truth == Some(true) {
                seen += 1;
                use crate::realalg::{sign_at, Sign};
                assert_eq!(sign_at(&ycheck, &c.sample).unwrap(), Sign::Zero);
                assert_eq!(sign_at(&zcheck, &c.sample).unwrap(), Sign::Zero);
                assert_ne!(sign_at(&xcheck, &c.sample).unwrap(), Sign::Neg);
            }
        });
        assert!(seen >= 2, "expected the two boundary intersection cells at least");
    }

    #[test]
    fn full_lift_dominates_level_counts() {
        let pruned = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::Prune,
        )
        .unwrap();
        let unpruned = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::NoPrune,
        )
        .unwrap();
        let full = build(
            SURFACE_PAIR,
            &["x", "y", "z"],
            &[("z", "x + y^2 + z"), ("y", "y")],
            LiftMode::FullLift,
        )
        .unwrap();
        for i in 0..3 {
            assert!(pruned.stats.cells_per_level[i] <= unpruned.stats.cells_per_level[i]);
            assert!(unpruned.stats.cells_per_level[i] <= full.stats.cells_per_level[i]);
        }
    }

    const FIVE_VAR_SYSTEM: &str = "x - y + z^2 = 0 /\\ z^2 - u^2 + v^2 - 1 = 0 /\\ \
         x + y + z^2 = 0 /\\ z^2 + u^2 - v^2 - 1 = 0 /\\ x^2 - 1 >= 0 /\\ z >= 0";

    #[test]
    fn five_variable_system_level_counts() {
        let cad = build(
            FIVE_VAR_SYSTEM,
            &["v", "u", "x", "y", "z"],
            &[
                ("z", "x - y + z^2"),
                ("y", "u^2 - v^2 + x - y + 1"),
                ("x", "x + 1"),
                ("u", "u^2 - v^2"),
            ],
            LiftMode::Prune,
        )
        .unwrap();
        assert_eq!(cad.stats.cells_per_level, vec![3, 13, 23, 53, 113]);
    }

    #[test]
    fn nullified_constraint_is_a_hard_failure_with_witness() {
        let err = build("x*z + y = 0", &["x", "y", "z"], &[("z", "x*z + y")], LiftMode::Prune)
            .unwrap_err();
        match err {
            Error::Nullified { level, poly, cell, sample } => {
                assert_eq!(level, 3);
                assert_eq!(poly, "z*x + y");
                assert_eq!(cell, vec![2, 2]);
                assert_eq!(sample, vec!["0".to_string(), "0".to_string()]);
            }
            other => panic!("expected nullification, got {other:?}"),
        }
    }

    #[test]
    fn single_variable_formulas_build_directly() {
        let cad = build("x^2 - 2 = 0", &["x"], &[], LiftMode::Prune).unwrap();
        assert_eq!(cad.stats.cells_per_level, vec![5]);
        assert_eq!(cad.stats.true_cells, 2);
        // Sections carry algebraic samples.
        assert!(matches!(cad.root.children[1].sample[0], RealAlg::Algebraic(_)));
        // Sector samples around -sqrt2: floor-1 = -3 below, 0 between, 3 above.
        assert_eq!(cad.root.children[0].sample[0].to_string(), "-3");
        assert_eq!(cad.root.children[2].sample[0].to_string(), "0");
        assert_eq!(cad.root.children[4].sample[0].to_string(), "3");
    }

    #[test]
    fn no_roots_means_one_cell() {
        let cad = build("x^2 + 1 > 0", &["x"], &[], LiftMode::Prune).unwrap();
        assert_eq!(cad.stats.cells_per_level, vec![1]);
        assert_eq!(cad.stats.true_cells, 1);
        assert_eq!(cad.root.children[0].sample[0].to_string(), "0");
    }
}
