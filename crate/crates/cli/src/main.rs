//! Command-line front end: formula parsing, constraint propagation,
//! designation sweeps, decomposition builds, verification, and bound
//! evaluation, with deterministic text or JSON output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use ecad_core::bounds::{cell_bound, BoundMode, BoundParams};
use ecad_core::ecprop::{propagate, CandidateTable, Designation};
use ecad_core::formula::{parse_formula, Formula};
use ecad_core::json::cad_to_json;
use ecad_core::lifting::{build_cad, BuildOptions, Cad, LiftMode};
use ecad_core::poly::{parse_polynomial, Polynomial};
use ecad_core::projection::ProjOptions;
use ecad_core::vars::{Var, VariableOrder};
use ecad_core::verify::{audit_structure, check_truth_invariance};
use ecad_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ecad",
    version,
    about = "Truth-invariant cylindrical decompositions of real space for \
             formulas with equational constraints, in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a truth-invariant decomposition and print it.
    Build(BuildArgs),
    /// Propagate equational constraints and print the candidate table.
    Propagate(InputArgs),
    /// Enumerate every designation choice, optionally building each.
    Designations(DesignationsArgs),
    /// Build, then check truth-invariance at random points and audit the tree.
    Verify(VerifyArgs),
    /// Evaluate a cell-count bound exactly.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Quantifier-free formula: atoms `p REL p` with REL one of
    /// = /= < <= > >=, connectives /\ \/ ~, and parentheses.
    formula: String,
    /// Comma-separated variable order, smallest first (e.g. `v,u,x,y,z`).
    #[arg(long, value_name = "VARS")]
    order: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ModeArgs {
    /// Lift every cell instead of pruning known-false ones.
    #[arg(long, conflicts_with = "full_lift")]
    no_prune: bool,
    /// Lift every cell over the full basis of every level.
    #[arg(long)]
    full_lift: bool,
    /// Keep every non-constant coefficient when projecting (skip the early
    /// cutoff at the first nonzero constant coefficient).
    #[arg(long)]
    strict_coefficients: bool,
    /// In the starred reduced operator, replace the discriminants of the
    /// non-constraint polynomials by their pairwise resultants (experimental).
    #[arg(long)]
    star_resultant_pairs: bool,
}

impl ModeArgs {
    fn options(&self) -> BuildOptions {
        let mode = if self.full_lift {
            LiftMode::FullLift
        } else if self.no_prune {
            LiftMode::NoPrune
        } else {
            LiftMode::Prune
        };
        BuildOptions {
            mode,
            proj: ProjOptions {
                strict_coeffs: self.strict_coefficients,
                star_res_pairs: self.star_resultant_pairs,
            },
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Designate constraints manually as `var:poly,var:poly,...`
    /// (e.g. `z:x - y + z^2,y:u^2 - v^2 + x - y + 1`).
    #[arg(long, value_name = "SPEC", conflicts_with = "heuristic")]
    ec: Option<String>,
    /// Designate automatically: per level, the candidate of lowest total
    /// degree, then fewest terms. This is the default.
    #[arg(long)]
    heuristic: bool,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args)]
struct DesignationsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Build the decomposition for every designation and report cell counts.
    #[arg(long)]
    counts: bool,
    #[command(flatten)]
    mode: ModeArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    build: BuildArgs,
    /// Number of random sample points.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Seed for the sample stream.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Number of variables.
    #[arg(long)]
    n: u32,
    /// Number of polynomials.
    #[arg(long)]
    m: u64,
    /// Maximum degree.
    #[arg(long)]
    d: u64,
    /// Number of equational constraints (in the top `l` variables).
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Which bound to evaluate.
    #[arg(long, value_enum)]
    mode: BoundModeArg,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundModeArg {
    PFull,
    PDominant,
    EcProjection,
    EcProjectionDominant,
    EcFull,
    EcDominant,
}

impl BoundModeArg {
    fn mode(self) -> BoundMode {
        match self {
            BoundModeArg::PFull => BoundMode::PFull,
            BoundModeArg::PDominant => BoundMode::PDominant,
            BoundModeArg::EcProjection => BoundMode::EcProjection,
            BoundModeArg::EcProjectionDominant => BoundMode::EcProjectionDominant,
            BoundModeArg::EcFull => BoundMode::EcFull,
            BoundModeArg::EcDominant => BoundMode::EcDominant,
        }
    }

    fn name(self) -> &'static str {
        match self {
            BoundModeArg::PFull => "p-full",
            BoundModeArg::PDominant => "p-dominant",
            BoundModeArg::EcProjection => "ec-projection",
            BoundModeArg::EcProjectionDominant => "ec-projection-dominant",
            BoundModeArg::EcFull => "ec-full",
            BoundModeArg::EcDominant => "ec-dominant",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e @ Error::Nullified { .. }) => {
            println!("{e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Propagate(args) => cmd_propagate(args),
        Command::Designations(args) => cmd_designations(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

/// Parses the order and formula, and propagates the explicit constraints.
fn prepare(input: &InputArgs) -> Result<(Arc<VariableOrder>, Formula, CandidateTable)> {
    let names: Vec<&str> = input.order.split(',').map(str::trim).collect();
    let order = VariableOrder::new(names)?;
    let formula = parse_formula(&input.formula, &order)?;
    let table = propagate(&formula.explicit_ecs(), &order)?;
    Ok((order, formula, table))
}

fn parse_designation_spec(
    spec: &str,
    order: &Arc<VariableOrder>,
) -> Result<Vec<(Var, Polynomial)>> {
    let mut picks = Vec::new();
    for piece in spec.split(',') {
        let piece = piece.trim();
        let (name, text) = piece.split_once(':').ok_or_else(|| {
            Error::Parse(format!(
                "designation entry \"{piece}\" is not of the form var:poly"
            ))
        })?;
        let name = name.trim();
        let var = order.index_of(name).ok_or_else(|| {
            Error::Parse(format!("designated variable \"{name}\" is not in the order"))
        })?;
        picks.push((var, parse_polynomial(text.trim(), order)?));
    }
    Ok(picks)
}

fn choose_designation(
    table: &CandidateTable,
    ec: &Option<String>,
    order: &Arc<VariableOrder>,
) -> Result<Designation> {
    match ec {
        Some(spec) => table.validate_explicit(&parse_designation_spec(spec, order)?),
        None => Ok(table.heuristic()),
    }
}

fn counts_csv(counts: &[usize]) -> String {
    counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

fn poly_list(polys: &[Polynomial]) -> String {
    if polys.is_empty() {
        "-".to_string()
    } else {
        polys.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" | ")
    }
}

fn designation_lines(out: &mut String, order: &VariableOrder, d: &BTreeMap<Var, Polynomial>) {
    if d.is_empty() {
        out.push_str("designation: none\n");
        return;
    }
    out.push_str("designation:\n");
    for (v, p) in d {
        let _ = writeln!(out, "  level {} ({}): {}", v + 1, order.name(*v), p);
    }
}

fn mode_name(mode: LiftMode) -> &'static str {
    match mode {
        LiftMode::Prune => "prune",
        LiftMode::NoPrune => "no-prune",
        LiftMode::FullLift => "full-lift",
    }
}

fn build_summary(out: &mut String, cad: &Cad) {
    let order = &cad.order;
    let n = order.len();
    let _ = writeln!(out, "order: {}", order.names().join(" < "));
    let _ = writeln!(out, "formula: {}", cad.formula);
    let _ = writeln!(out, "mode: {}", mode_name(cad.options.mode));
    designation_lines(out, order, &cad.designation);
    out.push_str("projection layers:\n");
    for v in (0..n).rev() {
        let _ = writeln!(
            out,
            "  level {} ({}): {}",
            v + 1,
            order.name(v),
            poly_list(&cad.projection.a[v])
        );
    }
    out.push_str("lift sets:\n");
    for (w, set) in cad.liftsets.iter().enumerate() {
        let _ = writeln!(out, "  level {} ({}): {}", w + 1, order.name(w), poly_list(set));
    }
    let _ = writeln!(out, "cells per level: {}", counts_csv(&cad.stats.cells_per_level));
    let _ = writeln!(
        out,
        "leaves: {} = {} evaluated ({} true) + {} pruned cylinders",
        cad.stats.evaluated + cad.stats.pruned_false,
        cad.stats.evaluated,
        cad.stats.true_cells,
        cad.stats.pruned_false,
    );
}

fn leaf_lines(out: &mut String, cad: &Cad) {
    let n = cad.order.len();
    out.push_str("leaf cells:\n");
    cad.root.walk(&mut |c| {
        if c.depth() != n {
            return;
        }
        let kind = if c.trivial {
            "cylinder"
        } else if c.index.last().copied().unwrap_or(1) % 2 == 0 {
            "section"
        } else {
            "sector"
        };
        let index = c
            .index
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let sample = c
            .sample
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let truth = match c.truth {
            Some(true) => "true",
            Some(false) => "false",
            None => "unlabeled",
        };
        let _ = writeln!(out, "  ({index})  {kind}  sample ({sample})  {truth}");
    });
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode> {
    let (order, formula, table) = prepare(&args.input)?;
    let designation = choose_designation(&table, &args.ec, &order)?;
    let cad = build_cad(&formula, &designation, &order, args.mode.options())?;
    if args.input.json {
        println!("{}", serde_json::to_string_pretty(&cad_to_json(&cad)).expect("serializable"));
    } else {
        let mut out = String::new();
        build_summary(&mut out, &cad);
        leaf_lines(&mut out, &cad);
        print!("{out}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_propagate(args: InputArgs) -> Result<ExitCode> {
    let (order, formula, table) = prepare(&args)?;
    let heuristic = table.heuristic();
    if args.json {
        let mut candidates = Map::new();
        for v in (0..order.len()).rev() {
            let set = table.candidates(v);
            if !set.is_empty() {
                candidates.insert(
                    order.name(v).to_string(),
                    Value::Array(
                        set.iter().map(|p| Value::String(p.to_string())).collect(),
                    ),
                );
            }
        }
        let picks: Map<String, Value> = heuristic
            .per_var
            .iter()
            .map(|(v, p)| (order.name(*v).to_string(), Value::String(p.to_string())))
            .collect();
        let doc = json!({
            "order": order.names(),
            "formula": formula.to_string(),
            "explicit": formula
                .explicit_ecs()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>(),
            "warnings": table.warnings,
            "candidates": candidates,
            "designations": table.total_designations().to_string(),
            "heuristic": picks,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        return Ok(ExitCode::SUCCESS);
    }
    let mut out = String::new();
    let _ = writeln!(out, "order: {}", order.names().join(" < "));
    let _ = writeln!(out, "formula: {formula}");
    out.push_str("explicit constraints:\n");
    let ecs = formula.explicit_ecs();
    if ecs.is_empty() {
        out.push_str("  none\n");
    }
    for p in &ecs {
        let _ = writeln!(out, "  {p}");
    }
    if !table.warnings.is_empty() {
        out.push_str("warnings:\n");
        for w in &table.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out.push_str("candidates:\n");
    let mut any = false;
    for v in (0..order.len()).rev() {
        let set = table.candidates(v);
        if set.is_empty() {
            continue;
        }
        any = true;
        let _ = writeln!(out, "  level {} ({}): {}", v + 1, order.name(v), poly_list(set));
    }
    if !any {
        out.push_str("  none\n");
    }
    let _ = writeln!(out, "designations: {}", table.total_designations());
    designation_lines(&mut out, &order, &heuristic.per_var);
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_designations(args: DesignationsArgs) -> Result<ExitCode> {
    let (order, formula, table) = prepare(&args.input)?;
    let options = args.mode.options();
    let all = table.enumerate();
    let mut any_failed = false;

    struct Row {
        label: String,
        picks: Vec<(String, String)>,
        outcome: Option<Result<Vec<usize>>>,
    }
    let mut rows = Vec::with_capacity(all.len());
    for d in &all {
        let picks: Vec<(String, String)> = d
            .per_var
            .iter()
            .rev()
            .map(|(v, p)| (order.name(*v).to_string(), p.to_string()))
            .collect();
        let outcome = if args.counts {
            let built = build_cad(&formula, d, &order, options)
                .map(|cad| cad.stats.cells_per_level);
            if built.is_err() {
                any_failed = true;
            }
            Some(built)
        } else {
            None
        };
        rows.push(Row { label: table.designation_label(d), picks, outcome });
    }

    if args.input.json {
        let json_rows: Vec<Value> = rows
            .iter()
            .map(|row| {
                let picks: Map<String, Value> = row
                    .picks
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                    .collect();
                let mut obj = Map::new();
                obj.insert("label".into(), Value::String(row.label.clone()));
                obj.insert("designation".into(), Value::Object(picks));
                match &row.outcome {
                    Some(Ok(counts)) => {
                        obj.insert("cells_per_level".into(), json!(counts));
                        obj.insert(
                            "leaves".into(),
                            json!(counts.last().copied().unwrap_or(0)),
                        );
                    }
                    Some(Err(e)) => {
                        obj.insert("error".into(), Value::String(e.to_string()));
                    }
                    None => {}
                }
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("designations".into(), json!(rows.len()));
        doc.insert("rows".into(), Value::Array(json_rows));
        if args.counts {
            let mut distinct: Vec<usize> = rows
                .iter()
                .filter_map(|r| match &r.outcome {
                    Some(Ok(counts)) => counts.last().copied(),
                    _ => None,
                })
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            doc.insert("distinct_leaf_counts".into(), json!(distinct));
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable")
        );
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "designations: {}", rows.len());
        for row in &rows {
            let picks = row
                .picks
                .iter()
                .map(|(k, v)| format!("{k}: {v}"))
                .collect::<Vec<_>>()
                .join(" | ");
            match &row.outcome {
                None => { let _ = writeln!(out, "  {}  [{picks}]", row.label); }
                Some(Ok(counts)) => {
                    let _ = writeln!(
                        out,
                        "  {}  [{picks}]  cells {}  leaves {}",
                        row.label,
                        counts_csv(counts),
                        counts.last().copied().unwrap_or(0)
                    );
                }
                Some(Err(e)) => {
                    let _ = writeln!(out, "  {}  [{picks}]  {e}", row.label);
                }
            }
        }
        if args.counts {
            let mut distinct: Vec<usize> = rows
                .iter()
                .filter_map(|r| match &r.outcome {
                    Some(Ok(counts)) => counts.last().copied(),
                    _ => None,
                })
                .collect();
            distinct.sort_unstable();
            distinct.dedup();
            let _ = writeln!(
                out,
                "distinct leaf counts: {}",
                distinct
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        print!("{out}");
    }
    Ok(if any_failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let (order, formula, table) = prepare(&args.build.input)?;
    let designation = choose_designation(&table, &args.build.ec, &order)?;
    let cad = build_cad(&formula, &designation, &order, args.build.mode.options())?;
    let report = check_truth_invariance(&cad, args.n, args.seed)?;
    let audit = audit_structure(&cad)?;
    let pass = report.mismatches == 0;
    if args.build.input.json {
        let doc = json!({
            "cells_per_level": cad.stats.cells_per_level,
            "samples": report.samples,
            "seed": args.seed,
            "mismatches": report.mismatches,
            "first_mismatch": report.first_mismatch,
            "audit": {
                "cells": audit.cells,
                "leaves": audit.leaves,
                "sections_certified": audit.sections_certified,
                "sectors_certified": audit.sectors_certified,
            },
            "result": if pass { "PASS" } else { "FAIL" },
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        let mut out = String::new();
        build_summary(&mut out, &cad);
        let _ = writeln!(
            out,
            "truth-invariance: {} samples, seed {}: {}",
            report.samples,
            args.seed,
            if pass {
                "PASS (0 mismatches)".to_string()
            } else {
                format!(
                    "FAIL ({} mismatches; first at ({}))",
                    report.mismatches,
                    report.first_mismatch.as_deref().unwrap_or(&[]).join(", ")
                )
            }
        );
        let _ = writeln!(
            out,
            "audit: PASS ({} cells, {} leaves, {} sections and {} sectors certified)",
            audit.cells, audit.leaves, audit.sections_certified, audit.sectors_certified
        );
        print!("{out}");
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    let params = BoundParams::new(args.n, args.m, args.d, args.l)?;
    let value = cell_bound(&params, args.mode.mode())?;
    if args.json {
        let doc = json!({
            "n": args.n,
            "m": args.m,
            "d": args.d,
            "l": args.l,
            "mode": args.mode.name(),
            "cells": value.to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        println!("{value}");
    }
    Ok(ExitCode::SUCCESS)
}
