//! JSON serialization of a decomposition and exact reload.
//!
//! The encoding is self-contained: variable order, formula, designation,
//! projection layers, lift sets, build options, statistics, and the full
//! cell tree with exact sample coordinates. Rational coordinates are
//! decimal strings `"p/q"`; algebraic ones carry their defining univariate
//! polynomial (in the display variable `t`) plus an isolating interval.
//! Reloading parses every polynomial back through the canonical parser, so
//! a round trip reproduces the decomposition exactly.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::formula::parse_formula;
use crate::lifting::{BuildOptions, Cad, Cell, LiftMode, Stats};
use crate::poly::{parse_polynomial, Polynomial};
use crate::projection::{OpKind, ProjOptions, Projection};
use crate::realalg::{AlgRoot, RealAlg, UniPoly};
use crate::vars::VariableOrder;
use crate::{Error, Result};

/// Display variable for defining polynomials of algebraic coordinates.
const ROOT_VAR: &str = "t";

fn coord_to_json(c: &RealAlg) -> Value {
    match c {
        RealAlg::Rational(q) => json!({ "rational": q.to_string() }),
        RealAlg::Algebraic(r) => json!({
            "algebraic": {
                "polynomial": r.poly.to_text(ROOT_VAR),
                "lower": r.lo.to_string(),
                "upper": r.hi.to_string(),
            }
        }),
    }
}

fn cell_to_json(cell: &Cell) -> Value {
    json!({
        "index": cell.index,
        "sample": cell.sample.iter().map(coord_to_json).collect::<Vec<_>>(),
        "trivial": cell.trivial,
        "dead": cell.dead,
        "truth": cell.truth,
        "children": cell.children.iter().map(cell_to_json).collect::<Vec<_>>(),
    })
}

fn polys_to_json(polys: &[Polynomial]) -> Value {
    Value::Array(polys.iter().map(|p| Value::String(p.to_string())).collect())
}

fn op_to_json(op: &Option<OpKind>) -> Value {
    match op {
        None => Value::Null,
        Some(OpKind::Full) => Value::String("full".into()),
        Some(OpKind::EcReduced) => Value::String("ec-reduced".into()),
        Some(OpKind::EcReducedStar) => Value::String("ec-reduced-star".into()),
    }
}

fn mode_name(mode: LiftMode) -> &'static str {
    match mode {
        LiftMode::Prune => "prune",
        LiftMode::NoPrune => "no-prune",
        LiftMode::FullLift => "full-lift",
    }
}

/// Serializes a decomposition to a self-contained JSON value.
pub fn cad_to_json(cad: &Cad) -> Value {
    let order = cad.order.names();
    let designation: Map<String, Value> = cad
        .designation
        .iter()
        .map(|(v, p)| (cad.order.name(*v).to_string(), Value::String(p.to_string())))
        .collect();
    json!({
        "order": order,
        "formula": cad.formula.to_string(),
        "designation": designation,
        "options": {
            "mode": mode_name(cad.options.mode),
            "strict_coefficients": cad.options.proj.strict_coeffs,
            "star_resultant_pairs": cad.options.proj.star_res_pairs,
        },
        "projection": {
            "a": cad.projection.a.iter().map(|s| polys_to_json(s)).collect::<Vec<_>>(),
            "b": cad.projection.b.iter().map(|s| polys_to_json(s)).collect::<Vec<_>>(),
            "f": cad.projection.f.iter().map(|s| polys_to_json(s)).collect::<Vec<_>>(),
            "operators": cad.projection.ops.iter().map(op_to_json).collect::<Vec<_>>(),
        },
        "liftsets": cad.liftsets.iter().map(|s| polys_to_json(s)).collect::<Vec<_>>(),
        "stats": {
            "cells_per_level": cad.stats.cells_per_level,
            "evaluated": cad.stats.evaluated,
            "pruned_false": cad.stats.pruned_false,
            "true_cells": cad.stats.true_cells,
        },
        "cells": cell_to_json(&cad.root),
    })
}

fn want<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("JSON object is missing the key \"{key}\"")))
}

fn want_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    want(v, key)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("JSON key \"{key}\" is not a string")))
}

fn want_arr<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    want(v, key)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("JSON key \"{key}\" is not an array")))
}

fn want_bool(v: &Value, key: &str) -> Result<bool> {
    want(v, key)?
        .as_bool()
        .ok_or_else(|| Error::Parse(format!("JSON key \"{key}\" is not a boolean")))
}

fn want_usize(v: &Value, key: &str) -> Result<usize> {
    want(v, key)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| Error::Parse(format!("JSON key \"{key}\" is not an integer")))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s)
        .map_err(|e| Error::Parse(format!("bad rational \"{s}\": {e}")))
}

fn coord_from_json(v: &Value) -> Result<RealAlg> {
    if let Some(q) = v.get("rational") {
        let s = q
            .as_str()
            .ok_or_else(|| Error::Parse("\"rational\" is not a string".into()))?;
        return Ok(RealAlg::Rational(parse_rational(s)?));
    }
    if let Some(a) = v.get("algebraic") {
        let poly = UniPoly::parse(want_str(a, "polynomial")?, ROOT_VAR)?;
        let lo = parse_rational(want_str(a, "lower")?)?;
        let hi = parse_rational(want_str(a, "upper")?)?;
        if lo >= hi || poly.sign_at(&lo) == 0 || poly.sign_at(&hi) == 0
            || poly.sign_at(&lo) == poly.sign_at(&hi)
        {
            return Err(Error::Parse(format!(
                "({lo}, {hi}) is not an isolating interval with a sign change \
                 for {}",
                poly.to_text(ROOT_VAR)
            )));
        }
        return Ok(RealAlg::Algebraic(AlgRoot { poly, lo, hi }));
    }
    Err(Error::Parse(
        "sample coordinate is neither \"rational\" nor \"algebraic\"".into(),
    ))
}

fn cell_from_json(v: &Value) -> Result<Cell> {
    let index = want_arr(v, "index")?
        .iter()
        .map(|x| {
            x.as_u64()
                .map(|u| u as u32)
                .ok_or_else(|| Error::Parse("cell index entry is not an integer".into()))
        })
        .collect::<Result<Vec<u32>>>()?;
    let sample = want_arr(v, "sample")?
        .iter()
        .map(coord_from_json)
        .collect::<Result<Vec<RealAlg>>>()?;
    let truth = match want(v, "truth")? {
        Value::Null => None,
        Value::Bool(b) => Some(*b),
        _ => return Err(Error::Parse("cell truth is not true/false/null".into())),
    };
    let children = want_arr(v, "children")?
        .iter()
        .map(cell_from_json)
        .collect::<Result<Vec<Cell>>>()?;
    Ok(Cell {
        index,
        sample,
        trivial: want_bool(v, "trivial")?,
        dead: want_bool(v, "dead")?,
        truth,
        children,
    })
}

fn polys_from_json(v: &Value, order: &Arc<VariableOrder>) -> Result<Vec<Polynomial>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("polynomial list is not an array".into()))?
        .iter()
        .map(|s| {
            let text = s
                .as_str()
                .ok_or_else(|| Error::Parse("polynomial entry is not a string".into()))?;
            parse_polynomial(text, order)
        })
        .collect()
}

fn poly_sets_from_json(
    v: &Value,
    key: &str,
    order: &Arc<VariableOrder>,
) -> Result<Vec<Vec<Polynomial>>> {
    want_arr(v, key)?
        .iter()
        .map(|s| polys_from_json(s, order))
        .collect()
}

fn op_from_json(v: &Value) -> Result<Option<OpKind>> {
    match v {
        Value::Null => Ok(None),
        Value::String(s) => match s.as_str() {
            "full" => Ok(Some(OpKind::Full)),
            "ec-reduced" => Ok(Some(OpKind::EcReduced)),
            "ec-reduced-star" => Ok(Some(OpKind::EcReducedStar)),
            other => Err(Error::Parse(format!("unknown operator \"{other}\""))),
        },
        _ => Err(Error::Parse("operator entry is not a string or null".into())),
    }
}

fn mode_from_name(s: &str) -> Result<LiftMode> {
    match s {
        "prune" => Ok(LiftMode::Prune),
        "no-prune" => Ok(LiftMode::NoPrune),
        "full-lift" => Ok(LiftMode::FullLift),
        other => Err(Error::Parse(format!("unknown lift mode \"{other}\""))),
    }
}

/// Reloads a decomposition serialized by [`cad_to_json`].
pub fn cad_from_json(v: &Value) -> Result<Cad> {
    let names = want_arr(v, "order")?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or_else(|| Error::Parse("variable name is not a string".into()))
        })
        .collect::<Result<Vec<&str>>>()?;
    let order = VariableOrder::new(names)?;
    let formula = parse_formula(want_str(v, "formula")?, &order)?;

    let mut designation = BTreeMap::new();
    let des = want(v, "designation")?
        .as_object()
        .ok_or_else(|| Error::Parse("\"designation\" is not an object".into()))?;
    for (name, poly) in des {
        let var = order.index_of(name).ok_or_else(|| {
            Error::Parse(format!("designated variable \"{name}\" is not in the order"))
        })?;
        let text = poly
            .as_str()
            .ok_or_else(|| Error::Parse("designated polynomial is not a string".into()))?;
        designation.insert(var, parse_polynomial(text, &order)?);
    }

    let opts = want(v, "options")?;
    let options = BuildOptions {
        mode: mode_from_name(want_str(opts, "mode")?)?,
        proj: ProjOptions {
            strict_coeffs: want_bool(opts, "strict_coefficients")?,
            star_res_pairs: want_bool(opts, "star_resultant_pairs")?,
        },
    };

    let proj = want(v, "projection")?;
    let projection = Projection {
        order: order.clone(),
        a: poly_sets_from_json(proj, "a", &order)?,
        b: poly_sets_from_json(proj, "b", &order)?,
        f: poly_sets_from_json(proj, "f", &order)?,
        ops: want_arr(proj, "operators")?
            .iter()
            .map(op_from_json)
            .collect::<Result<Vec<_>>>()?,
    };

    let liftsets = poly_sets_from_json(v, "liftsets", &order)?;

    let st = want(v, "stats")?;
    let stats = Stats {
        cells_per_level: want_arr(st, "cells_per_level")?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| Error::Parse("cell count is not an integer".into()))
            })
            .collect::<Result<Vec<usize>>>()?,
        evaluated: want_usize(st, "evaluated")?,
        pruned_false: want_usize(st, "pruned_false")?,
        true_cells: want_usize(st, "true_cells")?,
    };

    let root = cell_from_json(want(v, "cells")?)?;

    if projection.a.len() != order.len()
        || projection.b.len() != order.len()
        || projection.f.len() != order.len()
        || liftsets.len() != order.len()
        || stats.cells_per_level.len() != order.len()
    {
        return Err(Error::Parse(
            "projection, lift-set, or statistics arrays do not match the \
             number of variables"
                .into(),
        ));
    }

    Ok(Cad {
        order,
        formula,
        designation,
        projection,
        liftsets,
        options,
        root,
        stats,
    })
}
