//! Exact cylindrical algebraic decomposition (CAD) of real space for
//! quantifier-free polynomial formulas, with equational-constraint (EC)
//! reduction of both the projection and lifting phases.
//!
//! The pipeline: parse a formula over an ordered variable list, collect and
//! propagate equational constraints by resultants, designate one EC per level,
//! project level by level with EC-reduced operators, lift an exact sample-point
//! decomposition from the base line upward (pruning cylinders where the
//! designated EC cannot vanish), and label leaf cells with exact truth values.
//! All arithmetic is exact: big integers, big rationals, and real algebraic
//! numbers represented by isolating intervals.

pub mod bounds;
pub mod ecprop;
pub mod formula;
pub mod json;
pub mod lifting;
pub mod poly;
pub mod projection;
pub mod realalg;
pub mod vars;
pub mod verify;

use std::fmt;

/// Errors surfaced by the engine.
///
/// `Nullified` is the structured well-orientedness failure: it carries a
/// witness (level, polynomial, cell index, sample) and maps to a dedicated
/// process exit code in the CLI. Everything else is input validation or an
/// internal invariant breach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text (polynomial, formula, CLI value) failed to parse.
    Parse(String),
    /// A request was structurally invalid (bad variable order, bad designation,
    /// out-of-range bound parameters, ...).
    Invalid(String),
    /// A lifting polynomial vanished identically over a sample point: the
    /// decomposition is not well-oriented for this designation.
    Nullified {
        /// Level of the variable being lifted when nullification occurred.
        level: usize,
        /// Canonical text of the nullified polynomial.
        poly: String,
        /// Index of the base cell over which it vanished.
        cell: Vec<u32>,
        /// Sample point of that cell, rendered exactly.
        sample: Vec<String>,
    },
    /// An internal invariant failed; indicates a bug, not bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Nullified { level, poly, cell, sample } => write!(
                f,
                "FAIL: polynomial {poly} is nullified over cell {cell:?} (sample [{}]) at level {level}",
                sample.join(", ")
            ),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
