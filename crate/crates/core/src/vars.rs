//! Ordered variable lists.
//!
//! A decomposition is always taken with respect to a fixed variable order
//! `x1 < x2 < ... < xn` (smallest first). Level `k` refers to variable `x_k`;
//! projection eliminates the greatest variable first and lifting re-introduces
//! variables from the smallest upward.

use std::sync::Arc;

use crate::{Error, Result};

/// Index of a variable within its [`VariableOrder`] (0 = smallest).
pub type Var = usize;

/// An immutable, ordered list of distinct variable names.
///
/// Shared by `Arc` between all polynomials of one computation; two orders are
/// interchangeable iff their name lists are equal.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct VariableOrder {
    names: Vec<String>,
}

impl VariableOrder {
    /// Builds an order from smallest to greatest variable.
    ///
    /// Names must be nonempty and pairwise distinct. (The polynomial parser
    /// additionally restricts the names it can read to alphanumeric
    /// identifiers starting with a letter; internally constructed orders may
    /// use reserved names such as `@t`.)
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Invalid("variable order must not be empty".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::Invalid("variable names must be nonempty".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate variable name: {n}")));
            }
        }
        Ok(Arc::new(VariableOrder { names }))
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True if the order has no variables (never constructible).
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Name of variable `v`.
    pub fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    /// All names, smallest variable first.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks a name up, returning its index.
    pub fn index_of(&self, name: &str) -> Option<Var> {
        self.names.iter().position(|n| n == name)
    }

    /// Returns a new order extending `self` with one extra, greatest variable.
    pub fn extended(&self, extra: &str) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        names.push(extra.to_string());
        VariableOrder::new(names)
    }
}
