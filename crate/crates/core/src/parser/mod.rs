//! Native `.flo` syntax and the OWL functional-syntax subset importer.
//!
//! ```text
//! comment := "#" to end of line
//! concept := "top" | "bot" | NAME | concept "&" concept
//!          | "all" NAME "." concept | "(" concept ")"
//! axiom   := concept "[=" concept
//! ```
//!
//! `all` binds tighter than `&`. Names match `[A-Za-z_][A-Za-z0-9_]*`;
//! `top`, `bot` and `all` are reserved. Names produced by transformations
//! (`_fresh#k`) are also accepted so that normalized files read back.

mod native;
pub mod owl;

use std::fmt;

use thiserror::Error;

pub use native::{parse_concept, parse_tbox, serialize_concept, serialize_tbox};
pub use owl::{import_owl_subset, ClassExpr, DropReport, OwlImport};

/// A syntax or signature error with a 1-based position in the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
