//! Textual `.fm` format.
//!
//! ```text
//! model       = "model" STRING "{" feature [constraints] "}"
//! feature     = [("mandatory"|"optional")] "feature" IDENT [meta] ["{" {element} "}"]
//! element     = feature | group
//! group       = ("alt"|"or") "{" feature feature {feature} "}"
//! meta        = "(" ("fullname" STRING ["," "desc" STRING] | "desc" STRING) ")"
//! constraints = "constraints" "{" {constraint} "}"
//! constraint  = PATH ("requires"|"excludes") PATH
//! ```
//!
//! `//` starts a line comment. Constraint paths are absolute. Keywords are
//! contextual, so a feature may be called `alt` or `or`.

mod lexer;
mod parser;
mod serializer;

use std::fmt;

pub use lexer::Pos;
pub use parser::parse_model;
pub use serializer::serialize_model;

use crate::model::ModelError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
    /// Set when the text is well-formed but describes an invalid model.
    pub cause: Option<ModelError>,
}

impl ParseError {
    pub(crate) fn syntax(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            column: pos.column,
            expected: expected.into(),
            found: found.into(),
            cause: None,
        }
    }

    pub(crate) fn model(pos: Pos, cause: ModelError) -> Self {
        let (expected, found) = match &cause {
            ModelError::GroupTooSmall { size, .. } => (
                "at least 2 features in group".to_string(),
                format!("{size} feature{}", if *size == 1 { "" } else { "s" }),
            ),
            ModelError::DuplicateSibling { name, .. } => (
                "unique sibling name".to_string(),
                format!("duplicate `{name}`"),
            ),
            ModelError::DanglingConstraint(p) => {
                ("existing feature path".to_string(), format!("`{p}`"))
            }
            ModelError::SelfConstraint(p) => {
                ("two distinct features".to_string(), format!("`{p}` twice"))
            }
            other => ("valid model".to_string(), other.to_string()),
        };
        ParseError {
            line: pos.line,
            column: pos.column,
            expected,
            found,
            cause: Some(cause),
        }
    }

    pub fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.cause {
            Some(cause) => write!(f, "{}:{}: {}", self.line, self.column, cause),
            None => write!(
                f,
                "{}:{}: expected {}, found {}",
                self.line, self.column, self.expected, self.found
            ),
        }
    }
}

impl std::error::Error for ParseError {}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}
