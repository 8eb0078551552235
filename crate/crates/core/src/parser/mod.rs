//! Concrete syntax: formulas, sequents, derivation documents and model
//! descriptions, plus tree rendering.

mod derivation;
mod grammar;
mod lexer;
mod model;
mod print;
mod render;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{Formula, Sequent};

pub(crate) use grammar::{ArityScope, Parser};
pub use model::{parse_model, print_model};
pub use derivation::{
    derivation_to_json, parse_derivation, parse_derivation_json, parse_derivation_text,
    print_derivation, print_derivation_json, DerivationError,
};
pub use print::{print_formula, print_sequent};
pub use render::{latex_sequents, render_ascii, render_latex};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SourceSpan {
    pub byte_start: usize,
    pub byte_end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Error, Serialize)]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: Vec<String>,
    pub found: String,
    pub hint: Option<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, expected: Vec<String>, found: String) -> Self {
        ParseError {
            span,
            expected,
            found,
            hint: None,
        }
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    /// Error without a meaningful position inside a formula.
    pub fn at_line(line: usize, expected: &str, found: impl Into<String>) -> Self {
        ParseError::new(
            SourceSpan {
                line,
                column: 1,
                ..SourceSpan::default()
            },
            vec![expected.to_string()],
            found.into(),
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: expected {}, found {}",
            self.span.line,
            self.span.column,
            self.expected.join(" or "),
            self.found
        )?;
        if let Some(h) = &self.hint {
            write!(f, " ({h})")?;
        }
        Ok(())
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut scope = ArityScope::default();
    let f = {
        let mut p = Parser::new(src, &mut scope)?;
        let f = p.formula()?;
        p.expect_eof()?;
        f
    };
    Ok(scope.resolve(&f))
}

pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    let mut scope = ArityScope::default();
    let s = Parser::new(src, &mut scope)?.sequent()?;
    Ok(scope.resolve_sequent(&s))
}

/// One sequent per line; blank lines and `#` comments are skipped.
pub fn parse_sequent_list(src: &str) -> Result<Vec<Sequent>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let s = parse_sequent(t).map_err(|mut e| {
            e.span.line = i + 1;
            e.span.column += line.len() - line.trim_start().len();
            e
        })?;
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
