//! Bounded cut-free proof search, the witness property of extended
//! sequents and finite saturation.

mod config;
mod prover;
mod witness;

use std::fmt;

use thiserror::Error;

use crate::syntax::Sequent;

pub use config::{SearchConfig, DEFAULT_RULE_ORDER};
pub use prover::{prove, prove_from};
pub use witness::{
    check_witness_property, saturate, saturate_with, ExtendedSequent, SaturateError, SaturateOptions,
    WitnessViolation,
};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SearchError {
    /// No derivation within the depth bound. `frontier` lists sequents
    /// left open at the deepest level tried.
    #[error("exhausted at depth {depth}")]
    Exhausted { depth: usize, frontier: Vec<Sequent> },
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("invalid goal: {0}")]
    InvalidGoal(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl SearchError {
    pub fn kind(&self) -> &'static str {
        match self {
            SearchError::Exhausted { .. } => "Exhausted",
            SearchError::ResourceLimit(_) => "ResourceLimit",
            SearchError::InvalidGoal(_) => "InvalidGoal",
            SearchError::InvalidConfig(_) => "InvalidConfig",
        }
    }

    pub fn frontier(&self) -> &[Sequent] {
        match self {
            SearchError::Exhausted { frontier, .. } => frontier,
            _ => &[],
        }
    }
}

/// Prints the frontier one sequent per line.
pub struct Frontier<'a>(pub &'a [Sequent]);

impl fmt::Display for Frontier<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.0 {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
