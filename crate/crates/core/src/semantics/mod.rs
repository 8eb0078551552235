//! Finite general models and satisfaction.

mod enumerate;
mod eval;
mod model;
mod relation;

pub use enumerate::{find_countermodel, valid_within, Countermodel, FamilyMode, SearchBounds, DEFAULT_SEED};
pub use eval::{eval, eval_full, eval_full_capped, holds_sequent, DEFAULT_RELATION_BITS};
pub use model::{Assignment, GeneralModel, Model};
pub use relation::{tuple_count, Relation};

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EvalError {
    #[error("uninterpreted symbol `{0}`")]
    UninterpretedSymbol(String),
    #[error("`{symbol}` has arity {expected} but is used with arity {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl EvalError {
    pub fn kind(&self) -> &'static str {
        match self {
            EvalError::UninterpretedSymbol(_) => "UninterpretedSymbol",
            EvalError::ArityMismatch { .. } => "ArityMismatch",
            EvalError::ResourceLimit(_) => "ResourceLimit",
            EvalError::InvalidModel(_) => "InvalidModel",
        }
    }
}
