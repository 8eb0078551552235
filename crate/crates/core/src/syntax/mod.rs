//! Abstract syntax for the first- and second-order languages: symbols,
//! formulas, sequents, substitution and alpha-equivalence.

mod formula;
mod sequent;
mod subst;
mod symbol;

pub use formula::{
    alpha_eq, alpha_normalize, free_symbols, occurs_free_ind, occurs_free_rel, signature,
    well_formed, Formula, LamArg,
};
pub use sequent::{Locator, Sequent, Side};
pub use subst::{
    expand_rel_eq, replace_rel, replace_term, subst_ind, subst_ind_multi, subst_rel, RelTarget,
};
pub use symbol::{classify, Name, Pred, Rel, RelKind, Symbol, SymbolKind, Term, TermKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("substitution for {replaced} would be captured by the binder of {var}")]
    Capture { var: String, replaced: String },
    #[error("arity mismatch for {symbol}: expected {expected}, found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("ill-formed: {0}")]
    IllFormed(String),
}
