//! Russellian definite-description logics over first- and second-order
//! languages: syntax, a proof checker for the sequent calculi, bounded
//! cut-free proof search and finite general-model semantics.

pub mod calculus;
pub mod fixtures;
pub mod parser;
pub mod search;
pub mod semantics;
pub mod syntax;

pub use parser::{parse_formula, parse_sequent, print_formula, print_sequent, ParseError};
pub use syntax::{Formula, Sequent};
