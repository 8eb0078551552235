//! Proof documents and sequent corpus shipped with the crate.

use crate::calculus::{Derivation, System, ViolationKind};
use crate::parser::{parse_derivation, parse_sequent, parse_sequent_list, DerivationError, ParseError};
use crate::syntax::Sequent;

pub struct ProofFixture {
    pub name: &'static str,
    pub source: &'static str,
    pub system: System,
    /// Leaves accepted besides axioms, one sequent per line.
    pub assumptions: &'static str,
    /// `None` when the document checks with Cut allowed, otherwise the
    /// violation it is rejected with.
    pub rejected_with: Option<ViolationKind>,
}

impl ProofFixture {
    pub fn derivation(&self) -> Result<Derivation, DerivationError> {
        parse_derivation(self.source)
    }

    pub fn assumptions(&self) -> Result<Vec<Sequent>, ParseError> {
        parse_sequent_list(self.assumptions)
    }
}

macro_rules! fixture {
    ($name:literal, $system:expr, $assumptions:expr, $rejected:expr) => {
        ProofFixture {
            name: $name,
            source: include_str!(concat!("../fixtures/", $name)),
            system: $system,
            assumptions: $assumptions,
            rejected_with: $rejected,
        }
    };
}

pub const PROOFS: &[ProofFixture] = &[
    fixture!(
        "eq2_plus.proof",
        System::RL2,
        include_str!("../fixtures/eq2_plus.assumptions"),
        None
    ),
    fixture!(
        "eq2_plus.json",
        System::RL2,
        include_str!("../fixtures/eq2_plus.assumptions"),
        None
    ),
    fixture!(
        "eq2_minus.proof",
        System::RL2,
        include_str!("../fixtures/eq2_minus.assumptions"),
        None
    ),
    fixture!(
        "eq2_minus_literal.proof",
        System::RL2,
        include_str!("../fixtures/eq2_minus.assumptions"),
        Some(ViolationKind::PremiseMismatch)
    ),
    fixture!("cut_disjunction.proof", System::RL, "", None),
    fixture!("cut_existential.proof", System::RL, "", None),
    fixture!("cut_relational.proof", System::RL2, "", None),
    fixture!("cut_description.proof", System::RL, "", None),
];

pub fn proof(name: &str) -> Option<&'static ProofFixture> {
    PROOFS.iter().find(|p| p.name == name)
}

pub const CORPUS: &str = include_str!("../fixtures/corpus.txt");

/// The labelled corpus: `true` for valid sequents, `false` for sequents
/// with a countermodel of at most two elements.
pub fn corpus() -> Vec<(bool, Sequent)> {
    CORPUS
        .lines()
        .filter_map(|l| {
            let l = l.trim();
            let (tag, s) = l.split_once(':')?;
            let valid = match tag {
                "valid" => true,
                "invalid" => false,
                _ => return None,
            };
            Some((valid, parse_sequent(s.trim()).expect("corpus sequents parse")))
        })
        .collect()
}
