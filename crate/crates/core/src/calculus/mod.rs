//! The sequent calculi: rule catalogue, backward rule application,
//! derivation checking, derived rules and parameter renaming.

mod check;
pub(crate) mod derived;
mod rename;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Locator, Rel, RelKind, Sequent, Symbol, Term, TermKind};

pub use check::{check, check_with, CheckOptions, CheckReport, CutPolicy, Verdict, Violation};
pub use derived::{expand_derived, DerivedRule};
pub use rename::rename_parameter;
pub use rules::apply_rule;

macro_rules! rules {
    ($($id:ident => $name:literal, $arity:literal, $second:literal;)*) => {
        /// The primitive rules. Names are the stable vocabulary of proof
        /// documents.
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
        pub enum RuleId {
            $($id,)*
        }

        impl RuleId {
            pub const ALL: &'static [RuleId] = &[$(RuleId::$id,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(RuleId::$id => $name,)*
                }
            }

            /// Number of premises.
            pub fn arity(self) -> usize {
                match self {
                    $(RuleId::$id => $arity,)*
                }
            }

            /// Rules that only exist in the second-order calculus.
            pub fn is_second_order(self) -> bool {
                match self {
                    $(RuleId::$id => $second,)*
                }
            }
        }
    };
}

rules! {
    Ax => "AX", 0, false;
    Cut => "Cut", 2, false;
    WL => "WL", 1, false;
    WR => "WR", 1, false;
    CL => "CL", 1, false;
    CR => "CR", 1, false;
    AndL => "AndL", 1, false;
    AndR => "AndR", 2, false;
    OrL => "OrL", 2, false;
    OrR => "OrR", 1, false;
    NegL => "NegL", 1, false;
    NegR => "NegR", 1, false;
    ImpL => "ImpL", 2, false;
    ImpR => "ImpR", 1, false;
    IffL => "IffL", 2, false;
    IffR => "IffR", 2, false;
    AllL => "AllL", 1, false;
    AllR => "AllR", 1, false;
    ExL => "ExL", 1, false;
    ExR => "ExR", 1, false;
    EqPlus => "EqPlus", 1, false;
    EqMinus => "EqMinus", 1, false;
    LamL => "LamL", 1, false;
    LamR => "LamR", 1, false;
    Iota1L => "Iota1L", 1, false;
    Iota2L => "Iota2L", 3, false;
    IotaR => "IotaR", 3, false;
    Eq2L => "Eq2L", 2, true;
    Eq2R => "Eq2R", 2, true;
    All2L => "All2L", 1, true;
    All2R => "All2R", 1, true;
    Ex2L => "Ex2L", 1, true;
    Ex2R => "Ex2R", 1, true;
    Iota1L2 => "Iota1L2", 1, true;
    Iota2L2 => "Iota2L2", 3, true;
    IotaR2 => "IotaR2", 3, true;
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum System {
    #[serde(rename = "rl")]
    RL,
    #[serde(rename = "rl2")]
    RL2,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::RL => "rl",
            System::RL2 => "rl2",
        })
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rl" => Ok(System::RL),
            "rl2" => Ok(System::RL2),
            _ => Err(format!("unknown system `{s}` (expected rl or rl2)")),
        }
    }
}

/// An individual term or a relational symbol supplied to a rule.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Witness {
    Term(Term),
    Rel(Rel),
}

impl Witness {
    pub fn symbol(&self) -> Symbol {
        match self {
            Witness::Term(t) => t.symbol(),
            Witness::Rel(r) => r.symbol(),
        }
    }

    pub fn is_parameter(&self) -> bool {
        match self {
            Witness::Term(t) => t.kind == TermKind::Par,
            Witness::Rel(r) => r.kind == RelKind::Par,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Term(t) => t.fmt(f),
            Witness::Rel(r) => write!(f, "{}/{}", r.name, r.arity),
        }
    }
}

impl From<Term> for Witness {
    fn from(t: Term) -> Self {
        Witness::Term(t)
    }
}

impl From<Rel> for Witness {
    fn from(r: Rel) -> Self {
        Witness::Rel(r)
    }
}

/// Which conclusion occurrences go to the left premise of a Cut.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct ContextSplit {
    pub ant: Vec<usize>,
    pub suc: Vec<usize>,
}

/// The variable of an atomic schema `𝒜`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SchemaVar {
    Ind(Term),
    Rel(Rel),
}

impl fmt::Display for SchemaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaVar::Ind(t) => t.fmt(f),
            SchemaVar::Rel(r) => r.fmt(f),
        }
    }
}

/// `𝒜` together with its distinguished variable: the substituted
/// occurrences in EqMinus and the derived second-order identity rule.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AtomicSchema {
    pub formula: Formula,
    pub var: SchemaVar,
}

/// Everything a rule application needs beyond its conclusion.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Instantiation {
    pub principal: Option<Locator>,
    pub eigen: Vec<Witness>,
    pub witnesses: Vec<Witness>,
    pub cut: Option<Formula>,
    pub schema: Option<AtomicSchema>,
    pub split: Option<ContextSplit>,
}

impl Instantiation {
    pub fn principal(loc: Locator) -> Self {
        Instantiation {
            principal: Some(loc),
            ..Instantiation::default()
        }
    }

    pub fn with_eigen(mut self, e: impl Into<Witness>) -> Self {
        self.eigen.push(e.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<Witness>) -> Self {
        self.witnesses.push(w.into());
        self
    }
}

/// A proof tree. Leaves are AX nodes: axioms or assumption sequents.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: RuleId,
    pub inst: Instantiation,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn new(conclusion: Sequent, rule: RuleId, inst: Instantiation, premises: Vec<Derivation>) -> Self {
        Derivation {
            conclusion,
            rule,
            inst,
            premises,
        }
    }

    pub fn leaf(conclusion: Sequent) -> Self {
        Derivation::new(conclusion, RuleId::Ax, Instantiation::default(), Vec::new())
    }

    /// Longest branch, counting nodes.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn uses_cut(&self) -> bool {
        self.rule == RuleId::Cut || self.premises.iter().any(Derivation::uses_cut)
    }

    /// Every node with its path of premise indices from the root, in
    /// preorder.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &Derivation)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, d)) = stack.pop() {
            for (i, p) in d.premises.iter().enumerate().rev() {
                let mut q = path.clone();
                q.push(i);
                stack.push((q, p));
            }
            out.push((path, d));
        }
        out
    }

    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        path.iter().try_fold(self, |d, &i| d.premises.get(i))
    }

    /// Leaves that are not instances of `φ ⇒ φ`.
    pub fn open_leaves(&self) -> Vec<&Sequent> {
        self.nodes()
            .into_iter()
            .filter(|(_, d)| d.premises.is_empty() && !rules::is_axiom(&d.conclusion))
            .map(|(_, d)| &d.conclusion)
            .collect()
    }
}

/// Why a node is not a correct rule application.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ViolationKind {
    PremiseMismatch,
    EigenvariableViolation,
    NotAtomic,
    ArityMismatch,
    WrongPremiseCount,
    BadInstantiation,
    CutForbidden,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{kind}: {detail}")]
pub struct RuleError {
    pub kind: ViolationKind,
    pub detail: String,
}

impl RuleError {
    pub fn new(kind: ViolationKind, detail: impl Into<String>) -> Self {
        RuleError {
            kind,
            detail: detail.into(),
        }
    }
}

#[cfg(test)]
mod tests;
