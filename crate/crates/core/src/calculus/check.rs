use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::{apply_rule, is_axiom};
use super::{ContextSplit, Derivation, Instantiation, RuleError, RuleId, System, ViolationKind, Witness};
use crate::syntax::{alpha_normalize, Formula, Sequent, Side};

/// Which Cut nodes are admissible.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CutPolicy {
    Allowed,
    Forbidden,
    /// Only cuts on formulas that occur in some assumption sequent.
    AssumptionFormulasOnly,
}

impl From<bool> for CutPolicy {
    fn from(allow: bool) -> Self {
        if allow {
            CutPolicy::Allowed
        } else {
            CutPolicy::Forbidden
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub system: System,
    pub cut: CutPolicy,
    /// Sequents accepted as leaves besides axioms.
    pub assumptions: Vec<Sequent>,
    /// Eigenvariables must also be absent from every conclusion below
    /// their node.
    pub strict_eigen: bool,
}

impl CheckOptions {
    pub fn new(system: System) -> Self {
        CheckOptions {
            system,
            cut: CutPolicy::Allowed,
            assumptions: Vec::new(),
            strict_eigen: false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    /// Premise indices from the root.
    pub path: Vec<usize>,
    pub rule: RuleId,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    pub height: usize,
    pub uses_cut: bool,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    pub fn kinds(&self) -> Vec<ViolationKind> {
        self.violations.iter().map(|v| v.kind).collect()
    }
}

fn path_string(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join("."))
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Accepted => "accepted",
            Verdict::Rejected => "rejected",
        };
        write!(f, "{verdict} (height {}", self.height)?;
        if self.uses_cut {
            f.write_str(", uses cut")?;
        }
        f.write_str(")")?;
        for v in &self.violations {
            write!(f, "\n  at {} {}: {}: {}", path_string(&v.path), v.rule, v.kind, v.detail)?;
        }
        Ok(())
    }
}

/// Checks `d` in `system`, with Cut permitted or not and `assumptions` as
/// extra admissible leaves.
pub fn check(d: &Derivation, system: System, allow_cut: bool, assumptions: &[Sequent]) -> CheckReport {
    check_with(
        d,
        &CheckOptions {
            system,
            cut: allow_cut.into(),
            assumptions: assumptions.to_vec(),
            strict_eigen: false,
        },
    )
}

pub fn check_with(d: &Derivation, opts: &CheckOptions) -> CheckReport {
    let assumptions: Vec<Sequent> = opts.assumptions.iter().map(Sequent::normalized).collect();
    let mut violations = Vec::new();
    for (path, node) in d.nodes() {
        if let Err(e) = check_node(d, &path, node, opts, &assumptions) {
            violations.push(Violation {
                path,
                rule: node.rule,
                kind: e.kind,
                detail: e.detail,
            });
        }
    }
    CheckReport {
        verdict: if violations.is_empty() {
            Verdict::Accepted
        } else {
            Verdict::Rejected
        },
        violations,
        height: d.height(),
        uses_cut: d.uses_cut(),
    }
}

fn check_node(
    root: &Derivation,
    path: &[usize],
    node: &Derivation,
    opts: &CheckOptions,
    assumptions: &[Sequent],
) -> Result<(), RuleError> {
    let rule = node.rule;
    if opts.system == System::RL {
        if rule.is_second_order() {
            return Err(RuleError::new(
                ViolationKind::BadInstantiation,
                format!("{rule} is not a rule of the first-order calculus"),
            ));
        }
        if !node.conclusion.is_first_order() {
            return Err(RuleError::new(
                ViolationKind::BadInstantiation,
                "second-order syntax in a first-order derivation",
            ));
        }
    }
    if rule == RuleId::Cut {
        let forbidden = match opts.cut {
            CutPolicy::Allowed => None,
            CutPolicy::Forbidden => Some("Cut is not permitted".to_string()),
            CutPolicy::AssumptionFormulasOnly => match &node.inst.cut {
                Some(phi) if in_assumptions(phi, assumptions) => None,
                Some(phi) => Some(format!("cut formula `{phi}` does not occur in any assumption")),
                None => None,
            },
        };
        if let Some(detail) = forbidden {
            return Err(RuleError::new(ViolationKind::CutForbidden, detail));
        }
    }
    if node.premises.is_empty() && rule == RuleId::Ax && !is_axiom(&node.conclusion) {
        if node.inst != Instantiation::default() {
            return Err(RuleError::new(ViolationKind::BadInstantiation, "AX takes no instantiation"));
        }
        let norm = node.conclusion.normalized();
        if assumptions.contains(&norm) {
            return Ok(());
        }
        return Err(RuleError::new(
            ViolationKind::PremiseMismatch,
            format!("leaf `{}` is neither an axiom nor an assumption", node.conclusion),
        ));
    }
    if node.premises.len() != rule.arity() {
        return Err(RuleError::new(
            ViolationKind::WrongPremiseCount,
            format!("{rule} has {} premise(s), found {}", rule.arity(), node.premises.len()),
        ));
    }
    let mut inst = node.inst.clone();
    if rule == RuleId::Cut && inst.split.is_none() {
        if let Some(phi) = &inst.cut {
            inst.split = Some(infer_split(node, phi)?);
        }
    }
    let expected = apply_rule(&node.conclusion, rule, &inst)?;
    for (i, (want, got)) in expected.iter().zip(&node.premises).enumerate() {
        if !want.alpha_eq(&got.conclusion) {
            return Err(RuleError::new(
                ViolationKind::PremiseMismatch,
                format!("premise {i} should be `{want}`, found `{}`", got.conclusion),
            ));
        }
    }
    if opts.strict_eigen && !inst.eigen.is_empty() {
        for k in 0..path.len() {
            let below = root.at(&path[..k]).expect("path prefix");
            if let Some(e) = inst.eigen.iter().find(|e| mentions(&below.conclusion, e)) {
                return Err(RuleError::new(
                    ViolationKind::EigenvariableViolation,
                    format!("eigenvariable `{e}` occurs below its node, in `{}`", below.conclusion),
                ));
            }
        }
    }
    Ok(())
}

fn mentions(s: &Sequent, w: &Witness) -> bool {
    let sym = w.symbol();
    s.symbols().iter().any(|t| t.kind == sym.kind && t.name == sym.name)
}

fn in_assumptions(phi: &Formula, assumptions: &[Sequent]) -> bool {
    let n = alpha_normalize(phi);
    assumptions.iter().any(|a| a.formulas().any(|f| *f == n))
}

/// Recovers the context split of a Cut from its left premise.
fn infer_split(node: &Derivation, phi: &Formula) -> Result<ContextSplit, RuleError> {
    let mismatch = |what: &str| {
        RuleError::new(
            ViolationKind::PremiseMismatch,
            format!("left premise of Cut {what}"),
        )
    };
    let left = &node.premises[0].conclusion;
    let left = left
        .remove_alpha(Side::Suc, phi)
        .ok_or_else(|| mismatch(&format!("lacks the cut formula `{phi}` in its succedent")))?;
    let pick = |part: &[Formula], whole: &[Formula]| -> Option<Vec<usize>> {
        let whole_n: Vec<Formula> = whole.iter().map(alpha_normalize).collect();
        let mut used = vec![false; whole.len()];
        let mut out = Vec::new();
        for f in part {
            let n = alpha_normalize(f);
            let i = (0..whole.len()).find(|&i| !used[i] && whole_n[i] == n)?;
            used[i] = true;
            out.push(i);
        }
        out.sort_unstable();
        Some(out)
    };
    let ant = pick(left.ant(), node.conclusion.ant()).ok_or_else(|| mismatch("is not part of the conclusion"))?;
    let suc = pick(left.suc(), node.conclusion.suc()).ok_or_else(|| mismatch("is not part of the conclusion"))?;
    Ok(ContextSplit { ant, suc })
}
