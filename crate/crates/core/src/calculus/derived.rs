use std::fmt;
use std::str::FromStr;

use super::{AtomicSchema, ContextSplit, Derivation, Instantiation, RuleError, RuleId, SchemaVar, ViolationKind, Witness};
use crate::search::{prove, SearchConfig};
use crate::syntax::{alpha_eq, subst_rel, Formula, Locator, Name, Rel, Sequent, Side, SymbolKind, Term, TermKind};

/// The second-order identity rules that are derivable with Cut.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DerivedRule {
    /// From `X = X, Γ ⇒ Δ` infer `Γ ⇒ Δ`.
    Eq2Plus,
    /// From `𝒜[C], Γ ⇒ Δ` infer `B = C, 𝒜[B], Γ ⇒ Δ` for atomic `𝒜`.
    Eq2Minus,
}

impl fmt::Display for DerivedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for DerivedRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Eq2Plus" => Ok(DerivedRule::Eq2Plus),
            "Eq2Minus" => Ok(DerivedRule::Eq2Minus),
            _ => Err(format!("unknown derived rule `{s}`")),
        }
    }
}

fn bad(detail: impl Into<String>) -> RuleError {
    RuleError::new(ViolationKind::BadInstantiation, detail)
}

/// `n` individual parameters `a1, a2, …` not occurring in `s`.
pub(crate) fn fresh_params(s: &Sequent, n: usize) -> Vec<Term> {
    let used = s.symbols();
    (1u32..)
        .map(|i| Term {
            kind: TermKind::Par,
            name: Name::new("a", Some(i)),
        })
        .filter(|t| !used.iter().any(|u| u.kind == SymbolKind::IndPar && u.name == t.name))
        .take(n)
        .collect()
}

/// Expands a derived rule at the conclusion `context` into a derivation
/// whose only non-axiom leaf is the rule's premise.
///
/// Eq2Plus takes the relational symbol `X` as its single witness and
/// optionally the eigen tuple; Eq2Minus takes the principal `B = C` and
/// the atomic schema `(𝒜, X)`.
pub fn expand_derived(rule: DerivedRule, context: &Sequent, inst: &Instantiation) -> Result<Derivation, RuleError> {
    match rule {
        DerivedRule::Eq2Plus => eq2_plus(context, inst),
        DerivedRule::Eq2Minus => eq2_minus(context, inst),
    }
}

fn eq2_plus(context: &Sequent, inst: &Instantiation) -> Result<Derivation, RuleError> {
    let x = match inst.witnesses.as_slice() {
        [Witness::Rel(x)] => x.clone(),
        _ => return Err(bad("Eq2Plus needs one relational symbol as witness")),
    };
    let xx = Formula::RelEq(x.clone(), x.clone());
    let a: Vec<Term> = if inst.eigen.is_empty() {
        fresh_params(&Sequent::new(vec![], vec![xx.clone()]), x.arity)
    } else {
        inst.eigen
            .iter()
            .map(|w| match w {
                Witness::Term(t) => Ok(t.clone()),
                other => Err(bad(format!("`{other}` is not an individual parameter"))),
            })
            .collect::<Result<_, _>>()?
    };
    let xa = Formula::App(x.clone(), a.clone());
    let ax = Derivation::leaf(Sequent::new(vec![xa.clone()], vec![xa]));
    let refl = Derivation::new(
        Sequent::new(vec![], vec![xx.clone()]),
        RuleId::Eq2R,
        Instantiation {
            principal: Some(Locator::suc(0)),
            eigen: a.into_iter().map(Witness::Term).collect(),
            ..Instantiation::default()
        },
        vec![ax.clone(), ax],
    );
    super::apply_rule(&refl.conclusion, RuleId::Eq2R, &refl.inst)?;
    let premise = Derivation::leaf(context.with_ant([xx.clone()]));
    Ok(Derivation::new(
        context.clone(),
        RuleId::Cut,
        Instantiation {
            cut: Some(xx),
            split: Some(ContextSplit::default()),
            ..Instantiation::default()
        },
        vec![refl, premise],
    ))
}

fn eq2_minus(context: &Sequent, inst: &Instantiation) -> Result<Derivation, RuleError> {
    let AtomicSchema { formula: schema, var } = inst.schema.clone().ok_or_else(|| bad("Eq2Minus needs an atomic schema"))?;
    if !schema.is_atomic() {
        return Err(RuleError::new(
            ViolationKind::NotAtomic,
            format!("`{schema}` is not an atomic formula"),
        ));
    }
    let SchemaVar::Rel(x) = var else {
        return Err(bad("the schema variable of Eq2Minus must be relational"));
    };
    let loc = inst.principal.ok_or_else(|| bad("Eq2Minus needs the principal identity"))?;
    let ident = context
        .get(loc)
        .filter(|_| loc.side == Side::Ant)
        .ok_or_else(|| bad(format!("{loc} is not an antecedent occurrence of `{context}`")))?;
    let Formula::RelEq(b, c) = ident else {
        return Err(bad(format!("`{ident}` is not a relational identity")));
    };
    let inst_at = |r: &Rel| {
        subst_rel(&schema, &x, &r.clone().into())
            .map_err(|e| RuleError::new(ViolationKind::ArityMismatch, e.to_string()))
    };
    let (ab, ac) = (inst_at(b)?, inst_at(c)?);
    let q = (0..context.ant().len())
        .find(|&i| i != loc.index && alpha_eq(&context.ant()[i], &ab))
        .ok_or_else(|| bad(format!("`{ab}` does not occur beside `{ident}`")))?;
    let ab = context.ant()[q].clone();
    let mut rest = context.clone();
    for i in [loc.index.max(q), loc.index.min(q)] {
        rest = rest.without(Locator::ant(i)).unwrap();
    }

    let lemma_goal = Sequent::new(vec![ident.clone(), ab.clone()], vec![ac.clone()]);
    let lemma = match &schema {
        Formula::App(r, args) if *r == x && args.iter().all(|t| !t.is_var()) => {
            identity_lemma(&lemma_goal, b, c, args)?
        }
        _ => prove(&lemma_goal, super::System::RL2, &SearchConfig::default())
            .map_err(|e| bad(format!("no derivation of `{lemma_goal}`: {e}")))?,
    };
    let premise = Derivation::leaf(rest.with_ant([ac.clone()]));
    let mut split = vec![loc.index, q];
    split.sort_unstable();
    Ok(Derivation::new(
        context.clone(),
        RuleId::Cut,
        Instantiation {
            cut: Some(ac),
            split: Some(ContextSplit {
                ant: split,
                suc: vec![],
            }),
            ..Instantiation::default()
        },
        vec![lemma, premise],
    ))
}

/// Adds the weakening formulas one at a time on `side`.
pub(crate) fn weaken(mut d: Derivation, side: Side, fs: &[Formula]) -> Derivation {
    for f in fs {
        let s = d.conclusion.with(side, f.clone());
        let loc = s.find(side, f).expect("just added");
        let rule = if side == Side::Ant { RuleId::WL } else { RuleId::WR };
        d = Derivation::new(s, rule, Instantiation::principal(loc), vec![d]);
    }
    d
}

/// `B = C, B(t̄) ⇒ C(t̄)` by Eq2L over two weakened axioms.
fn identity_lemma(goal: &Sequent, b: &Rel, c: &Rel, t: &[Term]) -> Result<Derivation, RuleError> {
    let bt = Formula::App(b.clone(), t.to_vec());
    let ct = Formula::App(c.clone(), t.to_vec());
    let left = weaken(
        Derivation::leaf(Sequent::new(vec![bt.clone()], vec![bt.clone()])),
        Side::Suc,
        &[ct.clone(), ct.clone()],
    );
    let right = weaken(
        Derivation::leaf(Sequent::new(vec![ct.clone()], vec![ct])),
        Side::Ant,
        &[bt.clone(), bt],
    );
    let ident = Formula::RelEq(b.clone(), c.clone());
    let loc = goal.find(Side::Ant, &ident).expect("identity in goal");
    let d = Derivation::new(
        goal.clone(),
        RuleId::Eq2L,
        Instantiation {
            principal: Some(loc),
            witnesses: t.iter().cloned().map(Witness::Term).collect(),
            ..Instantiation::default()
        },
        vec![left, right],
    );
    Ok(d)
}
