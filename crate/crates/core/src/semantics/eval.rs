use std::borrow::Cow;

use super::model::{Assignment, GeneralModel};
use super::relation::{tuple_count, Relation};
use super::EvalError;
use crate::syntax::{free_symbols, signature, Formula, LamArg, Name, Rel, Sequent, SymbolKind, Term, TermKind};

/// Largest `|D|ⁿ` for which quantifying over every `n`-ary relation is
/// attempted.
pub const DEFAULT_RELATION_BITS: usize = 16;

struct Env<'a> {
    gm: &'a GeneralModel,
    v: &'a Assignment,
    full: bool,
    max_bits: usize,
    ind: Vec<(Name, usize)>,
    rel: Vec<(Name, usize, Relation)>,
}

impl<'a> Env<'a> {
    fn term(&self, t: &Term) -> Result<usize, EvalError> {
        match t.kind {
            TermKind::Var => {
                if let Some((_, o)) = self.ind.iter().rev().find(|(x, _)| *x == t.name) {
                    return Ok(*o);
                }
                self.v.ind.get(t).copied()
            }
            TermKind::Par => self.v.ind.get(t).copied(),
            TermKind::Const => self.gm.base.consts.get(&t.name).copied(),
        }
        .ok_or_else(|| EvalError::UninterpretedSymbol(t.to_string()))
    }

    fn rel(&self, r: &Rel) -> Result<&Relation, EvalError> {
        use crate::syntax::RelKind;
        let found = match r.kind {
            RelKind::Var => self
                .rel
                .iter()
                .rev()
                .find(|(x, n, _)| *x == r.name && *n == r.arity)
                .map(|(_, _, o)| o)
                .or_else(|| self.v.rel.get(r)),
            RelKind::Par => self.v.rel.get(r),
            RelKind::Const => self.gm.relconsts.get(r),
        };
        found.ok_or_else(|| EvalError::UninterpretedSymbol(r.name.to_string()))
    }

    fn candidates(&self, arity: usize) -> Result<Cow<'a, [Relation]>, EvalError> {
        if !self.full {
            if let Some(f) = self.gm.family(arity) {
                return Ok(Cow::Borrowed(f));
            }
        }
        let d = self.gm.domain_size();
        Relation::all(arity, d, self.max_bits)
            .map(Cow::Owned)
            .ok_or_else(|| {
                EvalError::ResourceLimit(format!(
                    "{} relations of arity {arity} over a domain of size {d}",
                    if tuple_count(d, arity) < 64 {
                        format!("2^{}", tuple_count(d, arity))
                    } else {
                        "too many".into()
                    }
                ))
            })
    }

    fn args(&self, args: &[Term]) -> Result<Vec<usize>, EvalError> {
        args.iter().map(|t| self.term(t)).collect()
    }

    fn eval(&mut self, phi: &Formula) -> Result<bool, EvalError> {
        Ok(match phi {
            Formula::Pred(p, args) => {
                let t = self.args(args)?;
                self.gm
                    .base
                    .preds
                    .get(p)
                    .ok_or_else(|| EvalError::UninterpretedSymbol(p.name.to_string()))?
                    .contains(&t)
            }
            Formula::Eq(a, b) => self.term(a)? == self.term(b)?,
            Formula::App(r, args) => {
                let t = self.args(args)?;
                self.rel(r)?.contains(&t)
            }
            Formula::RelEq(a, b) => self.rel(a)? == self.rel(b)?,
            Formula::Not(a) => !self.eval(a)?,
            Formula::And(a, b) => self.eval(a)? && self.eval(b)?,
            Formula::Or(a, b) => self.eval(a)? || self.eval(b)?,
            Formula::Imp(a, b) => !self.eval(a)? || self.eval(b)?,
            Formula::Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Formula::Forall(x, a) => {
                for o in 0..self.gm.domain_size() {
                    if !self.with_ind(x, o, a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists(x, a) => {
                for o in 0..self.gm.domain_size() {
                    if self.with_ind(x, o, a)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Forall2(x, a) => {
                for o in self.candidates(x.arity)?.iter() {
                    if !self.with_rel(x, o.clone(), a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists2(x, a) => {
                for o in self.candidates(x.arity)?.iter() {
                    if self.with_rel(x, o.clone(), a)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Lambda(x, body, LamArg::Term(t)) => {
                let o = self.term(t)?;
                self.with_ind(x, o, body)?
            }
            Formula::Lambda(x, body, LamArg::Iota(y, cond)) => {
                // the unique satisfier of the condition, if there is one
                let mut found = None;
                for o in 0..self.gm.domain_size() {
                    if self.with_ind(y, o, cond)? {
                        if found.is_some() {
                            return Ok(false);
                        }
                        found = Some(o);
                    }
                }
                match found {
                    Some(o) => self.with_ind(x, o, body)?,
                    None => false,
                }
            }
            Formula::Lambda2(x, body, y, cond) => {
                let mut found: Option<Relation> = None;
                for o in self.candidates(y.arity)?.iter() {
                    if self.with_rel(y, o.clone(), cond)? {
                        match &found {
                            Some(f) if f != o => return Ok(false),
                            Some(_) => {}
                            None => found = Some(o.clone()),
                        }
                    }
                }
                match found {
                    Some(o) => self.with_rel(x, o, body)?,
                    None => false,
                }
            }
        })
    }

    fn with_ind(&mut self, x: &Name, o: usize, body: &Formula) -> Result<bool, EvalError> {
        self.ind.push((x.clone(), o));
        let r = self.eval(body);
        self.ind.pop();
        r
    }

    fn with_rel(&mut self, x: &Rel, o: Relation, body: &Formula) -> Result<bool, EvalError> {
        self.rel.push((x.name.clone(), x.arity, o));
        let r = self.eval(body);
        self.rel.pop();
        r
    }
}

/// Every free symbol of `φ` must be interpreted at its arity.
fn precheck(gm: &GeneralModel, v: &Assignment, phi: &Formula) -> Result<(), EvalError> {
    signature(phi).map_err(|e| match e {
        crate::syntax::SyntaxError::ArityMismatch {
            symbol,
            expected,
            found,
        } => EvalError::ArityMismatch {
            symbol,
            expected,
            found,
        },
        other => EvalError::InvalidModel(other.to_string()),
    })?;
    for s in free_symbols(phi) {
        let missing = match s.kind {
            SymbolKind::IndVar | SymbolKind::IndPar => !v.ind.contains_key(&s.as_term().unwrap()),
            SymbolKind::IndConst => !gm.base.consts.contains_key(&s.name),
            SymbolKind::RelVar | SymbolKind::RelPar => !v.rel.contains_key(&s.as_rel().unwrap()),
            SymbolKind::RelConst => !gm.relconsts.contains_key(&s.as_rel().unwrap()),
            SymbolKind::Pred => !gm
                .base
                .preds
                .keys()
                .any(|p| p.name == s.name && p.arity == s.arity),
        };
        if missing {
            let at_other_arity = match s.kind {
                SymbolKind::Pred => gm.base.preds.keys().find(|p| p.name == s.name).map(|p| p.arity),
                SymbolKind::RelConst => gm.relconsts.keys().find(|k| k.name == s.name).map(|k| k.arity),
                SymbolKind::RelVar | SymbolKind::RelPar => {
                    v.rel.keys().find(|k| k.name == s.name).map(|k| k.arity)
                }
                _ => None,
            };
            return Err(match at_other_arity {
                Some(n) => EvalError::ArityMismatch {
                    symbol: s.name.to_string(),
                    expected: n,
                    found: s.arity,
                },
                None => EvalError::UninterpretedSymbol(s.name.to_string()),
            });
        }
    }
    Ok(())
}

fn run(gm: &GeneralModel, v: &Assignment, phi: &Formula, full: bool, max_bits: usize) -> Result<bool, EvalError> {
    precheck(gm, v, phi)?;
    run_unchecked(gm, v, phi, full, max_bits)
}

fn run_unchecked(gm: &GeneralModel, v: &Assignment, phi: &Formula, full: bool, max_bits: usize) -> Result<bool, EvalError> {
    Env {
        gm,
        v,
        full,
        max_bits,
        ind: Vec::new(),
        rel: Vec::new(),
    }
    .eval(phi)
}

/// Satisfaction in a general model: second-order quantifiers and
/// descriptions range over the family of the matching arity.
pub fn eval(gm: &GeneralModel, v: &Assignment, phi: &Formula) -> Result<bool, EvalError> {
    run(gm, v, phi, false, DEFAULT_RELATION_BITS)
}

/// Satisfaction in the full model over `gm`'s base: the families are
/// ignored and relational quantifiers range over every relation.
pub fn eval_full(gm: &GeneralModel, v: &Assignment, phi: &Formula) -> Result<bool, EvalError> {
    eval_full_capped(gm, v, phi, DEFAULT_RELATION_BITS)
}

/// [`eval_full`] with an explicit bound on `|D|ⁿ`.
pub fn eval_full_capped(gm: &GeneralModel, v: &Assignment, phi: &Formula, max_bits: usize) -> Result<bool, EvalError> {
    run(gm, v, phi, true, max_bits)
}

/// Some antecedent member fails or some succedent member holds.
pub fn holds_sequent(gm: &GeneralModel, v: &Assignment, s: &Sequent) -> Result<bool, EvalError> {
    for f in s.formulas() {
        precheck(gm, v, f)?;
    }
    holds_sequent_unchecked(gm, v, s, false)
}

/// [`holds_sequent`] without the interpretation check, for callers that
/// built `gm` and `v` from the sequent's own symbols.
pub(crate) fn holds_sequent_unchecked(gm: &GeneralModel, v: &Assignment, s: &Sequent, full: bool) -> Result<bool, EvalError> {
    for f in s.ant() {
        if !run_unchecked(gm, v, f, full, DEFAULT_RELATION_BITS)? {
            return Ok(true);
        }
    }
    for f in s.suc() {
        if run_unchecked(gm, v, f, full, DEFAULT_RELATION_BITS)? {
            return Ok(true);
        }
    }
    Ok(false)
}
