use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::{prove, SearchConfig};
use crate::calculus::{System, Witness};
use crate::syntax::{
    alpha_eq, alpha_normalize, subst_ind, subst_rel, Formula, LamArg, Name, Rel, RelKind, Sequent, Side,
    SymbolKind, Term, TermKind,
};

/// A pair of formula sets. Membership is up to alpha-equivalence.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ExtendedSequent {
    ant: Vec<Formula>,
    suc: Vec<Formula>,
}

impl ExtendedSequent {
    pub fn new(ant: impl IntoIterator<Item = Formula>, suc: impl IntoIterator<Item = Formula>) -> Self {
        let mut es = ExtendedSequent::default();
        for f in ant {
            es.insert(Side::Ant, f);
        }
        for f in suc {
            es.insert(Side::Suc, f);
        }
        es
    }

    pub fn ant(&self) -> &[Formula] {
        &self.ant
    }

    pub fn suc(&self) -> &[Formula] {
        &self.suc
    }

    pub fn side(&self, side: Side) -> &[Formula] {
        match side {
            Side::Ant => &self.ant,
            Side::Suc => &self.suc,
        }
    }

    pub fn contains(&self, side: Side, f: &Formula) -> bool {
        self.side(side).iter().any(|g| alpha_eq(f, g))
    }

    /// Adds `f` unless already present; reports whether it was new.
    pub fn insert(&mut self, side: Side, f: Formula) -> bool {
        if self.contains(side, &f) {
            return false;
        }
        let v = match side {
            Side::Ant => &mut self.ant,
            Side::Suc => &mut self.suc,
        };
        let key = f.to_string();
        let at = v.partition_point(|g| g.to_string() <= key);
        v.insert(at, f);
        true
    }

    /// `self ⊑ other`: both sides included.
    pub fn is_subset_of(&self, other: &ExtendedSequent) -> bool {
        self.ant.iter().all(|f| other.contains(Side::Ant, f)) && self.suc.iter().all(|f| other.contains(Side::Suc, f))
    }

    pub fn to_sequent(&self) -> Sequent {
        Sequent::new(self.ant.clone(), self.suc.clone())
    }

    fn symbols(&self) -> std::collections::BTreeSet<crate::syntax::Symbol> {
        self.to_sequent().symbols()
    }

    fn terms(&self, kind: SymbolKind) -> Vec<Term> {
        self.symbols()
            .iter()
            .filter(|s| s.kind == kind)
            .filter_map(|s| s.as_term())
            .collect()
    }

    fn rels(&self, kind: SymbolKind, arity: usize) -> Vec<Rel> {
        self.symbols()
            .iter()
            .filter(|s| s.kind == kind && s.arity == arity)
            .filter_map(|s| s.as_rel())
            .collect()
    }
}

impl From<&Sequent> for ExtendedSequent {
    fn from(s: &Sequent) -> Self {
        ExtendedSequent::new(s.ant().iter().cloned(), s.suc().iter().cloned())
    }
}

impl fmt::Display for ExtendedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_sequent().fmt(f)
    }
}

/// One unmet instance of a witness clause.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessViolation {
    /// Clause number, 1 to 9.
    pub clause: u8,
    pub formula: Formula,
    /// The parameter a clause 6 or 8 instance is about.
    pub parameter: Option<Witness>,
}

impl fmt::Display for WitnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {}: `{}`", self.clause, self.formula)?;
        if let Some(p) = &self.parameter {
            write!(f, " for `{p}`")?;
        }
        Ok(())
    }
}

fn si(phi: &Formula, x: &Name, t: &Term) -> Formula {
    subst_ind(phi, x, t).expect("term substitution cannot fail on arity")
}

fn sr(phi: &Formula, x: &Rel, r: &Rel) -> Formula {
    subst_rel(phi, x, &r.clone().into()).expect("arity matched by construction")
}

fn tuples(items: &[Term], n: usize) -> Vec<Vec<Term>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |k| {
                    let mut t = t.clone();
                    t.push(k.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Every unmet instance of clauses 1–9, in clause order and then in the
/// order of the triggering formulas.
pub fn check_witness_property(es: &ExtendedSequent) -> Vec<WitnessViolation> {
    let consts = es.terms(SymbolKind::IndConst);
    let params = es.terms(SymbolKind::IndPar);
    let (ant, suc) = (Side::Ant, Side::Suc);
    let mut out = Vec::new();
    let mut report = |clause: u8, f: &Formula, parameter: Option<Witness>| {
        out.push(WitnessViolation {
            clause,
            formula: f.clone(),
            parameter,
        })
    };
    for clause in 1..=9u8 {
        let side = if matches!(clause, 1 | 3 | 6 | 8 | 9) { suc } else { ant };
        for f in es.side(side) {
            match (clause, f) {
                (1, Formula::Forall(x, body)) | (2, Formula::Exists(x, body)) => {
                    if !consts.iter().any(|k| es.contains(side, &si(body, x, k))) {
                        report(clause, f, None);
                    }
                }
                (3, Formula::Forall2(x, body)) | (4, Formula::Exists2(x, body)) => {
                    let ks = es.rels(SymbolKind::RelConst, x.arity);
                    if !ks.iter().any(|k| es.contains(side, &sr(body, x, k))) {
                        report(clause, f, None);
                    }
                }
                (5, Formula::Lambda(x, psi, LamArg::Iota(y, phi))) => {
                    if !consts
                        .iter()
                        .any(|k| es.contains(ant, &si(phi, y, k)) && es.contains(ant, &si(psi, x, k)))
                    {
                        report(clause, f, None);
                    }
                }
                (6, Formula::Lambda(x, psi, LamArg::Iota(y, phi))) => {
                    for b in &params {
                        let met = es.contains(suc, &si(phi, y, b))
                            || es.contains(suc, &si(psi, x, b))
                            || consts.iter().any(|k| {
                                es.contains(suc, &Formula::Eq(k.clone(), b.clone())) && es.contains(ant, &si(phi, y, k))
                            });
                        if !met {
                            report(clause, f, Some(b.clone().into()));
                        }
                    }
                }
                (7, Formula::Lambda2(x, psi, y, phi)) => {
                    let ks = es.rels(SymbolKind::RelConst, y.arity);
                    if !ks
                        .iter()
                        .any(|k| es.contains(ant, &sr(phi, y, k)) && es.contains(ant, &sr(psi, x, k)))
                    {
                        report(clause, f, None);
                    }
                }
                (8, Formula::Lambda2(x, psi, y, phi)) => {
                    let ks = es.rels(SymbolKind::RelConst, y.arity);
                    for b in es.rels(SymbolKind::RelPar, y.arity) {
                        let met = es.contains(suc, &sr(phi, y, &b))
                            || es.contains(suc, &sr(psi, x, &b))
                            || ks.iter().any(|k| {
                                es.contains(suc, &Formula::RelEq(k.clone(), b.clone()))
                                    && es.contains(ant, &sr(phi, y, k))
                            });
                        if !met {
                            report(clause, f, Some(b.into()));
                        }
                    }
                }
                (9, Formula::RelEq(x, y)) => {
                    let met = tuples(&consts, x.arity).into_iter().any(|k| {
                        let (xk, yk) = (Formula::App(x.clone(), k.clone()), Formula::App(y.clone(), k));
                        (es.contains(ant, &xk) && es.contains(suc, &yk)) || (es.contains(ant, &yk) && es.contains(suc, &xk))
                    });
                    if !met {
                        report(clause, f, None);
                    }
                }
                _ => {}
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SaturateOptions {
    /// Fresh individual and relational constants that may be introduced.
    pub fresh_const_budget: usize,
    /// Order in which clauses are served.
    pub clause_order: Vec<u8>,
    /// For clauses 6 and 8, skip a disjunct whose addition makes the
    /// sequent provable within a small bound. Incomplete: a failed proof
    /// attempt does not establish consistency.
    pub consistency_guided: bool,
}

impl Default for SaturateOptions {
    fn default() -> Self {
        SaturateOptions {
            fresh_const_budget: 64,
            clause_order: (1..=9).collect(),
            consistency_guided: false,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum SaturateError {
    #[error("fresh constant budget exhausted with {} violation(s) left", check_witness_property(partial).len())]
    BudgetExhausted { partial: ExtendedSequent },
    #[error("bad clause order: {0}")]
    BadClauseOrder(String),
}

/// Saturates with the default options and the given constant budget.
pub fn saturate(es: &ExtendedSequent, fresh_const_budget: usize) -> Result<ExtendedSequent, SaturateError> {
    saturate_with(
        es,
        &SaturateOptions {
            fresh_const_budget,
            ..SaturateOptions::default()
        },
    )
}

struct Fresh {
    left: usize,
}

impl Fresh {
    fn take(&mut self, n: usize) -> bool {
        if self.left < n {
            return false;
        }
        self.left -= n;
        true
    }
}

fn fresh_consts(es: &ExtendedSequent, n: usize) -> Vec<Term> {
    let used = es.symbols();
    (1u32..)
        .map(|i| Term {
            kind: TermKind::Const,
            name: Name::new("k", Some(i)),
        })
        .filter(|t| !used.iter().any(|u| u.kind == SymbolKind::IndConst && u.name == t.name))
        .take(n)
        .collect()
}

fn fresh_rel_const(es: &ExtendedSequent, arity: usize) -> Rel {
    let used = es.symbols();
    (1u32..)
        .map(|i| Rel {
            kind: RelKind::Const,
            name: Name::new("K", Some(i)),
            arity,
        })
        .find(|r| !used.iter().any(|u| u.kind == SymbolKind::RelConst && u.name == r.name))
        .expect("unbounded supply")
}

/// Serves unmet clause instances one at a time, each at most once, adding
/// fresh constants until the witness property holds.
pub fn saturate_with(es: &ExtendedSequent, opts: &SaturateOptions) -> Result<ExtendedSequent, SaturateError> {
    let mut seen = HashSet::new();
    if opts.clause_order.len() != 9 || !opts.clause_order.iter().all(|c| (1..=9).contains(c) && seen.insert(*c)) {
        return Err(SaturateError::BadClauseOrder(format!(
            "{:?} is not a permutation of 1..9",
            opts.clause_order
        )));
    }
    let rank = |c: u8| opts.clause_order.iter().position(|&o| o == c).unwrap();
    let mut es = es.clone();
    let mut fresh = Fresh {
        left: opts.fresh_const_budget,
    };
    let mut fired: HashSet<(u8, Formula, Option<Witness>)> = HashSet::new();
    loop {
        let mut pending = check_witness_property(&es);
        pending.sort_by_key(|v| rank(v.clause));
        let Some(v) = pending
            .into_iter()
            .find(|v| !fired.contains(&(v.clause, alpha_normalize(&v.formula), v.parameter.clone())))
        else {
            return Ok(es);
        };
        fired.insert((v.clause, alpha_normalize(&v.formula), v.parameter.clone()));
        if !serve(&mut es, &v, &mut fresh, opts.consistency_guided) {
            return Err(SaturateError::BudgetExhausted { partial: es });
        }
    }
}

fn provable(es: &ExtendedSequent) -> bool {
    let cfg = SearchConfig {
        max_depth: 6,
        time_budget_ms: 500,
        ..SearchConfig::default()
    };
    prove(&es.to_sequent(), System::RL2, &cfg).is_ok()
}

/// Adds what clause `v.clause` asks for; false when out of constants.
fn serve(es: &mut ExtendedSequent, v: &WitnessViolation, fresh: &mut Fresh, guided: bool) -> bool {
    let (ant, suc) = (Side::Ant, Side::Suc);
    match (v.clause, &v.formula, &v.parameter) {
        (1, Formula::Forall(x, body), _) | (2, Formula::Exists(x, body), _) => {
            if !fresh.take(1) {
                return false;
            }
            let k = fresh_consts(es, 1).remove(0);
            let side = if v.clause == 1 { suc } else { ant };
            es.insert(side, si(body, x, &k));
        }
        (3, Formula::Forall2(x, body), _) | (4, Formula::Exists2(x, body), _) => {
            if !fresh.take(1) {
                return false;
            }
            let k = fresh_rel_const(es, x.arity);
            let side = if v.clause == 3 { suc } else { ant };
            es.insert(side, sr(body, x, &k));
        }
        (5, Formula::Lambda(x, psi, LamArg::Iota(y, phi)), _) => {
            if !fresh.take(1) {
                return false;
            }
            let k = fresh_consts(es, 1).remove(0);
            es.insert(ant, si(phi, y, &k));
            es.insert(ant, si(psi, x, &k));
        }
        (6, Formula::Lambda(x, psi, LamArg::Iota(y, phi)), Some(Witness::Term(b))) => {
            let first = si(phi, y, b);
            let second = si(psi, x, b);
            if !guided || !provable(&with(es, suc, &first)) {
                es.insert(suc, first);
            } else if !provable(&with(es, suc, &second)) {
                es.insert(suc, second);
            } else {
                if !fresh.take(1) {
                    return false;
                }
                let k = fresh_consts(es, 1).remove(0);
                es.insert(suc, Formula::Eq(k.clone(), b.clone()));
                es.insert(ant, si(phi, y, &k));
            }
        }
        (7, Formula::Lambda2(x, psi, y, phi), _) => {
            if !fresh.take(1) {
                return false;
            }
            let k = fresh_rel_const(es, y.arity);
            es.insert(ant, sr(phi, y, &k));
            es.insert(ant, sr(psi, x, &k));
        }
        (8, Formula::Lambda2(x, psi, y, phi), Some(Witness::Rel(b))) => {
            let first = sr(phi, y, b);
            let second = sr(psi, x, b);
            if !guided || !provable(&with(es, suc, &first)) {
                es.insert(suc, first);
            } else if !provable(&with(es, suc, &second)) {
                es.insert(suc, second);
            } else {
                if !fresh.take(1) {
                    return false;
                }
                let k = fresh_rel_const(es, y.arity);
                es.insert(suc, Formula::RelEq(k.clone(), b.clone()));
                es.insert(ant, sr(phi, y, &k));
            }
        }
        (9, Formula::RelEq(x, y), _) => {
            if !fresh.take(x.arity) {
                return false;
            }
            let k = fresh_consts(es, x.arity);
            es.insert(ant, Formula::App(x.clone(), k.clone()));
            es.insert(suc, Formula::App(y.clone(), k));
        }
        _ => unreachable!("violation shapes come from check_witness_property"),
    }
    true
}

fn with(es: &ExtendedSequent, side: Side, f: &Formula) -> ExtendedSequent {
    let mut out = es.clone();
    out.insert(side, f.clone());
    out
}
