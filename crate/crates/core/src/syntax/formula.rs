use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::symbol::{Name, Pred, Rel, RelKind, Symbol, Term, TermKind};
use super::SyntaxError;

/// Argument of a first-order lambda atom: a basic term or a quasi-term `ιyφ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum LamArg {
    Term(Term),
    Iota(Name, Arc<Formula>),
}

/// Formulas of the first- and second-order languages.
///
/// Quasi-terms (`ιyφ`) and pseudo-terms (`ιYφ`) only occur as the argument
/// of a lambda atom, so they have no standalone representation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    Pred(Pred, Vec<Term>),
    Eq(Term, Term),
    App(Rel, Vec<Term>),
    RelEq(Rel, Rel),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Imp(Arc<Formula>, Arc<Formula>),
    Iff(Arc<Formula>, Arc<Formula>),
    Forall(Name, Arc<Formula>),
    Exists(Name, Arc<Formula>),
    Forall2(Rel, Arc<Formula>),
    Exists2(Rel, Arc<Formula>),
    /// `(λx ψ) t` or `(λx ψ) ιy φ`.
    Lambda(Name, Arc<Formula>, LamArg),
    /// `(λX ψ) ιY φ`: abstract variable, body, description variable, condition.
    Lambda2(Rel, Arc<Formula>, Rel, Arc<Formula>),
}

impl Formula {
    pub fn pred(p: Pred, args: Vec<Term>) -> Result<Self, SyntaxError> {
        if p.arity != args.len() {
            return Err(SyntaxError::ArityMismatch {
                symbol: p.name.to_string(),
                expected: p.arity,
                found: args.len(),
            });
        }
        Ok(Formula::Pred(p, args))
    }

    pub fn app(r: Rel, args: Vec<Term>) -> Result<Self, SyntaxError> {
        if r.arity != args.len() {
            return Err(SyntaxError::ArityMismatch {
                symbol: r.name.to_string(),
                expected: r.arity,
                found: args.len(),
            });
        }
        Ok(Formula::App(r, args))
    }

    pub fn rel_eq(l: Rel, r: Rel) -> Result<Self, SyntaxError> {
        if l.arity != r.arity {
            return Err(SyntaxError::ArityMismatch {
                symbol: r.name.to_string(),
                expected: l.arity,
                found: r.arity,
            });
        }
        Ok(Formula::RelEq(l, r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Arc::new(a), Arc::new(b))
    }

    pub fn forall(x: Name, body: Formula) -> Self {
        Formula::Forall(x, Arc::new(body))
    }

    pub fn exists(x: Name, body: Formula) -> Self {
        Formula::Exists(x, Arc::new(body))
    }

    pub fn forall2(x: Rel, body: Formula) -> Self {
        Formula::Forall2(x, Arc::new(body))
    }

    pub fn exists2(x: Rel, body: Formula) -> Self {
        Formula::Exists2(x, Arc::new(body))
    }

    pub fn lambda_term(x: Name, body: Formula, t: Term) -> Self {
        Formula::Lambda(x, Arc::new(body), LamArg::Term(t))
    }

    pub fn lambda_iota(x: Name, body: Formula, y: Name, cond: Formula) -> Self {
        Formula::Lambda(x, Arc::new(body), LamArg::Iota(y, Arc::new(cond)))
    }

    pub fn lambda2(x: Rel, body: Formula, y: Rel, cond: Formula) -> Result<Self, SyntaxError> {
        if x.arity != y.arity {
            return Err(SyntaxError::ArityMismatch {
                symbol: y.name.to_string(),
                expected: x.arity,
                found: y.arity,
            });
        }
        Ok(Formula::Lambda2(x, Arc::new(body), y, Arc::new(cond)))
    }

    /// Atomic formulas: predicate atoms, both identities and relational
    /// applications. Lambda atoms are not atomic.
    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Pred(..) | Formula::Eq(..) | Formula::App(..) | Formula::RelEq(..)
        )
    }

    /// True when the formula mentions no second-order construct.
    pub fn is_first_order(&self) -> bool {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::App(..) | Formula::RelEq(..) => false,
            Formula::Forall2(..) | Formula::Exists2(..) | Formula::Lambda2(..) => false,
            Formula::Not(a) => a.is_first_order(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.is_first_order() && b.is_first_order()
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_first_order(),
            Formula::Lambda(_, body, arg) => {
                body.is_first_order()
                    && match arg {
                        LamArg::Term(_) => true,
                        LamArg::Iota(_, c) => c.is_first_order(),
                    }
            }
        }
    }

    /// Number of connectives, quantifiers and abstracts.
    pub fn size(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) | Formula::App(..) | Formula::RelEq(..) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, a)
            | Formula::Exists(_, a)
            | Formula::Forall2(_, a)
            | Formula::Exists2(_, a) => 1 + a.size(),
            Formula::Lambda(_, body, arg) => {
                1 + body.size()
                    + match arg {
                        LamArg::Term(_) => 0,
                        LamArg::Iota(_, c) => c.size(),
                    }
            }
            Formula::Lambda2(_, body, _, cond) => 1 + body.size() + cond.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_formula(self))
    }
}

/// Every parameter, constant, predicate symbol and free variable of `φ`.
pub fn free_symbols(phi: &Formula) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    collect_free(phi, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn collect_term(t: &Term, ind: &[Name], out: &mut BTreeSet<Symbol>) {
    if t.kind == TermKind::Var && ind.contains(&t.name) {
        return;
    }
    out.insert(t.symbol());
}

fn collect_rel(r: &Rel, rel: &[Rel], out: &mut BTreeSet<Symbol>) {
    if r.kind == RelKind::Var && rel.contains(r) {
        return;
    }
    out.insert(r.symbol());
}

fn collect_free(phi: &Formula, ind: &mut Vec<Name>, rel: &mut Vec<Rel>, out: &mut BTreeSet<Symbol>) {
    match phi {
        Formula::Pred(p, args) => {
            out.insert(p.symbol());
            args.iter().for_each(|t| collect_term(t, ind, out));
        }
        Formula::Eq(a, b) => {
            collect_term(a, ind, out);
            collect_term(b, ind, out);
        }
        Formula::App(r, args) => {
            collect_rel(r, rel, out);
            args.iter().for_each(|t| collect_term(t, ind, out));
        }
        Formula::RelEq(a, b) => {
            collect_rel(a, rel, out);
            collect_rel(b, rel, out);
        }
        Formula::Not(a) => collect_free(a, ind, rel, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            collect_free(a, ind, rel, out);
            collect_free(b, ind, rel, out);
        }
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            ind.push(x.clone());
            collect_free(a, ind, rel, out);
            ind.pop();
        }
        Formula::Forall2(x, a) | Formula::Exists2(x, a) => {
            rel.push(x.clone());
            collect_free(a, ind, rel, out);
            rel.pop();
        }
        Formula::Lambda(x, body, arg) => {
            ind.push(x.clone());
            collect_free(body, ind, rel, out);
            ind.pop();
            match arg {
                LamArg::Term(t) => collect_term(t, ind, out),
                LamArg::Iota(y, cond) => {
                    ind.push(y.clone());
                    collect_free(cond, ind, rel, out);
                    ind.pop();
                }
            }
        }
        Formula::Lambda2(x, body, y, cond) => {
            rel.push(x.clone());
            collect_free(body, ind, rel, out);
            rel.pop();
            rel.push(y.clone());
            collect_free(cond, ind, rel, out);
            rel.pop();
        }
    }
}

/// Does the individual variable `x` occur free in `φ`?
pub fn occurs_free_ind(phi: &Formula, x: &Name) -> bool {
    free_symbols(phi).contains(&Term {
        kind: TermKind::Var,
        name: x.clone(),
    }
    .symbol())
}

pub fn occurs_free_rel(phi: &Formula, x: &Rel) -> bool {
    free_symbols(phi).contains(&x.symbol())
}

/// Arity of every relational symbol (free or bound) and predicate symbol,
/// keyed by kind and name. Reports the first symbol seen at two arities.
pub fn signature(phi: &Formula) -> Result<BTreeMap<(crate::syntax::SymbolKind, Name), usize>, SyntaxError> {
    let mut sig = BTreeMap::new();
    check_sig(phi, &mut sig)?;
    Ok(sig)
}

fn note(
    sig: &mut BTreeMap<(crate::syntax::SymbolKind, Name), usize>,
    s: Symbol,
) -> Result<(), SyntaxError> {
    match sig.get(&(s.kind, s.name.clone())) {
        Some(&n) if n != s.arity => Err(SyntaxError::ArityMismatch {
            symbol: s.name.to_string(),
            expected: n,
            found: s.arity,
        }),
        Some(_) => Ok(()),
        None => {
            sig.insert((s.kind, s.name), s.arity);
            Ok(())
        }
    }
}

fn check_sig(
    phi: &Formula,
    sig: &mut BTreeMap<(crate::syntax::SymbolKind, Name), usize>,
) -> Result<(), SyntaxError> {
    match phi {
        Formula::Pred(p, args) => {
            if p.arity != args.len() || p.arity == 0 {
                return Err(SyntaxError::ArityMismatch {
                    symbol: p.name.to_string(),
                    expected: p.arity,
                    found: args.len(),
                });
            }
            note(sig, p.symbol())
        }
        Formula::Eq(..) => Ok(()),
        Formula::App(r, args) => {
            if r.arity != args.len() || r.arity == 0 {
                return Err(SyntaxError::ArityMismatch {
                    symbol: r.name.to_string(),
                    expected: r.arity,
                    found: args.len(),
                });
            }
            note(sig, r.symbol())
        }
        Formula::RelEq(a, b) => {
            if a.arity != b.arity || a.arity == 0 {
                return Err(SyntaxError::ArityMismatch {
                    symbol: b.name.to_string(),
                    expected: a.arity,
                    found: b.arity,
                });
            }
            note(sig, a.symbol())?;
            note(sig, b.symbol())
        }
        Formula::Not(a) => check_sig(a, sig),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            check_sig(a, sig)?;
            check_sig(b, sig)
        }
        Formula::Forall(_, a) | Formula::Exists(_, a) => check_sig(a, sig),
        Formula::Forall2(x, a) | Formula::Exists2(x, a) => {
            if x.kind != RelKind::Var || x.arity == 0 {
                return Err(SyntaxError::IllFormed(format!(
                    "second-order quantifier must bind a relational variable, found {x}"
                )));
            }
            note(sig, x.symbol())?;
            check_sig(a, sig)
        }
        Formula::Lambda(_, body, arg) => {
            check_sig(body, sig)?;
            match arg {
                LamArg::Term(_) => Ok(()),
                LamArg::Iota(_, c) => check_sig(c, sig),
            }
        }
        Formula::Lambda2(x, body, y, cond) => {
            if x.kind != RelKind::Var || y.kind != RelKind::Var {
                return Err(SyntaxError::IllFormed(
                    "relational abstract and description must bind relational variables".into(),
                ));
            }
            if x.arity != y.arity {
                return Err(SyntaxError::ArityMismatch {
                    symbol: y.name.to_string(),
                    expected: x.arity,
                    found: y.arity,
                });
            }
            note(sig, x.symbol())?;
            note(sig, y.symbol())?;
            check_sig(body, sig)?;
            check_sig(cond, sig)
        }
    }
}

/// Checks arity consistency and binder shapes.
pub fn well_formed(phi: &Formula) -> Result<(), SyntaxError> {
    signature(phi).map(|_| ())
}

const BOUND_IND: &str = "#x";
const BOUND_REL: &str = "#X";

/// Renames every bound variable to a name determined by its binder depth.
/// The reserved bases cannot be produced by the parser, so normalized
/// names never collide with free variables. Two formulas are
/// alpha-equivalent iff their normal forms are identical.
pub fn alpha_normalize(phi: &Formula) -> Formula {
    normalize(phi, &mut Vec::new(), &mut Vec::new())
}

fn norm_term(t: &Term, ind: &[(Name, Name)]) -> Term {
    if t.kind == TermKind::Var {
        if let Some((_, to)) = ind.iter().rev().find(|(from, _)| *from == t.name) {
            return Term {
                kind: TermKind::Var,
                name: to.clone(),
            };
        }
    }
    t.clone()
}

fn norm_rel(r: &Rel, rel: &[(Rel, Name)]) -> Rel {
    if r.kind == RelKind::Var {
        if let Some((_, to)) = rel.iter().rev().find(|(from, _)| from == r) {
            return Rel {
                kind: RelKind::Var,
                name: to.clone(),
                arity: r.arity,
            };
        }
    }
    r.clone()
}

fn normalize(phi: &Formula, ind: &mut Vec<(Name, Name)>, rel: &mut Vec<(Rel, Name)>) -> Formula {
    let bind_ind = |ind: &mut Vec<(Name, Name)>, x: &Name| {
        let fresh = Name::new(BOUND_IND, Some(ind.len() as u32));
        ind.push((x.clone(), fresh.clone()));
        fresh
    };
    let bind_rel = |rel: &mut Vec<(Rel, Name)>, x: &Rel| {
        let fresh = Name::new(BOUND_REL, Some(rel.len() as u32));
        rel.push((x.clone(), fresh.clone()));
        Rel {
            kind: RelKind::Var,
            name: fresh,
            arity: x.arity,
        }
    };
    match phi {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| norm_term(t, ind)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(norm_term(a, ind), norm_term(b, ind)),
        Formula::App(r, args) => Formula::App(
            norm_rel(r, rel),
            args.iter().map(|t| norm_term(t, ind)).collect(),
        ),
        Formula::RelEq(a, b) => Formula::RelEq(norm_rel(a, rel), norm_rel(b, rel)),
        Formula::Not(a) => Formula::not(normalize(a, ind, rel)),
        Formula::And(a, b) => Formula::and(normalize(a, ind, rel), normalize(b, ind, rel)),
        Formula::Or(a, b) => Formula::or(normalize(a, ind, rel), normalize(b, ind, rel)),
        Formula::Imp(a, b) => Formula::imp(normalize(a, ind, rel), normalize(b, ind, rel)),
        Formula::Iff(a, b) => Formula::iff(normalize(a, ind, rel), normalize(b, ind, rel)),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let fresh = bind_ind(ind, x);
            let body = normalize(a, ind, rel);
            ind.pop();
            if matches!(phi, Formula::Forall(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
        Formula::Forall2(x, a) | Formula::Exists2(x, a) => {
            let fresh = bind_rel(rel, x);
            let body = normalize(a, ind, rel);
            rel.pop();
            if matches!(phi, Formula::Forall2(..)) {
                Formula::forall2(fresh, body)
            } else {
                Formula::exists2(fresh, body)
            }
        }
        Formula::Lambda(x, body, arg) => {
            let fx = bind_ind(ind, x);
            let nbody = normalize(body, ind, rel);
            ind.pop();
            let narg = match arg {
                LamArg::Term(t) => LamArg::Term(norm_term(t, ind)),
                LamArg::Iota(y, cond) => {
                    let fy = bind_ind(ind, y);
                    let ncond = normalize(cond, ind, rel);
                    ind.pop();
                    LamArg::Iota(fy, Arc::new(ncond))
                }
            };
            Formula::Lambda(fx, Arc::new(nbody), narg)
        }
        Formula::Lambda2(x, body, y, cond) => {
            let fx = bind_rel(rel, x);
            let nbody = normalize(body, ind, rel);
            rel.pop();
            let fy = bind_rel(rel, y);
            let ncond = normalize(cond, ind, rel);
            rel.pop();
            Formula::Lambda2(fx, Arc::new(nbody), fy, Arc::new(ncond))
        }
    }
}

/// Equality up to consistent renaming of bound individual and relational
/// variables.
pub fn alpha_eq(phi: &Formula, psi: &Formula) -> bool {
    phi == psi || alpha_normalize(phi) == alpha_normalize(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::syntax::SymbolKind;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn names(set: &BTreeSet<Symbol>) -> Vec<String> {
        set.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn free_symbols_skip_bound_variables() {
        assert_eq!(names(&free_symbols(&f("A x. P(x, a)"))), ["a", "P"]);
        assert_eq!(names(&free_symbols(&f("(\\x P(x)) (iota y. Q(y))"))), ["P", "Q"]);
    }

    #[test]
    fn free_relational_variable_next_to_bound_one() {
        let fs = free_symbols(&f("X(a) & E2 X. X(b)"));
        let kinds: Vec<_> = fs.iter().map(|s| (s.kind, s.to_string())).collect();
        assert_eq!(
            kinds,
            [
                (SymbolKind::IndPar, "a".to_string()),
                (SymbolKind::IndPar, "b".to_string()),
                (SymbolKind::RelVar, "X".to_string()),
            ]
        );
    }

    #[test]
    fn alpha_equivalence_examples() {
        assert!(alpha_eq(&f("A x. P(x)"), &f("A y. P(y)")));
        assert!(alpha_eq(
            &f("(\\x P(x)) (iota y. Q(y))"),
            &f("(\\z P(z)) (iota w. Q(w))")
        ));
        assert!(!alpha_eq(&f("A x. P(x)"), &f("A x. Q(x)")));
        assert!(alpha_eq(&f("A2 X. E2 Y. X = Y"), &f("A2 Y. E2 X. Y = X")));
        assert!(!alpha_eq(&f("A x. E y. R(x, y)"), &f("A x. E y. R(y, x)")));
    }

    #[test]
    fn free_and_bound_variable_are_distinguished() {
        // y free on the left, bound on the right
        assert!(!alpha_eq(&f("A x. R(x, y)"), &f("A y. R(y, y)")));
    }

    #[test]
    fn first_order_detection() {
        assert!(f("A x. (P(x) -> (\\y Q(y)) a)").is_first_order());
        assert!(!f("E2 X. X(a)").is_first_order());
        assert!(!f("B = C").is_first_order());
    }

    #[test]
    fn arity_clash_is_ill_formed() {
        let bad = Formula::and(
            Formula::App(Rel::par("B", 1), vec![Term::par("a")]),
            Formula::App(Rel::par("B", 2), vec![Term::par("a"), Term::par("b")]),
        );
        assert!(matches!(well_formed(&bad), Err(SyntaxError::ArityMismatch { .. })));
    }
}
