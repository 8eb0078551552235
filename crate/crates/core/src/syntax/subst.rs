use std::sync::Arc;

use super::formula::{occurs_free_ind, occurs_free_rel, Formula, LamArg};
use super::symbol::{Name, Pred, Rel, Term, TermKind};
use super::SyntaxError;

/// `φ[x := t]`: replaces the free occurrences of the individual variable `x`.
pub fn subst_ind(phi: &Formula, x: &Name, t: &Term) -> Result<Formula, SyntaxError> {
    subst_ind_multi(phi, std::slice::from_ref(x), std::slice::from_ref(t))
}

/// Simultaneous substitution of `ts` for the variables `xs`.
pub fn subst_ind_multi(phi: &Formula, xs: &[Name], ts: &[Term]) -> Result<Formula, SyntaxError> {
    if xs.len() != ts.len() {
        return Err(SyntaxError::ArityMismatch {
            symbol: "substitution".into(),
            expected: xs.len(),
            found: ts.len(),
        });
    }
    for (i, x) in xs.iter().enumerate() {
        if xs[..i].contains(x) {
            return Err(SyntaxError::IllFormed(format!(
                "variable {x} substituted twice"
            )));
        }
    }
    let map: Vec<(Name, Term)> = xs.iter().cloned().zip(ts.iter().cloned()).collect();
    ind_rec(phi, &map)
}

fn map_term(t: &Term, map: &[(Name, Term)]) -> Term {
    if t.kind == TermKind::Var {
        if let Some((_, to)) = map.iter().find(|(x, _)| *x == t.name) {
            return to.clone();
        }
    }
    t.clone()
}

/// Drops `y` from the substitution and rejects capture of `y` by the binder.
fn enter_ind_binder(
    y: &Name,
    body: &Formula,
    map: &[(Name, Term)],
) -> Result<Vec<(Name, Term)>, SyntaxError> {
    let inner: Vec<(Name, Term)> = map.iter().filter(|(x, _)| x != y).cloned().collect();
    for (x, t) in &inner {
        if t.kind == TermKind::Var && t.name == *y && occurs_free_ind(body, x) {
            return Err(SyntaxError::Capture {
                var: y.to_string(),
                replaced: x.to_string(),
            });
        }
    }
    Ok(inner)
}

fn ind_rec(phi: &Formula, map: &[(Name, Term)]) -> Result<Formula, SyntaxError> {
    if map.is_empty() {
        return Ok(phi.clone());
    }
    Ok(match phi {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| map_term(t, map)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(map_term(a, map), map_term(b, map)),
        Formula::App(r, args) => {
            Formula::App(r.clone(), args.iter().map(|t| map_term(t, map)).collect())
        }
        Formula::RelEq(..) => phi.clone(),
        Formula::Not(a) => Formula::not(ind_rec(a, map)?),
        Formula::And(a, b) => Formula::and(ind_rec(a, map)?, ind_rec(b, map)?),
        Formula::Or(a, b) => Formula::or(ind_rec(a, map)?, ind_rec(b, map)?),
        Formula::Imp(a, b) => Formula::imp(ind_rec(a, map)?, ind_rec(b, map)?),
        Formula::Iff(a, b) => Formula::iff(ind_rec(a, map)?, ind_rec(b, map)?),
        Formula::Forall(y, a) => {
            let inner = enter_ind_binder(y, a, map)?;
            Formula::forall(y.clone(), ind_rec(a, &inner)?)
        }
        Formula::Exists(y, a) => {
            let inner = enter_ind_binder(y, a, map)?;
            Formula::exists(y.clone(), ind_rec(a, &inner)?)
        }
        Formula::Forall2(x, a) => Formula::forall2(x.clone(), ind_rec(a, map)?),
        Formula::Exists2(x, a) => Formula::exists2(x.clone(), ind_rec(a, map)?),
        Formula::Lambda(x, body, arg) => {
            let inner = enter_ind_binder(x, body, map)?;
            let body = ind_rec(body, &inner)?;
            let arg = match arg {
                LamArg::Term(t) => LamArg::Term(map_term(t, map)),
                LamArg::Iota(y, cond) => {
                    let inner = enter_ind_binder(y, cond, map)?;
                    LamArg::Iota(y.clone(), Arc::new(ind_rec(cond, &inner)?))
                }
            };
            Formula::Lambda(x.clone(), Arc::new(body), arg)
        }
        Formula::Lambda2(x, body, y, cond) => Formula::Lambda2(
            x.clone(),
            Arc::new(ind_rec(body, map)?),
            y.clone(),
            Arc::new(ind_rec(cond, map)?),
        ),
    })
}

/// What a relational variable may be replaced by.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RelTarget {
    Rel(Rel),
    Pred(Pred),
}

impl RelTarget {
    pub fn arity(&self) -> usize {
        match self {
            RelTarget::Rel(r) => r.arity,
            RelTarget::Pred(p) => p.arity,
        }
    }

    fn apply(&self, args: Vec<Term>) -> Formula {
        match self {
            RelTarget::Rel(r) => Formula::App(r.clone(), args),
            RelTarget::Pred(p) => Formula::Pred(p.clone(), args),
        }
    }
}

impl From<Rel> for RelTarget {
    fn from(r: Rel) -> Self {
        RelTarget::Rel(r)
    }
}

impl From<Pred> for RelTarget {
    fn from(p: Pred) -> Self {
        RelTarget::Pred(p)
    }
}

/// `φ[X := R]`. A relational identity that would get a predicate symbol on
/// one side is expanded to `∀x₁…∀xₙ(L(x̄) ↔ R(x̄))`, since the atomic grammar
/// only relates relational symbols.
pub fn subst_rel(phi: &Formula, x: &Rel, target: &RelTarget) -> Result<Formula, SyntaxError> {
    if x.arity != target.arity() {
        return Err(SyntaxError::ArityMismatch {
            symbol: x.name.to_string(),
            expected: x.arity,
            found: target.arity(),
        });
    }
    rel_rec(phi, x, target)
}

fn side(r: &Rel, x: &Rel, target: &RelTarget) -> RelTarget {
    if r == x {
        target.clone()
    } else {
        RelTarget::Rel(r.clone())
    }
}

/// Extensional expansion of `l = r` over fresh bound variables `x1 … xn`.
pub fn expand_rel_eq(l: &RelTarget, r: &RelTarget) -> Formula {
    let n = l.arity();
    let vars: Vec<Name> = (1..=n as u32).map(|i| Name::new("x", Some(i))).collect();
    let args: Vec<Term> = vars
        .iter()
        .map(|v| Term {
            kind: TermKind::Var,
            name: v.clone(),
        })
        .collect();
    let mut body = Formula::iff(l.apply(args.clone()), r.apply(args));
    for v in vars.into_iter().rev() {
        body = Formula::forall(v, body);
    }
    body
}

fn rel_binder_blocks(y: &Rel, body: &Formula, x: &Rel, target: &RelTarget) -> Result<bool, SyntaxError> {
    if y == x {
        return Ok(true);
    }
    if let RelTarget::Rel(t) = target {
        if t.is_var() && t.name == y.name && t.arity == y.arity && occurs_free_rel(body, x) {
            return Err(SyntaxError::Capture {
                var: y.to_string(),
                replaced: x.to_string(),
            });
        }
    }
    Ok(false)
}

fn rel_rec(phi: &Formula, x: &Rel, target: &RelTarget) -> Result<Formula, SyntaxError> {
    Ok(match phi {
        Formula::Pred(..) | Formula::Eq(..) => phi.clone(),
        Formula::App(r, args) => {
            if r == x {
                target.apply(args.clone())
            } else {
                phi.clone()
            }
        }
        Formula::RelEq(l, r) => {
            let (nl, nr) = (side(l, x, target), side(r, x, target));
            match (nl, nr) {
                (RelTarget::Rel(a), RelTarget::Rel(b)) => Formula::RelEq(a, b),
                (a, b) => expand_rel_eq(&a, &b),
            }
        }
        Formula::Not(a) => Formula::not(rel_rec(a, x, target)?),
        Formula::And(a, b) => Formula::and(rel_rec(a, x, target)?, rel_rec(b, x, target)?),
        Formula::Or(a, b) => Formula::or(rel_rec(a, x, target)?, rel_rec(b, x, target)?),
        Formula::Imp(a, b) => Formula::imp(rel_rec(a, x, target)?, rel_rec(b, x, target)?),
        Formula::Iff(a, b) => Formula::iff(rel_rec(a, x, target)?, rel_rec(b, x, target)?),
        Formula::Forall(y, a) => Formula::forall(y.clone(), rel_rec(a, x, target)?),
        Formula::Exists(y, a) => Formula::exists(y.clone(), rel_rec(a, x, target)?),
        Formula::Forall2(y, a) => {
            if rel_binder_blocks(y, a, x, target)? {
                phi.clone()
            } else {
                Formula::forall2(y.clone(), rel_rec(a, x, target)?)
            }
        }
        Formula::Exists2(y, a) => {
            if rel_binder_blocks(y, a, x, target)? {
                phi.clone()
            } else {
                Formula::exists2(y.clone(), rel_rec(a, x, target)?)
            }
        }
        Formula::Lambda(v, body, arg) => {
            let arg = match arg {
                LamArg::Term(t) => LamArg::Term(t.clone()),
                LamArg::Iota(y, cond) => LamArg::Iota(y.clone(), Arc::new(rel_rec(cond, x, target)?)),
            };
            Formula::Lambda(v.clone(), Arc::new(rel_rec(body, x, target)?), arg)
        }
        Formula::Lambda2(a, body, y, cond) => {
            let body = if rel_binder_blocks(a, body, x, target)? {
                body.as_ref().clone()
            } else {
                rel_rec(body, x, target)?
            };
            let cond = if rel_binder_blocks(y, cond, x, target)? {
                cond.as_ref().clone()
            } else {
                rel_rec(cond, x, target)?
            };
            Formula::Lambda2(a.clone(), Arc::new(body), y.clone(), Arc::new(cond))
        }
    })
}

/// Replaces a parameter or constant everywhere. Neither can be bound, so no
/// capture is possible.
pub fn replace_term(phi: &Formula, from: &Term, to: &Term) -> Formula {
    debug_assert!(!from.is_var());
    let m = |t: &Term| if t == from { to.clone() } else { t.clone() };
    match phi {
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(m).collect()),
        Formula::Eq(a, b) => Formula::Eq(m(a), m(b)),
        Formula::App(r, args) => Formula::App(r.clone(), args.iter().map(m).collect()),
        Formula::RelEq(..) => phi.clone(),
        Formula::Not(a) => Formula::not(replace_term(a, from, to)),
        Formula::And(a, b) => Formula::and(replace_term(a, from, to), replace_term(b, from, to)),
        Formula::Or(a, b) => Formula::or(replace_term(a, from, to), replace_term(b, from, to)),
        Formula::Imp(a, b) => Formula::imp(replace_term(a, from, to), replace_term(b, from, to)),
        Formula::Iff(a, b) => Formula::iff(replace_term(a, from, to), replace_term(b, from, to)),
        Formula::Forall(y, a) => Formula::forall(y.clone(), replace_term(a, from, to)),
        Formula::Exists(y, a) => Formula::exists(y.clone(), replace_term(a, from, to)),
        Formula::Forall2(y, a) => Formula::forall2(y.clone(), replace_term(a, from, to)),
        Formula::Exists2(y, a) => Formula::exists2(y.clone(), replace_term(a, from, to)),
        Formula::Lambda(v, body, arg) => {
            let arg = match arg {
                LamArg::Term(t) => LamArg::Term(m(t)),
                LamArg::Iota(y, c) => LamArg::Iota(y.clone(), Arc::new(replace_term(c, from, to))),
            };
            Formula::Lambda(v.clone(), Arc::new(replace_term(body, from, to)), arg)
        }
        Formula::Lambda2(a, body, y, cond) => Formula::Lambda2(
            a.clone(),
            Arc::new(replace_term(body, from, to)),
            y.clone(),
            Arc::new(replace_term(cond, from, to)),
        ),
    }
}

/// Replaces a relational parameter or constant everywhere.
pub fn replace_rel(phi: &Formula, from: &Rel, to: &Rel) -> Formula {
    debug_assert!(!from.is_var());
    let m = |r: &Rel| if r == from { to.clone() } else { r.clone() };
    match phi {
        Formula::Pred(..) | Formula::Eq(..) => phi.clone(),
        Formula::App(r, args) => Formula::App(m(r), args.clone()),
        Formula::RelEq(a, b) => Formula::RelEq(m(a), m(b)),
        Formula::Not(a) => Formula::not(replace_rel(a, from, to)),
        Formula::And(a, b) => Formula::and(replace_rel(a, from, to), replace_rel(b, from, to)),
        Formula::Or(a, b) => Formula::or(replace_rel(a, from, to), replace_rel(b, from, to)),
        Formula::Imp(a, b) => Formula::imp(replace_rel(a, from, to), replace_rel(b, from, to)),
        Formula::Iff(a, b) => Formula::iff(replace_rel(a, from, to), replace_rel(b, from, to)),
        Formula::Forall(y, a) => Formula::forall(y.clone(), replace_rel(a, from, to)),
        Formula::Exists(y, a) => Formula::exists(y.clone(), replace_rel(a, from, to)),
        Formula::Forall2(y, a) => Formula::forall2(y.clone(), replace_rel(a, from, to)),
        Formula::Exists2(y, a) => Formula::exists2(y.clone(), replace_rel(a, from, to)),
        Formula::Lambda(v, body, arg) => {
            let arg = match arg {
                LamArg::Term(t) => LamArg::Term(t.clone()),
                LamArg::Iota(y, c) => LamArg::Iota(y.clone(), Arc::new(replace_rel(c, from, to))),
            };
            Formula::Lambda(v.clone(), Arc::new(replace_rel(body, from, to)), arg)
        }
        Formula::Lambda2(a, body, y, cond) => Formula::Lambda2(
            a.clone(),
            Arc::new(replace_rel(body, from, to)),
            y.clone(),
            Arc::new(replace_rel(cond, from, to)),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::syntax::alpha_eq;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn x() -> Name {
        Name::parse("x")
    }

    #[test]
    fn replaces_free_occurrences_only() {
        let out = subst_ind(&f("P(x) & Q(y)"), &x(), &Term::par("a")).unwrap();
        assert_eq!(out, f("P(a) & Q(y)"));
        let out = subst_ind(&f("A x. P(x)"), &x(), &Term::par("a")).unwrap();
        assert_eq!(out, f("A x. P(x)"));
    }

    #[test]
    fn capture_is_rejected() {
        let err = subst_ind(&f("E y. R(x, y)"), &x(), &Term::var("y")).unwrap_err();
        assert!(matches!(err, SyntaxError::Capture { .. }));
    }

    #[test]
    fn vacuous_binder_does_not_capture() {
        // x does not occur free below the binder, so nothing is captured
        let out = subst_ind(&f("E y. Q(y)"), &x(), &Term::var("y")).unwrap();
        assert_eq!(out, f("E y. Q(y)"));
    }

    #[test]
    fn simultaneous_substitution_swaps() {
        let xs = [Name::parse("x"), Name::parse("y")];
        let out = subst_ind_multi(&f("R(x, y)"), &xs, &[Term::var("y"), Term::var("x")]).unwrap();
        assert_eq!(out, f("R(y, x)"));
        let xs = [Name::parse("x1"), Name::parse("x2")];
        let out = subst_ind_multi(&f("X(x1, x2)"), &xs, &[Term::par("a"), Term::par("b")]).unwrap();
        assert_eq!(out, f("X(a, b)"));
    }

    #[test]
    fn length_mismatch() {
        let xs = [Name::parse("x"), Name::parse("y")];
        let err = subst_ind_multi(&f("P(x)"), &xs, &[Term::par("a")]).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityMismatch { .. }));
    }

    #[test]
    fn lambda_and_iota_bind_separately() {
        // x is bound in the abstract body but free in the description condition
        let phi = f("(\\x P(x)) (iota y. R(y, x))");
        let out = subst_ind(&phi, &x(), &Term::par("a")).unwrap();
        assert_eq!(out, f("(\\x P(x)) (iota y. R(y, a))"));
        let phi = f("(\\y P(y)) x");
        assert_eq!(subst_ind(&phi, &x(), &Term::par("b")).unwrap(), f("(\\y P(y)) b"));
    }

    #[test]
    fn relational_substitution() {
        let xr = Rel::var("X", 2);
        let b = RelTarget::Rel(Rel::par("B", 2));
        assert_eq!(subst_rel(&f("X(a, b)"), &xr, &b).unwrap(), f("B(a, b)"));
        let x1 = Rel::var("X", 1);
        let b1 = RelTarget::Rel(Rel::par("B", 1));
        assert_eq!(subst_rel(&f("E2 X. X(a)"), &x1, &b1).unwrap(), f("E2 X. X(a)"));
        let err = subst_rel(&f("X(a)"), &x1, &b).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityMismatch { .. }));
    }

    #[test]
    fn relational_constant_keeps_identity_atom() {
        let x1 = Rel::var("X", 1);
        let k = RelTarget::Rel(Rel::constant("K", 1));
        assert_eq!(subst_rel(&f("X = Y"), &x1, &k).unwrap(), f("K = Y"));
    }

    #[test]
    fn predicate_on_identity_side_expands() {
        let x1 = Rel::var("X", 1);
        let p = RelTarget::Pred(Pred::new("P", 1));
        let out = subst_rel(&f("X = Y"), &x1, &p).unwrap();
        assert!(alpha_eq(&out, &f("A x1. (P(x1) <-> Y(x1))")));
    }

    #[test]
    fn relational_capture() {
        let x1 = Rel::var("X", 1);
        let y = RelTarget::Rel(Rel::var("Y", 1));
        let err = subst_rel(&f("E2 Y. (X(a) & Y(a))"), &x1, &y).unwrap_err();
        assert!(matches!(err, SyntaxError::Capture { .. }));
    }

    #[test]
    fn parameter_replacement() {
        let out = replace_term(&f("A x. R(x, b) & b = c"), &Term::par("b"), &Term::par("d"));
        assert_eq!(out, f("A x. R(x, d) & d = c"));
        let out = replace_rel(&f("B = C & B(a)"), &Rel::par("B", 1), &Rel::par("C1", 1));
        assert_eq!(out, f("C1 = C & C1(a)"));
    }
}
