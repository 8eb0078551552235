use std::collections::BTreeSet;

use super::{Instantiation, RuleError, RuleId, SchemaVar, ViolationKind, Witness};
use crate::syntax::{
    alpha_eq, subst_ind, subst_rel, Formula, LamArg, Name, Rel, RelKind, Sequent, Side, Symbol,
    SyntaxError, Term, TermKind,
};

fn bad(detail: impl Into<String>) -> RuleError {
    RuleError::new(ViolationKind::BadInstantiation, detail)
}

fn from_syntax(e: SyntaxError) -> RuleError {
    match e {
        SyntaxError::ArityMismatch { .. } => RuleError::new(ViolationKind::ArityMismatch, e.to_string()),
        _ => bad(e.to_string()),
    }
}

/// `φ ⇒ φ`.
pub(crate) fn is_axiom(s: &Sequent) -> bool {
    s.ant().len() == 1 && s.suc().len() == 1 && alpha_eq(&s.ant()[0], &s.suc()[0])
}

#[derive(Default)]
struct Uses {
    principal: bool,
    eigen: bool,
    witnesses: bool,
    cut: bool,
    schema: bool,
}

fn expect_fields(rule: RuleId, inst: &Instantiation, u: Uses) -> Result<(), RuleError> {
    let mut extra = Vec::new();
    if inst.principal.is_some() && !u.principal {
        extra.push("principal");
    }
    if !inst.eigen.is_empty() && !u.eigen {
        extra.push("eigen");
    }
    if !inst.witnesses.is_empty() && !u.witnesses {
        extra.push("witnesses");
    }
    if inst.cut.is_some() && !u.cut {
        extra.push("cut");
    }
    if inst.schema.is_some() && !u.schema {
        extra.push("schema");
    }
    if inst.split.is_some() && rule != RuleId::Cut {
        extra.push("split");
    }
    if !extra.is_empty() {
        return Err(bad(format!("{rule} takes no {}", extra.join(", "))));
    }
    if u.principal && inst.principal.is_none() {
        return Err(bad(format!("{rule} needs a principal occurrence")));
    }
    Ok(())
}

/// The principal formula on the expected side and the remaining context.
fn principal<'a>(c: &'a Sequent, inst: &Instantiation, side: Side, rule: RuleId) -> Result<(&'a Formula, Sequent), RuleError> {
    let loc = inst.principal.expect("checked by expect_fields");
    if loc.side != side {
        return Err(bad(format!("{rule} has its principal formula in the {side}, not at {loc}")));
    }
    let f = c
        .get(loc)
        .ok_or_else(|| bad(format!("{loc} is out of range for `{c}`")))?;
    Ok((f, c.without(loc).unwrap()))
}

fn shape(rule: RuleId, f: &Formula) -> RuleError {
    bad(format!("{rule} does not apply to `{f}`"))
}

fn term_witnesses(inst: &Instantiation, n: usize, rule: RuleId) -> Result<Vec<Term>, RuleError> {
    if inst.witnesses.len() != n {
        return Err(bad(format!("{rule} needs {n} witness term(s), got {}", inst.witnesses.len())));
    }
    inst.witnesses
        .iter()
        .map(|w| match w {
            Witness::Term(t) if t.kind != TermKind::Var => Ok(t.clone()),
            other => Err(bad(format!("{rule} needs a parameter or constant as witness, not `{other}`"))),
        })
        .collect()
}

fn rel_witnesses(inst: &Instantiation, n: usize, arity: usize, rule: RuleId) -> Result<Vec<Rel>, RuleError> {
    if inst.witnesses.len() != n {
        return Err(bad(format!(
            "{rule} needs {n} relational witness(es), got {}",
            inst.witnesses.len()
        )));
    }
    inst.witnesses
        .iter()
        .map(|w| match w {
            Witness::Rel(r) if r.kind != RelKind::Var => {
                if r.arity == arity {
                    Ok(r.clone())
                } else {
                    Err(RuleError::new(
                        ViolationKind::ArityMismatch,
                        format!("witness {} has arity {}, expected {arity}", r.name, r.arity),
                    ))
                }
            }
            other => Err(bad(format!(
                "{rule} needs a relational parameter or constant as witness, not `{other}`"
            ))),
        })
        .collect()
}

fn symbol_occurs(symbols: &BTreeSet<Symbol>, e: &Witness) -> bool {
    let s = e.symbol();
    symbols.iter().any(|t| t.kind == s.kind && t.name == s.name)
}

/// Eigenvariables: parameters absent from the whole conclusion (hence from
/// `Γ`, `Δ` and the principal formula), pairwise distinct and distinct
/// from the witnesses.
fn eigen_checked(c: &Sequent, inst: &Instantiation, n: usize, rule: RuleId) -> Result<(), RuleError> {
    if inst.eigen.len() != n {
        return Err(bad(format!("{rule} needs {n} eigenvariable(s), got {}", inst.eigen.len())));
    }
    let symbols = c.symbols();
    for (i, e) in inst.eigen.iter().enumerate() {
        if !e.is_parameter() {
            return Err(bad(format!("eigenvariable `{e}` of {rule} is not a parameter")));
        }
        if symbol_occurs(&symbols, e) {
            return Err(RuleError::new(
                ViolationKind::EigenvariableViolation,
                format!("eigenvariable `{e}` of {rule} occurs in the conclusion"),
            ));
        }
        let same = |w: &Witness| w.symbol().kind == e.symbol().kind && w.symbol().name == e.symbol().name;
        if inst.eigen[..i].iter().any(same) || inst.witnesses.iter().any(same) {
            return Err(RuleError::new(
                ViolationKind::EigenvariableViolation,
                format!("eigenvariable `{e}` of {rule} is not distinct"),
            ));
        }
    }
    Ok(())
}

fn ind_eigen(c: &Sequent, inst: &Instantiation, n: usize, rule: RuleId) -> Result<Vec<Term>, RuleError> {
    if let Some(w) = inst.eigen.iter().find(|w| !matches!(w, Witness::Term(_))) {
        return Err(bad(format!("{rule} needs an individual eigenvariable, not `{w}`")));
    }
    eigen_checked(c, inst, n, rule)?;
    Ok(inst
        .eigen
        .iter()
        .map(|w| match w {
            Witness::Term(t) => t.clone(),
            Witness::Rel(_) => unreachable!(),
        })
        .collect())
}

fn rel_eigen(c: &Sequent, inst: &Instantiation, arity: usize, rule: RuleId) -> Result<Rel, RuleError> {
    match inst.eigen.as_slice() {
        [Witness::Rel(r)] if r.arity != arity => Err(RuleError::new(
            ViolationKind::ArityMismatch,
            format!("eigenvariable {} has arity {}, expected {arity}", r.name, r.arity),
        )),
        [Witness::Rel(r)] => {
            eigen_checked(c, inst, 1, rule)?;
            Ok(r.clone())
        }
        [w] => Err(bad(format!("{rule} needs a relational eigenvariable, not `{w}`"))),
        other => Err(bad(format!("{rule} needs 1 eigenvariable, got {}", other.len()))),
    }
}

fn si(phi: &Formula, x: &Name, t: &Term) -> Result<Formula, RuleError> {
    subst_ind(phi, x, t).map_err(from_syntax)
}

fn sr(phi: &Formula, x: &Rel, r: &Rel) -> Result<Formula, RuleError> {
    subst_rel(phi, x, &r.clone().into()).map_err(from_syntax)
}

fn ant(rest: &Sequent, fs: impl IntoIterator<Item = Formula>) -> Sequent {
    rest.with_ant(fs)
}

fn suc(rest: &Sequent, fs: impl IntoIterator<Item = Formula>) -> Sequent {
    rest.with_suc(fs)
}

fn both(rest: &Sequent, a: Formula, s: Formula) -> Sequent {
    let mut x = rest.ant().to_vec();
    x.push(a);
    let mut y = rest.suc().to_vec();
    y.push(s);
    Sequent::new(x, y)
}

fn apply(r: &Rel, args: &[Term]) -> Formula {
    Formula::App(r.clone(), args.to_vec())
}

/// Premises of `rule` read backwards from `conclusion`, in the order of
/// the rule schema.
pub fn apply_rule(conclusion: &Sequent, rule: RuleId, inst: &Instantiation) -> Result<Vec<Sequent>, RuleError> {
    use RuleId::*;
    let c = conclusion;
    let p = Uses {
        principal: true,
        ..Uses::default()
    };
    match rule {
        Ax => {
            expect_fields(rule, inst, Uses::default())?;
            if is_axiom(c) {
                Ok(Vec::new())
            } else {
                Err(RuleError::new(
                    ViolationKind::PremiseMismatch,
                    format!("`{c}` is not an axiom"),
                ))
            }
        }
        Cut => {
            expect_fields(
                rule,
                inst,
                Uses {
                    cut: true,
                    ..Uses::default()
                },
            )?;
            let phi = inst.cut.clone().ok_or_else(|| bad("Cut needs a cut formula"))?;
            let split = inst.split.as_ref().ok_or_else(|| bad("Cut needs a context split"))?;
            let pick = |side: &[Formula], idx: &[usize]| -> Result<(Vec<Formula>, Vec<Formula>), RuleError> {
                let chosen: BTreeSet<usize> = idx.iter().copied().collect();
                if chosen.len() != idx.len() || chosen.iter().any(|&i| i >= side.len()) {
                    return Err(bad("context split indices are repeated or out of range"));
                }
                let (l, r): (Vec<_>, Vec<_>) = side.iter().enumerate().partition(|(i, _)| chosen.contains(i));
                Ok((
                    l.into_iter().map(|(_, f)| f.clone()).collect(),
                    r.into_iter().map(|(_, f)| f.clone()).collect(),
                ))
            };
            let (ga, pa) = pick(c.ant(), &split.ant)?;
            let (mut gs, ps) = pick(c.suc(), &split.suc)?;
            gs.push(phi.clone());
            let mut pa = pa;
            pa.push(phi);
            Ok(vec![Sequent::new(ga, gs), Sequent::new(pa, ps)])
        }
        WL | WR => {
            expect_fields(rule, inst, p)?;
            let side = if rule == WL { Side::Ant } else { Side::Suc };
            let (_, rest) = principal(c, inst, side, rule)?;
            Ok(vec![rest])
        }
        CL | CR => {
            expect_fields(rule, inst, p)?;
            let side = if rule == CL { Side::Ant } else { Side::Suc };
            let (f, _) = principal(c, inst, side, rule)?;
            Ok(vec![c.with(side, f.clone())])
        }
        AndL => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Ant, rule)? {
                (Formula::And(a, b), rest) => Ok(vec![ant(&rest, [(**a).clone(), (**b).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        AndR => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Suc, rule)? {
                (Formula::And(a, b), rest) => Ok(vec![suc(&rest, [(**a).clone()]), suc(&rest, [(**b).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        OrL => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Ant, rule)? {
                (Formula::Or(a, b), rest) => Ok(vec![ant(&rest, [(**a).clone()]), ant(&rest, [(**b).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        OrR => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Suc, rule)? {
                (Formula::Or(a, b), rest) => Ok(vec![suc(&rest, [(**a).clone(), (**b).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        NegL => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Ant, rule)? {
                (Formula::Not(a), rest) => Ok(vec![suc(&rest, [(**a).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        NegR => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Suc, rule)? {
                (Formula::Not(a), rest) => Ok(vec![ant(&rest, [(**a).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        ImpL => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Ant, rule)? {
                (Formula::Imp(a, b), rest) => Ok(vec![suc(&rest, [(**a).clone()]), ant(&rest, [(**b).clone()])]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        ImpR => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Suc, rule)? {
                (Formula::Imp(a, b), rest) => Ok(vec![both(&rest, (**a).clone(), (**b).clone())]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        IffL => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Ant, rule)? {
                (Formula::Iff(a, b), rest) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    Ok(vec![suc(&rest, [a.clone(), b.clone()]), ant(&rest, [a, b])])
                }
                (f, _) => Err(shape(rule, f)),
            }
        }
        IffR => {
            expect_fields(rule, inst, p)?;
            match principal(c, inst, Side::Suc, rule)? {
                (Formula::Iff(a, b), rest) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    Ok(vec![both(&rest, a.clone(), b.clone()), both(&rest, b, a)])
                }
                (f, _) => Err(shape(rule, f)),
            }
        }
        AllL | ExR => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let side = if rule == AllL { Side::Ant } else { Side::Suc };
            let (f, rest) = principal(c, inst, side, rule)?;
            let (x, body) = match (rule, f) {
                (AllL, Formula::Forall(x, b)) | (ExR, Formula::Exists(x, b)) => (x, b),
                _ => return Err(shape(rule, f)),
            };
            let b = term_witnesses(inst, 1, rule)?.remove(0);
            Ok(vec![rest.with(side, si(body, x, &b)?)])
        }
        AllR | ExL => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    ..Uses::default()
                },
            )?;
            let side = if rule == ExL { Side::Ant } else { Side::Suc };
            let (f, rest) = principal(c, inst, side, rule)?;
            let (x, body) = match (rule, f) {
                (AllR, Formula::Forall(x, b)) | (ExL, Formula::Exists(x, b)) => (x, b),
                _ => return Err(shape(rule, f)),
            };
            let a = ind_eigen(c, inst, 1, rule)?.remove(0);
            Ok(vec![rest.with(side, si(body, x, &a)?)])
        }
        EqPlus => {
            expect_fields(
                rule,
                inst,
                Uses {
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let b = term_witnesses(inst, 1, rule)?.remove(0);
            Ok(vec![ant(c, [Formula::Eq(b.clone(), b)])])
        }
        EqMinus => {
            let Some(schema) = &inst.schema else {
                expect_fields(rule, inst, p)?;
                return Err(bad("EqMinus needs an atomic schema"));
            };
            if !schema.formula.is_atomic() {
                return Err(RuleError::new(
                    ViolationKind::NotAtomic,
                    format!("`{}` is not an atomic formula", schema.formula),
                ));
            }
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    schema: true,
                    ..Uses::default()
                },
            )?;
            let x = match &schema.var {
                SchemaVar::Ind(t) if t.kind == TermKind::Var => &t.name,
                other => return Err(bad(format!("EqMinus schema variable `{other}` is not an individual variable"))),
            };
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::Eq(b, cc) = f else {
                return Err(shape(rule, f));
            };
            let from = si(&schema.formula, x, b)?;
            let to = si(&schema.formula, x, cc)?;
            let rest = rest
                .remove_alpha(Side::Ant, &from)
                .ok_or_else(|| bad(format!("`{from}` does not occur beside `{f}`")))?;
            Ok(vec![ant(&rest, [to])])
        }
        LamL | LamR => {
            expect_fields(rule, inst, p)?;
            let side = if rule == LamL { Side::Ant } else { Side::Suc };
            match principal(c, inst, side, rule)? {
                (Formula::Lambda(x, body, LamArg::Term(t)), rest) => Ok(vec![rest.with(side, si(body, x, t)?)]),
                (f, _) => Err(shape(rule, f)),
            }
        }
        Iota1L => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::Lambda(x, psi, LamArg::Iota(y, phi)) = f else {
                return Err(shape(rule, f));
            };
            let a = ind_eigen(c, inst, 1, rule)?.remove(0);
            Ok(vec![ant(&rest, [si(phi, y, &a)?, si(psi, x, &a)?])])
        }
        Iota2L => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::Lambda(_, _, LamArg::Iota(y, phi)) = f else {
                return Err(shape(rule, f));
            };
            let w = term_witnesses(inst, 2, rule)?;
            Ok(vec![
                suc(&rest, [si(phi, y, &w[0])?]),
                suc(&rest, [si(phi, y, &w[1])?]),
                ant(&rest, [Formula::Eq(w[0].clone(), w[1].clone())]),
            ])
        }
        IotaR => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Suc, rule)?;
            let Formula::Lambda(x, psi, LamArg::Iota(y, phi)) = f else {
                return Err(shape(rule, f));
            };
            let b = term_witnesses(inst, 1, rule)?.remove(0);
            let a = ind_eigen(c, inst, 1, rule)?.remove(0);
            Ok(vec![
                suc(&rest, [si(phi, y, &b)?]),
                suc(&rest, [si(psi, x, &b)?]),
                both(&rest, si(phi, y, &a)?, Formula::Eq(a, b)),
            ])
        }
        Eq2L => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::RelEq(x, y) = f else {
                return Err(shape(rule, f));
            };
            if inst.witnesses.len() != x.arity {
                return Err(RuleError::new(
                    ViolationKind::ArityMismatch,
                    format!("`{f}` needs {} witness terms, got {}", x.arity, inst.witnesses.len()),
                ));
            }
            let b = term_witnesses(inst, x.arity, rule)?;
            let (xb, yb) = (apply(x, &b), apply(y, &b));
            Ok(vec![suc(&rest, [xb.clone(), yb.clone()]), ant(&rest, [xb, yb])])
        }
        Eq2R => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Suc, rule)?;
            let Formula::RelEq(x, y) = f else {
                return Err(shape(rule, f));
            };
            if inst.eigen.len() != x.arity {
                return Err(RuleError::new(
                    ViolationKind::ArityMismatch,
                    format!("`{f}` needs {} eigenvariables, got {}", x.arity, inst.eigen.len()),
                ));
            }
            let a = ind_eigen(c, inst, x.arity, rule)?;
            let (xa, ya) = (apply(x, &a), apply(y, &a));
            Ok(vec![both(&rest, xa.clone(), ya.clone()), both(&rest, ya, xa)])
        }
        All2L | Ex2R => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let side = if rule == All2L { Side::Ant } else { Side::Suc };
            let (f, rest) = principal(c, inst, side, rule)?;
            let (x, body) = match (rule, f) {
                (All2L, Formula::Forall2(x, b)) | (Ex2R, Formula::Exists2(x, b)) => (x, b),
                _ => return Err(shape(rule, f)),
            };
            let b = rel_witnesses(inst, 1, x.arity, rule)?.remove(0);
            Ok(vec![rest.with(side, sr(body, x, &b)?)])
        }
        All2R | Ex2L => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    ..Uses::default()
                },
            )?;
            let side = if rule == Ex2L { Side::Ant } else { Side::Suc };
            let (f, rest) = principal(c, inst, side, rule)?;
            let (x, body) = match (rule, f) {
                (All2R, Formula::Forall2(x, b)) | (Ex2L, Formula::Exists2(x, b)) => (x, b),
                _ => return Err(shape(rule, f)),
            };
            let a = rel_eigen(c, inst, x.arity, rule)?;
            Ok(vec![rest.with(side, sr(body, x, &a)?)])
        }
        Iota1L2 => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::Lambda2(x, psi, y, phi) = f else {
                return Err(shape(rule, f));
            };
            let a = rel_eigen(c, inst, y.arity, rule)?;
            Ok(vec![ant(&rest, [sr(phi, y, &a)?, sr(psi, x, &a)?])])
        }
        Iota2L2 => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Ant, rule)?;
            let Formula::Lambda2(_, _, y, phi) = f else {
                return Err(shape(rule, f));
            };
            let w = rel_witnesses(inst, 2, y.arity, rule)?;
            Ok(vec![
                suc(&rest, [sr(phi, y, &w[0])?]),
                suc(&rest, [sr(phi, y, &w[1])?]),
                ant(&rest, [Formula::RelEq(w[0].clone(), w[1].clone())]),
            ])
        }
        IotaR2 => {
            expect_fields(
                rule,
                inst,
                Uses {
                    principal: true,
                    eigen: true,
                    witnesses: true,
                    ..Uses::default()
                },
            )?;
            let (f, rest) = principal(c, inst, Side::Suc, rule)?;
            let Formula::Lambda2(x, psi, y, phi) = f else {
                return Err(shape(rule, f));
            };
            let b = rel_witnesses(inst, 1, y.arity, rule)?.remove(0);
            let a = rel_eigen(c, inst, y.arity, rule)?;
            Ok(vec![
                suc(&rest, [sr(phi, y, &b)?]),
                suc(&rest, [sr(psi, x, &b)?]),
                both(&rest, sr(phi, y, &a)?, Formula::RelEq(a, b)),
            ])
        }
    }
}
