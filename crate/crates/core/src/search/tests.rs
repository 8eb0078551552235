use super::*;
use crate::calculus::{check, RuleId, System};
use crate::parser::{parse_formula, parse_sequent};
use crate::syntax::Side;

fn seq(s: &str) -> Sequent {
    parse_sequent(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn f(s: &str) -> crate::syntax::Formula {
    parse_formula(s).unwrap()
}

fn proved(s: &str, system: System) -> crate::calculus::Derivation {
    let goal = seq(s);
    let d = prove(&goal, system, &SearchConfig::default()).unwrap_or_else(|e| panic!("{s}: {e}"));
    assert_eq!(d.conclusion, goal);
    let r = check(&d, system, false, &[]);
    assert!(r.accepted(), "{s}: {r}");
    d
}

#[test]
fn excluded_middle() {
    let d = proved("=> P(a) | !P(a)", System::RL);
    assert!(d.height() <= 4);
    assert_eq!(d.rule, RuleId::OrR);
}

#[test]
fn identity_rewrite() {
    let d = proved("b = c, P(b) => P(c)", System::RL);
    assert!(d.nodes().iter().any(|(_, n)| n.rule == RuleId::EqMinus));
}

#[test]
fn relational_identity() {
    let d = proved("B = C, B(a) => C(a)", System::RL2);
    assert!(d.nodes().iter().any(|(_, n)| n.rule == RuleId::Eq2L));
}

#[test]
fn underivable_atom() {
    let e = prove(&seq("=> P(a)"), System::RL, &SearchConfig::default()).unwrap_err();
    assert!(matches!(e, SearchError::Exhausted { .. }), "{e}");
    assert!(e.frontier().contains(&seq("=> P(a)")));
}

#[test]
fn assorted_theorems() {
    for s in [
        "A x. P(x) => E x. P(x)",
        "A x. (P(x) & Q(x)) => A x. P(x)",
        "E x. A y. R(x, y) => A y. E x. R(x, y)",
        "=> b = b",
        "b = c => c = b",
        "b = c, c = d => b = d",
        "(\\x P(x)) (iota y. Q(y)) => E x. Q(x)",
        "(\\x P(x)) (iota y. Q(y)) => E x. P(x)",
        "P(a) <-> Q(a), Q(a) => P(a)",
        "=> (\\x P(x)) a -> P(a)",
    ] {
        proved(s, System::RL);
    }
    for s in ["=> X = X", "B = C => C = B", "=> A2 X. (X(a) -> X(a))", "A2 X. X(a) => B(a)"] {
        proved(s, System::RL2);
    }
}

#[test]
fn iota_right_uniqueness() {
    proved("Q(a), A x. (Q(x) -> x = a), P(a) => (\\x P(x)) (iota y. Q(y))", System::RL);
}

#[test]
fn first_order_system_rejects_second_order_goal() {
    let e = prove(&seq("=> X = X"), System::RL, &SearchConfig::default()).unwrap_err();
    assert_eq!(e.kind(), "InvalidGoal");
}

#[test]
fn deterministic() {
    let goal = seq("E x. A y. R(x, y) => A y. E x. R(x, y)");
    let cfg = SearchConfig::default();
    let a = prove(&goal, System::RL, &cfg).unwrap();
    let b = prove(&goal, System::RL, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn time_budget() {
    let cfg = SearchConfig {
        time_budget_ms: 0,
        ..SearchConfig::default()
    };
    let e = prove(&seq("A x. E y. R(x, y) => E y. A x. R(x, y)"), System::RL, &cfg).unwrap_err();
    assert_eq!(e.kind(), "ResourceLimit");
}

#[test]
fn relative_to_assumptions() {
    let s = [seq("X = X, Q(a) => Q(b)")];
    let goal = seq("Q(a) => Q(b)");
    let d = prove_from(&goal, &s, System::RL2, &SearchConfig::default()).unwrap();
    let opts = crate::calculus::CheckOptions {
        cut: crate::calculus::CutPolicy::AssumptionFormulasOnly,
        assumptions: s.to_vec(),
        ..crate::calculus::CheckOptions::new(System::RL2)
    };
    let r = crate::calculus::check_with(&d, &opts);
    assert!(r.accepted(), "{r}");
    assert!(prove(&goal, System::RL2, &SearchConfig::default()).is_err());
}

#[test]
fn witness_property_examples() {
    let es = ExtendedSequent::new([f("E x. P(x)"), f("P(k)")], []);
    assert!(check_witness_property(&es).is_empty());
    let es = ExtendedSequent::new([], [f("A2 X. Q(a)")]);
    let v = check_witness_property(&es);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].clause, 3);
    let es = ExtendedSequent::new([], [f("X = Y")]);
    let v = check_witness_property(&es);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].clause, 9);
}

#[test]
fn saturation_examples() {
    let es = ExtendedSequent::new([f("E x. P(x)")], []);
    assert_eq!(
        saturate(&es, 8).unwrap(),
        ExtendedSequent::new([f("E x. P(x)"), f("P(k1)")], [])
    );
    let es = ExtendedSequent::new([], [f("A x. P(x)")]);
    assert_eq!(
        saturate(&es, 8).unwrap(),
        ExtendedSequent::new([], [f("A x. P(x)"), f("P(k1)")])
    );
    let done = ExtendedSequent::new([f("E x. P(x)"), f("P(k)")], []);
    assert_eq!(saturate(&done, 8).unwrap(), done);
}

#[test]
fn saturation_nested_and_budget() {
    let es = ExtendedSequent::new([f("E x. E y. R(x, y)")], [f("X = Y"), f("(\\x P(x)) (iota y. Q(y))"), f("P(a)")]);
    let out = saturate(&es, 16).unwrap();
    assert!(es.is_subset_of(&out));
    assert!(check_witness_property(&out).is_empty());
    assert_eq!(saturate(&out, 16).unwrap(), out);
    match saturate(&es, 1).unwrap_err() {
        SaturateError::BudgetExhausted { partial } => {
            assert!(es.is_subset_of(&partial));
            assert!(!check_witness_property(&partial).is_empty());
        }
        other => panic!("{other}"),
    }
}

#[test]
fn guided_saturation_avoids_provable_choice() {
    let es = ExtendedSequent::new([f("!Q(a)")], [f("(\\x P(x)) (iota y. !Q(y))")]);
    let plain = saturate(&es, 4).unwrap();
    assert!(plain.contains(Side::Suc, &f("!Q(a)")));
    let opts = SaturateOptions {
        fresh_const_budget: 4,
        consistency_guided: true,
        ..SaturateOptions::default()
    };
    let guided = saturate_with(&es, &opts).unwrap();
    assert!(!guided.contains(Side::Suc, &f("!Q(a)")));
    assert!(guided.contains(Side::Suc, &f("P(a)")));
    assert!(check_witness_property(&guided).is_empty());
}
