use super::*;
use crate::parser::{parse_formula, parse_sequent};
use crate::syntax::{Locator, Rel, Side, Term};

fn seq(s: &str) -> Sequent {
    parse_sequent(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn ax(s: &str) -> Derivation {
    Derivation::leaf(seq(s))
}

fn node(c: &str, rule: RuleId, inst: Instantiation, premises: Vec<Derivation>) -> Derivation {
    Derivation::new(seq(c), rule, inst, premises)
}

fn loc(s: &str, side: Side, phi: &str) -> Locator {
    seq(s).find(side, &f(phi)).unwrap()
}

fn eq2_minus_at(context: &str) -> Derivation {
    let c = seq(context);
    let inst = Instantiation {
        principal: c.find(Side::Ant, &f("B = C")),
        schema: Some(AtomicSchema {
            formula: f("X(a)"),
            var: SchemaVar::Rel(Rel::var("X", 1)),
        }),
        ..Instantiation::default()
    };
    expand_derived(DerivedRule::Eq2Minus, &c, &inst).unwrap()
}

#[test]
fn rule_names_round_trip() {
    for r in RuleId::ALL {
        assert_eq!(r.name().parse::<RuleId>().unwrap(), *r);
    }
    assert_eq!(RuleId::ALL.len(), 36);
    assert!("Cutt".parse::<RuleId>().is_err());
    assert_eq!(RuleId::Iota2L.arity(), 3);
    assert_eq!(RuleId::Eq2R.arity(), 2);
    assert_eq!(RuleId::Ax.arity(), 0);
}

#[test]
fn all_right_eigen_in_context() {
    let d = node(
        "Q(a) => A x. P(x)",
        RuleId::AllR,
        Instantiation::principal(Locator::suc(0)).with_eigen(Term::par("a")),
        vec![ax("Q(a) => P(a)")],
    );
    let r = check(&d, System::RL, false, &[seq("Q(a) => P(a)")]);
    assert!(!r.accepted());
    assert_eq!(r.kinds(), vec![ViolationKind::EigenvariableViolation]);
}

#[test]
fn eq_minus_needs_atomic_schema() {
    let c = "b = c, P(b) & Q(b) => P(c) & Q(c)";
    let d = node(
        c,
        RuleId::EqMinus,
        Instantiation {
            principal: Some(loc(c, Side::Ant, "b = c")),
            schema: Some(AtomicSchema {
                formula: f("P(x) & Q(x)"),
                var: SchemaVar::Ind(Term::var("x")),
            }),
            ..Instantiation::default()
        },
        vec![ax("P(c) & Q(c) => P(c) & Q(c)")],
    );
    let r = check(&d, System::RL, false, &[]);
    assert_eq!(r.kinds(), vec![ViolationKind::NotAtomic]);
}

#[test]
fn eq_minus_rewrites_chosen_occurrences() {
    let c = seq("b = c, R(b, b) => ");
    let inst = Instantiation {
        principal: c.find(Side::Ant, &f("b = c")),
        schema: Some(AtomicSchema {
            formula: f("R(x, b)"),
            var: SchemaVar::Ind(Term::var("x")),
        }),
        ..Instantiation::default()
    };
    let ps = apply_rule(&c, RuleId::EqMinus, &inst).unwrap();
    assert_eq!(ps, vec![seq("R(c, b) =>")]);
}

#[test]
fn iota_one_left() {
    let c = seq("(\\x P(x)) (iota y. Q(y)), S(d) => R(d, d)");
    let inst = Instantiation::principal(c.find(Side::Ant, &f("(\\x P(x)) (iota y. Q(y))")).unwrap())
        .with_eigen(Term::par("a"));
    let ps = apply_rule(&c, RuleId::Iota1L, &inst).unwrap();
    assert_eq!(ps, vec![seq("Q(a), P(a), S(d) => R(d, d)")]);
}

#[test]
fn iota_right_second_order() {
    let c = seq("S(d) => R(d, d), (\\X X(k)) (iota Y. A x. Y(x))");
    let inst = Instantiation::principal(c.find(Side::Suc, &f("(\\X X(k)) (iota Y. A x. Y(x))")).unwrap())
        .with_witness(Rel::par("B", 1))
        .with_eigen(Rel::par("A", 1));
    let ps = apply_rule(&c, RuleId::IotaR2, &inst).unwrap();
    assert_eq!(
        ps,
        vec![
            seq("S(d) => R(d, d), A x. B(x)"),
            seq("S(d) => R(d, d), B(k)"),
            seq("A x. A(x), S(d) => R(d, d), A = B"),
        ]
    );
}

#[test]
fn and_left_without_conjunction() {
    let e = apply_rule(&seq("=> P(a)"), RuleId::AndL, &Instantiation::principal(Locator::ant(0))).unwrap_err();
    assert_eq!(e.kind, ViolationKind::BadInstantiation);
    let e = apply_rule(&seq("=> P(a)"), RuleId::AndL, &Instantiation::default()).unwrap_err();
    assert_eq!(e.kind, ViolationKind::BadInstantiation);
}

#[test]
fn unexpected_fields_are_rejected() {
    let inst = Instantiation::principal(Locator::ant(0)).with_witness(Term::par("a"));
    let e = apply_rule(&seq("P(a) & Q(a) =>"), RuleId::AndL, &inst).unwrap_err();
    assert_eq!(e.kind, ViolationKind::BadInstantiation);
}

#[test]
fn relational_witness_arity() {
    let c = seq("A2 X. X(a) =>");
    let inst = Instantiation::principal(Locator::ant(0)).with_witness(Rel::par("B", 2));
    let e = apply_rule(&c, RuleId::All2L, &inst).unwrap_err();
    assert_eq!(e.kind, ViolationKind::ArityMismatch);
}

#[test]
fn first_order_system_refuses_second_order_rules() {
    let d = node(
        "=> X = X",
        RuleId::Eq2R,
        Instantiation::principal(Locator::suc(0)).with_eigen(Term::par("a")),
        vec![ax("X(a) => X(a)"), ax("X(a) => X(a)")],
    );
    assert!(check(&d, System::RL2, false, &[]).accepted());
    let r = check(&d, System::RL, false, &[]);
    assert!(r.kinds().contains(&ViolationKind::BadInstantiation));
}

#[test]
fn wrong_premise_count() {
    let d = node("P(a) => P(a) | Q(a)", RuleId::OrR, Instantiation::principal(Locator::suc(0)), vec![]);
    assert_eq!(check(&d, System::RL, false, &[]).kinds(), vec![ViolationKind::WrongPremiseCount]);
}

#[test]
fn cut_policies() {
    let d = node(
        "P(a) => P(a)",
        RuleId::Cut,
        Instantiation {
            cut: Some(f("Q(a)")),
            ..Instantiation::default()
        },
        vec![
            node("P(a) => P(a), Q(a)", RuleId::WR, Instantiation::principal(loc("P(a) => P(a), Q(a)", Side::Suc, "Q(a)")), vec![ax("P(a) => P(a)")]),
            node("Q(a) => ", RuleId::Ax, Instantiation::default(), vec![]),
        ],
    );
    let assumptions = [seq("Q(a) =>")];
    assert!(check(&d, System::RL, true, &assumptions).accepted());
    let r = check(&d, System::RL, false, &assumptions);
    assert_eq!(r.kinds(), vec![ViolationKind::CutForbidden]);
    let opts = CheckOptions {
        cut: CutPolicy::AssumptionFormulasOnly,
        assumptions: assumptions.to_vec(),
        ..CheckOptions::new(System::RL)
    };
    assert!(check_with(&d, &opts).accepted());
    let opts = CheckOptions {
        assumptions: vec![seq("R(a) =>")],
        ..opts
    };
    assert!(check_with(&d, &opts).kinds().contains(&ViolationKind::CutForbidden));
}

#[test]
fn first_derived_tree() {
    let c = seq("=> P(a)");
    let inst = Instantiation::default().with_witness(Rel::var("X", 1));
    let d = expand_derived(DerivedRule::Eq2Plus, &c, &inst).unwrap();
    assert_eq!(d.rule, RuleId::Cut);
    assert_eq!(d.size(), 5);
    assert_eq!(d.open_leaves(), vec![&seq("X = X => P(a)")]);
    let premise = [seq("X = X => P(a)")];
    let r = check(&d, System::RL2, true, &premise);
    assert!(r.accepted(), "{r}");
    assert!(r.uses_cut);
    let r = check(&d, System::RL2, false, &premise);
    assert_eq!(r.violations.len(), 1);
    assert_eq!(r.violations[0].path, Vec::<usize>::new());
    assert_eq!(r.violations[0].kind, ViolationKind::CutForbidden);
}

#[test]
fn first_derived_tree_binary() {
    let c = seq("Q(a) => Q(b)");
    let inst = Instantiation::default().with_witness(Rel::var("X", 2));
    let d = expand_derived(DerivedRule::Eq2Plus, &c, &inst).unwrap();
    let xx = Formula::RelEq(Rel::var("X", 2), Rel::var("X", 2));
    let r = check(&d, System::RL2, true, &[c.with_ant([xx])]);
    assert!(r.accepted(), "{r}");
}

#[test]
fn second_derived_tree() {
    let d = eq2_minus_at("B = C, B(a) => C(a)");
    assert_eq!(d.size(), 9);
    assert_eq!(d.height(), 5);
    let r = check(&d, System::RL2, true, &[]);
    assert!(r.accepted(), "{r}");
    let r = check(&d, System::RL2, false, &[]);
    assert_eq!(r.kinds(), vec![ViolationKind::CutForbidden]);
}

#[test]
fn second_derived_tree_in_context() {
    let d = eq2_minus_at("B = C, B(a), Q(a) => Q(b)");
    assert_eq!(d.open_leaves(), vec![&seq("C(a), Q(a) => Q(b)")]);
    assert!(check(&d, System::RL2, true, &[seq("C(a), Q(a) => Q(b)")]).accepted());
}

#[test]
fn second_derived_tree_non_atomic() {
    let c = seq("B = C, !B(a) => ");
    let inst = Instantiation {
        principal: c.find(Side::Ant, &f("B = C")),
        schema: Some(AtomicSchema {
            formula: f("!X(a)"),
            var: SchemaVar::Rel(Rel::var("X", 1)),
        }),
        ..Instantiation::default()
    };
    let e = expand_derived(DerivedRule::Eq2Minus, &c, &inst).unwrap_err();
    assert_eq!(e.kind, ViolationKind::NotAtomic);
}

#[test]
fn second_derived_tree_by_search() {
    let c = seq("B = C, Y = B => ");
    let inst = Instantiation {
        principal: c.find(Side::Ant, &f("B = C")),
        schema: Some(AtomicSchema {
            formula: f("Y = X"),
            var: SchemaVar::Rel(Rel::var("X", 1)),
        }),
        ..Instantiation::default()
    };
    let d = expand_derived(DerivedRule::Eq2Minus, &c, &inst).unwrap();
    assert!(check(&d, System::RL2, true, &[seq("Y = C => ")]).accepted());
}

#[test]
fn literal_second_tree_is_rejected() {
    let c = "B = C, B(a) => C(a)";
    let eq2l = node(
        "B = C, B(a) => C(a)",
        RuleId::Eq2L,
        Instantiation::principal(loc(c, Side::Ant, "B = C")).with_witness(Term::par("a")),
        vec![
            node(
                "B(a) => C(a), B(a), C(a)",
                RuleId::WR,
                Instantiation::principal(loc("B(a) => C(a), B(a), C(a)", Side::Suc, "C(a)")),
                vec![ax("B(a) => B(a), C(a)")],
            ),
            node(
                "B(a), C(a) => C(a)",
                RuleId::WL,
                Instantiation::principal(loc("B(a), C(a) => C(a)", Side::Ant, "B(a)")),
                vec![ax("C(a) => C(a)")],
            ),
        ],
    );
    let r = check(&eq2l, System::RL2, true, &[]);
    assert!(r.kinds().contains(&ViolationKind::PremiseMismatch));
}

#[test]
fn rename_axiom() {
    let d = ax("P(b) => P(b)");
    let r = rename_parameter(&d, &Term::par("b").into(), &Term::par("c").into()).unwrap();
    assert_eq!(r.conclusion, seq("P(c) => P(c)"));
    assert_eq!(r.height(), 1);
}

#[test]
fn rename_relational_parameter() {
    let d = eq2_minus_at("B = C, B(a) => C(a)");
    let r = rename_parameter(&d, &Rel::par("B", 1).into(), &Rel::par("C1", 1).into()).unwrap();
    assert!(r.conclusion.alpha_eq(&seq("C1 = C, C1(a) => C(a)")));
    assert_eq!(r.height(), d.height());
    assert!(check(&r, System::RL2, true, &[]).accepted());
}

#[test]
fn rename_requires_fresh_target() {
    let d = node(
        "P(a) & P(b) => P(b)",
        RuleId::AndL,
        Instantiation::principal(Locator::ant(0)),
        vec![node(
            "P(a), P(b) => P(b)",
            RuleId::WL,
            Instantiation::principal(Locator::ant(0)),
            vec![ax("P(b) => P(b)")],
        )],
    );
    assert!(check(&d, System::RL, false, &[]).accepted());
    let e = rename_parameter(&d, &Term::par("b").into(), &Term::par("a").into()).unwrap_err();
    assert_eq!(e.kind, ViolationKind::BadInstantiation);
    let e = rename_parameter(&d, &Term::par("b").into(), &Term::constant("k").into()).unwrap_err();
    assert_eq!(e.kind, ViolationKind::BadInstantiation);
    let e = rename_parameter(&d, &Rel::par("B", 1).into(), &Rel::par("C", 2).into()).unwrap_err();
    assert_eq!(e.kind, ViolationKind::ArityMismatch);
    let r = rename_parameter(&d, &Term::par("b").into(), &Term::par("c").into()).unwrap();
    assert!(check(&r, System::RL, false, &[]).accepted());
}

#[test]
fn rename_remaps_locators() {
    let c = "Q(b), P(z) => Q(b)";
    let d = node(
        c,
        RuleId::WL,
        Instantiation::principal(loc(c, Side::Ant, "P(z)")),
        vec![ax("Q(b) => Q(b)")],
    );
    assert!(check(&d, System::RL, false, &[]).accepted());
    let r = rename_parameter(&d, &Term::par("b").into(), &Term::par("c").into()).unwrap();
    assert!(check(&r, System::RL, false, &[]).accepted());
}

#[test]
fn heights() {
    assert_eq!(ax("P(a) => P(a)").height(), 1);
    let c = "P(a), Q(a) => P(a) & Q(a)";
    let d = node(
        c,
        RuleId::AndR,
        Instantiation::principal(Locator::suc(0)),
        vec![
            node("P(a), Q(a) => P(a)", RuleId::WL, Instantiation::principal(loc("P(a), Q(a) => P(a)", Side::Ant, "Q(a)")), vec![ax("P(a) => P(a)")]),
            node("P(a), Q(a) => Q(a)", RuleId::WL, Instantiation::principal(loc("P(a), Q(a) => Q(a)", Side::Ant, "P(a)")), vec![ax("Q(a) => Q(a)")]),
        ],
    );
    assert!(check(&d, System::RL, false, &[]).accepted());
    assert_eq!(d.height(), 3);
    let balanced = node(
        "P(a) => P(a) & P(a)",
        RuleId::AndR,
        Instantiation::principal(Locator::suc(0)),
        vec![ax("P(a) => P(a)"), ax("P(a) => P(a)")],
    );
    assert!(check(&balanced, System::RL, false, &[]).accepted());
    assert_eq!(balanced.height(), 2);
}

#[test]
fn strict_eigen_looks_below() {
    let c = "P(a) => (A x. (P(x) -> P(x))) & P(a)";
    let right = "P(a) => P(a)";
    let d = node(
        c,
        RuleId::AndR,
        Instantiation::principal(Locator::suc(0)),
        vec![
            node(
                "P(a) => A x. (P(x) -> P(x))",
                RuleId::WL,
                Instantiation::principal(Locator::ant(0)),
                vec![node(
                    "=> A x. (P(x) -> P(x))",
                    RuleId::AllR,
                    Instantiation::principal(Locator::suc(0)).with_eigen(Term::par("a")),
                    vec![node(
                        "=> P(a) -> P(a)",
                        RuleId::ImpR,
                        Instantiation::principal(Locator::suc(0)),
                        vec![ax("P(a) => P(a)")],
                    )],
                )],
            ),
            ax(right),
        ],
    );
    let r = check(&d, System::RL, false, &[]);
    assert!(r.accepted(), "{r}");
    let opts = CheckOptions {
        strict_eigen: true,
        ..CheckOptions::new(System::RL)
    };
    let r = check_with(&d, &opts);
    assert_eq!(r.kinds(), vec![ViolationKind::EigenvariableViolation]);
    assert_eq!(r.violations[0].path, vec![0, 0]);
}
