use super::*;
use crate::syntax::{alpha_eq, Formula, LamArg, Name, Pred, Rel, Term};

fn rt(s: &str) {
    let f = parse_formula(s).unwrap();
    let printed = print_formula(&f);
    let g = parse_formula(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
    assert!(alpha_eq(&f, &g), "{s} -> {printed}");
}

#[test]
fn lambda_with_description() {
    let f = parse_formula("(\\x P(x)) (iota y. Q(y))").unwrap();
    let want = Formula::lambda_iota(
        Name::parse("x"),
        Formula::Pred(Pred::new("P", 1), vec![Term::var("x")]),
        Name::parse("y"),
        Formula::Pred(Pred::new("Q", 1), vec![Term::var("y")]),
    );
    assert_eq!(f, want);
}

#[test]
fn second_order_quantifiers() {
    let f = parse_formula("A2 X. E2 Y. X = Y").unwrap();
    let want = Formula::forall2(
        Rel::var("X", 1),
        Formula::exists2(Rel::var("Y", 1), Formula::RelEq(Rel::var("X", 1), Rel::var("Y", 1))),
    );
    assert_eq!(f, want);
}

#[test]
fn relational_abstract() {
    let f = parse_formula("(\\X X(k)) (iota Y. A x. Y(x))").unwrap();
    let want = Formula::Lambda2(
        Rel::var("X", 1),
        std::sync::Arc::new(Formula::App(Rel::var("X", 1), vec![Term::constant("k")])),
        Rel::var("Y", 1),
        std::sync::Arc::new(Formula::forall(
            Name::parse("x"),
            Formula::App(Rel::var("Y", 1), vec![Term::var("x")]),
        )),
    );
    assert_eq!(f, want);
}

#[test]
fn arity_flows_through_identities() {
    let f = parse_formula("B = C & C(a, b)").unwrap();
    match f {
        Formula::And(l, _) => assert_eq!(*l, Formula::RelEq(Rel::par("B", 2), Rel::par("C", 2))),
        _ => panic!(),
    }
    let f = parse_formula("(\\X X(a, b)) (iota Y. Y = Z)").unwrap();
    assert!(matches!(f, Formula::Lambda2(ref x, _, ref y, _) if x.arity == 2 && y.arity == 2));
}

#[test]
fn arity_clash_is_reported() {
    let e = parse_formula("B(a) & B(a, b)").unwrap_err();
    assert_eq!(e.span.column, 8);
    assert!(parse_formula("P(a) | P(a, a)").is_err());
    assert!(parse_formula("B = C & B(a) & C(a, b)").is_err());
}

#[test]
fn sequents() {
    let s = parse_sequent("P(a) => P(a)").unwrap();
    assert_eq!(s.ant().len(), 1);
    assert_eq!(s.suc().len(), 1);
    let s = parse_sequent("=> b = b").unwrap();
    assert!(s.ant().is_empty());
    assert_eq!(s.suc()[0], Formula::Eq(Term::par("b"), Term::par("b")));
    let s = parse_sequent("B = C, B(a) => C(a)").unwrap();
    assert_eq!(s.ant().len(), 2);
    assert_eq!(print_sequent(&parse_sequent("=>").unwrap()), "=>");
    assert_eq!(print_sequent(&parse_sequent("P(a) =>").unwrap()), "P(a) =>");
}

#[test]
fn printing() {
    let f = Formula::and(
        Formula::Pred(Pred::new("P", 1), vec![Term::par("a")]),
        Formula::Pred(Pred::new("Q", 1), vec![Term::par("b")]),
    );
    assert_eq!(print_formula(&f), "(P(a) & Q(b))");
    assert_eq!(
        print_formula(&parse_formula("!A x. P(x) & Q(a)").unwrap()),
        "!(A x. (P(x) & Q(a)))"
    );
    assert_eq!(
        print_formula(&parse_formula("(A x. P(x)) & Q(a)").unwrap()),
        "((A x. P(x)) & Q(a))"
    );
}

#[test]
fn precedence() {
    let f = parse_formula("!P(a) & Q(a) | R(a, a) -> P(b) <-> Q(b)").unwrap();
    assert_eq!(
        print_formula(&f),
        "((((!P(a) & Q(a)) | R(a, a)) -> P(b)) <-> Q(b))"
    );
    let f = parse_formula("P(a) -> P(b) -> P(c)").unwrap();
    assert_eq!(print_formula(&f), "(P(a) -> (P(b) -> P(c)))");
    let f = parse_formula("P(a) & P(b) & P(c)").unwrap();
    assert_eq!(print_formula(&f), "((P(a) & P(b)) & P(c))");
}

#[test]
fn quantifier_letter_as_symbol() {
    let f = parse_formula("A(a) & A = B").unwrap();
    assert!(!f.is_first_order());
    let f = parse_formula("A x. A2(x)").unwrap();
    assert!(matches!(f, Formula::Forall(..)));
}

#[test]
fn round_trips() {
    for s in [
        "A x. E y. (R(x, y) -> !x = y)",
        "(\\x (\\y R(x, y)) (iota z. Q(z))) a",
        "!(\\x P(x)) (iota y. A z. (Q(z) <-> z = y))",
        "E2 X. A x. (X(x) <-> P(x))",
        "(\\X A2 Y. (X = Y | Y(k))) (iota Z. Z(a))",
        "K = B & K1(a, k2)",
    ] {
        rt(s);
    }
}

#[test]
fn errors_carry_positions() {
    let e = parse_formula("P(a) &").unwrap_err();
    assert_eq!(e.found, "end of input");
    let e = parse_formula("iota y. P(y)").unwrap_err();
    assert!(e.hint.is_some());
    let e = parse_formula("(\\X X(a)) B").unwrap_err();
    assert!(e.hint.unwrap().contains("description"));
    let e = parse_formula("P(a) Q(a)").unwrap_err();
    assert_eq!(e.span.column, 6);
    assert!(parse_formula("a").is_err());
    assert!(parse_formula("").is_err());
    assert!(parse_sequent("P(a), => Q(a)").is_err());
}

#[test]
fn deep_nesting_is_an_error_not_a_crash() {
    let src = format!("{}P(a){}", "(".repeat(5000), ")".repeat(5000));
    assert!(parse_formula(&src).is_err());
    let src = format!("{}P(a)", "!".repeat(5000));
    assert!(parse_formula(&src).is_err());
}

#[test]
fn lambda_argument_kinds() {
    match parse_formula("(\\x P(x)) k3").unwrap() {
        Formula::Lambda(_, _, LamArg::Term(t)) => assert_eq!(t, Term::constant("k3")),
        _ => panic!(),
    }
}

mod documents {
    use super::super::*;
    use crate::calculus::{check, check_with, expand_derived, CheckOptions, DerivedRule, System};
    use crate::search::{prove, SearchConfig};

    fn sample() -> crate::calculus::Derivation {
        prove(
            &parse_sequent("E x. A y. R(x, y) => A y. E x. R(x, y)").unwrap(),
            System::RL,
            &SearchConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn json_and_text_round_trip() {
        let d = sample();
        let json = print_derivation_json(&d);
        assert_eq!(parse_derivation(&json).unwrap(), d);
        let text = print_derivation(&d);
        assert_eq!(parse_derivation(&text).unwrap(), d);
        assert_eq!(print_derivation_json(&parse_derivation(&text).unwrap()), json);
    }

    #[test]
    fn hand_written_text() {
        let src = "\
# excluded middle
node root
  rule: OrR
  conclusion: => P(a) | !P(a)
  premises: neg
  principal: suc:0
node neg
  rule: NegR
  conclusion: => P(a), !P(a)
  premises: ax
  principal: suc: !P(a)
node ax
  rule: AX
  conclusion: P(a) => P(a)
";
        let d = parse_derivation(src).unwrap();
        assert_eq!(d.height(), 3);
        assert!(check(&d, System::RL, false, &[]).accepted());
    }

    #[test]
    fn relational_arity_from_document() {
        let src = r#"{"nodes": [
          {"id": "r", "rule": "Eq2R", "conclusion": "=> X = X",
           "premises": ["p"], "inst": {"principal": "suc:0", "eigen": "a"}},
          {"id": "p", "rule": "ImpR", "conclusion": "=> X(a) -> X(a)", "premises": ["q"],
           "inst": {"principal": "suc:0"}},
          {"id": "q", "rule": "AX", "conclusion": "X(a) => X(a)"}
        ]}"#;
        let d = parse_derivation(src).unwrap();
        assert_eq!(d.inst.eigen.len(), 1);
    }

    #[test]
    fn errors() {
        let unknown = "node n\n  rule: Frobnicate\n  conclusion: => P(a)\n";
        assert_eq!(parse_derivation(unknown).unwrap_err().kind(), "UnknownRuleName");
        let bad = "node n\n  rule: AX\n  conclusion: P(a) =>> P(a)\n";
        let e = parse_derivation(bad).unwrap_err();
        assert_eq!(e.kind(), "ParseError");
        match e {
            DerivationError::Parse(p) => assert_eq!(p.span.line, 3),
            other => panic!("{other}"),
        }
        let dangling = "node n\n  rule: WL\n  conclusion: P(a) => \n  premises: m\n";
        assert_eq!(parse_derivation(dangling).unwrap_err().kind(), "StructureError");
        let cyc = r#"[{"id":"a","rule":"WL","conclusion":"P(a) =>","premises":["b"]},
                     {"id":"b","rule":"WL","conclusion":"P(a) =>","premises":["a"]}]"#;
        assert_eq!(parse_derivation(cyc).unwrap_err().kind(), "StructureError");
        let extra = r#"[{"id":"a","rule":"AX","conclusion":"P(a) => P(a)","colour":"red"}]"#;
        assert!(parse_derivation(extra).is_err());
    }

    #[test]
    fn schema_and_split_survive() {
        use crate::calculus::{AtomicSchema, Instantiation, SchemaVar};
        use crate::syntax::{Rel, Side};
        let c = parse_sequent("B = C, Y = B => ").unwrap();
        let inst = Instantiation {
            principal: c.find(Side::Ant, &parse_formula("B = C").unwrap()),
            schema: Some(AtomicSchema {
                formula: parse_formula("Y = X").unwrap(),
                var: SchemaVar::Rel(Rel::var("X", 1)),
            }),
            ..Instantiation::default()
        };
        let d = expand_derived(DerivedRule::Eq2Minus, &c, &inst).unwrap();
        assert!(d.nodes().iter().any(|(_, n)| n.inst.schema.is_some() || n.inst.split.is_some()));
        let back = parse_derivation(&print_derivation_json(&d)).unwrap();
        assert_eq!(back, d);
        let back = parse_derivation(&print_derivation(&d)).unwrap();
        assert_eq!(back, d);
        let opts = CheckOptions {
            assumptions: vec![parse_sequent("Y = C => ").unwrap()],
            ..CheckOptions::new(System::RL2)
        };
        assert!(check_with(&back, &opts).accepted());
    }

    #[test]
    fn renderings() {
        let d = sample();
        let ascii = render_ascii(&d);
        assert!(ascii.lines().last().unwrap().contains(&d.conclusion.to_string()));
        assert_eq!(ascii.lines().filter(|l| l.contains("---")).count(), d.size());
        let latex = render_latex(&d);
        let seqs = latex_sequents(&latex);
        assert_eq!(seqs.len(), d.size());
        for s in &seqs {
            parse_sequent(s).unwrap();
        }
        assert_eq!(parse_sequent(seqs.last().unwrap()).unwrap(), d.conclusion);
    }
}
