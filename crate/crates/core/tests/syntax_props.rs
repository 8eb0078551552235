use std::collections::BTreeSet;

use ddlogic::syntax::{alpha_eq, alpha_normalize, free_symbols, subst_ind, subst_ind_multi, Name, Term};
use ddlogic_testkit::{arb_formula, GenConfig};
use proptest::prelude::*;

fn x() -> Name {
    Name::parse("x")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn substituting_a_variable_for_itself(f in arb_formula(GenConfig::default())) {
        let g = subst_ind(&f, &x(), &Term::var("x")).unwrap();
        prop_assert!(alpha_eq(&f, &g));
    }

    #[test]
    fn composition_on_fresh_parameters(f in arb_formula(GenConfig::default())) {
        let (a, b) = (Term::par("a7"), Term::par("b7"));
        let y = Name::parse("y");
        let step = subst_ind(&subst_ind(&f, &x(), &a).unwrap(), &y, &b).unwrap();
        let multi = subst_ind_multi(&f, &[x(), y], &[a, b]).unwrap();
        prop_assert!(alpha_eq(&step, &multi));
    }

    #[test]
    fn free_symbols_after_substitution(f in arb_formula(GenConfig::default())) {
        let a = Term::par("a7");
        let g = subst_ind(&f, &x(), &a).unwrap();
        let before = free_symbols(&f);
        let after = free_symbols(&g);
        let xs = Term::var("x").symbol();
        let mut bound: BTreeSet<_> = before.iter().filter(|s| **s != xs).cloned().collect();
        bound.insert(a.symbol());
        prop_assert!(after.is_subset(&bound));
        if before.contains(&xs) {
            prop_assert_eq!(after, bound);
        }
    }

    #[test]
    fn alpha_equivalence_is_an_equivalence(
        f in arb_formula(GenConfig::default()),
        g in arb_formula(GenConfig::default()),
        h in arb_formula(GenConfig::default()),
    ) {
        prop_assert!(alpha_eq(&f, &f));
        prop_assert_eq!(alpha_eq(&f, &g), alpha_eq(&g, &f));
        let n = alpha_normalize(&f);
        prop_assert!(alpha_eq(&f, &n));
        prop_assert!(alpha_eq(&n, &f));
        if alpha_eq(&f, &g) && alpha_eq(&g, &h) {
            prop_assert!(alpha_eq(&f, &h));
        }
        prop_assert!(alpha_eq(&f, &n) && alpha_eq(&n, &alpha_normalize(&n)));
    }
}
