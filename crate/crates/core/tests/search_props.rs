use ddlogic::calculus::{check, check_with, CheckOptions, CutPolicy};
use ddlogic::fixtures::{corpus, PROOFS};
use ddlogic::search::{prove, prove_from, saturate, ExtendedSequent, SaturateError, SearchConfig, SearchError};
use ddlogic::semantics::{find_countermodel, SearchBounds};
use ddlogic::Sequent;
use ddlogic_testkit::{arb_sequent, rng, sequent, system_for, valid_goal, GenConfig};
use proptest::prelude::*;

fn depth(n: usize) -> SearchConfig {
    SearchConfig {
        max_depth: n,
        ..SearchConfig::default()
    }
}

fn refuted(s: &Sequent) -> bool {
    matches!(find_countermodel(s, &SearchBounds::full(2)), Ok(Some(_)))
}

#[test]
fn corpus_is_separated() {
    let (mut valid, mut invalid) = (0, 0);
    for (is_valid, s) in corpus() {
        let system = system_for(&s);
        if is_valid {
            valid += 1;
            let d = prove(&s, system, &depth(8)).unwrap_or_else(|e| panic!("`{s}`: {e}"));
            let report = check(&d, system, false, &[]);
            assert!(report.accepted(), "`{s}`: {report}");
            assert!(!refuted(&s), "`{s}`");
        } else {
            invalid += 1;
            assert!(refuted(&s), "`{s}`");
            let r = prove(&s, system, &depth(8));
            assert!(matches!(r, Err(SearchError::Exhausted { .. })), "`{s}`: {r:?}");
        }
    }
    assert!(valid >= 30 && invalid >= 30);
}

#[test]
fn random_sequents_are_never_both_proved_and_refuted() {
    let mut r = rng(21);
    let cfg = GenConfig::small();
    let search = SearchConfig {
        max_depth: 5,
        time_budget_ms: 2_000,
        ..SearchConfig::default()
    };
    let (mut proved, mut refutations) = (0, 0);
    for i in 0..120 {
        let s = if i % 3 == 0 { valid_goal(&mut r, &cfg) } else { sequent(&mut r, &cfg) };
        let outcome = prove(&s, system_for(&s), &search);
        let cm = refuted(&s);
        if let Ok(d) = &outcome {
            proved += 1;
            assert!(!cm, "`{s}` proved and refuted");
            assert!(check(d, system_for(&s), false, &[]).accepted());
        }
        if cm {
            refutations += 1;
            assert!(matches!(outcome, Err(SearchError::Exhausted { .. })), "`{s}`: {outcome:?}");
        }
    }
    assert!(proved > 20 && refutations > 20, "{proved} {refutations}");
}

#[test]
fn fixture_cuts_are_admissible() {
    let cfg = SearchConfig::default();
    for f in PROOFS.iter().filter(|f| f.rejected_with.is_none()) {
        let d = f.derivation().unwrap();
        assert!(d.uses_cut(), "{}", f.name);
        let assumptions = f.assumptions().unwrap();
        let found = prove_from(&d.conclusion, &assumptions, f.system, &cfg)
            .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        assert!(found.conclusion.alpha_eq(&d.conclusion));
        let opts = CheckOptions {
            cut: if assumptions.is_empty() { CutPolicy::Forbidden } else { CutPolicy::AssumptionFormulasOnly },
            assumptions,
            ..CheckOptions::new(f.system)
        };
        let report = check_with(&found, &opts);
        assert!(report.accepted(), "{}: {report}", f.name);
        if opts.assumptions.is_empty() {
            assert!(!found.uses_cut());
        }
    }
}

#[test]
fn proving_is_deterministic() {
    let mut r = rng(8);
    let cfg = GenConfig::small();
    for _ in 0..40 {
        let s = valid_goal(&mut r, &cfg);
        let a = prove(&s, system_for(&s), &depth(8));
        let b = prove(&s, system_for(&s), &depth(8));
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn saturation_is_monotone_and_idempotent(s in arb_sequent(GenConfig::default())) {
        let es = ExtendedSequent::from(&s);
        match saturate(&es, 16) {
            Ok(sat) => {
                prop_assert!(es.is_subset_of(&sat));
                prop_assert_eq!(saturate(&sat, 16).unwrap(), sat);
            }
            Err(SaturateError::BudgetExhausted { partial }) => prop_assert!(es.is_subset_of(&partial)),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}
