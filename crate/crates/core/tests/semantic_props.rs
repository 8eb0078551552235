use ddlogic::semantics::{eval, eval_full, Assignment, GeneralModel, Relation};
use ddlogic::syntax::{free_symbols, subst_ind, Formula, Name, Rel, Term};
use ddlogic_testkit::{formula, model, open_formula, rng, GenConfig};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const CASES: u32 = 1200;

fn setup(seed: u64, d: usize, open: bool) -> (Formula, GeneralModel, Assignment, ChaCha8Rng) {
    let mut r = rng(seed);
    let cfg = GenConfig::default();
    let f = if open { open_formula(&mut r, &cfg) } else { formula(&mut r, &cfg) };
    let (gm, v) = model(&mut r, d, &[&f]);
    (f, gm, v, r)
}

fn iff(a: Formula, b: Formula) -> Formula {
    Formula::iff(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn assignment_irrelevance(seed in any::<u64>(), d in 1usize..=3) {
        let (f, gm, v, mut r) = setup(seed, d, false);
        let free = free_symbols(&f);
        let mut w = v.clone();
        for (t, e) in w.ind.iter_mut() {
            if !free.contains(&t.symbol()) {
                *e = r.gen_range(0..d);
            }
        }
        for (x, rel) in w.rel.iter_mut() {
            if !free.contains(&x.symbol()) {
                let fam = gm.family(x.arity).map(<[Relation]>::to_vec)
                    .unwrap_or_else(|| Relation::all(x.arity, d, 16).unwrap());
                *rel = fam[r.gen_range(0..fam.len())].clone();
            }
        }
        prop_assert_eq!(eval(&gm, &v, &f).unwrap(), eval(&gm, &w, &f).unwrap());
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>(), d in 1usize..=3) {
        let (f, gm, v, _) = setup(seed, d, true);
        let x = Name::parse("x");
        for b in [Term::par("a"), Term::par("b"), Term::constant("k")] {
            let value = match v.ind.get(&b) {
                Some(&e) => e,
                None => gm.base.consts[&b.name],
            };
            let mut w = v.clone();
            w.ind.insert(Term::var("x"), value);
            let lhs = eval(&gm, &v, &subst_ind(&f, &x, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, eval(&gm, &w, &f).unwrap());
        }
    }

    #[test]
    fn lambda_conversion(seed in any::<u64>(), d in 1usize..=3) {
        let (f, gm, v, _) = setup(seed, d, true);
        let x = Name::parse("x");
        for b in [Term::par("a"), Term::constant("k")] {
            let redex = Formula::lambda_term(x.clone(), f.clone(), b.clone());
            let contractum = subst_ind(&f, &x, &b).unwrap();
            prop_assert_eq!(eval(&gm, &v, &redex).unwrap(), eval(&gm, &v, &contractum).unwrap());
        }
    }

    #[test]
    fn relational_identity_is_coextension(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let (gm, mut v) = model(&mut r, d, &[]);
        let (x, y) = (Rel::var("X", 1), Rel::par("B", 1));
        if r.gen_bool(0.3) {
            let same = v.rel[&x].clone();
            v.rel.insert(y.clone(), same);
        }
        let lhs = Formula::rel_eq(x.clone(), y.clone()).unwrap();
        let u = Name::parse("u");
        let ut = Term::var("u");
        let rhs = Formula::forall(u, iff(
            Formula::app(x, vec![ut.clone()]).unwrap(),
            Formula::app(y, vec![ut]).unwrap(),
        ));
        prop_assert_eq!(eval(&gm, &v, &lhs).unwrap(), eval(&gm, &v, &rhs).unwrap());

        let (p, q) = (Rel::par("C1", 2), Rel::par("C2", 2));
        let all = Relation::all(2, d, 512).unwrap();
        let rp = all[r.gen_range(0..all.len())].clone();
        let rq = if r.gen_bool(0.3) { rp.clone() } else { all[r.gen_range(0..all.len())].clone() };
        v.rel.insert(p.clone(), rp);
        v.rel.insert(q.clone(), rq);
        let lhs = Formula::rel_eq(p.clone(), q.clone()).unwrap();
        let (u, w) = (Name::parse("u"), Name::parse("w"));
        let args = vec![Term::var("u"), Term::var("w")];
        let rhs = Formula::forall(u, Formula::forall(w, iff(
            Formula::app(p, args.clone()).unwrap(),
            Formula::app(q, args).unwrap(),
        )));
        prop_assert_eq!(eval(&gm, &v, &lhs).unwrap(), eval(&gm, &v, &rhs).unwrap());
    }

    #[test]
    fn full_and_henkin_agree_on_full_families(seed in any::<u64>(), d in 1usize..=3) {
        let (f, mut gm, v, _) = setup(seed, d, false);
        gm.families.clear();
        let expected = eval_full(&gm, &v, &f).unwrap();
        prop_assert_eq!(eval(&gm, &v, &f).unwrap(), expected);
        gm.families.insert(1, Relation::all(1, d, 16).unwrap());
        prop_assert_eq!(eval(&gm, &v, &f).unwrap(), expected);
    }

    #[test]
    fn connectives_follow_truth_tables(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let cfg = GenConfig::default();
        let (f, g) = (formula(&mut r, &cfg), formula(&mut r, &cfg));
        let (gm, v) = model(&mut r, d, &[&f, &g]);
        let (a, b) = (eval(&gm, &v, &f).unwrap(), eval(&gm, &v, &g).unwrap());
        let ev = |h: Formula| eval(&gm, &v, &h).unwrap();
        prop_assert_eq!(ev(Formula::not(f.clone())), !a);
        prop_assert_eq!(ev(Formula::and(f.clone(), g.clone())), a && b);
        prop_assert_eq!(ev(Formula::or(f.clone(), g.clone())), a || b);
        prop_assert_eq!(ev(Formula::imp(f.clone(), g.clone())), !a || b);
        prop_assert_eq!(ev(Formula::iff(f, g)), a == b);
    }
}
