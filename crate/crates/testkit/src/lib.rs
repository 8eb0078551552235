//! Random generators for formulas, sequents, models, provable goals and
//! fuzz inputs. Everything is driven by an explicit seed.

use std::collections::BTreeMap;

use ddlogic::semantics::{Assignment, GeneralModel, Model, Relation};
use ddlogic::syntax::{free_symbols, Formula, Name, Pred, Rel, Sequent, SymbolKind, Term, TermKind};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_depth: usize,
    pub second_order: bool,
    pub lambdas: bool,
    /// Free individual variables may occur.
    pub free_vars: bool,
    pub constants: bool,
    /// The binary predicate `R` may occur.
    pub binary: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            second_order: true,
            lambdas: true,
            free_vars: true,
            constants: true,
            binary: true,
        }
    }
}

impl GenConfig {
    pub fn first_order() -> Self {
        GenConfig {
            second_order: false,
            ..GenConfig::default()
        }
    }

    /// Small closed formulas, cheap to prove and to enumerate models for.
    pub fn small() -> Self {
        GenConfig {
            max_depth: 2,
            free_vars: false,
            constants: false,
            binary: false,
            ..GenConfig::default()
        }
    }
}

const IND_VARS: [&str; 3] = ["x", "y", "z"];
const PARAMS: [&str; 2] = ["a", "b"];
const CONSTS: [&str; 1] = ["k"];
const REL_VARS: [&str; 2] = ["X", "Y"];
const REL_PARS: [&str; 2] = ["B", "C"];
const REL_CONSTS: [&str; 1] = ["K"];

struct Gen<'c, R> {
    rng: R,
    cfg: &'c GenConfig,
    bound: Vec<Name>,
    bound_rel: Vec<Rel>,
}

impl<R: Rng> Gen<'_, R> {
    fn term(&mut self) -> Term {
        let r = self.rng.gen_range(0..10);
        if !self.bound.is_empty() && r < 5 {
            let x = self.bound.choose(&mut self.rng).unwrap().clone();
            return Term { kind: TermKind::Var, name: x };
        }
        if self.cfg.free_vars && r == 5 {
            return Term::var(IND_VARS.choose(&mut self.rng).unwrap());
        }
        if self.cfg.constants && r == 6 {
            return Term::constant(CONSTS[0]);
        }
        Term::par(PARAMS.choose(&mut self.rng).unwrap())
    }

    fn rel(&mut self) -> Rel {
        let r = self.rng.gen_range(0..10);
        if !self.bound_rel.is_empty() && r < 5 {
            return self.bound_rel.choose(&mut self.rng).unwrap().clone();
        }
        if self.cfg.constants && r == 5 {
            return Rel {
                kind: ddlogic::syntax::RelKind::Const,
                name: Name::parse(REL_CONSTS[0]),
                arity: 1,
            };
        }
        Rel::par(REL_PARS.choose(&mut self.rng).unwrap(), 1)
    }

    fn atom(&mut self) -> Formula {
        let kinds = if self.cfg.second_order { 6 } else { 4 };
        match self.rng.gen_range(0..kinds) {
            0 | 1 => {
                let p = if self.rng.gen_bool(0.5) { "P" } else { "Q" };
                Formula::Pred(Pred::new(p, 1), vec![self.term()])
            }
            2 if self.cfg.binary => Formula::Pred(Pred::new("R", 2), vec![self.term(), self.term()]),
            2 => Formula::Pred(Pred::new("P", 1), vec![self.term()]),
            3 => Formula::Eq(self.term(), self.term()),
            4 => Formula::App(self.rel(), vec![self.term()]),
            _ => Formula::RelEq(self.rel(), self.rel()),
        }
    }

    fn scoped<T>(&mut self, x: Name, f: impl FnOnce(&mut Self) -> T) -> T {
        self.bound.push(x);
        let out = f(self);
        self.bound.pop();
        out
    }

    fn scoped_rel<T>(&mut self, x: Rel, f: impl FnOnce(&mut Self) -> T) -> T {
        self.bound_rel.push(x);
        let out = f(self);
        self.bound_rel.pop();
        out
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_range(0..10) < 3 {
            return self.atom();
        }
        let d = depth - 1;
        let choices = if self.cfg.second_order { 12 } else { 9 };
        let choice = self.rng.gen_range(0..choices);
        match choice {
            0 => Formula::not(self.formula(d)),
            1 => Formula::and(self.formula(d), self.formula(d)),
            2 => Formula::or(self.formula(d), self.formula(d)),
            3 => Formula::imp(self.formula(d), self.formula(d)),
            4 => Formula::iff(self.formula(d), self.formula(d)),
            5 | 6 => {
                let x = Name::parse(IND_VARS.choose(&mut self.rng).unwrap());
                let body = self.scoped(x.clone(), |g| g.formula(d));
                if choice == 5 {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            }
            7 | 8 if !self.cfg.lambdas => self.atom(),
            7 => {
                let x = Name::parse(IND_VARS.choose(&mut self.rng).unwrap());
                let body = self.scoped(x.clone(), |g| g.formula(d));
                let t = self.term();
                Formula::lambda_term(x, body, t)
            }
            8 => {
                let x = Name::parse(IND_VARS.choose(&mut self.rng).unwrap());
                let y = Name::parse(IND_VARS.choose(&mut self.rng).unwrap());
                let body = self.scoped(x.clone(), |g| g.formula(d));
                let cond = self.scoped(y.clone(), |g| g.formula(d));
                Formula::lambda_iota(x, body, y, cond)
            }
            9 | 10 => {
                let x = Rel::var(REL_VARS.choose(&mut self.rng).unwrap(), 1);
                let body = self.scoped_rel(x.clone(), |g| g.formula(d));
                if choice == 9 {
                    Formula::forall2(x, body)
                } else {
                    Formula::exists2(x, body)
                }
            }
            _ if !self.cfg.lambdas => self.atom(),
            _ => {
                let x = Rel::var(REL_VARS.choose(&mut self.rng).unwrap(), 1);
                let y = Rel::var(REL_VARS.choose(&mut self.rng).unwrap(), 1);
                let body = self.scoped_rel(x.clone(), |g| g.formula(d));
                let cond = self.scoped_rel(y.clone(), |g| g.formula(d));
                Formula::lambda2(x, body, y, cond).expect("unary abstracts")
            }
        }
    }
}

pub fn formula(rng: &mut impl Rng, cfg: &GenConfig) -> Formula {
    let mut g = Gen {
        rng,
        cfg,
        bound: Vec::new(),
        bound_rel: Vec::new(),
    };
    g.formula(cfg.max_depth)
}

/// A formula whose only free individual variable, if any, is `x`.
pub fn open_formula(rng: &mut impl Rng, cfg: &GenConfig) -> Formula {
    let cfg = &GenConfig {
        free_vars: false,
        ..cfg.clone()
    };
    let mut g = Gen {
        rng,
        cfg,
        bound: vec![Name::parse("x")],
        bound_rel: Vec::new(),
    };
    g.formula(cfg.max_depth)
}

pub fn sequent(rng: &mut impl Rng, cfg: &GenConfig) -> Sequent {
    let n = rng.gen_range(0..=2);
    let m = rng.gen_range(0..=2);
    let ant = (0..n).map(|_| formula(rng, cfg)).collect();
    let suc = (0..m).map(|_| formula(rng, cfg)).collect();
    Sequent::new(ant, suc)
}

pub fn formula_from_seed(seed: u64, cfg: &GenConfig) -> Formula {
    formula(&mut rng(seed), cfg)
}

pub fn arb_formula(cfg: GenConfig) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |s| formula_from_seed(s, &cfg))
}

pub fn arb_sequent(cfg: GenConfig) -> impl Strategy<Value = Sequent> {
    any::<u64>().prop_map(move |s| sequent(&mut rng(s), &cfg))
}

fn random_relation(rng: &mut impl Rng, arity: usize, d: usize) -> Relation {
    let n = ddlogic::semantics::tuple_count(d, arity);
    let mask = if n >= 64 { rng.gen() } else { rng.gen::<u64>() & ((1u64 << n) - 1) };
    Relation::from_mask(arity, d, mask)
}

/// A general model over `{0, …, d−1}` with an assignment covering every
/// free symbol of `formulas` and every generator variable and parameter.
/// Arity-1 families are a random nonempty subfamily half of the time and
/// the full powerset otherwise.
pub fn model(rng: &mut impl Rng, d: usize, formulas: &[&Formula]) -> (GeneralModel, Assignment) {
    let mut gm = GeneralModel::full(Model::new(d));
    if rng.gen_bool(0.5) {
        let all = Relation::all(1, d, 16).expect("small domain");
        let mut fam: Vec<Relation> = all.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if fam.is_empty() {
            fam.push(all.choose(rng).unwrap().clone());
        }
        gm.families.insert(1, fam);
    }
    let pick_rel = |rng: &mut ChaCha8Rng, gm: &GeneralModel, arity: usize| match gm.family(arity) {
        Some(f) => f.choose(rng).unwrap().clone(),
        None => random_relation(rng, arity, d),
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut v = Assignment::default();
    for x in IND_VARS.iter().chain(["u", "w"].iter()) {
        v.ind.insert(Term::var(x), local.gen_range(0..d));
    }
    for a in PARAMS.iter().chain(["c", "d"].iter()) {
        v.ind.insert(Term::par(a), local.gen_range(0..d));
    }
    let mut preds: BTreeMap<Pred, Relation> = BTreeMap::new();
    for p in [Pred::new("P", 1), Pred::new("Q", 1), Pred::new("R", 2), Pred::new("S", 1)] {
        preds.insert(p.clone(), random_relation(&mut local, p.arity, d));
    }
    for x in REL_VARS {
        let r = pick_rel(&mut local, &gm, 1);
        v.rel.insert(Rel::var(x, 1), r);
    }
    for x in REL_PARS.iter().chain(["A"].iter()) {
        let r = pick_rel(&mut local, &gm, 1);
        v.rel.insert(Rel::par(x, 1), r);
    }
    for f in formulas {
        for s in free_symbols(f) {
            match s.kind {
                SymbolKind::Pred => {
                    let p = Pred { name: s.name.clone(), arity: s.arity };
                    preds.entry(p).or_insert_with(|| random_relation(&mut local, s.arity, d));
                }
                SymbolKind::IndConst => {
                    gm.base.consts.entry(s.name.clone()).or_insert_with(|| local.gen_range(0..d));
                }
                SymbolKind::IndPar | SymbolKind::IndVar => {
                    let t = s.as_term().unwrap();
                    v.ind.entry(t).or_insert_with(|| local.gen_range(0..d));
                }
                SymbolKind::RelConst => {
                    let k = s.as_rel().unwrap();
                    if !gm.relconsts.contains_key(&k) {
                        let r = pick_rel(&mut local, &gm, k.arity);
                        gm.relconsts.insert(k, r);
                    }
                }
                SymbolKind::RelPar | SymbolKind::RelVar => {
                    let x = s.as_rel().unwrap();
                    let arity = x.arity;
                    v.rel.entry(x).or_insert_with(|| pick_rel(&mut local, &gm, arity));
                }
            }
        }
    }
    gm.base.consts.entry(Name::parse("k")).or_insert_with(|| local.gen_range(0..d));
    let k = Rel {
        kind: ddlogic::syntax::RelKind::Const,
        name: Name::parse("K"),
        arity: 1,
    };
    if !gm.relconsts.contains_key(&k) {
        let r = pick_rel(&mut local, &gm, 1);
        gm.relconsts.insert(k, r);
    }
    gm.base.preds = preds;
    (gm, v)
}

fn sub(phi: &Formula, t: &str) -> Formula {
    ddlogic::syntax::subst_ind(phi, &Name::parse("x"), &Term::par(t)).expect("parameters are never captured")
}

/// A goal built from a template that is valid whatever the random
/// subformulas are. Second-order templates are only drawn when
/// `cfg.second_order` is set.
pub fn valid_goal(rng: &mut impl Rng, cfg: &GenConfig) -> Sequent {
    let p = formula(rng, cfg);
    let q = formula(rng, cfg);
    let th = open_formula(rng, cfg);
    let x = Name::parse("x");
    let templates = if cfg.second_order { 19 } else { 14 };
    let (ant, suc) = match rng.gen_range(0..templates) {
        0 => (vec![p.clone()], vec![p]),
        1 => (vec![Formula::and(p.clone(), q.clone())], vec![Formula::and(q, p)]),
        2 => (vec![], vec![Formula::or(p.clone(), Formula::not(p))]),
        3 => (vec![p.clone(), Formula::imp(p, q.clone())], vec![q]),
        4 => (
            vec![Formula::not(Formula::or(p.clone(), q.clone()))],
            vec![Formula::and(Formula::not(p), Formula::not(q))],
        ),
        5 => (vec![Formula::forall(x.clone(), th.clone())], vec![sub(&th, "a")]),
        6 => (vec![sub(&th, "a")], vec![Formula::exists(x.clone(), th.clone())]),
        7 => (vec![Formula::lambda_term(x.clone(), th.clone(), Term::par("a"))], vec![sub(&th, "a")]),
        8 => (
            vec![Formula::Eq(Term::par("a"), Term::par("b")), sub(&th, "a")],
            vec![sub(&th, "b")],
        ),
        9 => {
            let y = Name::parse("y");
            let cond = Formula::Pred(Pred::new("Q", 1), vec![Term::var("y")]);
            (
                vec![Formula::lambda_iota(x.clone(), th.clone(), y.clone(), cond.clone())],
                vec![Formula::exists(y, cond)],
            )
        }
        10 => (vec![p.clone()], vec![Formula::or(q, p)]),
        11 => (
            vec![Formula::forall(x.clone(), Formula::and(th.clone(), p))],
            vec![Formula::forall(x.clone(), th.clone())],
        ),
        12 => {
            let qy = |t: Term| Formula::Pred(Pred::new("Q", 1), vec![t]);
            let unique = Formula::forall(x.clone(), Formula::imp(qy(Term::var("x")), Formula::Eq(Term::var("x"), Term::par("a"))));
            (
                vec![qy(Term::par("a")), unique, sub(&th, "a")],
                vec![Formula::lambda_iota(x.clone(), th.clone(), Name::parse("y"), qy(Term::var("y")))],
            )
        }
        13 => {
            let qy = |t: Term| Formula::Pred(Pred::new("Q", 1), vec![t]);
            (
                vec![
                    Formula::lambda_iota(x.clone(), th.clone(), Name::parse("y"), qy(Term::var("y"))),
                    qy(Term::par("a")),
                    qy(Term::par("b")),
                ],
                vec![Formula::Eq(Term::par("a"), Term::par("b"))],
            )
        }
        14 => {
            let b = Rel::par("B", 1);
            (vec![], vec![Formula::RelEq(b.clone(), b)])
        }
        15 => {
            let xx = Rel::var("X", 1);
            let body = Formula::imp(Formula::App(xx.clone(), vec![Term::par("a")]), p.clone());
            (
                vec![Formula::forall2(xx, body)],
                vec![Formula::imp(Formula::App(Rel::par("B", 1), vec![Term::par("a")]), p)],
            )
        }
        16 => (
            vec![Formula::RelEq(Rel::par("B", 1), Rel::par("C", 1)), Formula::App(Rel::par("B", 1), vec![Term::par("a")])],
            vec![Formula::App(Rel::par("C", 1), vec![Term::par("a")])],
        ),
        17 => {
            let (xx, yy, b) = (Rel::var("X", 1), Rel::var("Y", 1), Rel::par("B", 1));
            let at = |r: &Rel, t: &str| Formula::App(r.clone(), vec![Term::par(t)]);
            let unique = Formula::forall2(yy.clone(), Formula::imp(at(&yy, "a"), Formula::RelEq(yy.clone(), b.clone())));
            (
                vec![at(&b, "a"), unique, at(&b, "b")],
                vec![Formula::lambda2(xx.clone(), at(&xx, "b"), yy.clone(), at(&yy, "a")).expect("unary")],
            )
        }
        _ => {
            let (xx, yy) = (Rel::var("X", 1), Rel::var("Y", 1));
            let at = |r: &Rel, t: &str| Formula::App(r.clone(), vec![Term::par(t)]);
            let (b, c) = (Rel::par("B", 1), Rel::par("C", 1));
            (
                vec![
                    Formula::lambda2(xx.clone(), at(&xx, "b"), yy.clone(), at(&yy, "a")).expect("unary"),
                    at(&b, "a"),
                    at(&c, "a"),
                ],
                vec![Formula::RelEq(b, c)],
            )
        }
    };
    Sequent::new(ant, suc)
}

const FUZZ_TOKENS: &[&str] = &[
    "A ", "E ", "A2 ", "E2 ", "x", "y", "z1", "a", "b", "c2", "k", "X", "Y", "B", "C", "K", "P", "Q", "R", "S3", "(",
    ")", ",", ".", "!", "&", "|", "->", "<->", "=", "=>", "\\", "\\x ", "iota ", "iota y. ", " ", "  ", "\n", "#", "@",
    "∀", "ι", "λ", "0", "99999999999999999999", "((", "))", "=>=>", "-", "<", ">",
];

/// A random string over the grammar's alphabet. Every input must either
/// parse or yield a located `ParseError`.
pub fn fuzz_input(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(0..24);
    let mut s = String::new();
    for _ in 0..n {
        s.push_str(FUZZ_TOKENS.choose(rng).unwrap());
    }
    s
}

/// Deletes, duplicates or swaps a few characters of `src`.
pub fn mutate(rng: &mut impl Rng, src: &str) -> String {
    let mut chars: Vec<char> = src.chars().collect();
    for _ in 0..rng.gen_range(1..=3) {
        if chars.is_empty() {
            break;
        }
        let i = rng.gen_range(0..chars.len());
        match rng.gen_range(0..3) {
            0 => {
                chars.remove(i);
            }
            1 => chars.insert(i, chars[i]),
            _ => {
                let j = rng.gen_range(0..chars.len());
                chars.swap(i, j);
            }
        }
    }
    chars.into_iter().collect()
}

pub fn system_for(s: &Sequent) -> ddlogic::calculus::System {
    if s.is_first_order() {
        ddlogic::calculus::System::RL
    } else {
        ddlogic::calculus::System::RL2
    }
}

/// `count` derivations found by the prover for [`valid_goal`] instances,
/// in seed order. Goals the prover gives up on are skipped.
pub fn derivations(seed: u64, count: usize) -> Vec<ddlogic::calculus::Derivation> {
    use ddlogic::search::{prove, SearchConfig};
    let cfg = SearchConfig {
        max_depth: 8,
        time_budget_ms: 2_000,
        ..SearchConfig::default()
    };
    let gen = GenConfig::small();
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 4 {
        attempts += 1;
        let goal = valid_goal(&mut r, &gen);
        if let Ok(d) = prove(&goal, system_for(&goal), &cfg) {
            out.push(d);
        }
    }
    out
}

/// Full models with `|D| ≤ 2`, then every subfamily wherever an arity has
/// at most four relations, which at `|D| ≤ 2` and arity ≤ 2 means
/// `(|D|=2, arity 1)` and the one-element domain.
pub fn soundness_bounds() -> [ddlogic::semantics::SearchBounds; 2] {
    use ddlogic::semantics::{FamilyMode, SearchBounds};
    [
        SearchBounds::full(2),
        SearchBounds {
            max_domain: 2,
            families: FamilyMode::AllSubfamilies,
            subfamily_limit: 4,
            ..SearchBounds::default()
        },
    ]
}

/// The first bound under which `s` has a countermodel, if any.
pub fn refuted_within_soundness_bounds(s: &Sequent) -> Option<String> {
    for b in soundness_bounds() {
        match ddlogic::semantics::find_countermodel(s, &b) {
            Ok(None) => {}
            Ok(Some(_)) => return Some(format!("countermodel with families {}", b.families)),
            Err(e) => return Some(e.to_string()),
        }
    }
    None
}
