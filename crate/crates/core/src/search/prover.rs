use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use super::{SearchConfig, SearchError};
use crate::calculus::derived::weaken;
use crate::calculus::{
    apply_rule, AtomicSchema, ContextSplit, Derivation, Instantiation, RuleId, SchemaVar, System, Witness,
};
use crate::syntax::{
    alpha_eq, alpha_normalize, Formula, LamArg, Locator, Name, Rel, RelKind, Sequent, Side, SymbolKind, Term,
    TermKind,
};

const FRONTIER_CAP: usize = 32;

type Key = (BTreeSet<Formula>, BTreeSet<Formula>);

fn key(s: &Sequent) -> Key {
    (
        s.ant().iter().map(alpha_normalize).collect(),
        s.suc().iter().map(alpha_normalize).collect(),
    )
}

fn subset(a: &Key, b: &Key) -> bool {
    a.0.is_subset(&b.0) && a.1.is_subset(&b.1)
}

/// Searches for a cut-free derivation of `goal`.
///
/// Iterative deepening on the number of logical rule applications along a
/// branch. Invertible rules are applied eagerly; the others keep their
/// principal formula by contraction and backtrack over instantiations.
pub fn prove(goal: &Sequent, system: System, cfg: &SearchConfig) -> Result<Derivation, SearchError> {
    prove_from(goal, &[], system, cfg)
}

/// Like [`prove`], but leaves may also be assumption sequents from `from`
/// and cuts are allowed on formulas occurring in them.
pub fn prove_from(
    goal: &Sequent,
    from: &[Sequent],
    system: System,
    cfg: &SearchConfig,
) -> Result<Derivation, SearchError> {
    cfg.validate(system).map_err(SearchError::InvalidConfig)?;
    if system == System::RL && !(goal.is_first_order() && from.iter().all(Sequent::is_first_order)) {
        return Err(SearchError::InvalidGoal(
            "second-order syntax in a first-order search".into(),
        ));
    }
    let mut cut_formulas: Vec<Formula> = Vec::new();
    for f in from.iter().flat_map(Sequent::formulas) {
        if !cut_formulas.iter().any(|g| alpha_eq(f, g)) {
            cut_formulas.push(f.clone());
        }
    }
    let mut p = Prover {
        cfg,
        order: cfg
            .rule_order
            .iter()
            .copied()
            .filter(|r| system == System::RL2 || !r.is_second_order())
            .collect(),
        assumptions: from.to_vec(),
        cut_formulas,
        deadline: Instant::now() + Duration::from_millis(cfg.time_budget_ms),
        frontier: Vec::new(),
        hit_bound: false,
    };
    for depth in 1..=cfg.max_depth {
        p.frontier.clear();
        p.hit_bound = false;
        if let Some(d) = p.search(goal, depth, &Branch::default())? {
            return Ok(d);
        }
        if !p.hit_bound {
            return Err(SearchError::Exhausted {
                depth,
                frontier: p.frontier,
            });
        }
    }
    Err(SearchError::Exhausted {
        depth: cfg.max_depth,
        frontier: p.frontier,
    })
}

#[derive(Clone, Default)]
struct Branch {
    path: Vec<Key>,
    kept: HashMap<(Side, Formula), usize>,
    opened: HashSet<Formula>,
}

struct Prover<'a> {
    cfg: &'a SearchConfig,
    order: Vec<RuleId>,
    assumptions: Vec<Sequent>,
    cut_formulas: Vec<Formula>,
    deadline: Instant,
    frontier: Vec<Sequent>,
    hit_bound: bool,
}

type Found = Result<Option<Derivation>, SearchError>;

fn rule_side(rule: RuleId) -> Option<Side> {
    use RuleId::*;
    match rule {
        AndL | OrL | ImpL | NegL | IffL | LamL | AllL | ExL | All2L | Ex2L | Iota1L | Iota2L | Iota1L2
        | Iota2L2 | Eq2L | EqMinus => Some(Side::Ant),
        AndR | OrR | ImpR | NegR | IffR | LamR | AllR | ExR | All2R | Ex2R | IotaR | IotaR2 | Eq2R => {
            Some(Side::Suc)
        }
        _ => None,
    }
}

fn fits(rule: RuleId, f: &Formula) -> bool {
    use RuleId::*;
    match f {
        Formula::And(..) => matches!(rule, AndL | AndR),
        Formula::Or(..) => matches!(rule, OrL | OrR),
        Formula::Imp(..) => matches!(rule, ImpL | ImpR),
        Formula::Not(..) => matches!(rule, NegL | NegR),
        Formula::Iff(..) => matches!(rule, IffL | IffR),
        Formula::Lambda(_, _, LamArg::Term(_)) => matches!(rule, LamL | LamR),
        Formula::Lambda(_, _, LamArg::Iota(..)) => matches!(rule, Iota1L | Iota2L | IotaR),
        Formula::Lambda2(..) => matches!(rule, Iota1L2 | Iota2L2 | IotaR2),
        Formula::Forall(..) => matches!(rule, AllL | AllR),
        Formula::Exists(..) => matches!(rule, ExL | ExR),
        Formula::Forall2(..) => matches!(rule, All2L | All2R),
        Formula::Exists2(..) => matches!(rule, Ex2L | Ex2R),
        Formula::RelEq(..) => matches!(rule, Eq2L | Eq2R),
        Formula::Eq(..) => rule == EqMinus,
        Formula::Pred(..) | Formula::App(..) => false,
    }
}

fn invertible(rule: RuleId) -> bool {
    use RuleId::*;
    matches!(
        rule,
        AndL | AndR | OrL | OrR | ImpL | ImpR | NegL | NegR | IffL | IffR | LamL | LamR | AllR | ExL | All2R
            | Ex2L | Eq2R
    )
}

/// Arity of the relational variable a second-order rule instantiates.
fn rel_arity(f: &Formula) -> usize {
    match f {
        Formula::Forall2(x, _) | Formula::Exists2(x, _) | Formula::Lambda2(_, _, x, _) | Formula::RelEq(x, _) => {
            x.arity
        }
        _ => 0,
    }
}

fn fresh_terms(s: &Sequent, base: &str, n: usize) -> Vec<Term> {
    let used = s.symbols();
    (1u32..)
        .map(|i| Term {
            kind: TermKind::Par,
            name: Name::new(base, Some(i)),
        })
        .filter(|t| !used.iter().any(|u| u.kind == SymbolKind::IndPar && u.name == t.name))
        .take(n)
        .collect()
}

fn fresh_rels(s: &Sequent, base: &str, arity: usize, n: usize) -> Vec<Rel> {
    let used = s.symbols();
    (1u32..)
        .map(|i| Rel {
            kind: RelKind::Par,
            name: Name::new(base, Some(i)),
            arity,
        })
        .filter(|r| !used.iter().any(|u| u.kind == SymbolKind::RelPar && u.name == r.name))
        .take(n)
        .collect()
}

fn position(s: &Sequent, side: Side, f: &Formula) -> Locator {
    let index = s.side(side).iter().position(|g| g == f).expect("formula present");
    Locator { side, index }
}

/// The occurrences of `whole` that alpha-match `part`, as a sequent of
/// `whole`'s own formulas.
fn embed(part: &Sequent, whole: &Sequent) -> Option<Sequent> {
    let pick = |part: &[Formula], whole: &[Formula]| -> Option<Vec<Formula>> {
        let mut used = vec![false; whole.len()];
        part.iter()
            .map(|f| {
                let i = (0..whole.len()).find(|&i| !used[i] && alpha_eq(f, &whole[i]))?;
                used[i] = true;
                Some(whole[i].clone())
            })
            .collect()
    };
    Some(Sequent::new(pick(part.ant(), whole.ant())?, pick(part.suc(), whole.suc())?))
}

/// `whole − part` where `part` consists of `whole`'s own formulas.
fn literal_rest(part: &Sequent, whole: &Sequent) -> (Vec<Formula>, Vec<Formula>) {
    let drop = |part: &[Formula], whole: &[Formula]| {
        let mut rest = whole.to_vec();
        for f in part {
            if let Some(i) = rest.iter().position(|g| g == f) {
                rest.remove(i);
            }
        }
        rest
    };
    (drop(part.ant(), whole.ant()), drop(part.suc(), whole.suc()))
}

fn weaken_to(d: Derivation, target: &Sequent) -> Derivation {
    let (ant, suc) = literal_rest(&d.conclusion, target);
    let d = weaken(d, Side::Ant, &ant);
    weaken(d, Side::Suc, &suc)
}

fn contraction(side: Side) -> RuleId {
    match side {
        Side::Ant => RuleId::CL,
        Side::Suc => RuleId::CR,
    }
}

/// `s` derived from `s, f` by contraction.
fn contract(s: &Sequent, side: Side, f: &Formula, above: Derivation) -> Derivation {
    Derivation::new(
        s.clone(),
        contraction(side),
        Instantiation::principal(position(s, side, f)),
        vec![above],
    )
}

fn arg_positions(atom: &Formula, b: &Term) -> Vec<usize> {
    let args: &[Term] = match atom {
        Formula::Pred(_, a) | Formula::App(_, a) => a,
        Formula::Eq(..) => return [0, 1].into_iter().filter(|&i| eq_arg(atom, i) == b).collect(),
        _ => return Vec::new(),
    };
    (0..args.len()).filter(|&i| args[i] == *b).collect()
}

fn eq_arg(atom: &Formula, i: usize) -> &Term {
    match atom {
        Formula::Eq(l, r) => {
            if i == 0 {
                l
            } else {
                r
            }
        }
        _ => unreachable!(),
    }
}

/// `atom` with the argument positions in `mask` replaced by `t`.
fn replace_at(atom: &Formula, positions: &[usize], mask: usize, t: &Term) -> Formula {
    let pick = |i: usize, old: &Term| {
        if positions.iter().enumerate().any(|(j, &p)| p == i && mask & (1 << j) != 0) {
            t.clone()
        } else {
            old.clone()
        }
    };
    let map = |args: &[Term]| args.iter().enumerate().map(|(i, a)| pick(i, a)).collect::<Vec<_>>();
    match atom {
        Formula::Pred(p, a) => Formula::Pred(p.clone(), map(a)),
        Formula::App(r, a) => Formula::App(r.clone(), map(a)),
        Formula::Eq(l, r) => Formula::Eq(pick(0, l), pick(1, r)),
        other => other.clone(),
    }
}

fn schema_var(atom: &Formula) -> Term {
    let used = crate::syntax::free_symbols(atom);
    (0u32..)
        .map(|i| Term {
            kind: TermKind::Var,
            name: if i == 0 { Name::new("x", None) } else { Name::new("x", Some(i)) },
        })
        .find(|t| !used.iter().any(|u| u.kind == SymbolKind::IndVar && u.name == t.name))
        .expect("unbounded supply")
}

impl Prover<'_> {
    fn search(&mut self, s: &Sequent, depth: usize, br: &Branch) -> Found {
        if Instant::now() > self.deadline {
            return Err(SearchError::ResourceLimit(format!(
                "time budget of {} ms exceeded",
                self.cfg.time_budget_ms
            )));
        }
        if let Some(d) = self.close(s) {
            return Ok(Some(d));
        }
        let k = key(s);
        if br.path.contains(&k) {
            return Ok(None);
        }
        if depth == 0 {
            self.hit_bound = true;
            self.note(s);
            return Ok(None);
        }
        let mut br = br.clone();
        br.path.push(k.clone());
        let order = self.order.clone();

        for &rule in order.iter().filter(|r| invertible(**r)) {
            if let Some(inst) = self.invertible_inst(s, rule) {
                let premises = apply_rule(s, rule, &inst).expect("instance built for this rule");
                return Ok(self
                    .premises(&premises, depth - 1, &br)?
                    .map(|ds| Derivation::new(s.clone(), rule, inst, ds)));
            }
        }

        for &rule in order.iter().filter(|r| matches!(r, RuleId::Iota1L | RuleId::Iota1L2)) {
            for f in s.ant() {
                let n = alpha_normalize(f);
                if !fits(rule, f) || br.opened.contains(&n) {
                    continue;
                }
                let s1 = s.with(Side::Ant, f.clone());
                let eigen: Witness = match rule {
                    RuleId::Iota1L => fresh_terms(&s1, "a", 1).remove(0).into(),
                    _ => fresh_rels(&s1, "A", rel_arity(f), 1).remove(0).into(),
                };
                let inst = Instantiation::principal(position(&s1, Side::Ant, f)).with_eigen(eigen);
                let premises = apply_rule(&s1, rule, &inst).expect("instance built for this rule");
                let mut br2 = br.clone();
                br2.opened.insert(n);
                return Ok(self.premises(&premises, depth - 1, &br2)?.map(|ds| {
                    contract(s, Side::Ant, f, Derivation::new(s1.clone(), rule, inst, ds))
                }));
            }
        }

        for phi in self.cut_formulas.clone() {
            if s.find(Side::Ant, &phi).is_some() || s.find(Side::Suc, &phi).is_some() {
                continue;
            }
            if let Some(d) = self.cut_on(s, &phi, depth, &br)? {
                return Ok(Some(d));
            }
        }

        for &rule in order.iter().filter(|r| !invertible(**r)) {
            let found = match rule {
                RuleId::EqPlus => self.eq_plus(s, depth, &br)?,
                RuleId::EqMinus => self.eq_minus(s, &k, depth, &br)?,
                RuleId::AllL
                | RuleId::ExR
                | RuleId::All2L
                | RuleId::Ex2R
                | RuleId::Eq2L
                | RuleId::IotaR
                | RuleId::Iota2L
                | RuleId::IotaR2
                | RuleId::Iota2L2 => self.with_witnesses(s, &k, rule, depth, &br)?,
                _ => None,
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        if s.formulas().all(Formula::is_atomic) {
            self.note(s);
        }
        Ok(None)
    }

    fn note(&mut self, s: &Sequent) {
        if self.frontier.len() < FRONTIER_CAP && !self.frontier.contains(s) {
            self.frontier.push(s.clone());
        }
    }

    fn premises(&mut self, premises: &[Sequent], depth: usize, br: &Branch) -> Result<Option<Vec<Derivation>>, SearchError> {
        let mut out = Vec::with_capacity(premises.len());
        for p in premises {
            match self.search(p, depth, br)? {
                Some(d) => out.push(d),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Axioms, `b = b` on the right and assumptions, each up to weakening.
    fn close(&self, s: &Sequent) -> Option<Derivation> {
        for f in s.ant() {
            if let Some(g) = s.suc().iter().find(|g| alpha_eq(f, g)) {
                let ax = Derivation::leaf(Sequent::new(vec![f.clone()], vec![g.clone()]));
                return Some(weaken_to(ax, s));
            }
        }
        for g in s.suc() {
            if let Formula::Eq(l, r) = g {
                if l == r && !l.is_var() {
                    let s1 = s.with_ant([g.clone()]);
                    let ax = Derivation::leaf(Sequent::new(vec![g.clone()], vec![g.clone()]));
                    return Some(Derivation::new(
                        s.clone(),
                        RuleId::EqPlus,
                        Instantiation::default().with_witness(l.clone()),
                        vec![weaken_to(ax, &s1)],
                    ));
                }
            }
        }
        for a in &self.assumptions {
            if let Some(core) = embed(a, s) {
                return Some(weaken_to(Derivation::leaf(core), s));
            }
        }
        None
    }

    fn invertible_inst(&self, s: &Sequent, rule: RuleId) -> Option<Instantiation> {
        let side = rule_side(rule)?;
        let index = s.side(side).iter().position(|f| fits(rule, f))?;
        let f = &s.side(side)[index];
        let inst = Instantiation::principal(Locator { side, index });
        Some(match rule {
            RuleId::AllR | RuleId::ExL => inst.with_eigen(fresh_terms(s, "a", 1).remove(0)),
            RuleId::All2R | RuleId::Ex2L => inst.with_eigen(fresh_rels(s, "A", rel_arity(f), 1).remove(0)),
            RuleId::Eq2R => Instantiation {
                eigen: fresh_terms(s, "a", rel_arity(f)).into_iter().map(Witness::Term).collect(),
                ..inst
            },
            _ => inst,
        })
    }

    fn terms(&self, s: &Sequent) -> Vec<Term> {
        let mut out: Vec<Term> = s
            .symbols()
            .iter()
            .filter(|sym| matches!(sym.kind, SymbolKind::IndPar | SymbolKind::IndConst))
            .filter_map(|sym| sym.as_term())
            .collect();
        out.extend(fresh_terms(s, "d", self.cfg.instantiation_pool_extra));
        out
    }

    fn rels(&self, s: &Sequent, arity: usize) -> Vec<Rel> {
        let mut out: Vec<Rel> = s
            .symbols()
            .iter()
            .filter(|sym| matches!(sym.kind, SymbolKind::RelPar | SymbolKind::RelConst) && sym.arity == arity)
            .filter_map(|sym| sym.as_rel())
            .collect();
        out.extend(fresh_rels(s, "B", arity, self.cfg.instantiation_pool_extra));
        out
    }

    /// Witness and eigen choices for a non-invertible rule, principal unset.
    fn instances(&self, s: &Sequent, rule: RuleId, f: &Formula) -> Vec<Instantiation> {
        use RuleId::*;
        let one = |w: Vec<Witness>| Instantiation {
            witnesses: w,
            ..Instantiation::default()
        };
        match rule {
            AllL | ExR => self.terms(s).into_iter().map(|t| one(vec![t.into()])).collect(),
            All2L | Ex2R => self.rels(s, rel_arity(f)).into_iter().map(|r| one(vec![r.into()])).collect(),
            Eq2L => {
                let terms = self.terms(s);
                let n = rel_arity(f);
                let total = terms.len().pow(n as u32);
                (0..total)
                    .map(|mut code| {
                        let mut w = vec![Witness::Term(terms[0].clone()); n];
                        for slot in w.iter_mut().rev() {
                            *slot = terms[code % terms.len()].clone().into();
                            code /= terms.len();
                        }
                        one(w)
                    })
                    .collect()
            }
            IotaR => {
                let a = fresh_terms(s, "a", 1).remove(0);
                self.terms(s)
                    .into_iter()
                    .map(|b| one(vec![b.into()]).with_eigen(a.clone()))
                    .collect()
            }
            IotaR2 => {
                let a = fresh_rels(s, "A", rel_arity(f), 1).remove(0);
                self.rels(s, rel_arity(f))
                    .into_iter()
                    .map(|b| one(vec![b.into()]).with_eigen(a.clone()))
                    .collect()
            }
            Iota2L => {
                let t = self.terms(s);
                pairs(&t).map(|(b, c)| one(vec![b.into(), c.into()])).collect()
            }
            Iota2L2 => {
                let r = self.rels(s, rel_arity(f));
                pairs(&r).map(|(b, c)| one(vec![b.into(), c.into()])).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Tries `rule` on every fitting principal, keeping it by contraction.
    fn with_witnesses(&mut self, s: &Sequent, k: &Key, rule: RuleId, depth: usize, br: &Branch) -> Found {
        let Some(side) = rule_side(rule) else {
            return Ok(None);
        };
        let mut seen = HashSet::new();
        for f in s.side(side) {
            if !fits(rule, f) {
                continue;
            }
            let n = alpha_normalize(f);
            if !seen.insert(n.clone()) {
                continue;
            }
            let slot = (side, n);
            let kept = br.kept.get(&slot).copied().unwrap_or(0);
            if kept >= self.cfg.max_contractions_per_formula {
                continue;
            }
            let s1 = s.with(side, f.clone());
            let loc = position(&s1, side, f);
            let mut br2 = br.clone();
            br2.kept.insert(slot, kept + 1);
            for inst in self.instances(&s1, rule, f) {
                let inst = Instantiation {
                    principal: Some(loc),
                    ..inst
                };
                let Ok(premises) = apply_rule(&s1, rule, &inst) else {
                    continue;
                };
                if premises.iter().any(|p| subset(&key(p), k)) {
                    continue;
                }
                if let Some(ds) = self.premises(&premises, depth - 1, &br2)? {
                    return Ok(Some(contract(s, side, f, Derivation::new(s1, rule, inst, ds))));
                }
            }
        }
        Ok(None)
    }

    fn eq_plus(&mut self, s: &Sequent, depth: usize, br: &Branch) -> Found {
        let terms: Vec<Term> = s
            .symbols()
            .iter()
            .filter(|sym| matches!(sym.kind, SymbolKind::IndPar | SymbolKind::IndConst))
            .filter_map(|sym| sym.as_term())
            .collect();
        for t in terms {
            let refl = Formula::Eq(t.clone(), t.clone());
            if s.ant().contains(&refl) {
                continue;
            }
            let premise = s.with_ant([refl]);
            if let Some(d) = self.search(&premise, depth - 1, br)? {
                return Ok(Some(Derivation::new(
                    s.clone(),
                    RuleId::EqPlus,
                    Instantiation::default().with_witness(t),
                    vec![d],
                )));
            }
        }
        Ok(None)
    }

    /// Rewrites chosen occurrences of `b` by `c` in an antecedent atom,
    /// keeping both the identity and the atom.
    fn eq_minus(&mut self, s: &Sequent, k: &Key, depth: usize, br: &Branch) -> Found {
        let max = self.cfg.max_contractions_per_formula;
        let mut seen = HashSet::new();
        for (ei, e) in s.ant().iter().enumerate() {
            let Formula::Eq(b, c) = e else { continue };
            if b == c || !seen.insert(e.clone()) {
                continue;
            }
            let e_slot = (Side::Ant, alpha_normalize(e));
            let e_kept = br.kept.get(&e_slot).copied().unwrap_or(0);
            if e_kept >= max {
                continue;
            }
            let mut atoms_seen = HashSet::new();
            for (ai, atom) in s.ant().iter().enumerate() {
                if ai == ei || !atom.is_atomic() || !atoms_seen.insert(atom.clone()) {
                    continue;
                }
                let positions = arg_positions(atom, b);
                if positions.is_empty() {
                    continue;
                }
                let a_slot = (Side::Ant, alpha_normalize(atom));
                let a_kept = br.kept.get(&a_slot).copied().unwrap_or(0);
                if a_kept >= max {
                    continue;
                }
                let x = schema_var(atom);
                for mask in 1..(1usize << positions.len()) {
                    let schema = replace_at(atom, &positions, mask, &x);
                    let target = replace_at(atom, &positions, mask, c);
                    let premise = s.with_ant([target]);
                    if subset(&key(&premise), k) {
                        continue;
                    }
                    let s1 = s.with_ant([e.clone()]);
                    let s2 = s1.with_ant([atom.clone()]);
                    let inst = Instantiation {
                        principal: Some(position(&s2, Side::Ant, e)),
                        schema: Some(AtomicSchema {
                            formula: schema,
                            var: SchemaVar::Ind(x.clone()),
                        }),
                        ..Instantiation::default()
                    };
                    let Ok(premises) = apply_rule(&s2, RuleId::EqMinus, &inst) else {
                        continue;
                    };
                    let mut br2 = br.clone();
                    br2.kept.insert(e_slot.clone(), e_kept + 1);
                    br2.kept.insert(a_slot.clone(), a_kept + 1);
                    if let Some(ds) = self.premises(&premises, depth - 1, &br2)? {
                        let node = Derivation::new(s2, RuleId::EqMinus, inst, ds);
                        let node = contract(&s1, Side::Ant, atom, node);
                        return Ok(Some(contract(s, Side::Ant, e, node)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Cut on an assumption formula, with the whole context duplicated by
    /// contraction so that both premises see all of it.
    fn cut_on(&mut self, s: &Sequent, phi: &Formula, depth: usize, br: &Branch) -> Found {
        let Some(left) = self.search(&s.with_suc([phi.clone()]), depth - 1, br)? else {
            return Ok(None);
        };
        let Some(right) = self.search(&s.with_ant([phi.clone()]), depth - 1, br)? else {
            return Ok(None);
        };
        let doubled = s.union(s);
        let pick = |part: &[Formula], whole: &[Formula]| {
            let mut used = vec![false; whole.len()];
            let mut idx: Vec<usize> = part
                .iter()
                .map(|f| {
                    let i = (0..whole.len()).find(|&i| !used[i] && whole[i] == *f).expect("copy present");
                    used[i] = true;
                    i
                })
                .collect();
            idx.sort_unstable();
            idx
        };
        let split = ContextSplit {
            ant: pick(s.ant(), doubled.ant()),
            suc: pick(s.suc(), doubled.suc()),
        };
        let mut d = Derivation::new(
            doubled.clone(),
            RuleId::Cut,
            Instantiation {
                cut: Some(phi.clone()),
                split: Some(split),
                ..Instantiation::default()
            },
            vec![left, right],
        );
        let mut current = doubled;
        let copies: Vec<(Side, Formula)> = s
            .ant()
            .iter()
            .map(|f| (Side::Ant, f.clone()))
            .chain(s.suc().iter().map(|f| (Side::Suc, f.clone())))
            .collect();
        for (side, f) in copies.into_iter().rev() {
            let below = current.without(position(&current, side, &f)).expect("present");
            d = contract(&below, side, &f, d);
            current = below;
        }
        debug_assert!(current == *s);
        Ok(Some(d))
    }
}

fn pairs<T: Clone>(v: &[T]) -> impl Iterator<Item = (T, T)> + '_ {
    (0..v.len()).flat_map(move |i| ((i + 1)..v.len()).map(move |j| (v[i].clone(), v[j].clone())))
}
