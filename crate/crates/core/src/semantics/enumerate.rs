use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eval::{holds_sequent, holds_sequent_unchecked};
use super::model::{Assignment, GeneralModel, Model};
use super::relation::{tuple_count, Relation};
use super::EvalError;
use crate::syntax::{signature, Name, Pred, Rel, Sequent, SymbolKind, Term};

/// Which families of relations are tried for each arity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FamilyMode {
    /// Every relation of the arity: full models only.
    FullPowerset,
    /// Every nonempty subfamily while there are at most
    /// `subfamily_limit` relations of the arity; beyond that the full
    /// powerset followed by sampled subfamilies.
    AllSubfamilies,
    /// `count` pseudo-random nonempty subfamilies.
    Sampled { seed: u64, count: usize },
}

impl fmt::Display for FamilyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyMode::FullPowerset => f.write_str("full"),
            FamilyMode::AllSubfamilies => f.write_str("all"),
            FamilyMode::Sampled { seed, count } => write!(f, "sampled:{seed}:{count}"),
        }
    }
}

impl FromStr for FamilyMode {
    type Err = String;

    /// `full`, `all`, or `sampled[:SEED[:COUNT]]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(':');
        match parts.next() {
            Some("full") => Ok(FamilyMode::FullPowerset),
            Some("all") => Ok(FamilyMode::AllSubfamilies),
            Some("sampled") => {
                let seed = match parts.next() {
                    Some(x) => x.parse().map_err(|_| format!("bad seed `{x}`"))?,
                    None => DEFAULT_SEED,
                };
                let count = match parts.next() {
                    Some(x) => x.parse().map_err(|_| format!("bad count `{x}`"))?,
                    None => 16,
                };
                Ok(FamilyMode::Sampled { seed, count })
            }
            _ => Err(format!("unknown family mode `{s}` (expected full, all or sampled:SEED:COUNT)")),
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed_d0c5;

#[derive(Clone, Debug)]
pub struct SearchBounds {
    pub max_domain: usize,
    pub max_arity: usize,
    pub families: FamilyMode,
    /// Largest number of relations of one arity for which all
    /// subfamilies are enumerated.
    pub subfamily_limit: usize,
    /// Samples drawn when an arity is too large for all subfamilies.
    pub sample_count: usize,
    /// Ceiling on candidate (model, assignment) pairs per domain size.
    pub max_models: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_domain: 2,
            max_arity: 2,
            families: FamilyMode::AllSubfamilies,
            subfamily_limit: 16,
            sample_count: 16,
            max_models: 5_000_000,
        }
    }
}

impl SearchBounds {
    pub fn full(max_domain: usize) -> Self {
        SearchBounds {
            max_domain,
            families: FamilyMode::FullPowerset,
            ..SearchBounds::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: GeneralModel,
    pub assignment: Assignment,
}

const RELATION_BITS: usize = 16;

fn all_relations(arity: usize, d: usize) -> Result<Vec<Relation>, EvalError> {
    Relation::all(arity, d, RELATION_BITS).ok_or_else(|| {
        EvalError::ResourceLimit(format!(
            "{} tuples of arity {arity} over a domain of size {d}",
            tuple_count(d, arity)
        ))
    })
}

fn sampled(rels: &[Relation], seed: u64, count: usize, d: usize, n: usize) -> Vec<Vec<Relation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 32) ^ n as u64);
    let mut out: Vec<Vec<Relation>> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 20 {
        attempts += 1;
        let fam: Vec<Relation> = rels.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !fam.is_empty() && !out.contains(&fam) {
            out.push(fam);
        }
    }
    out
}

fn family_choices(d: usize, n: usize, b: &SearchBounds) -> Result<Vec<Vec<Relation>>, EvalError> {
    let rels = all_relations(n, d)?;
    Ok(match &b.families {
        FamilyMode::FullPowerset => vec![rels],
        FamilyMode::AllSubfamilies if rels.len() <= b.subfamily_limit && rels.len() < 32 => (1u64
            ..1 << rels.len())
            .map(|mask| {
                rels.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, r)| r.clone())
                    .collect()
            })
            .collect(),
        FamilyMode::AllSubfamilies => {
            let mut out = vec![rels.clone()];
            for f in sampled(&rels, DEFAULT_SEED, b.sample_count, d, n) {
                if f != rels {
                    out.push(f);
                }
            }
            out
        }
        FamilyMode::Sampled { seed, count } => sampled(&rels, *seed, *count, d, n),
    })
}

/// The symbols of a sequent that a countermodel has to interpret.
struct Vocabulary {
    preds: Vec<Pred>,
    consts: Vec<Name>,
    relconsts: Vec<Rel>,
    ind: Vec<Term>,
    rel: Vec<Rel>,
    arities: BTreeSet<usize>,
}

fn vocabulary(s: &Sequent) -> Result<Vocabulary, EvalError> {
    let mut v = Vocabulary {
        preds: Vec::new(),
        consts: Vec::new(),
        relconsts: Vec::new(),
        ind: Vec::new(),
        rel: Vec::new(),
        arities: BTreeSet::new(),
    };
    for f in s.formulas() {
        let sig = signature(f).map_err(|e| EvalError::InvalidModel(e.to_string()))?;
        for ((kind, _), n) in sig {
            if kind != SymbolKind::Pred {
                v.arities.insert(n);
            }
        }
    }
    for sym in s.symbols() {
        match sym.kind {
            SymbolKind::Pred => v.preds.push(Pred {
                name: sym.name.clone(),
                arity: sym.arity,
            }),
            SymbolKind::IndConst => v.consts.push(sym.name.clone()),
            SymbolKind::RelConst => v.relconsts.push(sym.as_rel().unwrap()),
            SymbolKind::IndPar | SymbolKind::IndVar => v.ind.push(sym.as_term().unwrap()),
            SymbolKind::RelPar | SymbolKind::RelVar => v.rel.push(sym.as_rel().unwrap()),
        }
    }
    // parameters before free variables, each group in name order
    v.ind.sort_by_key(|t| (t.is_var(), t.name.clone()));
    v.rel.sort_by_key(|r| (r.is_var(), r.name.clone(), r.arity));
    Ok(v)
}

/// Mixed-radix counter; the first digit is the most significant.
fn advance(digits: &mut [usize], radix: &[usize]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Searches for a general model and assignment falsifying `s`.
///
/// Candidates are visited in a fixed order: domain size ascending; then
/// the family of each arity (ascending arity); then predicate symbols,
/// constants, relational constants, individual parameters and variables,
/// relational parameters and variables, each in name order and each
/// ranging over its values in ascending encoding. The first falsifying
/// candidate is re-verified and returned.
pub fn find_countermodel(s: &Sequent, bounds: &SearchBounds) -> Result<Option<Countermodel>, EvalError> {
    let voc = vocabulary(s)?;
    let too_wide = voc
        .preds
        .iter()
        .map(|p| p.arity)
        .chain(voc.arities.iter().copied())
        .find(|&n| n > bounds.max_arity);
    if let Some(n) = too_wide {
        return Err(EvalError::ResourceLimit(format!(
            "arity {n} exceeds the bound {}",
            bounds.max_arity
        )));
    }
    for d in 1..=bounds.max_domain {
        if let Some(c) = search_domain(s, &voc, d, bounds)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn search_domain(s: &Sequent, voc: &Vocabulary, d: usize, bounds: &SearchBounds) -> Result<Option<Countermodel>, EvalError> {
    let arities: Vec<usize> = voc.arities.iter().copied().collect();
    let mut choices = Vec::new();
    for &n in &arities {
        choices.push(family_choices(d, n, bounds)?);
    }
    let mut pred_space = Vec::new();
    for p in &voc.preds {
        pred_space.push(all_relations(p.arity, d)?);
    }

    // exact candidate count: families contribute a sum over choices
    let rel_slots = |n: usize| {
        voc.relconsts.iter().filter(|r| r.arity == n).count() + voc.rel.iter().filter(|r| r.arity == n).count()
    };
    let mut total: u128 = 1;
    for (i, &n) in arities.iter().enumerate() {
        let k = rel_slots(n) as u32;
        let sum: u128 = choices[i].iter().map(|f| (f.len() as u128).pow(k)).sum();
        total = total.saturating_mul(sum);
    }
    for space in &pred_space {
        total = total.saturating_mul(space.len() as u128);
    }
    let ind_count = (voc.consts.len() + voc.ind.len()) as u32;
    total = total.saturating_mul((d as u128).saturating_pow(ind_count));
    if total > bounds.max_models as u128 {
        return Err(EvalError::ResourceLimit(format!(
            "{total} candidate models at domain size {d} exceed the ceiling {}",
            bounds.max_models
        )));
    }

    let family_radix: Vec<usize> = choices.iter().map(Vec::len).collect();
    let mut fam_digits = vec![0; arities.len()];
    loop {
        let mut gm = GeneralModel {
            base: Model::new(d),
            families: BTreeMap::new(),
            relconsts: BTreeMap::new(),
        };
        for (i, &n) in arities.iter().enumerate() {
            gm.families.insert(n, choices[i][fam_digits[i]].clone());
        }
        let fam_len = |n: usize| gm.families.get(&n).map_or(0, Vec::len);
        let mut radix = Vec::new();
        radix.extend(pred_space.iter().map(Vec::len));
        radix.extend(std::iter::repeat_n(d, voc.consts.len()));
        radix.extend(voc.relconsts.iter().map(|r| fam_len(r.arity)));
        radix.extend(std::iter::repeat_n(d, voc.ind.len()));
        radix.extend(voc.rel.iter().map(|r| fam_len(r.arity)));

        if radix.iter().all(|&r| r > 0) {
            let mut digits = vec![0; radix.len()];
            loop {
                let mut v = Assignment::default();
                let mut i = 0;
                for (p, space) in voc.preds.iter().zip(&pred_space) {
                    gm.base.preds.insert(p.clone(), space[digits[i]].clone());
                    i += 1;
                }
                for k in &voc.consts {
                    gm.base.consts.insert(k.clone(), digits[i]);
                    i += 1;
                }
                for k in &voc.relconsts {
                    let r = gm.families[&k.arity][digits[i]].clone();
                    gm.relconsts.insert(k.clone(), r);
                    i += 1;
                }
                for t in &voc.ind {
                    v.ind.insert(t.clone(), digits[i]);
                    i += 1;
                }
                for x in &voc.rel {
                    v.rel.insert(x.clone(), gm.families[&x.arity][digits[i]].clone());
                    i += 1;
                }
                if !holds_sequent_unchecked(&gm, &v, s, false)? {
                    gm.validate()?;
                    gm.validate_assignment(&v)?;
                    if holds_sequent(&gm, &v, s)? {
                        return Err(EvalError::InvalidModel(
                            "countermodel candidate failed re-verification".into(),
                        ));
                    }
                    return Ok(Some(Countermodel {
                        model: gm,
                        assignment: v,
                    }));
                }
                if !advance(&mut digits, &radix) {
                    break;
                }
            }
        }
        if !advance(&mut fam_digits, &family_radix) {
            break;
        }
    }
    Ok(None)
}

/// Does `s` hold in every candidate within `bounds`?
pub fn valid_within(s: &Sequent, bounds: &SearchBounds) -> Result<bool, EvalError> {
    find_countermodel(s, bounds).map(|c| c.is_none())
}
