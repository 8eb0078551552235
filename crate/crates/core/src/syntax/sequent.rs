use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::{alpha_normalize, free_symbols, Formula};
use super::symbol::Symbol;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ant,
    Suc,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Ant => "ant",
            Side::Suc => "suc",
        })
    }
}

/// A formula occurrence: side plus index into the canonical ordering.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Locator {
    pub side: Side,
    pub index: usize,
}

impl Locator {
    pub fn ant(index: usize) -> Self {
        Locator {
            side: Side::Ant,
            index,
        }
    }

    pub fn suc(index: usize) -> Self {
        Locator {
            side: Side::Suc,
            index,
        }
    }
}

impl fmt::Display for Locator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.index)
    }
}

impl std::str::FromStr for Locator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (side, idx) = s
            .split_once(':')
            .ok_or_else(|| format!("locator `{s}` is not of the form side:index"))?;
        let side = match side.trim() {
            "ant" => Side::Ant,
            "suc" => Side::Suc,
            other => return Err(format!("unknown side `{other}`")),
        };
        let index = idx
            .trim()
            .parse()
            .map_err(|_| format!("bad index `{}`", idx.trim()))?;
        Ok(Locator { side, index })
    }
}

/// `Γ ⇒ Δ` over multisets. Both sides are kept in canonical order (sorted
/// by printed form), which is what [`Locator`] indices refer to.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sequent {
    ant: Vec<Formula>,
    suc: Vec<Formula>,
}

fn canonical(mut v: Vec<Formula>) -> Vec<Formula> {
    v.sort_by_cached_key(|f| f.to_string());
    v
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, suc: Vec<Formula>) -> Self {
        Sequent {
            ant: canonical(ant),
            suc: canonical(suc),
        }
    }

    pub fn empty() -> Self {
        Sequent {
            ant: Vec::new(),
            suc: Vec::new(),
        }
    }

    pub fn ant(&self) -> &[Formula] {
        &self.ant
    }

    pub fn suc(&self) -> &[Formula] {
        &self.suc
    }

    pub fn side(&self, side: Side) -> &[Formula] {
        match side {
            Side::Ant => &self.ant,
            Side::Suc => &self.suc,
        }
    }

    pub fn len(&self) -> usize {
        self.ant.len() + self.suc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ant.is_empty() && self.suc.is_empty()
    }

    pub fn get(&self, loc: Locator) -> Option<&Formula> {
        self.side(loc.side).get(loc.index)
    }

    /// The sequent with the located occurrence removed.
    pub fn without(&self, loc: Locator) -> Option<Sequent> {
        let mut out = self.clone();
        let v = match loc.side {
            Side::Ant => &mut out.ant,
            Side::Suc => &mut out.suc,
        };
        if loc.index >= v.len() {
            return None;
        }
        v.remove(loc.index);
        Some(out)
    }

    pub fn with_ant(&self, extra: impl IntoIterator<Item = Formula>) -> Sequent {
        let mut ant = self.ant.clone();
        ant.extend(extra);
        Sequent::new(ant, self.suc.clone())
    }

    pub fn with_suc(&self, extra: impl IntoIterator<Item = Formula>) -> Sequent {
        let mut suc = self.suc.clone();
        suc.extend(extra);
        Sequent::new(self.ant.clone(), suc)
    }

    pub fn with(&self, side: Side, f: Formula) -> Sequent {
        match side {
            Side::Ant => self.with_ant([f]),
            Side::Suc => self.with_suc([f]),
        }
    }

    /// Multiset union of two sequents.
    pub fn union(&self, other: &Sequent) -> Sequent {
        let mut ant = self.ant.clone();
        ant.extend(other.ant.iter().cloned());
        let mut suc = self.suc.clone();
        suc.extend(other.suc.iter().cloned());
        Sequent::new(ant, suc)
    }

    /// First occurrence alpha-equal to `f` on the given side.
    pub fn find(&self, side: Side, f: &Formula) -> Option<Locator> {
        let target = alpha_normalize(f);
        self.side(side)
            .iter()
            .position(|g| g == f || alpha_normalize(g) == target)
            .map(|index| Locator { side, index })
    }

    /// Removes one alpha-equal occurrence of `f`, if present.
    pub fn remove_alpha(&self, side: Side, f: &Formula) -> Option<Sequent> {
        self.find(side, f).and_then(|loc| self.without(loc))
    }

    /// Both sides alpha-normalized, then re-sorted.
    pub fn normalized(&self) -> Sequent {
        Sequent::new(
            self.ant.iter().map(alpha_normalize).collect(),
            self.suc.iter().map(alpha_normalize).collect(),
        )
    }

    /// Equality of multisets up to alpha-equivalence of members.
    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        if self.ant.len() != other.ant.len() || self.suc.len() != other.suc.len() {
            return false;
        }
        self == other || self.normalized() == other.normalized()
    }

    /// Is `self` a sub-multiset of `other` (up to alpha-equivalence)?
    pub fn sub_multiset_of(&self, other: &Sequent) -> bool {
        self.difference_from(other).is_some()
    }

    /// `other − self` as a sequent, when `self` is a sub-multiset of `other`.
    pub fn difference_from(&self, other: &Sequent) -> Option<Sequent> {
        let mut rest = other.clone();
        let mut keep_ant: Vec<Option<Formula>> = other.ant.iter().cloned().map(Some).collect();
        let mut keep_suc: Vec<Option<Formula>> = other.suc.iter().cloned().map(Some).collect();
        let norm_ant: Vec<Formula> = other.ant.iter().map(alpha_normalize).collect();
        let norm_suc: Vec<Formula> = other.suc.iter().map(alpha_normalize).collect();
        for f in &self.ant {
            let n = alpha_normalize(f);
            let i = (0..norm_ant.len()).find(|&i| keep_ant[i].is_some() && norm_ant[i] == n)?;
            keep_ant[i] = None;
        }
        for f in &self.suc {
            let n = alpha_normalize(f);
            let i = (0..norm_suc.len()).find(|&i| keep_suc[i].is_some() && norm_suc[i] == n)?;
            keep_suc[i] = None;
        }
        rest.ant = keep_ant.into_iter().flatten().collect();
        rest.suc = keep_suc.into_iter().flatten().collect();
        Some(rest)
    }

    /// Every free symbol of every member.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.ant
            .iter()
            .chain(self.suc.iter())
            .flat_map(free_symbols)
            .collect()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ant.iter().chain(self.suc.iter())
    }

    pub fn is_first_order(&self) -> bool {
        self.formulas().all(Formula::is_first_order)
    }

    /// Applies `f` to every member.
    pub fn map(&self, mut f: impl FnMut(&Formula) -> Formula) -> Sequent {
        Sequent::new(
            self.ant.iter().map(&mut f).collect(),
            self.suc.iter().map(&mut f).collect(),
        )
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_sequent(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_sequent};

    #[test]
    fn order_is_canonical() {
        let a = parse_sequent("Q(a), P(a) => R(a, b)").unwrap();
        let b = parse_sequent("P(a), Q(a) => R(a, b)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ant()[0], parse_formula("P(a)").unwrap());
    }

    #[test]
    fn duplicates_are_kept() {
        let s = parse_sequent("P(a), P(a) => ").unwrap();
        assert_eq!(s.ant().len(), 2);
        assert!(!s.alpha_eq(&parse_sequent("P(a) =>").unwrap()));
    }

    #[test]
    fn alpha_multiset_equality() {
        let a = parse_sequent("A x. P(x) => E y. Q(y)").unwrap();
        let b = parse_sequent("A z. P(z) => E x. Q(x)").unwrap();
        assert!(a.alpha_eq(&b));
    }

    #[test]
    fn difference() {
        let small = parse_sequent("P(a) => Q(a)").unwrap();
        let big = parse_sequent("P(a), P(b) => Q(a), Q(a)").unwrap();
        let rest = small.difference_from(&big).unwrap();
        assert_eq!(rest, parse_sequent("P(b) => Q(a)").unwrap());
        assert!(big.difference_from(&small).is_none());
    }

    #[test]
    fn locator_text() {
        let l: Locator = "suc:3".parse().unwrap();
        assert_eq!(l, Locator::suc(3));
        assert_eq!(l.to_string(), "suc:3");
        assert!("left:1".parse::<Locator>().is_err());
    }
}
