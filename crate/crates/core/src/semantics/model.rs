use std::collections::BTreeMap;

use super::relation::Relation;
use super::EvalError;
use crate::syntax::{Name, Pred, Rel, Term};

/// `⟨D, I⟩` with `D = {0, …, domain_size−1}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Model {
    pub domain_size: usize,
    pub preds: BTreeMap<Pred, Relation>,
    pub consts: BTreeMap<Name, usize>,
}

/// A model together with the admissible relations of each arity.
///
/// An arity without an entry in `families` ranges over every relation of
/// that arity, so a general model with no families at all is a full model.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneralModel {
    pub base: Model,
    pub families: BTreeMap<usize, Vec<Relation>>,
    pub relconsts: BTreeMap<Rel, Relation>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Assignment {
    pub ind: BTreeMap<Term, usize>,
    pub rel: BTreeMap<Rel, Relation>,
}

impl Model {
    pub fn new(domain_size: usize) -> Self {
        Model {
            domain_size,
            ..Model::default()
        }
    }
}

impl GeneralModel {
    pub fn full(base: Model) -> Self {
        GeneralModel {
            base,
            ..GeneralModel::default()
        }
    }

    pub fn domain_size(&self) -> usize {
        self.base.domain_size
    }

    pub fn family(&self, arity: usize) -> Option<&[Relation]> {
        self.families.get(&arity).map(Vec::as_slice)
    }

    fn admissible(&self, r: &Relation) -> bool {
        match self.family(r.arity()) {
            Some(f) => f.contains(r),
            None => true,
        }
    }

    fn check_relation(&self, what: &str, arity: usize, r: &Relation) -> Result<(), EvalError> {
        if r.arity() != arity {
            return Err(EvalError::ArityMismatch {
                symbol: what.to_string(),
                expected: arity,
                found: r.arity(),
            });
        }
        if r.domain() != self.domain_size() {
            return Err(EvalError::InvalidModel(format!(
                "{what} is a relation over a domain of size {}, not {}",
                r.domain(),
                self.domain_size()
            )));
        }
        Ok(())
    }

    /// Checks the structural invariants: interpretations live in the
    /// domain and relational constants are admissible.
    pub fn validate(&self) -> Result<(), EvalError> {
        let d = self.domain_size();
        if d == 0 {
            return Err(EvalError::InvalidModel("the domain must be nonempty".into()));
        }
        for (p, r) in &self.base.preds {
            self.check_relation(&p.name.to_string(), p.arity, r)?;
        }
        for (k, &e) in &self.base.consts {
            if e >= d {
                return Err(EvalError::InvalidModel(format!("{k} = {e} is outside the domain")));
            }
        }
        for (&n, fam) in &self.families {
            if fam.is_empty() {
                return Err(EvalError::InvalidModel(format!("family of arity {n} is empty")));
            }
            for r in fam {
                self.check_relation(&format!("member of G{n}"), n, r)?;
            }
        }
        for (k, r) in &self.relconsts {
            self.check_relation(&k.name.to_string(), k.arity, r)?;
            if !self.admissible(r) {
                return Err(EvalError::InvalidModel(format!(
                    "{k} is interpreted outside G{}",
                    k.arity
                )));
            }
        }
        Ok(())
    }

    /// Checks that `v` only uses domain elements and admissible relations.
    pub fn validate_assignment(&self, v: &Assignment) -> Result<(), EvalError> {
        for (t, &e) in &v.ind {
            if e >= self.domain_size() {
                return Err(EvalError::InvalidModel(format!("{t} = {e} is outside the domain")));
            }
        }
        for (x, r) in &v.rel {
            self.check_relation(&x.name.to_string(), x.arity, r)?;
            if !self.admissible(r) {
                return Err(EvalError::InvalidModel(format!(
                    "{x} is assigned a relation outside G{}",
                    x.arity
                )));
            }
        }
        Ok(())
    }
}
