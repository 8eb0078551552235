use super::{AtomicSchema, ContextSplit, Derivation, Instantiation, RuleError, SchemaVar, ViolationKind, Witness};
use crate::syntax::{free_symbols, replace_rel, replace_term, Formula, Locator, Sequent, Side, Symbol};

fn same_symbol(a: &Symbol, b: &Symbol) -> bool {
    a.kind == b.kind && a.name == b.name
}

fn occurs(d: &Derivation, target: &Symbol) -> bool {
    d.nodes().into_iter().any(|(_, n)| {
        let inst = &n.inst;
        n.conclusion.symbols().iter().any(|s| same_symbol(s, target))
            || inst
                .eigen
                .iter()
                .chain(&inst.witnesses)
                .any(|w| same_symbol(&w.symbol(), target))
            || inst
                .cut
                .iter()
                .chain(inst.schema.as_ref().map(|s| &s.formula))
                .any(|f| free_symbols(f).iter().any(|s| same_symbol(s, target)))
    })
}

struct Renaming<'a> {
    from: &'a Witness,
    to: &'a Witness,
}

impl Renaming<'_> {
    fn formula(&self, f: &Formula) -> Formula {
        match (self.from, self.to) {
            (Witness::Term(a), Witness::Term(b)) => replace_term(f, a, b),
            (Witness::Rel(a), Witness::Rel(b)) => replace_rel(f, a, b),
            _ => unreachable!("kinds checked"),
        }
    }

    fn witness(&self, w: &Witness) -> Witness {
        if w == self.from {
            self.to.clone()
        } else {
            w.clone()
        }
    }

    /// Renamed side plus, for every old index, its new canonical index.
    fn side(&self, fs: &[Formula]) -> (Vec<Formula>, Vec<usize>) {
        let renamed: Vec<Formula> = fs.iter().map(|f| self.formula(f)).collect();
        let mut order: Vec<usize> = (0..renamed.len()).collect();
        order.sort_by_cached_key(|&i| renamed[i].to_string());
        let mut pos = vec![0; renamed.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        (renamed, pos)
    }

    fn node(&self, d: &Derivation) -> Derivation {
        let (ant, ant_pos) = self.side(d.conclusion.ant());
        let (suc, suc_pos) = self.side(d.conclusion.suc());
        let remap = |loc: Locator| Locator {
            side: loc.side,
            index: match loc.side {
                Side::Ant => ant_pos.get(loc.index).copied().unwrap_or(loc.index),
                Side::Suc => suc_pos.get(loc.index).copied().unwrap_or(loc.index),
            },
        };
        let remap_all = |idx: &[usize], pos: &[usize]| {
            let mut v: Vec<usize> = idx.iter().map(|&i| pos.get(i).copied().unwrap_or(i)).collect();
            v.sort_unstable();
            v
        };
        let inst = &d.inst;
        let inst = Instantiation {
            principal: inst.principal.map(remap),
            eigen: inst.eigen.iter().map(|w| self.witness(w)).collect(),
            witnesses: inst.witnesses.iter().map(|w| self.witness(w)).collect(),
            cut: inst.cut.as_ref().map(|f| self.formula(f)),
            schema: inst.schema.as_ref().map(|s| AtomicSchema {
                formula: self.formula(&s.formula),
                var: match &s.var {
                    SchemaVar::Ind(t) => SchemaVar::Ind(t.clone()),
                    SchemaVar::Rel(r) => SchemaVar::Rel(r.clone()),
                },
            }),
            split: inst.split.as_ref().map(|s| ContextSplit {
                ant: remap_all(&s.ant, &ant_pos),
                suc: remap_all(&s.suc, &suc_pos),
            }),
        };
        Derivation {
            conclusion: Sequent::new(ant, suc),
            rule: d.rule,
            inst,
            premises: d.premises.iter().map(|p| self.node(p)).collect(),
        }
    }
}

/// Replaces the parameter `from` by `to` throughout `d`. The target must
/// be a parameter of the same kind and arity that occurs nowhere in `d`;
/// the result has the same shape, hence the same height.
pub fn rename_parameter(d: &Derivation, from: &Witness, to: &Witness) -> Result<Derivation, RuleError> {
    let bad = |detail: String| RuleError::new(ViolationKind::BadInstantiation, detail);
    if !from.is_parameter() || !to.is_parameter() {
        return Err(bad(format!("can only rename parameters, not `{from}` to `{to}`")));
    }
    match (from, to) {
        (Witness::Term(_), Witness::Term(_)) => {}
        (Witness::Rel(a), Witness::Rel(b)) if a.arity != b.arity => {
            return Err(RuleError::new(
                ViolationKind::ArityMismatch,
                format!("`{from}` and `{to}` differ in arity"),
            ))
        }
        (Witness::Rel(_), Witness::Rel(_)) => {}
        _ => return Err(bad(format!("`{from}` and `{to}` are of different kinds"))),
    }
    if from == to {
        return Ok(d.clone());
    }
    if occurs(d, &to.symbol()) {
        return Err(bad(format!("`{to}` is not fresh for the derivation")));
    }
    Ok(Renaming { from, to }.node(d))
}
