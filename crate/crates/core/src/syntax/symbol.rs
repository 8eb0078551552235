use std::fmt;
use std::sync::Arc;

/// Identifier spelling: an alphabetic base plus an optional numeric index,
/// so `x`, `x1` and `k12` are all names.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Name {
    base: Arc<str>,
    index: Option<u32>,
}

impl Name {
    pub fn new(base: &str, index: Option<u32>) -> Self {
        Name {
            base: Arc::from(base),
            index,
        }
    }

    /// Splits a spelling such as `a12` into base `a` and index `12`.
    pub fn parse(spelling: &str) -> Self {
        let split = spelling
            .find(|c: char| c.is_ascii_digit())
            .unwrap_or(spelling.len());
        let (base, digits) = spelling.split_at(split);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Name::new(spelling, None);
        }
        match digits.parse::<u32>() {
            Ok(i) => Name::new(base, Some(i)),
            Err(_) => Name::new(spelling, None),
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    pub fn with_index(&self, index: u32) -> Self {
        Name {
            base: self.base.clone(),
            index: Some(index),
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.base, i),
            None => f.write_str(&self.base),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TermKind {
    Var,
    Par,
    Const,
}

/// A basic term: an individual variable, parameter or constant.
/// Relational symbols are never terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub name: Name,
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term {
            kind: TermKind::Var,
            name: Name::parse(name),
        }
    }

    pub fn par(name: &str) -> Self {
        Term {
            kind: TermKind::Par,
            name: Name::parse(name),
        }
    }

    pub fn constant(name: &str) -> Self {
        Term {
            kind: TermKind::Const,
            name: Name::parse(name),
        }
    }

    pub fn is_var(&self) -> bool {
        self.kind == TermKind::Var
    }

    pub fn symbol(&self) -> Symbol {
        let kind = match self.kind {
            TermKind::Var => SymbolKind::IndVar,
            TermKind::Par => SymbolKind::IndPar,
            TermKind::Const => SymbolKind::IndConst,
        };
        Symbol {
            kind,
            name: self.name.clone(),
            arity: 0,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.name.fmt(f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum RelKind {
    Var,
    Par,
    Const,
}

/// A relational variable, parameter or constant of fixed arity (≥ 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Rel {
    pub kind: RelKind,
    pub name: Name,
    pub arity: usize,
}

impl Rel {
    pub fn var(name: &str, arity: usize) -> Self {
        Rel {
            kind: RelKind::Var,
            name: Name::parse(name),
            arity,
        }
    }

    pub fn par(name: &str, arity: usize) -> Self {
        Rel {
            kind: RelKind::Par,
            name: Name::parse(name),
            arity,
        }
    }

    pub fn constant(name: &str, arity: usize) -> Self {
        Rel {
            kind: RelKind::Const,
            name: Name::parse(name),
            arity,
        }
    }

    pub fn is_var(&self) -> bool {
        self.kind == RelKind::Var
    }

    pub fn symbol(&self) -> Symbol {
        let kind = match self.kind {
            RelKind::Var => SymbolKind::RelVar,
            RelKind::Par => SymbolKind::RelPar,
            RelKind::Const => SymbolKind::RelConst,
        };
        Symbol {
            kind,
            name: self.name.clone(),
            arity: self.arity,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.name.fmt(f)
    }
}

/// A predicate symbol of the signature (interpreted by the model).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pred {
    pub name: Name,
    pub arity: usize,
}

impl Pred {
    pub fn new(name: &str, arity: usize) -> Self {
        Pred {
            name: Name::parse(name),
            arity,
        }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol {
            kind: SymbolKind::Pred,
            name: self.name.clone(),
            arity: self.arity,
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.name.fmt(f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SymbolKind {
    IndVar,
    IndPar,
    IndConst,
    RelVar,
    RelPar,
    RelConst,
    Pred,
}

impl SymbolKind {
    pub fn is_individual(self) -> bool {
        matches!(
            self,
            SymbolKind::IndVar | SymbolKind::IndPar | SymbolKind::IndConst
        )
    }
}

/// Uniform view of every symbol the language can mention. Arity is 0 for
/// individual symbols and ≥ 1 otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub name: Name,
    pub arity: usize,
}

impl Symbol {
    pub fn as_term(&self) -> Option<Term> {
        let kind = match self.kind {
            SymbolKind::IndVar => TermKind::Var,
            SymbolKind::IndPar => TermKind::Par,
            SymbolKind::IndConst => TermKind::Const,
            _ => return None,
        };
        Some(Term {
            kind,
            name: self.name.clone(),
        })
    }

    pub fn as_rel(&self) -> Option<Rel> {
        let kind = match self.kind {
            SymbolKind::RelVar => RelKind::Var,
            SymbolKind::RelPar => RelKind::Par,
            SymbolKind::RelConst => RelKind::Const,
            _ => return None,
        };
        Some(Rel {
            kind,
            name: self.name.clone(),
            arity: self.arity,
        })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.name.fmt(f)
    }
}

/// Namespace a spelling belongs to under the lexical convention:
/// `x y z u w` variables, `a b c d` parameters, `k` constants,
/// `X Y Z` relational variables, `A B C` relational parameters,
/// `K` relational constants, `P Q R S` predicate symbols; each optionally
/// followed by digits.
pub fn classify(spelling: &str) -> Option<SymbolKind> {
    let mut chars = spelling.chars();
    let first = chars.next()?;
    if !chars.all(|c| c.is_ascii_digit()) {
        return None;
    }
    let kind = match first {
        'x' | 'y' | 'z' | 'u' | 'w' => SymbolKind::IndVar,
        'a' | 'b' | 'c' | 'd' => SymbolKind::IndPar,
        'k' => SymbolKind::IndConst,
        'X' | 'Y' | 'Z' => SymbolKind::RelVar,
        'A' | 'B' | 'C' => SymbolKind::RelPar,
        'K' => SymbolKind::RelConst,
        'P' | 'Q' | 'R' | 'S' => SymbolKind::Pred,
        _ => return None,
    };
    Some(kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_split() {
        let n = Name::parse("a12");
        assert_eq!(n.base(), "a");
        assert_eq!(n.index(), Some(12));
        assert_eq!(n.to_string(), "a12");
        assert_eq!(Name::parse("x").index(), None);
    }

    #[test]
    fn symbol_equality_needs_arity() {
        let unary = Rel::par("B", 1).symbol();
        let binary = Rel::par("B", 2).symbol();
        assert_ne!(unary, binary);
        assert_eq!(unary, Rel::par("B", 1).symbol());
    }

    #[test]
    fn lexical_classes() {
        assert_eq!(classify("x3"), Some(SymbolKind::IndVar));
        assert_eq!(classify("d"), Some(SymbolKind::IndPar));
        assert_eq!(classify("k1"), Some(SymbolKind::IndConst));
        assert_eq!(classify("Z"), Some(SymbolKind::RelVar));
        assert_eq!(classify("C2"), Some(SymbolKind::RelPar));
        assert_eq!(classify("K"), Some(SymbolKind::RelConst));
        assert_eq!(classify("S9"), Some(SymbolKind::Pred));
        assert_eq!(classify("foo"), None);
        assert_eq!(classify("E"), None);
    }
}
