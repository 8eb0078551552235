use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::lexer::{lex, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::semantics::{Assignment, GeneralModel, Model, Relation};
use crate::syntax::{classify, signature, Formula, Name, Pred, Rel, RelKind, SymbolKind, Term, TermKind};

enum Value {
    Elem(usize),
    Rel(Vec<Vec<usize>>),
    Family(Vec<Vec<Vec<usize>>>),
}

struct Entry {
    name: String,
    span: SourceSpan,
    value: Value,
    in_assignment: bool,
}

struct Reader {
    toks: Vec<Token>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::new(self.span(), vec![expected.to_string()], self.peek().describe())
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                let span = self.span();
                self.bump();
                n.parse()
                    .map_err(|_| ParseError::new(span, vec!["a domain element".into()], format!("`{n}`")))
            }
            _ => Err(self.error("a domain element")),
        }
    }

    /// `(0,1)` or a bare element standing for a 1-tuple.
    fn tuple(&mut self) -> Result<Vec<usize>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(vec![self.number()?]);
        }
        self.bump();
        let mut t = Vec::new();
        if *self.peek() != Tok::RParen {
            t.push(self.number()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                t.push(self.number()?);
            }
        }
        self.expect(Tok::RParen)?;
        Ok(t)
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if *self.peek() != Tok::RBrace {
            out.push(item(self)?);
            while *self.peek() == Tok::Comma {
                self.bump();
                out.push(item(self)?);
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn value(&mut self, family: bool) -> Result<Value, ParseError> {
        match self.peek() {
            Tok::Num(_) if !family => Ok(Value::Elem(self.number()?)),
            Tok::LBrace if family => Ok(Value::Family(self.list(|r| r.list(Self::tuple))?)),
            Tok::LBrace => Ok(Value::Rel(self.list(Self::tuple)?)),
            _ if family => Err(self.error("a set of relations `{{...}, ...}`")),
            _ => Err(self.error("a domain element or a relation `{(...), ...}`")),
        }
    }

    fn entries(&mut self) -> Result<Vec<Entry>, ParseError> {
        let mut out = Vec::new();
        let mut in_assignment = false;
        loop {
            match self.peek().clone() {
                Tok::Eof => return Ok(out),
                Tok::Semi => {
                    self.bump();
                }
                Tok::Ident(name) => {
                    let span = self.span();
                    self.bump();
                    if name == "v" && *self.peek() == Tok::Colon {
                        self.bump();
                        in_assignment = true;
                        continue;
                    }
                    self.expect(Tok::Eq)?;
                    let value = self.value(family_arity(&name).is_some())?;
                    out.push(Entry {
                        name,
                        span,
                        value,
                        in_assignment,
                    });
                    if !matches!(self.peek(), Tok::Semi | Tok::Eof) {
                        return Err(self.error("`;`"));
                    }
                }
                _ => return Err(self.error("a model entry such as `domain = 2;`")),
            }
        }
    }
}

/// `G3` names the family of arity 3.
fn family_arity(name: &str) -> Option<usize> {
    name.strip_prefix('G')?.parse().ok().filter(|&n| n >= 1)
}

fn fail(span: SourceSpan, expected: &str, found: impl Into<String>) -> ParseError {
    ParseError::new(span, vec![expected.to_string()], found.into())
}

fn relation(
    tuples: &[Vec<usize>],
    hinted: Option<usize>,
    d: usize,
    span: SourceSpan,
) -> Result<Relation, ParseError> {
    let arity = tuples.first().map(Vec::len).or(hinted).unwrap_or(1);
    if arity == 0 {
        return Err(fail(span, "a nonempty tuple", "`()`"));
    }
    if let Some(h) = hinted.filter(|&h| h != arity) {
        return Err(fail(span, &format!("tuples of length {h}"), format!("tuples of length {arity}")));
    }
    Relation::from_tuples(arity, d, tuples).map_err(|e| fail(span, "a relation over the domain", e))
}

/// Reads a model description such as
/// `domain = 2; P = {(0,1)}; k = 0; G1 = {{}, {(0)}}; K = {(0)}; v: a = 0; X = {(0)};`.
///
/// Arities of empty relations are taken from `hints`, then default to 1.
pub fn parse_model<'a>(
    src: &str,
    hints: impl IntoIterator<Item = &'a Formula>,
) -> Result<(GeneralModel, Assignment), ParseError> {
    let mut arities: BTreeMap<(SymbolKind, Name), usize> = BTreeMap::new();
    for f in hints {
        if let Ok(sig) = signature(f) {
            arities.extend(sig);
        }
    }
    let mut r = Reader { toks: lex(src)?, pos: 0 };
    let entries = r.entries()?;

    let domain = entries.iter().find(|e| e.name == "domain" && !e.in_assignment);
    let d = match domain {
        Some(Entry {
            value: Value::Elem(n), ..
        }) if *n >= 1 => *n,
        Some(e) => return Err(fail(e.span, "a positive domain size", "an invalid value")),
        None => return Err(fail(r.span(), "`domain = N;`", "a model without a domain")),
    };

    let mut gm = GeneralModel::full(Model::new(d));
    let mut v = Assignment::default();
    let mut seen = std::collections::BTreeSet::new();
    for e in &entries {
        if !seen.insert((e.in_assignment, e.name.clone())) {
            return Err(fail(e.span, "each symbol once", format!("a second entry for `{}`", e.name)));
        }
        if e.name == "domain" && !e.in_assignment {
            continue;
        }
        if let (Some(n), false) = (family_arity(&e.name), e.in_assignment) {
            let Value::Family(members) = &e.value else { unreachable!() };
            let fam = members
                .iter()
                .map(|t| relation(t, Some(n), d, e.span))
                .collect::<Result<Vec<_>, _>>()?;
            gm.families.insert(n, fam);
            continue;
        }
        let kind = classify(&e.name);
        let name = Name::parse(&e.name);
        let hint = kind.and_then(|k| arities.get(&(k, name.clone())).copied());
        match (kind, &e.value, e.in_assignment) {
            (Some(SymbolKind::Pred), Value::Rel(t), false) => {
                let rel = relation(t, hint, d, e.span)?;
                gm.base.preds.insert(
                    Pred {
                        name,
                        arity: rel.arity(),
                    },
                    rel,
                );
            }
            (Some(SymbolKind::IndConst), Value::Elem(x), false) => {
                check_elem(*x, d, e.span)?;
                gm.base.consts.insert(name, *x);
            }
            (Some(SymbolKind::RelConst), Value::Rel(t), false) => {
                let rel = relation(t, hint, d, e.span)?;
                let k = Rel {
                    kind: RelKind::Const,
                    name,
                    arity: rel.arity(),
                };
                gm.relconsts.insert(k, rel);
            }
            (Some(k @ (SymbolKind::IndVar | SymbolKind::IndPar)), Value::Elem(x), true) => {
                check_elem(*x, d, e.span)?;
                let kind = if k == SymbolKind::IndVar { TermKind::Var } else { TermKind::Par };
                v.ind.insert(Term { kind, name }, *x);
            }
            (Some(k @ (SymbolKind::RelVar | SymbolKind::RelPar)), Value::Rel(t), true) => {
                let rel = relation(t, hint, d, e.span)?;
                let kind = if k == SymbolKind::RelVar { RelKind::Var } else { RelKind::Par };
                v.rel.insert(
                    Rel {
                        kind,
                        name,
                        arity: rel.arity(),
                    },
                    rel,
                );
            }
            _ => {
                let place = if e.in_assignment {
                    "a variable or parameter after `v:`"
                } else {
                    "a predicate, constant, family `Gn` or relational constant before `v:`"
                };
                return Err(fail(e.span, place, format!("`{}` with this value", e.name)));
            }
        }
    }
    gm.validate()
        .and_then(|_| gm.validate_assignment(&v))
        .map_err(|err| fail(SourceSpan::default(), "a well-formed model", err.to_string()))?;
    Ok((gm, v))
}

fn check_elem(x: usize, d: usize, span: SourceSpan) -> Result<(), ParseError> {
    if x < d {
        Ok(())
    } else {
        Err(fail(span, &format!("an element below {d}"), x.to_string()))
    }
}

fn print_family(fam: &[Relation]) -> String {
    let parts: Vec<String> = fam.iter().map(Relation::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Writes `(gm, v)` in the format read by [`parse_model`].
pub fn print_model(gm: &GeneralModel, v: &Assignment) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "domain = {};", gm.domain_size());
    for (p, r) in &gm.base.preds {
        let _ = writeln!(out, "{} = {r};", p.name);
    }
    for (k, e) in &gm.base.consts {
        let _ = writeln!(out, "{k} = {e};");
    }
    for (n, fam) in &gm.families {
        let _ = writeln!(out, "G{n} = {};", print_family(fam));
    }
    for (k, r) in &gm.relconsts {
        let _ = writeln!(out, "{} = {r};", k.name);
    }
    if !v.ind.is_empty() || !v.rel.is_empty() {
        let mut parts: Vec<String> = v.ind.iter().map(|(t, e)| format!("{t} = {e};")).collect();
        parts.extend(v.rel.iter().map(|(x, r)| format!("{} = {r};", x.name)));
        let _ = writeln!(out, "v: {}", parts.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    #[test]
    fn reads_every_entry_kind() {
        let src = "domain = 2; P = {(0,1),(1,1)}; k = 0; G1 = {{}, {(0)}}; K = {(0)};\nv: a = 1; X = {(0)};";
        let (gm, v) = parse_model(src, []).unwrap();
        assert_eq!(gm.domain_size(), 2);
        assert_eq!(gm.base.preds[&Pred::new("P", 2)].tuples(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(gm.base.consts[&Name::parse("k")], 0);
        assert_eq!(gm.families[&1].len(), 2);
        assert_eq!(gm.relconsts[&Rel::constant("K", 1)].tuples(), vec![vec![0]]);
        assert_eq!(v.ind[&Term::par("a")], 1);
        assert_eq!(v.rel[&Rel::var("X", 1)].tuples(), vec![vec![0]]);
        let (gm2, v2) = parse_model(&print_model(&gm, &v), []).unwrap();
        assert_eq!((gm2, v2), (gm, v));
    }

    #[test]
    fn empty_relations_take_hinted_arity() {
        let f = parse_formula("R(a, b)").unwrap();
        let (gm, _) = parse_model("domain = 1; R = {}; # binary\n", [&f]).unwrap();
        assert!(gm.base.preds.contains_key(&Pred::new("R", 2)));
        let (gm, _) = parse_model("domain = 1; R = {};", []).unwrap();
        assert!(gm.base.preds.contains_key(&Pred::new("R", 1)));
    }

    #[test]
    fn rejects_bad_descriptions() {
        assert!(parse_model("P = {(0)};", []).is_err());
        assert!(parse_model("domain = 0;", []).is_err());
        assert!(parse_model("domain = 1; P = {(1)};", []).is_err());
        assert!(parse_model("domain = 1; P = {(0), (0,0)};", []).is_err());
        assert!(parse_model("domain = 1; a = 0;", []).is_err());
        assert!(parse_model("domain = 1; G1 = {{}}; K = {(0)};", []).is_err());
        assert!(parse_model("domain = 1; G1 = {};", []).is_err());
        assert!(parse_model("domain = 1; k = 0 k = 0;", []).is_err());
        assert!(parse_model("domain = 1; k = 0; k = 0;", []).is_err());
    }
}
