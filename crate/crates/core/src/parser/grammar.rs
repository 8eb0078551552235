use std::collections::HashMap;
use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::syntax::{
    classify, Formula, LamArg, Name, Pred, Rel, RelKind, Sequent, SymbolKind, Term, TermKind,
};

const MAX_NESTING: usize = 200;

/// Arity bookkeeping for one document. Every relational or predicate
/// spelling gets one union-find node; applications fix the arity of their
/// node and identities/abstracts unify two nodes. Unconstrained symbols
/// default to arity 1.
#[derive(Default)]
pub(crate) struct ArityScope {
    ids: HashMap<(SymbolKind, Name), usize>,
    parent: Vec<usize>,
    arity: Vec<Option<usize>>,
}

impl ArityScope {
    fn node(&mut self, kind: SymbolKind, name: &Name) -> usize {
        if let Some(&i) = self.ids.get(&(kind, name.clone())) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.arity.push(None);
        self.ids.insert((kind, name.clone()), i);
        i
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn clash(name: &Name, expected: usize, found: usize, span: SourceSpan) -> ParseError {
        ParseError::new(
            span,
            vec![format!("{name} with {expected} argument(s)")],
            format!("{name} used with {found} argument(s)"),
        )
        .with_hint("a relational or predicate symbol keeps one arity per document")
    }

    fn fix(&mut self, kind: SymbolKind, name: &Name, n: usize, span: SourceSpan) -> Result<(), ParseError> {
        let i = self.node(kind, name);
        let r = self.root(i);
        match self.arity[r] {
            Some(m) if m != n => Err(Self::clash(name, m, n, span)),
            _ => {
                self.arity[r] = Some(n);
                Ok(())
            }
        }
    }

    fn unify(&mut self, a: (SymbolKind, &Name), b: (SymbolKind, &Name), span: SourceSpan) -> Result<(), ParseError> {
        let ia = self.node(a.0, a.1);
        let ib = self.node(b.0, b.1);
        let (ra, rb) = (self.root(ia), self.root(ib));
        if ra == rb {
            return Ok(());
        }
        match (self.arity[ra], self.arity[rb]) {
            (Some(m), Some(n)) if m != n => Err(Self::clash(b.1, m, n, span)),
            (x, y) => {
                self.parent[rb] = ra;
                self.arity[ra] = x.or(y);
                Ok(())
            }
        }
    }

    /// Seeds the scope with already known arities.
    pub(crate) fn declare(&mut self, kind: SymbolKind, name: &Name, n: usize) {
        let i = self.node(kind, name);
        let r = self.root(i);
        if self.arity[r].is_none() {
            self.arity[r] = Some(n);
        }
    }

    pub(crate) fn arity_of(&mut self, kind: SymbolKind, name: &Name) -> usize {
        let i = self.node(kind, name);
        let r = self.root(i);
        self.arity[r].unwrap_or(1)
    }

    fn rel(&mut self, r: &Rel) -> Rel {
        let kind = r.symbol().kind;
        Rel {
            kind: r.kind,
            name: r.name.clone(),
            arity: self.arity_of(kind, &r.name),
        }
    }

    /// Fills in the arities of every relational symbol of `φ`.
    pub(crate) fn resolve(&mut self, phi: &Formula) -> Formula {
        match phi {
            Formula::Pred(..) | Formula::Eq(..) => phi.clone(),
            Formula::App(r, args) => Formula::App(self.rel(r), args.clone()),
            Formula::RelEq(a, b) => Formula::RelEq(self.rel(a), self.rel(b)),
            Formula::Not(a) => Formula::not(self.resolve(a)),
            Formula::And(a, b) => Formula::and(self.resolve(a), self.resolve(b)),
            Formula::Or(a, b) => Formula::or(self.resolve(a), self.resolve(b)),
            Formula::Imp(a, b) => Formula::imp(self.resolve(a), self.resolve(b)),
            Formula::Iff(a, b) => Formula::iff(self.resolve(a), self.resolve(b)),
            Formula::Forall(x, a) => Formula::forall(x.clone(), self.resolve(a)),
            Formula::Exists(x, a) => Formula::exists(x.clone(), self.resolve(a)),
            Formula::Forall2(x, a) => Formula::forall2(self.rel(x), self.resolve(a)),
            Formula::Exists2(x, a) => Formula::exists2(self.rel(x), self.resolve(a)),
            Formula::Lambda(x, body, arg) => {
                let arg = match arg {
                    LamArg::Term(t) => LamArg::Term(t.clone()),
                    LamArg::Iota(y, c) => LamArg::Iota(y.clone(), Arc::new(self.resolve(c))),
                };
                Formula::Lambda(x.clone(), Arc::new(self.resolve(body)), arg)
            }
            Formula::Lambda2(x, body, y, cond) => Formula::Lambda2(
                self.rel(x),
                Arc::new(self.resolve(body)),
                self.rel(y),
                Arc::new(self.resolve(cond)),
            ),
        }
    }

    pub(crate) fn resolve_sequent(&mut self, s: &Sequent) -> Sequent {
        Sequent::new(
            s.ant().iter().map(|f| self.resolve(f)).collect(),
            s.suc().iter().map(|f| self.resolve(f)).collect(),
        )
    }
}

pub(crate) struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    scope: &'s mut ArityScope,
}

fn rel_kind(k: SymbolKind) -> Option<RelKind> {
    match k {
        SymbolKind::RelVar => Some(RelKind::Var),
        SymbolKind::RelPar => Some(RelKind::Par),
        SymbolKind::RelConst => Some(RelKind::Const),
        _ => None,
    }
}

fn term_kind(k: SymbolKind) -> Option<TermKind> {
    match k {
        SymbolKind::IndVar => Some(TermKind::Var),
        SymbolKind::IndPar => Some(TermKind::Par),
        SymbolKind::IndConst => Some(TermKind::Const),
        _ => None,
    }
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &str, scope: &'s mut ArityScope) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            depth: 0,
            scope,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
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

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.span(),
            expected.iter().map(|s| s.to_string()).collect(),
            self.peek().describe(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&tok.describe()]))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub(crate) fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(&["end of input", "a connective"]))
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self
                .error(&["a shallower formula"])
                .with_hint(format!("nesting deeper than {MAX_NESTING} levels is not supported")));
        }
        Ok(())
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let mut l = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let r = self.imp()?;
            l = Formula::iff(l, r);
        }
        self.depth -= 1;
        Ok(l)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            self.enter()?;
            let r = self.imp()?;
            self.depth -= 1;
            return Ok(Formula::imp(l, r));
        }
        Ok(l)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let r = self.and()?;
            l = Formula::or(l, r);
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut l = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.unary()?;
            l = Formula::and(l, r);
        }
        Ok(l)
    }

    fn is_quantifier(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if matches!(s.as_str(), "A" | "E" | "A2" | "E2") => {
                !matches!(self.peek_at(1), Tok::LParen | Tok::Eq)
            }
            _ => false,
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let out = if *self.peek() == Tok::Bang {
            self.bump();
            Formula::not(self.unary()?)
        } else if self.is_quantifier() {
            self.quant()?
        } else {
            self.atom()?
        };
        self.depth -= 1;
        Ok(out)
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let span = self.bump().span;
                Ok((s, span))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn ind_var(&mut self) -> Result<Name, ParseError> {
        let (s, span) = self.ident("an individual variable")?;
        if classify(&s) != Some(SymbolKind::IndVar) {
            return Err(ParseError::new(span, vec!["an individual variable".into()], format!("`{s}`")));
        }
        Ok(Name::parse(&s))
    }

    fn rel_var(&mut self) -> Result<Rel, ParseError> {
        let (s, span) = self.ident("a relational variable")?;
        if classify(&s) != Some(SymbolKind::RelVar) {
            return Err(ParseError::new(span, vec!["a relational variable".into()], format!("`{s}`")));
        }
        let name = Name::parse(&s);
        self.scope.node(SymbolKind::RelVar, &name);
        Ok(Rel {
            kind: RelKind::Var,
            name,
            arity: 0,
        })
    }

    fn quant(&mut self) -> Result<Formula, ParseError> {
        let (q, _) = self.ident("a quantifier")?;
        if q.ends_with('2') {
            let x = self.rel_var()?;
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            Ok(if q == "A2" {
                Formula::forall2(x, body)
            } else {
                Formula::exists2(x, body)
            })
        } else {
            let x = self.ind_var()?;
            self.expect(Tok::Dot)?;
            let body = self.formula()?;
            Ok(if q == "A" {
                Formula::forall(x, body)
            } else {
                Formula::exists(x, body)
            })
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let span = self.span();
        let (s, _) = self.ident("a term")?;
        match classify(&s).and_then(term_kind) {
            Some(kind) => Ok(Term {
                kind,
                name: Name::parse(&s),
            }),
            None => Err(ParseError::new(span, vec!["a term".into()], format!("`{s}`"))
                .with_hint("terms are variables (x, y, z, u, w), parameters (a, b, c, d) or constants (k)")),
        }
    }

    fn terms(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn rel_symbol(&mut self) -> Result<(Rel, SourceSpan), ParseError> {
        let span = self.span();
        let (s, _) = self.ident("a relational symbol")?;
        match classify(&s).and_then(rel_kind) {
            Some(kind) => Ok((
                Rel {
                    kind,
                    name: Name::parse(&s),
                    arity: 0,
                },
                span,
            )),
            None => Err(ParseError::new(span, vec!["a relational symbol".into()], format!("`{s}`"))),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                if *self.peek_at(1) == Tok::Backslash {
                    return self.lambda();
                }
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) => {
                let span = self.span();
                match classify(&s) {
                    Some(SymbolKind::Pred) => {
                        self.bump();
                        let name = Name::parse(&s);
                        let args = self.terms()?;
                        self.scope.fix(SymbolKind::Pred, &name, args.len(), span)?;
                        Ok(Formula::Pred(
                            Pred {
                                name,
                                arity: args.len(),
                            },
                            args,
                        ))
                    }
                    Some(k @ (SymbolKind::RelVar | SymbolKind::RelPar | SymbolKind::RelConst)) => {
                        let (r, _) = self.rel_symbol()?;
                        match self.peek() {
                            Tok::LParen => {
                                let args = self.terms()?;
                                self.scope.fix(k, &r.name, args.len(), span)?;
                                Ok(Formula::App(r, args))
                            }
                            Tok::Eq => {
                                self.bump();
                                let (r2, span2) = self.rel_symbol()?;
                                let k2 = r2.symbol().kind;
                                self.scope.unify((k, &r.name), (k2, &r2.name), span2)?;
                                Ok(Formula::RelEq(r, r2))
                            }
                            _ => Err(self.error(&["`(`", "`=`"])),
                        }
                    }
                    Some(_) => {
                        let l = self.term()?;
                        if *self.peek() != Tok::Eq {
                            return Err(self
                                .error(&["`=`"])
                                .with_hint("a term on its own is not a formula"));
                        }
                        self.bump();
                        let r = self.term()?;
                        Ok(Formula::Eq(l, r))
                    }
                    None if s == "iota" => Err(self
                        .error(&["a formula"])
                        .with_hint("a description only occurs as the argument of a lambda abstract")),
                    None => Err(self.error(&["a formula"])),
                }
            }
            _ => Err(self.error(&["a formula"])),
        }
    }

    fn lambda(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LParen)?;
        self.expect(Tok::Backslash)?;
        let span = self.span();
        let (s, _) = self.ident("a variable")?;
        match classify(&s) {
            Some(SymbolKind::IndVar) => {
                let x = Name::parse(&s);
                let body = self.formula()?;
                self.expect(Tok::RParen)?;
                let arg = if *self.peek() == Tok::LParen && *self.peek_at(1) == Tok::Ident("iota".into()) {
                    self.bump();
                    self.bump();
                    let y = self.ind_var()?;
                    self.expect(Tok::Dot)?;
                    let cond = self.formula()?;
                    self.expect(Tok::RParen)?;
                    LamArg::Iota(y, Arc::new(cond))
                } else {
                    LamArg::Term(self.term()?)
                };
                Ok(Formula::Lambda(x, Arc::new(body), arg))
            }
            Some(SymbolKind::RelVar) => {
                let x = Rel {
                    kind: RelKind::Var,
                    name: Name::parse(&s),
                    arity: 0,
                };
                self.scope.node(SymbolKind::RelVar, &x.name);
                let body = self.formula()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::LParen)
                    .map_err(|e| e.with_hint("a relational abstract applies only to a description `(iota Y. ...)`"))?;
                let iota_span = self.span();
                match self.peek() {
                    Tok::Ident(t) if t == "iota" => {
                        self.bump();
                    }
                    _ => return Err(self.error(&["`iota`"])),
                }
                let y = self.rel_var()?;
                self.scope
                    .unify((SymbolKind::RelVar, &x.name), (SymbolKind::RelVar, &y.name), iota_span)?;
                self.expect(Tok::Dot)?;
                let cond = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Lambda2(x, Arc::new(body), y, Arc::new(cond)))
            }
            _ => Err(ParseError::new(span, vec!["a variable".into()], format!("`{s}`"))),
        }
    }

    /// Comma-separated formulas up to `=>` or the end of input.
    pub(crate) fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(out);
        }
        out.push(self.formula()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.formula()?);
        }
        Ok(out)
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let ant = self.formula_list()?;
        if *self.peek() != Tok::Turnstile {
            return Err(self.error(&["`,`", "`=>`"]));
        }
        self.bump();
        let suc = self.formula_list()?;
        if !self.at_eof() {
            return Err(self.error(&["`,`", "end of input"]));
        }
        Ok(Sequent::new(ant, suc))
    }
}
