//! The proof interchange format.
//!
//! A document is a list of node records `{id, rule, conclusion, premises,
//! inst}`. The JSON form is either `{"nodes": [...]}` or a bare array; the
//! text form writes one block per node:
//!
//! ```text
//! node n0
//!   rule: Cut
//!   conclusion: Q(a) => Q(b)
//!   premises: n1 n2
//!   cut: X = X
//!   split_ant:
//!   split_suc:
//! ```
//!
//! `principal` is `ant:3` or `suc:0`; the part after the colon may also be
//! a formula, which is located in the conclusion. Relational witnesses may
//! carry their arity as `B/1`. The root is the one node no other node
//! lists as a premise.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ArityScope, ParseError, Parser};
use crate::calculus::{AtomicSchema, ContextSplit, Derivation, Instantiation, RuleId, SchemaVar, Witness};
use crate::syntax::{classify, Formula, Locator, Name, Rel, RelKind, Sequent, Side, SymbolKind, Term, TermKind};

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DerivationError {
    #[error("{0}")]
    Parse(ParseError),
    #[error("unknown rule name `{0}`")]
    UnknownRule(String),
    #[error("{0}")]
    Structure(String),
}

impl DerivationError {
    pub fn kind(&self) -> &'static str {
        match self {
            DerivationError::Parse(_) => "ParseError",
            DerivationError::UnknownRule(_) => "UnknownRuleName",
            DerivationError::Structure(_) => "StructureError",
        }
    }
}

impl From<ParseError> for DerivationError {
    fn from(e: ParseError) -> Self {
        DerivationError::Parse(e)
    }
}

fn structure(msg: impl Into<String>) -> DerivationError {
    DerivationError::Structure(msg.into())
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    id: String,
    rule: String,
    conclusion: String,
    #[serde(default)]
    premises: Vec<String>,
    #[serde(default)]
    inst: InstRecord,
    /// Line and starting column of each text-form field.
    #[serde(skip)]
    at: HashMap<String, (usize, usize)>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    principal: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", deserialize_with = "one_or_many")]
    eigen: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", deserialize_with = "one_or_many")]
    witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cut: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schema: Option<SchemaRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<ContextSplit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaRecord {
    formula: String,
    var: String,
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonDoc {
    Wrapped { nodes: Vec<Record> },
    Bare(Vec<Record>),
}

/// Reads either encoding, deciding by the first non-blank character.
pub fn parse_derivation(src: &str) -> Result<Derivation, DerivationError> {
    if src.trim_start().starts_with(['{', '[']) {
        parse_derivation_json(src)
    } else {
        parse_derivation_text(src)
    }
}

pub fn parse_derivation_json(src: &str) -> Result<Derivation, DerivationError> {
    let doc: JsonDoc = serde_json::from_str(src).map_err(|e| {
        DerivationError::Parse(ParseError::new(
            super::SourceSpan {
                line: e.line(),
                column: e.column(),
                ..super::SourceSpan::default()
            },
            vec!["a derivation document".into()],
            e.to_string(),
        ))
    })?;
    let records = match doc {
        JsonDoc::Wrapped { nodes } | JsonDoc::Bare(nodes) => nodes,
    };
    build(records)
}

pub fn parse_derivation_text(src: &str) -> Result<Derivation, DerivationError> {
    let mut records: Vec<Record> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        let content = line.trim_start();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(id) = content.strip_prefix("node ").or_else(|| (content == "node").then_some("")) {
            let id = id.trim();
            if id.is_empty() || line.starts_with(char::is_whitespace) {
                return Err(ParseError::at_line(line_no, "`node <id>` at the start of a line", content).into());
            }
            records.push(Record {
                id: id.to_string(),
                ..Record::default()
            });
            continue;
        }
        let Some(rec) = records.last_mut() else {
            return Err(ParseError::at_line(line_no, "`node <id>`", content).into());
        };
        if !line.starts_with(char::is_whitespace) {
            return Err(ParseError::at_line(line_no, "an indented `key: value` line", content).into());
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| ParseError::at_line(line_no, "`key: value`", content))?;
        let column = line.len() - value.trim_start().len() + 1;
        rec.at.insert(key.trim().to_string(), (line_no, column));
        let value = value.trim().to_string();
        let list = |v: &str| -> Vec<String> {
            v.split([',', ' '])
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        };
        let indices = |v: &str| -> Result<Vec<usize>, DerivationError> {
            list(v)
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| ParseError::at_line(line_no, "an occurrence index", s.as_str()).into())
                })
                .collect()
        };
        let inst = &mut rec.inst;
        match key.trim() {
            "rule" => rec.rule = value,
            "conclusion" => rec.conclusion = value,
            "premises" => rec.premises = list(&value),
            "principal" => inst.principal = Some(value),
            "eigen" => inst.eigen = list(&value),
            "witnesses" => inst.witnesses = list(&value),
            "cut" => inst.cut = Some(value),
            "schema" => {
                let var = inst.schema.take().map(|s| s.var).unwrap_or_default();
                inst.schema = Some(SchemaRecord { formula: value, var });
            }
            "schema_var" => {
                let formula = inst.schema.take().map(|s| s.formula).unwrap_or_default();
                inst.schema = Some(SchemaRecord { formula, var: value });
            }
            "split_ant" => inst.split.get_or_insert_with(ContextSplit::default).ant = indices(&value)?,
            "split_suc" => inst.split.get_or_insert_with(ContextSplit::default).suc = indices(&value)?,
            other => {
                return Err(ParseError::at_line(line_no, "a known key", format!("`{other}`"))
                    .with_hint("keys: rule conclusion premises principal eigen witnesses cut schema schema_var split_ant split_suc")
                    .into())
            }
        }
    }
    build(records)
}

/// Moves a field-relative error to its place in the document.
fn relocate(e: ParseError, r: &Record, field: &str, what: &str) -> ParseError {
    let mut e = e;
    if let Some(&(line, column)) = r.at.get(field) {
        e.span.line = line;
        e.span.column += column - 1;
    }
    e.with_hint(what.to_string())
}

/// Text pieces of a record, parsed against one document-wide arity scope.
struct Parsed {
    rule: RuleId,
    conclusion: Sequent,
    cut: Option<Formula>,
    schema: Option<Formula>,
}

fn build(records: Vec<Record>) -> Result<Derivation, DerivationError> {
    if records.is_empty() {
        return Err(structure("the document has no nodes"));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        if index.insert(r.id.as_str(), i).is_some() {
            return Err(structure(format!("duplicate node id `{}`", r.id)));
        }
    }
    let mut scope = ArityScope::default();
    let mut parsed = Vec::with_capacity(records.len());
    for r in &records {
        let rule: RuleId = r.rule.parse().map_err(|_| DerivationError::UnknownRule(r.rule.clone()))?;
        let conclusion = Parser::new(&r.conclusion, &mut scope)
            .and_then(|mut p| p.sequent())
            .map_err(|e| relocate(e, r, "conclusion", &format!("in the conclusion of `{}`", r.id)))?;
        let formula = |src: &str, scope: &mut ArityScope, field: &str| -> Result<Formula, DerivationError> {
            let what = format!("in the {field} of `{}`", r.id);
            let parsed = Parser::new(src, scope).and_then(|mut p| {
                let f = p.formula()?;
                p.expect_eof()?;
                Ok(f)
            });
            parsed.map_err(|e| relocate(e, r, field, &what).into())
        };
        let cut = match &r.inst.cut {
            Some(c) => Some(formula(c, &mut scope, "cut")?),
            None => None,
        };
        let schema = match &r.inst.schema {
            Some(s) => Some(formula(&s.formula, &mut scope, "schema")?),
            None => None,
        };
        parsed.push(Parsed {
            rule,
            conclusion,
            cut,
            schema,
        });
    }

    let mut declared: Vec<(SymbolKind, Name, usize, String)> = Vec::new();
    for r in &records {
        let schema_var = r.inst.schema.iter().map(|s| &s.var);
        for text in r.inst.eigen.iter().chain(&r.inst.witnesses).chain(schema_var) {
            if let Some((name, arity)) = text.split_once('/') {
                let kind = classify(name.trim()).ok_or_else(|| structure(format!("`{text}` is not a symbol")))?;
                let n: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| structure(format!("bad arity in `{text}`")))?;
                let name = Name::parse(name.trim());
                scope.declare(kind, &name, n);
                declared.push((kind, name, n, text.clone()));
            }
        }
    }
    for (kind, name, n, text) in &declared {
        if scope.arity_of(*kind, name) != *n {
            return Err(structure(format!("`{text}` conflicts with the arity used in the document")));
        }
    }

    let mut nodes: Vec<Option<(Sequent, RuleId, Instantiation)>> = Vec::with_capacity(records.len());
    for (r, p) in records.iter().zip(parsed) {
        let conclusion = scope.resolve_sequent(&p.conclusion);
        let inst = instantiation(r, &conclusion, p.cut.map(|f| scope.resolve(&f)), p.schema.map(|f| scope.resolve(&f)), &mut scope)?;
        nodes.push(Some((conclusion, p.rule, inst)));
    }

    let mut referenced = HashSet::new();
    for r in &records {
        for p in &r.premises {
            if !index.contains_key(p.as_str()) {
                return Err(structure(format!("node `{}` lists unknown premise `{p}`", r.id)));
            }
            referenced.insert(p.as_str());
        }
    }
    let roots: Vec<usize> = (0..records.len())
        .filter(|&i| !referenced.contains(records[i].id.as_str()))
        .collect();
    let root = match roots.as_slice() {
        [r] => *r,
        [] => return Err(structure("every node is someone's premise, so there is no root")),
        many => {
            let ids: Vec<&str> = many.iter().map(|&i| records[i].id.as_str()).collect();
            return Err(structure(format!("several roots: {}", ids.join(", "))));
        }
    };
    let mut on_path = vec![false; records.len()];
    let mut seen = vec![false; records.len()];
    let d = assemble(root, &records, &index, &mut nodes, &mut on_path, &mut seen)?;
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(structure(format!("node `{}` is not reachable from the root", records[i].id)));
    }
    Ok(d)
}

fn assemble(
    i: usize,
    records: &[Record],
    index: &HashMap<&str, usize>,
    nodes: &mut [Option<(Sequent, RuleId, Instantiation)>],
    on_path: &mut [bool],
    seen: &mut [bool],
) -> Result<Derivation, DerivationError> {
    if on_path[i] {
        return Err(structure(format!("node `{}` is its own ancestor", records[i].id)));
    }
    on_path[i] = true;
    seen[i] = true;
    let mut premises = Vec::new();
    for p in &records[i].premises {
        premises.push(assemble(index[p.as_str()], records, index, nodes, on_path, seen)?);
    }
    on_path[i] = false;
    let (conclusion, rule, inst) = nodes[i].clone().expect("node built");
    Ok(Derivation::new(conclusion, rule, inst, premises))
}

fn symbol(text: &str, scope: &mut ArityScope) -> Result<Witness, DerivationError> {
    let spelling = text.split('/').next().unwrap_or("").trim();
    let kind = classify(spelling).ok_or_else(|| structure(format!("`{text}` is not a symbol")))?;
    let name = Name::parse(spelling);
    let term = |kind| Ok(Witness::Term(Term { kind, name: name.clone() }));
    let rel = |kind, scope: &mut ArityScope| {
        let arity = scope.arity_of(classify(spelling).unwrap(), &name);
        Ok(Witness::Rel(Rel {
            kind,
            name: name.clone(),
            arity,
        }))
    };
    match kind {
        SymbolKind::IndVar => term(TermKind::Var),
        SymbolKind::IndPar => term(TermKind::Par),
        SymbolKind::IndConst => term(TermKind::Const),
        SymbolKind::RelVar => rel(RelKind::Var, scope),
        SymbolKind::RelPar => rel(RelKind::Par, scope),
        SymbolKind::RelConst => rel(RelKind::Const, scope),
        SymbolKind::Pred => Err(structure(format!("predicate `{text}` cannot be a witness"))),
    }
}

fn locator(text: &str, conclusion: &Sequent, scope: &mut ArityScope, id: &str) -> Result<Locator, DerivationError> {
    let (side, rest) = text
        .split_once(':')
        .ok_or_else(|| structure(format!("principal `{text}` of `{id}` is not `side:index`")))?;
    let side = match side.trim() {
        "ant" => Side::Ant,
        "suc" => Side::Suc,
        other => return Err(structure(format!("unknown side `{other}` in `{id}`"))),
    };
    if let Ok(index) = rest.trim().parse() {
        return Ok(Locator { side, index });
    }
    let f = {
        let mut p = Parser::new(rest.trim(), scope)?;
        let f = p.formula()?;
        p.expect_eof()?;
        f
    };
    let f = scope.resolve(&f);
    conclusion
        .find(side, &f)
        .ok_or_else(|| structure(format!("principal `{rest}` of `{id}` is not in its {side}")))
}

fn instantiation(
    r: &Record,
    conclusion: &Sequent,
    cut: Option<Formula>,
    schema: Option<Formula>,
    scope: &mut ArityScope,
) -> Result<Instantiation, DerivationError> {
    let inst = &r.inst;
    let principal = match &inst.principal {
        Some(t) => Some(locator(t, conclusion, scope, &r.id)?),
        None => None,
    };
    let eigen = inst.eigen.iter().map(|t| symbol(t, scope)).collect::<Result<_, _>>()?;
    let witnesses = inst.witnesses.iter().map(|t| symbol(t, scope)).collect::<Result<_, _>>()?;
    let schema = match (schema, &inst.schema) {
        (Some(formula), Some(s)) => {
            let var = match symbol(&s.var, scope)? {
                Witness::Term(t) => SchemaVar::Ind(t),
                Witness::Rel(x) => SchemaVar::Rel(x),
            };
            Some(AtomicSchema { formula, var })
        }
        _ => None,
    };
    Ok(Instantiation {
        principal,
        eigen,
        witnesses,
        cut,
        schema,
        split: inst.split.clone(),
    })
}

fn records(d: &Derivation) -> Vec<Record> {
    let nodes = d.nodes();
    let ids: HashMap<Vec<usize>, String> = nodes
        .iter()
        .enumerate()
        .map(|(i, (path, _))| (path.clone(), format!("n{i}")))
        .collect();
    nodes
        .iter()
        .map(|(path, n)| {
            let premises = (0..n.premises.len())
                .map(|j| {
                    let mut p = path.clone();
                    p.push(j);
                    ids[&p].clone()
                })
                .collect();
            let inst = &n.inst;
            Record {
                id: ids[path].clone(),
                rule: n.rule.name().to_string(),
                conclusion: n.conclusion.to_string(),
                premises,
                inst: InstRecord {
                    principal: inst.principal.map(|l| l.to_string()),
                    eigen: inst.eigen.iter().map(Witness::to_string).collect(),
                    witnesses: inst.witnesses.iter().map(Witness::to_string).collect(),
                    cut: inst.cut.as_ref().map(Formula::to_string),
                    schema: inst.schema.as_ref().map(|s| SchemaRecord {
                        formula: s.formula.to_string(),
                        var: match &s.var {
                            SchemaVar::Ind(t) => t.to_string(),
                            SchemaVar::Rel(x) => Witness::Rel(x.clone()).to_string(),
                        },
                    }),
                    split: inst.split.clone(),
                },
                at: HashMap::new(),
            }
        })
        .collect()
}

/// Canonical JSON: nodes in preorder with ids `n0, n1, …`, root first.
pub fn derivation_to_json(d: &Derivation) -> serde_json::Value {
    serde_json::json!({ "nodes": records(d) })
}

pub fn print_derivation_json(d: &Derivation) -> String {
    #[derive(Serialize)]
    struct Doc {
        nodes: Vec<Record>,
    }
    let mut out = serde_json::to_string_pretty(&Doc { nodes: records(d) }).expect("records serialize");
    out.push('\n');
    out
}

pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    for r in records(d) {
        out.push_str(&format!("node {}\n  rule: {}\n  conclusion: {}\n", r.id, r.rule, r.conclusion));
        if !r.premises.is_empty() {
            out.push_str(&format!("  premises: {}\n", r.premises.join(" ")));
        }
        let i = r.inst;
        if let Some(p) = i.principal {
            out.push_str(&format!("  principal: {p}\n"));
        }
        if !i.eigen.is_empty() {
            out.push_str(&format!("  eigen: {}\n", i.eigen.join(", ")));
        }
        if !i.witnesses.is_empty() {
            out.push_str(&format!("  witnesses: {}\n", i.witnesses.join(", ")));
        }
        if let Some(c) = i.cut {
            out.push_str(&format!("  cut: {c}\n"));
        }
        if let Some(s) = i.schema {
            out.push_str(&format!("  schema: {}\n  schema_var: {}\n", s.formula, s.var));
        }
        if let Some(s) = i.split {
            let join = |v: &[usize]| v.iter().map(|i| format!(" {i}")).collect::<String>();
            out.push_str(&format!("  split_ant:{}\n  split_suc:{}\n", join(&s.ant), join(&s.suc)));
        }
    }
    out
}
