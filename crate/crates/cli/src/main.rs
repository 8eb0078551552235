//! `ddlogic`: check, search for and render derivations; evaluate formulas
//! and look for countermodels in finite general models.

mod selftest;

use std::fmt::Display;
use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ddlogic::calculus::{check_with, CheckOptions, CutPolicy, System};
use ddlogic::parser::{
    derivation_to_json, parse_derivation, parse_model, parse_sequent_list, print_derivation, print_derivation_json,
    print_model, render_ascii, render_latex, DerivationError,
};
use ddlogic::search::{
    check_witness_property, prove, prove_from, saturate_with, ExtendedSequent, Frontier, SaturateError,
    SaturateOptions, SearchConfig, SearchError,
};
use ddlogic::semantics::{eval, eval_full, find_countermodel, EvalError, FamilyMode, SearchBounds};
use ddlogic::{parse_formula, parse_sequent, ParseError};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ddlogic", version, about = "Definite-description logics: proofs, search and models")]
struct Cli {
    /// Structured output on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// `key = value` file with search defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Rl,
    Rl2,
}

impl From<SystemArg> for System {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Rl => System::RL,
            SystemArg::Rl2 => System::RL2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Latex,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a derivation document (JSON or indented text).
    Check {
        #[arg(long, value_enum, default_value = "rl2")]
        system: SystemArg,
        /// Reject every Cut.
        #[arg(long)]
        no_cut: bool,
        /// Only admit cuts on formulas of the assumption sequents.
        #[arg(long, conflicts_with = "no_cut")]
        cut_on_assumptions: bool,
        /// Sequents accepted as leaves, one per line.
        #[arg(long, value_name = "FILE")]
        assumptions: Option<PathBuf>,
        /// Eigenvariables must be absent from every conclusion below their node.
        #[arg(long)]
        strict_eigen: bool,
        /// Proof document; `-` reads stdin.
        proof: String,
    },
    /// Search for a cut-free derivation.
    Prove {
        #[arg(long, value_enum, default_value = "rl2")]
        system: SystemArg,
        #[arg(long)]
        depth: Option<usize>,
        /// Fresh terms tried beyond those on the branch.
        #[arg(long)]
        pool: Option<usize>,
        #[arg(long)]
        contractions: Option<usize>,
        #[arg(long, value_name = "MS")]
        time_budget: Option<u64>,
        /// Search relative to these sequents, cutting only on their formulas.
        #[arg(long, value_name = "FILE")]
        from: Option<PathBuf>,
        /// Print the open sequents when the search is exhausted.
        #[arg(long)]
        frontier: bool,
        /// Goal sequent, or `@path`.
        sequent: String,
    },
    /// Evaluate a formula in a model file.
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Second-order quantifiers range over all relations.
        #[arg(long)]
        full: bool,
        formula: String,
    },
    /// Search finite general models for one falsifying a sequent.
    Countermodel {
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
        /// full, all, or sampled:SEED:COUNT
        #[arg(long, default_value = "all")]
        families: String,
        sequent: String,
    },
    /// Draw a derivation as ASCII or as a bussproofs LaTeX document.
    Render {
        #[arg(long, value_enum, default_value = "ascii")]
        format: RenderFormat,
        proof: String,
    },
    /// Saturate an extended sequent for the witness property.
    Saturate {
        #[arg(long, default_value_t = 64)]
        budget: usize,
        /// Comma-separated clause numbers.
        #[arg(long)]
        clause_order: Option<String>,
        /// Use bounded proof search to choose between disjuncts.
        #[arg(long)]
        guided: bool,
        /// File holding `Γ => Δ`.
        file: String,
    },
    /// Run the embedded fixture suite.
    Selftest,
}

struct Failure {
    kind: String,
    detail: String,
}

impl Failure {
    fn new(kind: impl Into<String>, detail: impl Display) -> Self {
        Failure {
            kind: kind.into(),
            detail: detail.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new("ParseError", e)
    }
}

impl From<DerivationError> for Failure {
    fn from(e: DerivationError) -> Self {
        Failure::new(e.kind(), e)
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::new(e.kind(), e)
    }
}

type Outcome = Result<u8, Failure>;

struct Out {
    json: bool,
    color: bool,
    buf: String,
}

impl Out {
    fn line(&mut self, s: impl Display) {
        self.buf.push_str(&s.to_string());
        self.buf.push('\n');
    }

    fn value(&mut self, v: serde_json::Value) {
        self.line(serde_json::to_string_pretty(&v).expect("json values serialize"));
    }

    fn paint(&self, s: &str, good: bool) -> String {
        if self.color {
            format!("\x1b[{}m{s}\x1b[0m", if good { 32 } else { 31 })
        } else {
            s.to_string()
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new("Io", format!("{}: {e}", path.display())))
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::new("Io", format!("stdin: {e}")))?;
    Ok(s)
}

/// A document argument: a path, `@path`, or `-` for stdin.
fn document(arg: &str) -> Result<String, Failure> {
    match arg {
        "-" => read_stdin(),
        _ => read_file(Path::new(arg.strip_prefix('@').unwrap_or(arg))),
    }
}

/// An inline text argument, or the contents of `@path`.
fn inline(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some("-") => read_stdin(),
        Some(p) => Ok(read_file(Path::new(p))?.trim().to_string()),
        None => Ok(arg.to_string()),
    }
}

fn search_config(cli_config: &Option<PathBuf>) -> Result<SearchConfig, Failure> {
    let mut cfg = SearchConfig::default();
    if let Some(p) = cli_config {
        cfg.apply_config_str(&read_file(p)?)
            .map_err(|e| Failure::new("InvalidConfig", e))?;
    }
    Ok(cfg)
}

fn run(cli: Cli, out: &mut Out) -> Outcome {
    match cli.cmd {
        Cmd::Check {
            system,
            no_cut,
            cut_on_assumptions,
            assumptions,
            strict_eigen,
            proof,
        } => {
            let d = parse_derivation(&document(&proof)?)?;
            let assumptions = match assumptions {
                Some(p) => parse_sequent_list(&read_file(&p)?)?,
                None => Vec::new(),
            };
            let cut = if no_cut {
                CutPolicy::Forbidden
            } else if cut_on_assumptions {
                CutPolicy::AssumptionFormulasOnly
            } else {
                CutPolicy::Allowed
            };
            let opts = CheckOptions {
                system: system.into(),
                cut,
                assumptions,
                strict_eigen,
            };
            let report = check_with(&d, &opts);
            if out.json {
                out.value(serde_json::to_value(&report).expect("reports serialize"));
            } else {
                let text = report.to_string();
                let (head, rest) = text.split_once('\n').map_or((text.as_str(), None), |(h, r)| (h, Some(r)));
                out.line(out.paint(head, report.accepted()));
                if let Some(r) = rest {
                    out.line(r);
                }
            }
            Ok(if report.accepted() { 0 } else { 1 })
        }
        Cmd::Prove {
            system,
            depth,
            pool,
            contractions,
            time_budget,
            from,
            frontier,
            sequent,
        } => {
            let mut cfg = search_config(&cli.config)?;
            if let Some(d) = depth {
                cfg.max_depth = d;
            }
            if let Some(p) = pool {
                cfg.instantiation_pool_extra = p;
            }
            if let Some(c) = contractions {
                cfg.max_contractions_per_formula = c;
            }
            if let Some(t) = time_budget {
                cfg.time_budget_ms = t;
            }
            let goal = parse_sequent(&inline(&sequent)?)?;
            let result = match from {
                Some(p) => prove_from(&goal, &parse_sequent_list(&read_file(&p)?)?, system.into(), &cfg),
                None => prove(&goal, system.into(), &cfg),
            };
            match result {
                Ok(d) => {
                    if out.json {
                        out.buf.push_str(&print_derivation_json(&d));
                    } else {
                        out.buf.push_str(&print_derivation(&d));
                    }
                    Ok(0)
                }
                Err(SearchError::Exhausted { depth, frontier: open }) => {
                    if out.json {
                        let open: Vec<String> = open.iter().map(ToString::to_string).collect();
                        out.value(json!({ "result": "exhausted", "depth": depth, "frontier": open }));
                    } else {
                        out.line("exhausted");
                        if frontier {
                            out.buf.push_str(&Frontier(&open).to_string());
                        }
                    }
                    Ok(1)
                }
                Err(e) => Err(Failure::new(e.kind(), e)),
            }
        }
        Cmd::Eval { model, full, formula } => {
            let f = parse_formula(&inline(&formula)?)?;
            let (gm, v) = parse_model(&read_file(&model)?, [&f])?;
            let value = if full { eval_full(&gm, &v, &f)? } else { eval(&gm, &v, &f)? };
            if out.json {
                out.value(json!({ "value": value }));
            } else {
                out.line(out.paint(if value { "true" } else { "false" }, value));
            }
            Ok(if value { 0 } else { 1 })
        }
        Cmd::Countermodel {
            max_domain,
            max_arity,
            families,
            sequent,
        } => {
            let s = parse_sequent(&inline(&sequent)?)?;
            let families: FamilyMode = families.parse().map_err(|e| Failure::new("Usage", e))?;
            let bounds = SearchBounds {
                max_domain,
                max_arity,
                families,
                ..SearchBounds::default()
            };
            match find_countermodel(&s, &bounds)? {
                Some(c) => {
                    let text = print_model(&c.model, &c.assignment);
                    if out.json {
                        out.value(json!({ "result": "countermodel", "model": text }));
                    } else {
                        out.buf.push_str(&text);
                    }
                    Ok(0)
                }
                None => {
                    if out.json {
                        out.value(json!({ "result": "none" }));
                    } else {
                        out.line("none within bounds");
                    }
                    Ok(1)
                }
            }
        }
        Cmd::Render { format, proof } => {
            let d = parse_derivation(&document(&proof)?)?;
            let text = match format {
                RenderFormat::Ascii => render_ascii(&d),
                RenderFormat::Latex => render_latex(&d),
            };
            if out.json {
                out.value(json!({ "format": match format { RenderFormat::Ascii => "ascii", RenderFormat::Latex => "latex" }, "text": text, "derivation": derivation_to_json(&d) }));
            } else {
                out.buf.push_str(&text);
            }
            Ok(0)
        }
        Cmd::Saturate {
            budget,
            clause_order,
            guided,
            file,
        } => {
            let s = parse_sequent(document(&file)?.trim())?;
            let mut opts = SaturateOptions {
                fresh_const_budget: budget,
                consistency_guided: guided,
                ..SaturateOptions::default()
            };
            if let Some(order) = clause_order {
                opts.clause_order = order
                    .split(',')
                    .map(|c| c.trim().parse::<u8>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| Failure::new("Usage", format!("clause order `{order}`: {e}")))?;
            }
            let (es, complete) = match saturate_with(&ExtendedSequent::from(&s), &opts) {
                Ok(es) => (es, true),
                Err(SaturateError::BudgetExhausted { partial }) => (partial, false),
                Err(e @ SaturateError::BadClauseOrder(_)) => return Err(Failure::new("Usage", e)),
            };
            let left = check_witness_property(&es);
            if out.json {
                let left: Vec<String> = left.iter().map(ToString::to_string).collect();
                out.value(json!({ "saturated": es.to_string(), "complete": complete, "violations": left }));
            } else {
                out.line(&es);
                for v in &left {
                    out.line(format!("violation: {v}"));
                }
            }
            Ok(if complete && left.is_empty() { 0 } else { 1 })
        }
        Cmd::Selftest => {
            let report = selftest::run();
            if out.json {
                out.value(json!({
                    "passed": report.passed,
                    "failed": report.failures.len(),
                    "failures": report.failures,
                }));
            } else {
                for f in &report.failures {
                    out.line(format!("FAIL {f}"));
                }
                let summary = format!("passed {}, failed {}", report.passed, report.failures.len());
                out.line(out.paint(&summary, report.failures.is_empty()));
            }
            Ok(if report.failures.is_empty() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let mut lines = text.lines();
            let first = lines.next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: Usage: {first}");
            for l in lines {
                eprintln!("{l}");
            }
            return ExitCode::from(2);
        }
    };
    let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
    let mut out = Out {
        json: cli.json,
        color: !cli.json && !no_color && std::io::stdout().is_terminal(),
        buf: String::new(),
    };
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(f) => {
            let detail = f.detail.replace('\n', " ");
            eprintln!("error: {}: {detail}", f.kind);
            2
        }
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.buf.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
