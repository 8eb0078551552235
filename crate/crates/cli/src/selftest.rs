use ddlogic::calculus::{check, check_with, CheckOptions, CutPolicy, Derivation, RuleId, ViolationKind};
use ddlogic::fixtures::{corpus, PROOFS};
use ddlogic::search::{prove, SearchConfig, SearchError};
use ddlogic::semantics::{find_countermodel, FamilyMode, SearchBounds};
use ddlogic::Sequent;

pub struct Report {
    pub passed: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }
}

fn system_for(s: &Sequent) -> ddlogic::calculus::System {
    if s.is_first_order() {
        ddlogic::calculus::System::RL
    } else {
        ddlogic::calculus::System::RL2
    }
}

/// Full models, then every subfamily wherever there are at most four
/// relations of an arity.
fn sweep_bounds() -> [SearchBounds; 2] {
    [
        SearchBounds::full(2),
        SearchBounds {
            max_domain: 2,
            families: FamilyMode::AllSubfamilies,
            subfamily_limit: 4,
            ..SearchBounds::default()
        },
    ]
}

fn sound(s: &Sequent) -> Result<(), String> {
    for b in sweep_bounds() {
        match find_countermodel(s, &b) {
            Ok(None) => {}
            Ok(Some(_)) => return Err(format!("countermodel with families {}", b.families)),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(())
}

fn cut_paths(d: &Derivation) -> Vec<Vec<usize>> {
    d.nodes()
        .into_iter()
        .filter(|(_, n)| n.rule == RuleId::Cut)
        .map(|(p, _)| p)
        .collect()
}

pub fn run() -> Report {
    let mut r = Report {
        passed: 0,
        failures: Vec::new(),
    };
    let mut proved: Vec<Sequent> = Vec::new();

    for f in PROOFS {
        let (d, assumptions) = match (f.derivation(), f.assumptions()) {
            (Ok(d), Ok(a)) => (d, a),
            (Err(e), _) => {
                r.record(false, || format!("{}: {e}", f.name));
                continue;
            }
            (_, Err(e)) => {
                r.record(false, || format!("{} assumptions: {e}", f.name));
                continue;
            }
        };
        let opts = CheckOptions {
            assumptions: assumptions.clone(),
            ..CheckOptions::new(f.system)
        };
        let report = check_with(&d, &opts);
        match f.rejected_with {
            None => r.record(report.accepted(), || format!("{}: {report}", f.name)),
            Some(k) => r.record(report.kinds().contains(&k), || format!("{}: expected {k}: {report}", f.name)),
        }
        if f.rejected_with.is_none() {
            let no_cut = check_with(
                &d,
                &CheckOptions {
                    cut: CutPolicy::Forbidden,
                    ..opts
                },
            );
            let at: Vec<Vec<usize>> = no_cut.violations.iter().map(|v| v.path.clone()).collect();
            let only_cuts = no_cut.violations.iter().all(|v| v.kind == ViolationKind::CutForbidden);
            r.record(only_cuts && at == cut_paths(&d), || {
                format!("{}: without Cut: {no_cut}", f.name)
            });
            if assumptions.is_empty() {
                proved.push(d.conclusion.clone());
            }
        }
    }

    let cfg = SearchConfig {
        max_depth: 8,
        ..SearchConfig::default()
    };
    let refute = SearchConfig {
        max_depth: 6,
        ..SearchConfig::default()
    };
    for (valid, s) in corpus() {
        let system = system_for(&s);
        if valid {
            match prove(&s, system, &cfg) {
                Ok(d) => {
                    let report = check(&d, system, false, &[]);
                    r.record(report.accepted(), || format!("`{s}`: found derivation rejected: {report}"));
                    proved.push(d.conclusion);
                }
                Err(e) => r.record(false, || format!("`{s}`: {e}")),
            }
        } else {
            let refuted = matches!(find_countermodel(&s, &SearchBounds::full(2)), Ok(Some(_)));
            r.record(refuted, || format!("`{s}`: no countermodel"));
            let exhausted = matches!(prove(&s, system, &refute), Err(SearchError::Exhausted { .. }));
            r.record(exhausted, || format!("`{s}`: prover did not report exhaustion"));
        }
    }

    for s in &proved {
        let verdict = sound(s);
        r.record(verdict.is_ok(), || format!("`{s}`: {}", verdict.unwrap_err()));
    }
    r
}
