use std::path::PathBuf;
use std::process::{Command, Output};

use ddlogic::fixtures::{corpus, PROOFS};
use ddlogic::parser::{latex_sequents, parse_derivation};
use ddlogic::parse_sequent;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddlogic"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes_on_fixtures() {
    for f in PROOFS {
        let path = fixture(f.name);
        let system = if f.system == ddlogic::calculus::System::RL { "rl" } else { "rl2" };
        let mut args = vec!["check", "--system", system];
        let assumptions = fixture(&format!("{}.assumptions", f.name.split('.').next().unwrap().trim_end_matches("_literal")));
        if !f.assumptions.is_empty() {
            args.extend(["--assumptions", assumptions.as_str()]);
        }
        args.push(&path);
        let expected = if f.rejected_with.is_none() { 0 } else { 1 };
        assert_eq!(code(&args), expected, "{}", f.name);
        if f.rejected_with.is_none() {
            args.insert(3, "--no-cut");
            assert_eq!(code(&args), 1, "{} without Cut", f.name);
        }
    }
}

#[test]
fn prove_exit_codes_on_corpus() {
    for (valid, s) in corpus().into_iter().step_by(4) {
        let text = s.to_string();
        let o = run(&["prove", "--depth", "6", &text]);
        let expected = if valid { 0 } else { 1 };
        assert_eq!(o.status.code(), Some(expected), "`{text}`: {}", stdout(&o));
        if valid {
            let d = parse_derivation(&stdout(&o)).unwrap();
            assert!(d.conclusion.alpha_eq(&s));
        }
    }
}

#[test]
fn countermodel_exit_codes() {
    assert_eq!(code(&["countermodel", "P(a) => Q(a)"]), 0);
    assert_eq!(code(&["countermodel", "P(a) => P(a)"]), 1);
    assert_eq!(code(&["countermodel", "--families", "full", "=> E2 X. A x. (X(x) <-> P(x))"]), 1);
}

#[test]
fn errors_exit_two() {
    let o = run(&["prove", "=> P(a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: ParseError:"));
    assert_eq!(code(&["bogus"]), 2);
    assert_eq!(code(&["check", "/nonexistent/file.proof"]), 2);
    assert_eq!(code(&["check", &fixture("corpus.txt")]), 2);
}

#[test]
fn latex_sequents_reparse_to_node_conclusions() {
    for f in PROOFS {
        let o = run(&["render", "--format", "latex", &fixture(f.name)]);
        assert_eq!(o.status.code(), Some(0));
        let d = f.derivation().unwrap();
        let mut conclusions = Vec::new();
        fn post(d: &ddlogic::calculus::Derivation, out: &mut Vec<ddlogic::Sequent>) {
            for p in &d.premises {
                post(p, out);
            }
            out.push(d.conclusion.clone());
        }
        post(&d, &mut conclusions);
        let shown = latex_sequents(&stdout(&o));
        assert_eq!(shown.len(), conclusions.len(), "{}", f.name);
        for (s, c) in shown.iter().zip(&conclusions) {
            assert!(parse_sequent(s).unwrap().alpha_eq(c), "{}: `{s}`", f.name);
        }
    }
}

#[test]
fn ascii_rendering_names_every_rule() {
    let o = run(&["render", &fixture("cut_disjunction.proof")]);
    let text = stdout(&o);
    for rule in ["Cut", "OrR", "AllL", "AX"] {
        assert!(text.contains(rule), "{text}");
    }
}

#[test]
fn file_arguments_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("f.txt");
    std::fs::write(&formula, "E x. P(x)\n").unwrap();
    let model = dir.path().join("m.model");
    std::fs::write(&model, "domain = 2;\nP = {(1)};\n").unwrap();
    let at = format!("@{}", formula.display());
    let o = run(&["--json", "eval", "--model", model.to_str().unwrap(), &at]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], serde_json::json!(true));

    let o = run(&["--json", "prove", "P(a) => P(a)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"][0]["rule"], serde_json::json!("AX"));
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest"]);
    let b = run(&["selftest"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}
