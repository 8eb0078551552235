use crate::syntax::{Formula, LamArg, Sequent, Term};

fn terms(out: &mut String, args: &[Term]) {
    out.push('(');
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&t.to_string());
    }
    out.push(')');
}

fn binary(out: &mut String, op: &str, a: &Formula, b: &Formula) {
    out.push('(');
    go(out, a, true);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    go(out, b, true);
    out.push(')');
}

/// `operand` is set when the formula sits under a connective, where an
/// unparenthesized binder would swallow the rest of the input.
fn go(out: &mut String, phi: &Formula, operand: bool) {
    let binder = |out: &mut String, head: String, body: &Formula| {
        if operand {
            out.push('(');
        }
        out.push_str(&head);
        go(out, body, false);
        if operand {
            out.push(')');
        }
    };
    match phi {
        Formula::Pred(p, args) => {
            out.push_str(&p.to_string());
            terms(out, args);
        }
        Formula::App(r, args) => {
            out.push_str(&r.to_string());
            terms(out, args);
        }
        Formula::Eq(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::RelEq(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::Not(a) => {
            out.push('!');
            go(out, a, true);
        }
        Formula::And(a, b) => binary(out, "&", a, b),
        Formula::Or(a, b) => binary(out, "|", a, b),
        Formula::Imp(a, b) => binary(out, "->", a, b),
        Formula::Iff(a, b) => binary(out, "<->", a, b),
        Formula::Forall(x, a) => binder(out, format!("A {x}. "), a),
        Formula::Exists(x, a) => binder(out, format!("E {x}. "), a),
        Formula::Forall2(x, a) => binder(out, format!("A2 {x}. "), a),
        Formula::Exists2(x, a) => binder(out, format!("E2 {x}. "), a),
        Formula::Lambda(x, body, arg) => {
            out.push_str(&format!("(\\{x} "));
            go(out, body, false);
            out.push_str(") ");
            match arg {
                LamArg::Term(t) => out.push_str(&t.to_string()),
                LamArg::Iota(y, cond) => {
                    out.push_str(&format!("(iota {y}. "));
                    go(out, cond, false);
                    out.push(')');
                }
            }
        }
        Formula::Lambda2(x, body, y, cond) => {
            out.push_str(&format!("(\\{x} "));
            go(out, body, false);
            out.push_str(&format!(") (iota {y}. "));
            go(out, cond, false);
            out.push(')');
        }
    }
}

/// Canonical text of a formula; binary connectives are always
/// parenthesized.
pub fn print_formula(phi: &Formula) -> String {
    let mut out = String::new();
    go(&mut out, phi, false);
    out
}

pub fn print_sequent(s: &Sequent) -> String {
    let side = |fs: &[Formula]| fs.iter().map(print_formula).collect::<Vec<_>>().join(", ");
    let (a, d) = (side(s.ant()), side(s.suc()));
    match (a.is_empty(), d.is_empty()) {
        (true, true) => "=>".into(),
        (true, false) => format!("=> {d}"),
        (false, true) => format!("{a} =>"),
        (false, false) => format!("{a} => {d}"),
    }
}
