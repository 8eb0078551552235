//! Tree rendering: stacked ASCII proof figures and `bussproofs` LaTeX.

use crate::calculus::Derivation;

struct Block {
    lines: Vec<String>,
    width: usize,
    /// Column span of the bottom line's sequent.
    start: usize,
    end: usize,
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(width.saturating_sub(n)))
}

fn block(d: &Derivation) -> Block {
    let kids: Vec<Block> = d.premises.iter().map(block).collect();
    let conclusion = d.conclusion.to_string();
    let clen = conclusion.chars().count();

    let mut above: Vec<String> = Vec::new();
    let (mut ps, mut pe, mut pw) = (0, 0, 0);
    if !kids.is_empty() {
        let height = kids.iter().map(|k| k.lines.len()).max().unwrap_or(0);
        above = vec![String::new(); height];
        let mut col = 0;
        for (i, k) in kids.iter().enumerate() {
            if i > 0 {
                col += 3;
            }
            let off = height - k.lines.len();
            for (r, line) in above.iter_mut().enumerate() {
                let text = if r >= off { k.lines[r - off].as_str() } else { "" };
                *line = pad(line, col);
                line.push_str(&pad(text, k.width));
            }
            if i == 0 {
                ps = col + k.start;
            }
            pe = col + k.end;
            col += k.width;
        }
        pw = col;
    }

    let mid = (ps + pe) / 2;
    let mut cs = mid as isize - (clen / 2) as isize;
    let lead = if cs < 0 { (-cs) as usize } else { 0 };
    cs += lead as isize;
    let cs = cs as usize;
    let (ps, pe, pw) = (ps + lead, pe + lead, pw + lead);
    let sp = " ".repeat(lead);
    for l in &mut above {
        l.insert_str(0, &sp);
    }

    let (bs, be) = if d.premises.is_empty() {
        (cs, cs + clen)
    } else {
        (ps.min(cs), pe.max(cs + clen))
    };
    let bar = format!("{}{} {}", " ".repeat(bs), "-".repeat(be - bs), d.rule.name());
    let mut lines = above;
    let width = pw.max(bar.chars().count()).max(cs + clen);
    lines.push(bar);
    lines.push(format!("{}{}", " ".repeat(cs), conclusion));
    let mut b = Block {
        lines,
        width,
        start: cs,
        end: cs + clen,
    };
    for l in &mut b.lines {
        *l = pad(l, width);
    }
    b
}

/// The derivation as a stacked figure, premises above a rule line labelled
/// with the rule name.
pub fn render_ascii(d: &Derivation) -> String {
    let b = block(d);
    let mut out = String::new();
    for l in b.lines {
        out.push_str(l.trim_end());
        out.push('\n');
    }
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '~' => out.push_str("\\textasciitilde{}"),
            '^' => out.push_str("\\textasciicircum{}"),
            '&' | '%' | '$' | '#' | '_' | '{' | '}' => {
                out.push('\\');
                out.push(c);
            }
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('\\') {
        out.push_str(&rest[..i]);
        rest = &rest[i..];
        let mut matched = false;
        for (esc, c) in [
            ("\\textbackslash{}", '\\'),
            ("\\textasciitilde{}", '~'),
            ("\\textasciicircum{}", '^'),
        ] {
            if let Some(r) = rest.strip_prefix(esc) {
                out.push(c);
                rest = r;
                matched = true;
                break;
            }
        }
        if !matched {
            let mut chars = rest.chars();
            chars.next();
            match chars.next() {
                Some(c) => out.push(c),
                None => out.push('\\'),
            }
            rest = chars.as_str();
        }
    }
    out.push_str(rest);
    out
}

fn latex_node(d: &Derivation, out: &mut String) {
    for p in &d.premises {
        latex_node(p, out);
    }
    let seq = format!("{{\\texttt{{{}}}}}", escape(&d.conclusion.to_string()));
    let cmd = match d.premises.len() {
        0 => {
            out.push_str(&format!("\\AxiomC{seq}\n"));
            return;
        }
        1 => "UnaryInfC",
        2 => "BinaryInfC",
        3 => "TrinaryInfC",
        4 => "QuaternaryInfC",
        _ => "QuinaryInfC",
    };
    out.push_str(&format!("\\RightLabel{{\\scriptsize {}}}\n\\{cmd}{seq}\n", d.rule.name()));
}

/// A standalone LaTeX document drawing the derivation with `bussproofs`.
/// Sequents are typeset verbatim in the ASCII syntax so that
/// [`latex_sequents`] can read them back.
pub fn render_latex(d: &Derivation) -> String {
    let mut out = String::from(
        "\\documentclass{article}\n\\usepackage[T1]{fontenc}\n\\usepackage{bussproofs}\n\\begin{document}\n\\begin{prooftree}\n",
    );
    latex_node(d, &mut out);
    out.push_str("\\end{prooftree}\n\\end{document}\n");
    out
}

/// The sequent texts of a [`render_latex`] document in postorder.
pub fn latex_sequents(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let open = "{\\texttt{";
    let mut rest = src;
    while let Some(i) = rest.find(open) {
        rest = &rest[i + open.len()..];
        let mut depth = 1usize;
        let mut end = rest.len();
        let bytes = rest.as_bytes();
        let mut j = 0;
        while j < bytes.len() {
            match bytes[j] {
                b'\\' => j += 1,
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        end = j;
                        break;
                    }
                }
                _ => {}
            }
            j += 1;
        }
        out.push(unescape(&rest[..end]));
        rest = &rest[end.min(rest.len())..];
    }
    out
}
