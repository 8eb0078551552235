use super::{ParseError, SourceSpan};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Tok {
    Ident(String),
    Num(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Colon,
    Slash,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Eq,
    Turnstile,
    Backslash,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(s) => format!("number `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Turnstile => "`=>`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Tokenizes `src`. Unicode connectives are accepted as aliases of their
/// ASCII spellings.
pub(crate) fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        let span_at = |end: usize, line: usize, col: usize| SourceSpan {
            byte_start: start,
            byte_end: end,
            line,
            column: col,
        };
        if c == '\n' {
            it.next();
            line += 1;
            col = 1;
            continue;
        }
        if c == '#' {
            while it.peek().is_some_and(|&(_, d)| d != '\n') {
                it.next();
            }
            continue;
        }
        if c.is_whitespace() {
            it.next();
            col += 1;
            continue;
        }
        let (tok, len_chars, end) = if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            let mut n = 0;
            while let Some(&(i, d)) = it.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    n += 1;
                    it.next();
                } else {
                    break;
                }
            }
            (Tok::Ident(src[start..end].to_string()), n, end)
        } else if c.is_ascii_digit() {
            let mut end = start;
            let mut n = 0;
            while let Some(&(i, d)) = it.peek() {
                if d.is_ascii_digit() {
                    end = i + 1;
                    n += 1;
                    it.next();
                } else {
                    break;
                }
            }
            (Tok::Num(src[start..end].to_string()), n, end)
        } else {
            it.next();
            let next = it.peek().map(|&(_, d)| d);
            let single = |t: Tok| (t, 1, start + c.len_utf8());
            match c {
                '(' => single(Tok::LParen),
                ')' => single(Tok::RParen),
                '{' => single(Tok::LBrace),
                '}' => single(Tok::RBrace),
                ',' => single(Tok::Comma),
                '.' => single(Tok::Dot),
                ';' => single(Tok::Semi),
                ':' => single(Tok::Colon),
                '/' => single(Tok::Slash),
                '!' | '¬' => single(Tok::Bang),
                '&' | '∧' => single(Tok::Amp),
                '|' | '∨' => single(Tok::Pipe),
                '\\' | 'λ' => single(Tok::Backslash),
                '→' => single(Tok::Arrow),
                '↔' => single(Tok::DArrow),
                '⇒' => single(Tok::Turnstile),
                '-' if next == Some('>') => {
                    it.next();
                    (Tok::Arrow, 2, start + 2)
                }
                '=' if next == Some('>') => {
                    it.next();
                    (Tok::Turnstile, 2, start + 2)
                }
                '=' => single(Tok::Eq),
                '<' if next == Some('-') => {
                    it.next();
                    if it.peek().map(|&(_, d)| d) == Some('>') {
                        it.next();
                        (Tok::DArrow, 3, start + 3)
                    } else {
                        return Err(ParseError::new(
                            span_at(start + 2, line, col),
                            vec!["`<->`".into()],
                            "`<-`".into(),
                        ));
                    }
                }
                other => {
                    return Err(ParseError::new(
                        span_at(start + other.len_utf8(), line, col),
                        vec!["a formula token".into()],
                        format!("character `{other}`"),
                    ))
                }
            }
        };
        out.push(Token {
            tok,
            span: span_at(end, line, col),
        });
        col += len_chars;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            byte_start: src.len(),
            byte_end: src.len(),
            line,
            column: col,
        },
    });
    Ok(out)
}
