use num_bigint::BigInt;

use super::ast::Span;
use super::diag::{Code, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Assign,
    Lt,
    Le,
    Gt,
    Ge,
    Ne,
    Amp,
    Bar,
    Backslash,
    Bang,
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(k) => format!("`{k}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            other => {
                let s = match other {
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Slash => "/",
                    Tok::Caret => "^",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Assign => "=",
                    Tok::Lt => "<",
                    Tok::Le => "<=",
                    Tok::Gt => ">",
                    Tok::Ge => ">=",
                    Tok::Ne => "!=",
                    Tok::Amp => "&",
                    Tok::Bar => "|",
                    Tok::Backslash => "\\",
                    Tok::Bang => "!",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line.
pub fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = src.char_indices().peekable();
    while let Some(&(off, c)) = chars.peek() {
        let start = Span { line, column: col, offset: off, len: c.len_utf8() };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
            let (_, c) = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if c == '\n' {
            bump(&mut chars);
            out.push(Token { tok: Tok::Newline, span: start });
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = off;
            while let Some(&(o, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = o + 1;
                bump(&mut chars);
            }
            if chars.peek().is_some_and(|&(_, d)| d == '.') {
                return Err(Diagnostic::error(
                    Code::Lex,
                    Span { len: end - off + 1, ..start },
                    "decimal literals are not supported; write a fraction p/q",
                ));
            }
            let value: BigInt = src[off..end].parse().expect("digits");
            out.push(Token { tok: Tok::Int(value), span: Span { len: end - off, ..start } });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut end = off;
            while let Some(&(o, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                end = o + d.len_utf8();
                bump(&mut chars);
            }
            out.push(Token { tok: Tok::Ident(src[off..end].to_string()), span: Span { len: end - off, ..start } });
            continue;
        }
        bump(&mut chars);
        let next = chars.peek().map(|&(_, d)| d);
        let two = |t: Tok| (t, 2);
        let (tok, len) = match (c, next) {
            ('<', Some('=')) => two(Tok::Le),
            ('>', Some('=')) => two(Tok::Ge),
            ('!', Some('=')) => two(Tok::Ne),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Assign, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('&', _) => (Tok::Amp, 1),
            ('|', _) => (Tok::Bar, 1),
            ('\\', _) => (Tok::Backslash, 1),
            ('!', _) => (Tok::Bang, 1),
            _ => return Err(Diagnostic::error(Code::Lex, start, format!("unexpected character `{c}`"))),
        };
        if len == 2 {
            bump(&mut chars);
        }
        out.push(Token { tok, span: Span { len, ..start } });
    }
    let eof = Span { line, column: col, offset: src.len(), len: 0 };
    out.push(Token { tok: Tok::Eof, span: eof });
    Ok(out)
}
