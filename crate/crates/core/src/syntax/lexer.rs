use std::fmt;

use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    /// `#check`, `#normalize`, `#stable`.
    Command(String),
    Kw(&'static str),
    LParen,
    RParen,
    Comma,
    Colon,
    ColonEq,
    Dot,
    Semi,
    Arrow,
    FatArrow,
    Eof,
}

pub const KEYWORDS: &[&str] = &[
    "def", "theorem", "statement", "hint", "import", "fun", "Pi", "Sig", "let", "in", "pair",
    "inl", "inr", "elimB", "elimN", "elimS", "elimSig", "elimV", "Type0", "Type1", "Type2",
    "Unit", "unit", "Void", "Bool", "true", "false", "Nat", "zero", "succ", "Sum",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(n) => write!(f, "number `{n}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Command(c) => write!(f, "`#{c}`"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::ColonEq => f.write_str("`:=`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub start: (usize, usize),
    /// Position one past the last character.
    pub end: (usize, usize),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str, file: &str) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |msg: String, pos: (usize, usize)| {
        Diagnostic::new(DiagCode::Parse, msg).at(&SourceSpan::new(file, pos, (pos.0, pos.1 + 1)))
    };
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (n, tok) = match c {
            '(' => (1, Tok::LParen),
            ')' => (1, Tok::RParen),
            ',' => (1, Tok::Comma),
            ';' => (1, Tok::Semi),
            '.' => (1, Tok::Dot),
            ':' if chars.get(i + 1) == Some(&'=') => (2, Tok::ColonEq),
            ':' => (1, Tok::Colon),
            '-' if chars.get(i + 1) == Some(&'>') => (2, Tok::Arrow),
            '=' if chars.get(i + 1) == Some(&'>') => (2, Tok::FatArrow),
            '"' => {
                let mut j = i + 1;
                let mut s = String::new();
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    s.push(chars[j]);
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '"' {
                    return Err(err("unterminated string literal".into(), start));
                }
                let n = j + 1 - i;
                (n, Tok::Str(s))
            }
            '#' => {
                let mut j = i + 1;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i + 1..j].iter().collect();
                match word.as_str() {
                    "check" | "normalize" | "stable" => {
                        (j - i, Tok::Command(word))
                    }
                    _ => return Err(err(format!("unknown command `#{word}`"), start)),
                }
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let n: u64 = word
                    .parse()
                    .map_err(|_| err(format!("numeric literal `{word}` is too large"), start))?;
                (j - i, Tok::Num(n))
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match KEYWORDS.iter().find(|k| **k == word) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(word),
                };
                (j - i, tok)
            }
            other => return Err(err(format!("unexpected character `{other}`"), start)),
        };
        i += n;
        col += n;
        out.push(Token { tok, start, end: (line, col) });
    }
    out.push(Token { tok: Tok::Eof, start: (line, col), end: (line, col) });
    Ok(out)
}
