//! Surface syntax: tokens, declarations, parsing and printing.

pub mod lexer;
pub mod parser;
pub mod printer;

use std::fmt;

use crate::diagnostic::SourceSpan;
use crate::term::Term;

pub use parser::{parse_script, parse_term};
pub use printer::{print_decl, print_term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HintKind {
    Stable,
    Decidable,
}

impl fmt::Display for HintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HintKind::Stable => "stable",
            HintKind::Decidable => "decidable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Def { name: String, ty: Term, body: Term },
    /// Same as `Def`; counted separately in reports.
    Theorem { name: String, ty: Term, body: Term },
    StatementOnly { name: String, ty: Term },
    CheckCmd(Term),
    NormalizeCmd(Term),
    StableCmd(Term),
    HintCmd { kind: HintKind, name: String },
    ImportCmd(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub kind: DeclKind,
    pub span: SourceSpan,
    /// Span of the stated type, where there is one.
    pub ty_span: Option<SourceSpan>,
    /// Span of the body or command argument, where there is one.
    pub body_span: Option<SourceSpan>,
}

impl Decl {
    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            DeclKind::Def { name, .. }
            | DeclKind::Theorem { name, .. }
            | DeclKind::StatementOnly { name, .. } => Some(name),
            _ => None,
        }
    }
}
