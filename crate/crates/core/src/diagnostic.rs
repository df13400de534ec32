//! Structured error reports and their text / JSON renderings.

use std::fmt;

use serde::Serialize;

use crate::syntax::printer::print_term;
use crate::term::Term;

/// Stable diagnostic identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagCode {
    /// Unbound variable or unknown constant.
    Scope,
    /// Type mismatch; carries normalized expected and actual types.
    Mismatch,
    /// Application of something whose type is not a Pi.
    NotFn,
    /// Universe level overflow.
    Univ,
    /// Reduction budget exhausted.
    Fuel,
    Parse,
    NotStable,
    DupName,
    /// Unreadable file.
    Io,
    /// Malformed command-line request.
    Usage,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::Scope => "E-SCOPE",
            DiagCode::Mismatch => "E-MISMATCH",
            DiagCode::NotFn => "E-NOTFN",
            DiagCode::Univ => "E-UNIV",
            DiagCode::Fuel => "E-FUEL",
            DiagCode::Parse => "E-PARSE",
            DiagCode::NotStable => "E-NOTSTABLE",
            DiagCode::DupName => "E-DUPNAME",
            DiagCode::Io => "E-IO",
            DiagCode::Usage => "E-USAGE",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based source region.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    pub fn new(file: &str, start: (usize, usize), end: (usize, usize)) -> Self {
        SourceSpan {
            file: file.to_string(),
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Smallest span covering both.
    pub fn join(&self, other: &SourceSpan) -> SourceSpan {
        let (sl, sc) = (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (el, ec) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        SourceSpan::new(&self.file, (sl, sc), (el, ec))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
    pub expected: Option<Term>,
    pub actual: Option<Term>,
    pub location: Option<SourceSpan>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic { code, message: message.into(), expected: None, actual: None, location: None }
    }

    pub fn mismatch(message: impl Into<String>, expected: Term, actual: Term) -> Self {
        Diagnostic {
            code: DiagCode::Mismatch,
            message: message.into(),
            expected: Some(expected),
            actual: Some(actual),
            location: None,
        }
    }

    /// Attaches a location unless one is already present.
    pub fn at(mut self, span: &SourceSpan) -> Self {
        if self.location.is_none() {
            self.location = Some(span.clone());
        }
        self
    }

    pub fn with_context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_diagnostic(self, false))
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonDiagnostic<'a> {
    code: &'static str,
    message: &'a str,
    file: Option<&'a str>,
    start_line: Option<usize>,
    start_col: Option<usize>,
    end_line: Option<usize>,
    end_col: Option<usize>,
    expected: Option<String>,
    actual: Option<String>,
}

/// Renders a diagnostic. Text mode is `file:line:col: error[CODE]: message`
/// followed by indented expected/actual blocks; JSON mode is a single line.
pub fn format_diagnostic(d: &Diagnostic, json: bool) -> String {
    if json {
        let loc = d.location.as_ref();
        let j = JsonDiagnostic {
            code: d.code.as_str(),
            message: &d.message,
            file: loc.map(|l| l.file.as_str()),
            start_line: loc.map(|l| l.start_line),
            start_col: loc.map(|l| l.start_col),
            end_line: loc.map(|l| l.end_line),
            end_col: loc.map(|l| l.end_col),
            expected: d.expected.as_ref().map(print_term),
            actual: d.actual.as_ref().map(print_term),
        };
        return serde_json::to_string(&j).expect("diagnostic serializes");
    }
    let mut out = String::new();
    if let Some(l) = &d.location {
        out.push_str(&format!("{}:{}:{}: ", l.file, l.start_line, l.start_col));
    }
    out.push_str(&format!("error[{}]: {}", d.code, d.message));
    if let Some(e) = &d.expected {
        out.push_str(&format!("\n  expected: {}", print_term(e)));
    }
    if let Some(a) = &d.actual {
        out.push_str(&format!("\n  actual:   {}", print_term(a)));
    }
    out
}
