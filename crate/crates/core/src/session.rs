//! Checking scripts declaration by declaration into a growing environment.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::classical::{prove_stable, HintDb, StabilityCertificate};
use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};
use crate::env::{DefKind, GlobalDef, GlobalEnv};
use crate::eval::DEFAULT_FUEL;
use crate::syntax::{parse_script, Decl, DeclKind, HintKind};
use crate::term::Term;
use crate::typing::{Checker, Context};

/// What a successfully processed declaration produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Defined { name: String, kind: DefKind },
    Checked { term: Term, ty: Term },
    Normalized { term: Term, normal: Term },
    Stable(StabilityCertificate),
    Hint { kind: HintKind, name: String },
    Imported { path: String },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Defined { name, kind: DefKind::Definition } => write!(f, "defined {name}"),
            Event::Defined { name, kind: DefKind::Theorem } => write!(f, "proved {name}"),
            Event::Defined { name, kind: DefKind::Statement } => {
                write!(f, "stated {name} (statement-only, unproven)")
            }
            Event::Checked { term, ty } => write!(f, "{term} : {ty}"),
            Event::Normalized { normal, .. } => write!(f, "{normal}"),
            Event::Stable(c) => write!(f, "stable: {}\n  certificate: {}", c.target, c.witness),
            Event::Hint { kind, name } => write!(f, "registered {kind} hint {name}"),
            Event::Imported { path } => write!(f, "imported {path}"),
        }
    }
}

/// Declarations admitted so far, by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub definitions: usize,
    pub theorems: usize,
    pub statements: usize,
    pub hints: usize,
}

impl Counts {
    /// Definitions plus theorems.
    pub fn checked(&self) -> usize {
        self.definitions + self.theorems
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    env: GlobalEnv,
    hints: HintDb,
    pub fuel: u64,
    /// Whether `statement` declarations are accepted.
    pub allow_statements: bool,
    counts: Counts,
    loaded: HashSet<PathBuf>,
    importing: Vec<PathBuf>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new(DEFAULT_FUEL)
    }
}

impl Session {
    pub fn new(fuel: u64) -> Self {
        Session {
            env: GlobalEnv::new(),
            hints: HintDb::new(),
            fuel,
            allow_statements: true,
            counts: Counts::default(),
            loaded: HashSet::new(),
            importing: Vec::new(),
        }
    }

    pub fn env(&self) -> &GlobalEnv {
        &self.env
    }

    pub fn hints(&self) -> &HintDb {
        &self.hints
    }

    pub fn counts(&self) -> Counts {
        self.counts
    }

    pub fn checker(&self) -> Checker<'_> {
        Checker::with_fuel(&self.env, self.fuel)
    }

    /// Parses and processes `text`. Imports resolve against `base`, or are
    /// rejected when there is none.
    pub fn run_source(
        &mut self,
        text: &str,
        file: &str,
        base: Option<&Path>,
    ) -> Result<Vec<Event>, Diagnostic> {
        let decls = parse_script(text, file)?;
        let mut events = Vec::new();
        for d in &decls {
            events.extend(self.run_decl(d, base)?);
        }
        Ok(events)
    }

    /// Processes a file once; later requests for the same file are no-ops.
    pub fn run_file(&mut self, path: &Path) -> Result<Vec<Event>, Diagnostic> {
        let key = path.canonicalize().map_err(|e| {
            Diagnostic::new(DiagCode::Io, format!("cannot read {}: {e}", path.display()))
        })?;
        if self.importing.contains(&key) {
            return Err(Diagnostic::new(
                DiagCode::Scope,
                format!("import cycle through {}", path.display()),
            ));
        }
        if !self.loaded.insert(key.clone()) {
            return Ok(Vec::new());
        }
        let text = std::fs::read_to_string(path).map_err(|e| {
            Diagnostic::new(DiagCode::Io, format!("cannot read {}: {e}", path.display()))
        })?;
        self.importing.push(key);
        let r = self.run_source(&text, &path.display().to_string(), path.parent());
        self.importing.pop();
        r
    }

    pub fn run_decl(&mut self, d: &Decl, base: Option<&Path>) -> Result<Vec<Event>, Diagnostic> {
        let body_span = d.body_span.as_ref().unwrap_or(&d.span);
        let ctx = Context::new();
        let ev = match &d.kind {
            DeclKind::Def { name, ty, body } => self.define(d, name, DefKind::Definition, ty, Some(body))?,
            DeclKind::Theorem { name, ty, body } => self.define(d, name, DefKind::Theorem, ty, Some(body))?,
            DeclKind::StatementOnly { name, ty } => {
                if !self.allow_statements {
                    return Err(Diagnostic::new(
                        DiagCode::Scope,
                        format!("statement-only declaration `{name}` is not allowed here"),
                    )
                    .at(&d.span));
                }
                self.define(d, name, DefKind::Statement, ty, None)?
            }
            DeclKind::CheckCmd(t) => {
                let ty = self.checker().infer(&ctx, t).map_err(|e| e.at(body_span))?;
                Event::Checked { term: t.clone(), ty }
            }
            DeclKind::NormalizeCmd(t) => {
                let ck = self.checker();
                ck.infer(&ctx, t).map_err(|e| e.at(body_span))?;
                let normal = ck.normalize(t).map_err(|e| e.at(body_span))?;
                Event::Normalized { term: t.clone(), normal }
            }
            DeclKind::StableCmd(phi) => {
                let c = prove_stable(&self.env, &self.hints, &ctx, phi, self.fuel)
                    .map_err(|e| e.into_diagnostic().at(body_span))?;
                Event::Stable(c)
            }
            DeclKind::HintCmd { kind, name } => {
                self.hints =
                    self.hints.register(&self.env, name, *kind, self.fuel).map_err(|e| e.at(&d.span))?;
                self.counts.hints += 1;
                Event::Hint { kind: *kind, name: name.clone() }
            }
            DeclKind::ImportCmd(p) => {
                let Some(base) = base else {
                    return Err(Diagnostic::new(
                        DiagCode::Scope,
                        format!("cannot import \"{p}\" here: no base directory"),
                    )
                    .at(&d.span));
                };
                let mut events = self.run_file(&base.join(p)).map_err(|e| e.at(&d.span))?;
                events.push(Event::Imported { path: p.clone() });
                return Ok(events);
            }
        };
        Ok(vec![ev])
    }

    fn define(
        &mut self,
        d: &Decl,
        name: &str,
        kind: DefKind,
        ty: &Term,
        body: Option<&Term>,
    ) -> Result<Event, Diagnostic> {
        let what = format!("in `{name}`");
        let span_or = |s: &Option<SourceSpan>| s.clone().unwrap_or_else(|| d.span.clone());
        if self.env.contains(name) {
            return Err(Diagnostic::new(DiagCode::DupName, format!("`{name}` is already defined"))
                .at(&d.span));
        }
        let ck = self.checker();
        let ctx = Context::new();
        ck.sort_of(&ctx, ty).map_err(|e| e.with_context(&what).at(&span_or(&d.ty_span)))?;
        if let Some(b) = body {
            ck.check(&ctx, b, ty).map_err(|e| e.with_context(&what).at(&span_or(&d.body_span)))?;
        }
        self.env.push_mut(GlobalDef { name: name.into(), ty: ty.clone(), body: body.cloned(), kind });
        match kind {
            DefKind::Definition => self.counts.definitions += 1,
            DefKind::Theorem => self.counts.theorems += 1,
            DefKind::Statement => self.counts.statements += 1,
        }
        Ok(Event::Defined { name: name.to_string(), kind })
    }
}
