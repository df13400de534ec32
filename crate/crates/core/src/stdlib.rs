//! The bundled proof-script corpus and its loader.
//!
//! Files are embedded at build time. Setting `CLARI_STDLIB` to a directory
//! loads the same relative paths from disk instead.

use std::path::Path;

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::env::DefKind;
use crate::session::{Counts, Event, Session};

pub const STDLIB_ENV: &str = "CLARI_STDLIB";

#[derive(Debug, Clone, Copy)]
pub struct CorpusFile {
    /// Path relative to the stdlib root.
    pub path: &'static str,
    /// 1 is required content; 2 may contain statement-only declarations.
    pub tier: u8,
    pub source: &'static str,
}

/// In load order.
pub const CORPUS: &[CorpusFile] = &[
    CorpusFile { path: "logic/core.ct", tier: 1, source: include_str!("../stdlib/logic/core.ct") },
    CorpusFile { path: "dn/monad.ct", tier: 1, source: include_str!("../stdlib/dn/monad.ct") },
    CorpusFile { path: "setoid/core.ct", tier: 1, source: include_str!("../stdlib/setoid/core.ct") },
    CorpusFile { path: "weakvalue/core.ct", tier: 2, source: include_str!("../stdlib/weakvalue/core.ct") },
    CorpusFile { path: "nat/gcd.ct", tier: 2, source: include_str!("../stdlib/nat/gcd.ct") },
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StdlibReport {
    pub files: Vec<String>,
    pub counts: Counts,
    /// Names of statement-only declarations, in load order.
    pub statements: Vec<String>,
}

impl StdlibReport {
    pub fn summary(&self) -> String {
        let c = &self.counts;
        let mut s = format!(
            "{} files: {} definitions, {} theorems, {} statement-only, {} hints\n",
            self.files.len(),
            c.definitions,
            c.theorems,
            c.statements,
            c.hints
        );
        for n in &self.statements {
            s.push_str(&format!("  unproven: {n}\n"));
        }
        s.push_str(&format!("{} definitions checked, 0 failures", c.checked()));
        s
    }
}

/// Corpus files up to and including `tier`.
pub fn files(tier: u8) -> impl Iterator<Item = &'static CorpusFile> {
    CORPUS.iter().filter(move |f| f.tier <= tier)
}

/// Loads tiers `1..=tier`, honouring `CLARI_STDLIB`.
pub fn load_stdlib(session: &mut Session, tier: u8) -> Result<StdlibReport, Diagnostic> {
    match std::env::var_os(STDLIB_ENV) {
        Some(dir) => load_stdlib_from(session, tier, Some(Path::new(&dir))),
        None => load_stdlib_from(session, tier, None),
    }
}

/// Loads tiers `1..=tier` from `dir`, or from the embedded copies.
pub fn load_stdlib_from(
    session: &mut Session,
    tier: u8,
    dir: Option<&Path>,
) -> Result<StdlibReport, Diagnostic> {
    if !(1..=2).contains(&tier) {
        return Err(Diagnostic::new(DiagCode::Usage, format!("unknown stdlib tier {tier}")));
    }
    let mut report = StdlibReport::default();
    let before = session.counts();
    let allow = session.allow_statements;
    for f in files(tier) {
        let (text, label) = match dir {
            Some(d) => {
                let p = d.join(f.path);
                let text = std::fs::read_to_string(&p).map_err(|e| {
                    Diagnostic::new(DiagCode::Io, format!("cannot read {}: {e}", p.display()))
                })?;
                (text, p.display().to_string())
            }
            None => (f.source.to_string(), f.path.to_string()),
        };
        session.allow_statements = f.tier >= 2;
        let r = session.run_source(&text, &label, None);
        session.allow_statements = allow;
        for ev in r? {
            if let Event::Defined { name, kind: DefKind::Statement } = ev {
                report.statements.push(name);
            }
        }
        report.files.push(f.path.to_string());
    }
    let after = session.counts();
    report.counts = Counts {
        definitions: after.definitions - before.definitions,
        theorems: after.theorems - before.theorems,
        statements: after.statements - before.statements,
        hints: after.hints - before.hints,
    };
    Ok(report)
}
