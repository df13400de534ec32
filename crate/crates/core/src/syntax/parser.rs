//! Recursive-descent parser producing de Bruijn terms.
//!
//! Names bound by `fun`, `Pi`, `Sig`, `let` and eliminator branches resolve
//! to indices; any other identifier becomes a `Const`, checked later against
//! the global environment. The binder name `_` is never resolvable.

use std::collections::BTreeSet;

use super::lexer::{tokenize, Tok, Token};
use super::{Decl, DeclKind, HintKind};
use crate::diagnostic::{DiagCode, Diagnostic, SourceSpan};
use crate::term::Term;

/// Parses a whole script.
pub fn parse_script(text: &str, file: &str) -> Result<Vec<Decl>, Diagnostic> {
    let mut p = Parser::new(text, file)?;
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.decl()?);
    }
    Ok(out)
}

/// Parses a single closed term occupying the whole input.
pub fn parse_term(text: &str, file: &str) -> Result<Term, Diagnostic> {
    let mut p = Parser::new(text, file)?;
    let t = p.term()?;
    // A trailing `.` is tolerated so that `-e "t."` and `-e "t"` agree.
    p.eat(&Tok::Dot);
    p.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    file: String,
    scope: Vec<String>,
    /// Tokens that would have been accepted at `pos`.
    expected: BTreeSet<String>,
}

impl Parser {
    fn new(text: &str, file: &str) -> Result<Self, Diagnostic> {
        Ok(Parser {
            toks: tokenize(text, file)?,
            pos: 0,
            file: file.to_string(),
            scope: Vec::new(),
            expected: BTreeSet::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn start(&self) -> (usize, usize) {
        self.toks[self.pos].start
    }

    /// End of the most recently consumed token.
    fn last_end(&self) -> (usize, usize) {
        if self.pos == 0 {
            self.toks[0].start
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn span_from(&self, start: (usize, usize)) -> SourceSpan {
        SourceSpan::new(&self.file, start, self.last_end())
    }

    fn note(&mut self, what: impl Into<String>) {
        self.expected.insert(what.into());
    }

    fn at(&mut self, t: &Tok) -> bool {
        self.note(t.to_string());
        self.peek() == t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self) -> Diagnostic {
        let tok = &self.toks[self.pos];
        let exp: Vec<&str> = self.expected.iter().map(String::as_str).collect();
        let msg = if exp.is_empty() {
            format!("unexpected {}", tok.tok)
        } else {
            format!("unexpected {}; expected one of: {}", tok.tok, exp.join(", "))
        };
        Diagnostic::new(DiagCode::Parse, msg).at(&SourceSpan::new(&self.file, tok.start, tok.end))
    }

    fn expect(&mut self, t: &Tok) -> Result<(), Diagnostic> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn ident(&mut self) -> Result<String, Diagnostic> {
        self.note("identifier");
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error()),
        }
    }

    fn kw(&mut self, k: &'static str) -> bool {
        self.eat(&Tok::Kw(k))
    }

    fn decl(&mut self) -> Result<Decl, Diagnostic> {
        let start = self.start();
        let mut ty_span = None;
        let mut body_span = None;
        let kind = match self.peek().clone() {
            Tok::Kw(k @ ("def" | "theorem")) => {
                self.bump();
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let (ty, ts) = self.spanned_term()?;
                self.expect(&Tok::ColonEq)?;
                let (body, bs) = self.spanned_term()?;
                ty_span = Some(ts);
                body_span = Some(bs);
                if k == "def" {
                    DeclKind::Def { name, ty, body }
                } else {
                    DeclKind::Theorem { name, ty, body }
                }
            }
            Tok::Kw("statement") => {
                self.bump();
                let name = self.ident()?;
                self.expect(&Tok::Colon)?;
                let (ty, ts) = self.spanned_term()?;
                ty_span = Some(ts);
                DeclKind::StatementOnly { name, ty }
            }
            Tok::Command(c) => {
                self.bump();
                let (t, s) = self.spanned_term()?;
                body_span = Some(s);
                match c.as_str() {
                    "check" => DeclKind::CheckCmd(t),
                    "normalize" => DeclKind::NormalizeCmd(t),
                    _ => DeclKind::StableCmd(t),
                }
            }
            Tok::Kw("hint") => {
                self.bump();
                self.note("`stable`");
                self.note("`decidable`");
                let kind = match self.peek() {
                    Tok::Ident(s) if s == "stable" => HintKind::Stable,
                    Tok::Ident(s) if s == "decidable" => HintKind::Decidable,
                    _ => return Err(self.error()),
                };
                self.bump();
                let name = self.ident()?;
                DeclKind::HintCmd { kind, name }
            }
            Tok::Kw("import") => {
                self.bump();
                self.note("string");
                match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        DeclKind::ImportCmd(s)
                    }
                    _ => return Err(self.error()),
                }
            }
            _ => {
                for k in ["def", "theorem", "statement", "hint", "import"] {
                    self.note(format!("`{k}`"));
                }
                for c in ["check", "normalize", "stable"] {
                    self.note(format!("`#{c}`"));
                }
                return Err(self.error());
            }
        };
        self.expect(&Tok::Dot)?;
        Ok(Decl { kind, span: self.span_from(start), ty_span, body_span })
    }

    fn spanned_term(&mut self) -> Result<(Term, SourceSpan), Diagnostic> {
        let start = self.start();
        let t = self.term()?;
        Ok((t, self.span_from(start)))
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        if name == "_" {
            return None;
        }
        self.scope.iter().rev().position(|n| n == name)
    }

    /// Runs `f` with `names` pushed onto the scope.
    fn with_names<R>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    /// `(x y : A) (z : B) ...`: at least one group. Each binder's
    /// annotation is parsed in the scope of the binders before it.
    fn binder_groups(&mut self) -> Result<Vec<(String, Term)>, Diagnostic> {
        let mut out: Vec<(String, Term)> = Vec::new();
        let base = self.scope.len();
        let res = (|| {
            self.expect(&Tok::LParen)?;
            loop {
                let mut names = vec![self.ident()?];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?);
                }
                self.expect(&Tok::Colon)?;
                let ty = self.term()?;
                self.expect(&Tok::RParen)?;
                for (k, n) in names.into_iter().enumerate() {
                    // Later names in a group see earlier ones; the annotation
                    // was parsed before any of them, so shift it.
                    out.push((n.clone(), ty.shifted(0, k)));
                    self.scope.push(n);
                }
                if !self.eat(&Tok::LParen) {
                    break;
                }
            }
            Ok(())
        })();
        self.scope.truncate(base);
        res.map(|_| out)
    }

    fn binder_form(
        &mut self,
        sep: Tok,
        mk: fn(Term, Term) -> Term,
    ) -> Result<Term, Diagnostic> {
        let groups = self.binder_groups()?;
        self.expect(&sep)?;
        let names: Vec<String> = groups.iter().map(|(n, _)| n.clone()).collect();
        let body = self.with_names(&names, |p| p.term())?;
        Ok(groups.into_iter().rev().fold(body, |b, (_, ty)| mk(ty, b)))
    }

    fn term(&mut self) -> Result<Term, Diagnostic> {
        if self.kw("fun") {
            return self.binder_form(Tok::FatArrow, Term::lam);
        }
        if self.kw("Pi") {
            return self.binder_form(Tok::Comma, Term::pi);
        }
        if self.kw("Sig") {
            return self.binder_form(Tok::Comma, Term::sigma);
        }
        if self.kw("let") {
            let name = self.ident()?;
            self.expect(&Tok::Colon)?;
            let ty = self.term()?;
            self.expect(&Tok::ColonEq)?;
            let val = self.term()?;
            if !self.kw("in") {
                return Err(self.error());
            }
            let body = self.with_names(&[name], |p| p.term())?;
            return Ok(Term::app(Term::lam(ty, body), val));
        }
        let lhs = self.application()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.term()?;
            return Ok(Term::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&mut self) -> bool {
        for t in ["identifier", "number", "`(`"] {
            self.note(t);
        }
        match self.peek() {
            Tok::Ident(_) | Tok::Num(_) | Tok::LParen => true,
            Tok::Kw(k) => ATOM_KEYWORDS.contains(k),
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Term, Diagnostic> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let x = self.atom()?;
            t = Term::app(t, x);
        }
        Ok(t)
    }

    /// `IDENT "." term`: a one-binder motive or branch.
    fn bound1(&mut self) -> Result<Term, Diagnostic> {
        let x = self.ident()?;
        self.expect(&Tok::Dot)?;
        self.with_names(&[x], |p| p.term())
    }

    /// `IDENT IDENT "." term`.
    fn bound2(&mut self) -> Result<Term, Diagnostic> {
        let x = self.ident()?;
        let y = self.ident()?;
        self.expect(&Tok::Dot)?;
        self.with_names(&[x, y], |p| p.term())
    }

    fn atom(&mut self) -> Result<Term, Diagnostic> {
        if !self.starts_atom() {
            for k in ATOM_KEYWORDS {
                self.note(format!("`{k}`"));
            }
            return Err(self.error());
        }
        let tok = self.bump();
        let t = match tok.tok {
            Tok::Ident(name) => match self.lookup(&name) {
                Some(i) => Term::Var(i),
                None => Term::constant(&name),
            },
            Tok::Num(n) => Term::nat(n),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                t
            }
            Tok::Kw(k) => match k {
                "Type0" => Term::Univ(0),
                "Type1" => Term::Univ(1),
                "Type2" => Term::Univ(2),
                "Unit" => Term::UnitTy,
                "unit" => Term::UnitVal,
                "Void" => Term::VoidTy,
                "Bool" => Term::BoolTy,
                "true" => Term::TT,
                "false" => Term::FF,
                "Nat" => Term::NatTy,
                "zero" => Term::Zero,
                "succ" => Term::succ(self.atom()?),
                "Sum" => {
                    self.expect(&Tok::LParen)?;
                    let l = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let r = self.term()?;
                    self.expect(&Tok::RParen)?;
                    Term::sum(l, r)
                }
                "pair" => {
                    self.expect(&Tok::LParen)?;
                    let a = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let b = self.term()?;
                    self.expect(&Tok::Colon)?;
                    let ty = self.term()?;
                    self.expect(&Tok::RParen)?;
                    Term::pair(a, b, ty)
                }
                "inl" | "inr" => {
                    self.expect(&Tok::LParen)?;
                    let a = self.term()?;
                    self.expect(&Tok::Semi)?;
                    let ty = self.term()?;
                    self.expect(&Tok::RParen)?;
                    if k == "inl" {
                        Term::inl(a, ty)
                    } else {
                        Term::inr(a, ty)
                    }
                }
                "elimB" => {
                    self.expect(&Tok::LParen)?;
                    let m = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let s = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let x = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let y = self.term()?;
                    self.expect(&Tok::RParen)?;
                    Term::bool_elim(m, s, x, y)
                }
                "elimN" => {
                    self.expect(&Tok::LParen)?;
                    let m = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let s = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let z = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let f = self.bound2()?;
                    self.expect(&Tok::RParen)?;
                    Term::nat_elim(m, s, z, f)
                }
                "elimS" => {
                    self.expect(&Tok::LParen)?;
                    let m = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let s = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let l = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let r = self.bound1()?;
                    self.expect(&Tok::RParen)?;
                    Term::sum_elim(m, s, l, r)
                }
                "elimSig" => {
                    self.expect(&Tok::LParen)?;
                    let m = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let s = self.term()?;
                    self.expect(&Tok::Comma)?;
                    let b = self.bound2()?;
                    self.expect(&Tok::RParen)?;
                    Term::sig_elim(m, s, b)
                }
                "elimV" => {
                    self.expect(&Tok::LParen)?;
                    let m = self.bound1()?;
                    self.expect(&Tok::Comma)?;
                    let s = self.term()?;
                    self.expect(&Tok::RParen)?;
                    Term::void_elim(m, s)
                }
                _ => unreachable!("starts_atom admitted `{k}`"),
            },
            _ => unreachable!("starts_atom admitted a non-atom token"),
        };
        Ok(t)
    }
}

const ATOM_KEYWORDS: &[&str] = &[
    "Type0", "Type1", "Type2", "Unit", "unit", "Void", "Bool", "true", "false", "Nat", "zero",
    "succ", "Sum", "pair", "inl", "inr", "elimB", "elimN", "elimS", "elimSig", "elimV",
];
