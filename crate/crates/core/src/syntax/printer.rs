//! Printing terms and declarations back to surface syntax.
//!
//! Bound variables are named after their binder depth (`x0`, `x1`, ...),
//! primed as needed to avoid constants and keywords, so that printing a
//! closed term and parsing it again yields the same term. Free variables
//! print as `#i` and do not re-parse.

use std::fmt;

use super::lexer::is_keyword;
use super::{Decl, DeclKind};
use crate::term::{Name, Term};

pub fn print_term(t: &Term) -> String {
    let mut consts = Vec::new();
    t.constants(&mut consts);
    let mut p = Printer { consts, names: Vec::new(), out: String::new() };
    p.term(t, Prec::Binder);
    p.out
}

pub fn print_decl(d: &Decl) -> String {
    match &d.kind {
        DeclKind::Def { name, ty, body } => {
            format!("def {name} : {} := {}.", print_term(ty), print_term(body))
        }
        DeclKind::Theorem { name, ty, body } => {
            format!("theorem {name} : {} := {}.", print_term(ty), print_term(body))
        }
        DeclKind::StatementOnly { name, ty } => format!("statement {name} : {}.", print_term(ty)),
        DeclKind::CheckCmd(t) => format!("#check {}.", print_term(t)),
        DeclKind::NormalizeCmd(t) => format!("#normalize {}.", print_term(t)),
        DeclKind::StableCmd(t) => format!("#stable {}.", print_term(t)),
        DeclKind::HintCmd { kind, name } => format!("hint {kind} {name}."),
        DeclKind::ImportCmd(p) => format!("import \"{p}\"."),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Binder,
    App,
    Atom,
}

struct Printer {
    consts: Vec<Name>,
    names: Vec<String>,
    out: String,
}

impl Printer {
    fn fresh(&self) -> String {
        let mut n = format!("x{}", self.names.len());
        while is_keyword(&n) || self.consts.iter().any(|c| **c == *n) {
            n.push('\'');
        }
        n
    }

    fn push(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn var(&mut self, i: usize) {
        if i < self.names.len() {
            let n = self.names[self.names.len() - 1 - i].clone();
            self.push(&n);
        } else {
            let s = format!("#{}", i - self.names.len());
            self.push(&s);
        }
    }

    /// `x. body` for motives and branches.
    fn branch1(&mut self, body: &Term) {
        let n = self.fresh();
        self.push(&n);
        self.push(". ");
        self.names.push(n);
        self.term(body, Prec::Binder);
        self.names.pop();
    }

    fn branch2(&mut self, body: &Term) {
        let a = self.fresh();
        self.names.push(a.clone());
        let b = self.fresh();
        self.names.push(b.clone());
        self.push(&format!("{a} {b}. "));
        self.term(body, Prec::Binder);
        self.names.truncate(self.names.len() - 2);
    }

    fn binder(&mut self, kw: &str, sep: &str, dom: &Term, body: &Term) {
        let n = self.fresh();
        self.push(&format!("{kw} ({n} : "));
        self.term(dom, Prec::Binder);
        self.push(&format!("){sep} "));
        self.names.push(n);
        self.term(body, Prec::Binder);
        self.names.pop();
    }

    fn args(&mut self, head: &str, parts: &[&dyn Fn(&mut Printer)], seps: &[&str]) {
        self.push(head);
        self.push(" (");
        for (k, part) in parts.iter().enumerate() {
            if k > 0 {
                self.push(seps[k - 1]);
            }
            part(self);
        }
        self.push(")");
    }

    fn term(&mut self, t: &Term, prec: Prec) {
        let need = match t {
            Term::Pi(..) | Term::Lam(..) | Term::Sigma(..) => Prec::Binder,
            Term::App(..) => Prec::App,
            Term::Succ(_) if literal(t).is_none() => Prec::App,
            _ => Prec::Atom,
        };
        let paren = need < prec;
        if paren {
            self.push("(");
        }
        self.body(t);
        if paren {
            self.push(")");
        }
    }

    fn body(&mut self, t: &Term) {
        use Term::*;
        let b = Prec::Binder;
        match t {
            Var(i) => self.var(*i),
            Univ(l) => self.push(&format!("Type{l}")),
            UnitTy => self.push("Unit"),
            UnitVal => self.push("unit"),
            VoidTy => self.push("Void"),
            BoolTy => self.push("Bool"),
            TT => self.push("true"),
            FF => self.push("false"),
            NatTy => self.push("Nat"),
            Zero => self.push("zero"),
            Const(n) => self.push(n),
            Succ(p) => match literal(t) {
                Some(n) => self.push(&n.to_string()),
                None => {
                    self.push("succ ");
                    self.term(p, Prec::Atom);
                }
            },
            Pi(d, c) if !c.mentions(0) => {
                self.term(d, Prec::App);
                self.push(" -> ");
                // The codomain does not use its binder; print it one level out.
                let c = c.shift(0, -1).expect("unused binder");
                self.term(&c, b);
            }
            Pi(d, c) => self.binder("Pi", ",", d, c),
            Sigma(d, c) => self.binder("Sig", ",", d, c),
            Lam(d, body) => self.binder("fun", " =>", d, body),
            App(f, x) => {
                self.term(f, Prec::App);
                self.push(" ");
                self.term(x, Prec::Atom);
            }
            Sum(l, r) => self.args(
                "Sum",
                &[&|p: &mut Printer| p.term(l, b), &|p: &mut Printer| p.term(r, b)],
                &[", "],
            ),
            Pair { fst, snd, ty } => self.args(
                "pair",
                &[
                    &|p: &mut Printer| p.term(fst, b),
                    &|p: &mut Printer| p.term(snd, b),
                    &|p: &mut Printer| p.term(ty, b),
                ],
                &[", ", " : "],
            ),
            Inl { payload, other } | Inr { payload, other } => self.args(
                if matches!(t, Inl { .. }) { "inl" } else { "inr" },
                &[&|p: &mut Printer| p.term(payload, b), &|p: &mut Printer| p.term(other, b)],
                &["; "],
            ),
            BoolElim { motive, scrutinee, if_true, if_false } => self.args(
                "elimB",
                &[
                    &|p: &mut Printer| p.branch1(motive),
                    &|p: &mut Printer| p.term(scrutinee, b),
                    &|p: &mut Printer| p.term(if_true, b),
                    &|p: &mut Printer| p.term(if_false, b),
                ],
                &[", ", ", ", ", "],
            ),
            NatElim { motive, scrutinee, zero, succ } => self.args(
                "elimN",
                &[
                    &|p: &mut Printer| p.branch1(motive),
                    &|p: &mut Printer| p.term(scrutinee, b),
                    &|p: &mut Printer| p.term(zero, b),
                    &|p: &mut Printer| p.branch2(succ),
                ],
                &[", ", ", ", ", "],
            ),
            SumElim { motive, scrutinee, left, right } => self.args(
                "elimS",
                &[
                    &|p: &mut Printer| p.branch1(motive),
                    &|p: &mut Printer| p.term(scrutinee, b),
                    &|p: &mut Printer| p.branch1(left),
                    &|p: &mut Printer| p.branch1(right),
                ],
                &[", ", ", ", ", "],
            ),
            SigElim { motive, scrutinee, branch } => self.args(
                "elimSig",
                &[
                    &|p: &mut Printer| p.branch1(motive),
                    &|p: &mut Printer| p.term(scrutinee, b),
                    &|p: &mut Printer| p.branch2(branch),
                ],
                &[", ", ", "],
            ),
            VoidElim { motive, scrutinee } => self.args(
                "elimV",
                &[&|p: &mut Printer| p.branch1(motive), &|p: &mut Printer| p.term(scrutinee, b)],
                &[", "],
            ),
        }
    }
}

/// `Some(n)` when the term is `Succ^n Zero`.
fn literal(t: &Term) -> Option<u64> {
    let mut n = 0u64;
    let mut t = t;
    loop {
        match t {
            Term::Zero => return Some(n),
            Term::Succ(p) => {
                n += 1;
                t = p;
            }
            _ => return None,
        }
    }
}
