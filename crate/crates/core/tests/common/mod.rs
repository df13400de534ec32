//! Seeded term and formula generators shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod oracle;

use clari_core::session::Session;
use clari_core::stdlib::load_stdlib_from;
use clari_core::term::Term;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A session with tier 1 of the bundled library loaded.
pub fn tier1() -> Session {
    let mut s = Session::default();
    load_stdlib_from(&mut s, 1, None).expect("tier 1 loads");
    s
}

/// Simple types, all living in `Type0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Bool,
    Nat,
    Unit,
    Arrow(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Sum(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn term(&self) -> Term {
        match self {
            Ty::Bool => Term::BoolTy,
            Ty::Nat => Term::NatTy,
            Ty::Unit => Term::UnitTy,
            Ty::Arrow(a, b) => Term::arrow(a.term(), b.term()),
            Ty::Prod(a, b) => Term::product(a.term(), b.term()),
            Ty::Sum(a, b) => Term::sum(a.term(), b.term()),
        }
    }

    fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }
}

pub fn gen_ty(r: &mut ChaCha8Rng, depth: usize) -> Ty {
    let base = [Ty::Bool, Ty::Nat, Ty::Unit];
    if depth == 0 || r.gen_bool(0.5) {
        return base.choose(r).unwrap().clone();
    }
    let a = Box::new(gen_ty(r, depth - 1));
    let b = Box::new(gen_ty(r, depth - 1));
    match r.gen_range(0..3) {
        0 => Ty::Arrow(a, b),
        1 => Ty::Prod(a, b),
        _ => Ty::Sum(a, b),
    }
}

/// Library functions on booleans and naturals, with their types.
const CONSTS: &[(&str, &[Ty], Ty)] = &[
    ("notB", &[Ty::Bool], Ty::Bool),
    ("andB", &[Ty::Bool, Ty::Bool], Ty::Bool),
    ("eqB", &[Ty::Bool, Ty::Bool], Ty::Bool),
    ("eqN", &[Ty::Nat, Ty::Nat], Ty::Bool),
    ("leB", &[Ty::Nat, Ty::Nat], Ty::Bool),
    ("ltB", &[Ty::Nat, Ty::Nat], Ty::Bool),
    ("add", &[Ty::Nat, Ty::Nat], Ty::Nat),
    ("mul", &[Ty::Nat, Ty::Nat], Ty::Nat),
];

/// Generates well-typed terms of a requested simple type, rich in redexes.
pub struct TermGen<'r> {
    pub r: &'r mut ChaCha8Rng,
    /// Whether library constants may appear (needs the tier-1 environment).
    pub consts: bool,
}

impl TermGen<'_> {
    /// A term of type `ty` in `ctx` (innermost binder last).
    pub fn term(&mut self, ctx: &mut Vec<Ty>, ty: &Ty, depth: usize) -> Term {
        let vars: Vec<usize> =
            (0..ctx.len()).filter(|&i| ctx[ctx.len() - 1 - i] == *ty).collect();
        if depth == 0 {
            if !vars.is_empty() && self.r.gen_bool(0.5) {
                return Term::Var(*vars.choose(self.r).unwrap());
            }
            return self.intro(ctx, ty, 0);
        }
        let d = depth - 1;
        match self.r.gen_range(0..11) {
            0 if !vars.is_empty() => Term::Var(*vars.choose(self.r).unwrap()),
            1 | 2 => self.intro(ctx, ty, d),
            3 => {
                let s = gen_ty(self.r, 1);
                let body = self.under(ctx, &[s.clone()], ty, d);
                let arg = self.term(ctx, &s, d);
                Term::app(Term::lam(s.term(), body), arg)
            }
            4 => {
                let s = gen_ty(self.r, 1);
                let f = self.term(ctx, &Ty::arrow(s.clone(), ty.clone()), d);
                let x = self.term(ctx, &s, d);
                Term::app(f, x)
            }
            5 => {
                let b = self.term(ctx, &Ty::Bool, d);
                Term::bool_elim(ty.term(), b, self.term(ctx, ty, d), self.term(ctx, ty, d))
            }
            6 => {
                let n = self.term(ctx, &Ty::Nat, d.min(2));
                let z = self.term(ctx, ty, d);
                let s = self.under(ctx, &[Ty::Nat, ty.clone()], ty, d);
                Term::nat_elim(ty.term(), n, z, s)
            }
            7 => {
                let (a, b) = (gen_ty(self.r, 1), gen_ty(self.r, 1));
                let p = self.term(ctx, &Ty::Prod(Box::new(a.clone()), Box::new(b.clone())), d);
                let body = self.under(ctx, &[a, b], ty, d);
                Term::sig_elim(ty.term(), p, body)
            }
            8 => {
                let (a, b) = (gen_ty(self.r, 1), gen_ty(self.r, 1));
                let s = self.term(ctx, &Ty::Sum(Box::new(a.clone()), Box::new(b.clone())), d);
                let l = self.under(ctx, &[a], ty, d);
                let rt = self.under(ctx, &[b], ty, d);
                Term::sum_elim(ty.term(), s, l, rt)
            }
            9 => {
                // Dependent motive over a closed scrutinee.
                let b = self.term(&mut Vec::new(), &Ty::Bool, d.min(2));
                let motive = Term::bool_elim(Term::Univ(0), Term::Var(0), ty.term(), ty.term());
                Term::bool_elim(motive, b, self.term(ctx, ty, d), self.term(ctx, ty, d))
            }
            _ if self.consts => {
                let options: Vec<_> = CONSTS.iter().filter(|c| c.2 == *ty).collect();
                match options.choose(self.r) {
                    Some((name, args, _)) => {
                        let args: Vec<Term> = args.iter().map(|a| self.term(ctx, a, d.min(2))).collect();
                        Term::apps(Term::constant(name), args)
                    }
                    None => self.intro(ctx, ty, d),
                }
            }
            _ => self.intro(ctx, ty, d),
        }
    }

    fn under(&mut self, ctx: &mut Vec<Ty>, binders: &[Ty], ty: &Ty, depth: usize) -> Term {
        ctx.extend(binders.iter().cloned());
        let t = self.term(ctx, ty, depth);
        ctx.truncate(ctx.len() - binders.len());
        t
    }

    fn intro(&mut self, ctx: &mut Vec<Ty>, ty: &Ty, depth: usize) -> Term {
        match ty {
            Ty::Bool => {
                if self.r.gen_bool(0.5) {
                    Term::TT
                } else {
                    Term::FF
                }
            }
            Ty::Nat => {
                if depth == 0 || self.r.gen_bool(0.4) {
                    Term::nat(self.r.gen_range(0..3))
                } else {
                    Term::succ(self.term(ctx, &Ty::Nat, depth))
                }
            }
            Ty::Unit => Term::UnitVal,
            Ty::Arrow(a, b) => {
                let body = self.under(ctx, &[(**a).clone()], b, depth);
                Term::lam(a.term(), body)
            }
            Ty::Prod(a, b) => {
                let x = self.term(ctx, a, depth);
                let y = self.term(ctx, b, depth);
                Term::pair(x, y, ty.term())
            }
            Ty::Sum(a, b) => {
                if self.r.gen_bool(0.5) {
                    Term::inl(self.term(ctx, a, depth), b.term())
                } else {
                    Term::inr(self.term(ctx, b, depth), a.term())
                }
            }
        }
    }
}

/// A well-typed closed term together with its intended type.
pub fn typed_term(seed: u64, consts: bool) -> (Term, Ty) {
    let mut r = rng(seed);
    let ty = gen_ty(&mut r, 2);
    let depth = r.gen_range(1..5);
    let t = TermGen { r: &mut r, consts }.term(&mut Vec::new(), &ty, depth);
    (t, ty)
}

/// An arbitrary, not necessarily well-typed, term scoped in `n` variables.
pub fn raw_term(r: &mut ChaCha8Rng, n: usize, depth: usize) -> Term {
    let leaf = |r: &mut ChaCha8Rng| -> Term {
        match r.gen_range(0..9) {
            0..=2 if n > 0 => Term::Var(r.gen_range(0..n)),
            3 => Term::Univ(r.gen_range(0..3)),
            4 => Term::TT,
            5 => Term::Zero,
            6 => Term::UnitVal,
            7 => Term::constant(["neg", "f", "bracket"].choose(r).unwrap()),
            _ => Term::NatTy,
        }
    };
    if depth == 0 {
        return leaf(r);
    }
    let d = depth - 1;
    match r.gen_range(0..12) {
        0 => leaf(r),
        1 => Term::pi(raw_term(r, n, d), raw_term(r, n + 1, d)),
        2 => Term::lam(raw_term(r, n, d), raw_term(r, n + 1, d)),
        3 => Term::app(raw_term(r, n, d), raw_term(r, n, d)),
        4 => Term::sigma(raw_term(r, n, d), raw_term(r, n + 1, d)),
        5 => Term::pair(raw_term(r, n, d), raw_term(r, n, d), raw_term(r, n, d)),
        6 => Term::sig_elim(raw_term(r, n + 1, d), raw_term(r, n, d), raw_term(r, n + 2, d)),
        7 => Term::sum_elim(
            raw_term(r, n + 1, d),
            raw_term(r, n, d),
            raw_term(r, n + 1, d),
            raw_term(r, n + 1, d),
        ),
        8 => Term::nat_elim(
            raw_term(r, n + 1, d),
            raw_term(r, n, d),
            raw_term(r, n, d),
            raw_term(r, n + 2, d),
        ),
        9 => Term::bool_elim(raw_term(r, n + 1, d), raw_term(r, n, d), raw_term(r, n, d), raw_term(r, n, d)),
        10 => Term::inl(raw_term(r, n, d), raw_term(r, n, d)),
        _ => Term::succ(raw_term(r, n, d)),
    }
}

/// Formulas of the classical fragment: Unit, Void, products, Pi and
/// arrows, and boolean atoms `bracket b`, possibly over bound naturals and
/// booleans. Scoped in `ctx`.
pub fn classical_formula(r: &mut ChaCha8Rng, ctx: &mut Vec<Ty>, depth: usize) -> Term {
    let atom = |r: &mut ChaCha8Rng, ctx: &mut Vec<Ty>| {
        let b = TermGen { r, consts: true }.term(ctx, &Ty::Bool, 2);
        Term::app(Term::constant("bracket"), b)
    };
    if depth == 0 {
        return match r.gen_range(0..3) {
            0 => Term::UnitTy,
            1 => Term::VoidTy,
            _ => atom(r, ctx),
        };
    }
    let d = depth - 1;
    match r.gen_range(0..6) {
        0 => atom(r, ctx),
        1 => Term::product(classical_formula(r, ctx, d), classical_formula(r, ctx, d)),
        2 => {
            let dom = if r.gen_bool(0.5) {
                gen_ty(r, 1).term()
            } else {
                classical_formula(r, ctx, d)
            };
            Term::arrow(dom, classical_formula(r, ctx, d))
        }
        3 | 4 => {
            let v = if r.gen_bool(0.5) { Ty::Nat } else { Ty::Bool };
            let dom = v.term();
            ctx.push(v);
            let body = classical_formula(r, ctx, d);
            ctx.pop();
            Term::pi(dom, body)
        }
        _ => {
            if r.gen_bool(0.5) {
                Term::UnitTy
            } else {
                Term::VoidTy
            }
        }
    }
}
