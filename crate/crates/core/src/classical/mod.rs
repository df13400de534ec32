//! Stability certificates, the hint database, and classical proof emitters.
//!
//! The engine here is untrusted: every certificate it returns has already
//! been re-checked by the kernel at `¬¬φ → φ`.

pub mod rules;

use std::fmt;

use thiserror::Error;

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::env::GlobalEnv;
use crate::eval::{self, Fuel};
use crate::syntax::HintKind;
use crate::term::{Builder, Level, Name, Term};
use crate::typing::{fuel_diag, Checker, Context};

pub use rules::{dn_combinator, emit_rule, DnKind, RuleKind};

/// `A -> Void`.
pub fn neg(t: Term) -> Term {
    Term::not(t)
}

/// `(A -> Void) -> Void`.
pub fn nn(t: Term) -> Term {
    neg(neg(t))
}

/// `¬¬φ → φ`.
pub fn stability_type(phi: &Term) -> Term {
    Term::arrow(nn(phi.clone()), phi.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCertificate {
    pub target: Term,
    /// Checks at [`stability_type`] of `target`.
    pub witness: Term,
}

/// A registered lemma, pre-digested into a telescope and a conclusion
/// `head args` scoped in that telescope.
#[derive(Debug, Clone, PartialEq)]
pub struct Hint {
    pub name: Name,
    pub kind: HintKind,
    pub telescope: Vec<Term>,
    pub head: Name,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HintDb {
    stable: Vec<Hint>,
    decidable: Vec<Hint>,
}

impl HintDb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stable_hints(&self) -> &[Hint] {
        &self.stable
    }

    pub fn decidable_hints(&self) -> &[Hint] {
        &self.decidable
    }

    pub fn len(&self) -> usize {
        self.stable.len() + self.decidable.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Validates the shape of `name`'s type and appends it.
    pub fn register(
        &self,
        env: &GlobalEnv,
        name: &str,
        kind: HintKind,
        fuel: u64,
    ) -> Result<HintDb, Diagnostic> {
        let def = env
            .get(name)
            .ok_or_else(|| Diagnostic::new(DiagCode::Scope, format!("unknown constant `{name}`")))?;
        let hint = hint_shape(env, name, &def.ty, kind, fuel)?.ok_or_else(|| {
            let shape = match kind {
                HintKind::Stable => "Pi ..., dn (h args) -> h args",
                HintKind::Decidable => "Pi ..., Sum(h args, neg (h args))",
            };
            let mut d = Diagnostic::new(
                DiagCode::Mismatch,
                format!("`{name}` cannot be used as a {kind} hint: its type is not of shape {shape}"),
            );
            d.actual = Some(def.ty.clone());
            d
        })?;
        let mut db = self.clone();
        match kind {
            HintKind::Stable => db.stable.push(hint),
            HintKind::Decidable => db.decidable.push(hint),
        }
        Ok(db)
    }
}

/// Replaces the head constant of an application spine by its body.
fn unfold_head(env: &GlobalEnv, t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    let Term::Const(n) = head else { return None };
    let body = env.body(n)?.clone();
    Some(Term::apps(body, args.into_iter().cloned()))
}

fn const_head(t: &Term) -> Option<(Name, Vec<Term>)> {
    let (head, args) = t.spine();
    match head {
        Term::Const(n) => Some((n.clone(), args.into_iter().cloned().collect())),
        _ => None,
    }
}

const MAX_UNFOLD: usize = 256;

fn hint_shape(
    env: &GlobalEnv,
    name: &str,
    ty: &Term,
    kind: HintKind,
    fuel: u64,
) -> Result<Option<Hint>, Diagnostic> {
    let ck = Checker::with_fuel(env, fuel);
    let keep = |t: &Term| {
        eval::whnf_keep_head(env, t, &mut Fuel::new(fuel)).map_err(|e| fuel_diag(e, fuel))
    };
    let mut telescope = Vec::new();
    let mut t = ty.clone();
    for _ in 0..MAX_UNFOLD {
        let w = keep(&t)?;
        match (&w, kind) {
            (Term::Pi(d, c), HintKind::Stable) if !c.mentions(0) => {
                let concl = keep(&c.shift(0, -1).expect("unused binder"))?;
                if let Some((head, args)) = const_head(&concl) {
                    if ck.normalize(d)? == ck.normalize(&nn(concl.clone()))? {
                        return Ok(Some(Hint { name: name.into(), kind, telescope, head, args }));
                    }
                }
            }
            (Term::Sum(l, r), HintKind::Decidable) => {
                let l = keep(l)?;
                if let Some((head, args)) = const_head(&l) {
                    if ck.normalize(r)? == ck.normalize(&neg(l.clone()))? {
                        return Ok(Some(Hint { name: name.into(), kind, telescope, head, args }));
                    }
                }
            }
            _ => {}
        }
        if let Term::Pi(d, c) = &w {
            telescope.push((**d).clone());
            t = (**c).clone();
            continue;
        }
        match unfold_head(env, &w) {
            Some(u) => t = u,
            None => return Ok(None),
        }
    }
    Ok(None)
}

/// Why a formula was not certified.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("not stable at {path}: {reason}")]
    NotStable {
        /// Dotted position of the offending subformula, e.g. `root.cod.fst`.
        path: String,
        reason: String,
        /// The offending subformula, scoped in the context of the binders crossed.
        subformula: Term,
    },
    #[error("{0}")]
    Kernel(Diagnostic),
}

impl From<Diagnostic> for StabilityError {
    fn from(d: Diagnostic) -> Self {
        StabilityError::Kernel(d)
    }
}

impl StabilityError {
    pub fn into_diagnostic(self) -> Diagnostic {
        match self {
            StabilityError::Kernel(d) => d,
            e @ StabilityError::NotStable { .. } => {
                let StabilityError::NotStable { ref subformula, .. } = e else { unreachable!() };
                let mut d = Diagnostic::new(DiagCode::NotStable, e.to_string());
                d.actual = Some(subformula.clone());
                d
            }
        }
    }
}

/// Path through a formula, printed dotted from `root`.
#[derive(Debug, Clone, Default)]
struct Path(Vec<String>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

struct Engine<'a> {
    env: &'a GlobalEnv,
    db: &'a HintDb,
    fuel: u64,
}

const MAX_HINT_DEPTH: usize = 32;

fn levels(n: usize) -> Vec<Level> {
    (0..n).map(Level).collect()
}

impl<'a> Engine<'a> {
    fn ck(&self) -> Checker<'a> {
        Checker::with_fuel(self.env, self.fuel)
    }

    fn whnf(&self, t: &Term) -> Result<Term, Diagnostic> {
        self.ck().whnf(t)
    }

    fn keep(&self, t: &Term) -> Result<Term, Diagnostic> {
        eval::whnf_keep_head(self.env, t, &mut Fuel::new(self.fuel))
            .map_err(|e| fuel_diag(e, self.fuel))
    }

    fn refuse(&self, path: &Path, reason: &str, t: &Term) -> StabilityError {
        StabilityError::NotStable {
            path: path.to_string(),
            reason: reason.to_string(),
            subformula: t.clone(),
        }
    }

    /// `Some(ψ)` when `t` is, up to weak head reduction, `¬¬ψ`.
    fn dn_body(&self, t: &Term) -> Result<Option<Term>, Diagnostic> {
        let Term::Pi(p, c) = self.whnf(t)? else { return Ok(None) };
        if *c != Term::VoidTy {
            return Ok(None);
        }
        let Term::Pi(psi, c2) = self.whnf(&p)? else { return Ok(None) };
        if *c2 != Term::VoidTy {
            return Ok(None);
        }
        Ok(Some((*psi).clone()))
    }

    /// Witness of `¬¬t → t` for `t` scoped in a context of length `n`.
    fn prove(&self, phi: &Term, n: usize, path: &mut Path, depth: usize) -> Result<Term, StabilityError> {
        let mut t = phi.clone();
        for _ in 0..MAX_UNFOLD {
            if let Some(psi) = self.dn_body(&t)? {
                return Ok(join_witness(n, &t, &psi));
            }
            let w = self.keep(&t)?;
            if let Some((head, args)) = const_head(&w) {
                if depth < MAX_HINT_DEPTH {
                    for hint in self.db.stable.iter().chain(&self.db.decidable) {
                        if hint.head == head {
                            if let Some(wit) = self.try_hint(hint, &w, &args, n, path, depth)? {
                                return Ok(wit);
                            }
                        }
                    }
                }
                match unfold_head(self.env, &w) {
                    Some(u) => {
                        t = u;
                        continue;
                    }
                    None => {
                        return Err(self.refuse(path, &format!("no stability hint for `{head}`"), &w))
                    }
                }
            }
            return self.structural(&w, n, path, depth);
        }
        Err(self.refuse(path, "unfolding limit reached", &t))
    }

    fn structural(&self, w: &Term, n: usize, path: &mut Path, depth: usize) -> Result<Term, StabilityError> {
        let mut b = Builder::new(n);
        match w {
            Term::UnitTy => Ok(b.lam(nn(Term::UnitTy), |_, _| Term::UnitVal)),
            Term::VoidTy => Ok(b.lam(nn(Term::VoidTy), |b, k| {
                let id = b.lam(Term::VoidTy, |b, x| b.var(x));
                Term::app(b.var(k), id)
            })),
            Term::Pi(a, cod) => {
                path.0.push("cod".into());
                let wc = self.prove(cod, n + 1, path, depth)?;
                path.0.pop();
                Ok(pi_witness(n, w, a, cod, &wc))
            }
            Term::Sigma(a, s) if !s.mentions(0) => {
                let s = s.shift(0, -1).expect("unused binder");
                path.0.push("fst".into());
                let wa = self.prove(a, n, path, depth)?;
                path.0.pop();
                path.0.push("snd".into());
                let ws = self.prove(&s, n, path, depth)?;
                path.0.pop();
                Ok(product_witness(n, a, &s, &wa, &ws))
            }
            Term::Sigma(..) => Err(self.refuse(path, "constructive existential (dependent pair)", w)),
            Term::Sum(..) => Err(self.refuse(path, "constructive disjunction (Sum)", w)),
            Term::BoolElim { motive, scrutinee, if_true, if_false } => {
                match self.ck().normalize(scrutinee)? {
                    Term::TT => {
                        path.0.push("then".into());
                        let r = self.prove(if_true, n, path, depth);
                        path.0.pop();
                        r
                    }
                    Term::FF => {
                        path.0.push("else".into());
                        let r = self.prove(if_false, n, path, depth);
                        path.0.pop();
                        r
                    }
                    _ => {
                        path.0.push("then".into());
                        let wt = self.prove(if_true, n, path, depth)?;
                        path.0.pop();
                        path.0.push("else".into());
                        let wf = self.prove(if_false, n, path, depth)?;
                        path.0.pop();
                        let inner = Term::bool_elim(
                            motive.shifted(1, 1),
                            Term::Var(0),
                            if_true.shifted(0, 1),
                            if_false.shifted(0, 1),
                        );
                        Ok(Term::bool_elim(stability_type(&inner), (**scrutinee).clone(), wt, wf))
                    }
                }
            }
            _ => Err(self.refuse(path, "not a recognised stable form", w)),
        }
    }

    fn try_hint(
        &self,
        hint: &Hint,
        goal: &Term,
        args: &[Term],
        n: usize,
        path: &mut Path,
        depth: usize,
    ) -> Result<Option<Term>, StabilityError> {
        if hint.args.len() != args.len() {
            return Ok(None);
        }
        let k = hint.telescope.len();
        let mut sigma: Vec<Option<Term>> = vec![None; k];
        for (p, g) in hint.args.iter().zip(args) {
            if !matches(p, g, 0, k, &mut sigma) {
                return Ok(None);
            }
        }
        // Fill the remaining telescope entries with stability proofs.
        let mut vals = Vec::with_capacity(k);
        for j in 0..k {
            if let Some(v) = &sigma[j] {
                vals.push(v.clone());
                continue;
            }
            let ty = close(&hint.telescope[j], &vals);
            let Term::Pi(d, c) = self.whnf(&ty)? else { return Ok(None) };
            if c.mentions(0) {
                return Ok(None);
            }
            let x = c.shift(0, -1).expect("unused binder");
            if self.ck().normalize(&d)? != self.ck().normalize(&nn(x.clone()))? {
                return Ok(None);
            }
            path.0.push(format!("{}#{}", hint.name, j));
            let r = self.prove(&x, n, path, depth + 1);
            path.0.pop();
            match r {
                Ok(w) => vals.push(w),
                Err(StabilityError::NotStable { .. }) => return Ok(None),
                Err(e) => return Err(e),
            }
        }
        let applied = Term::apps(Term::Const(hint.name.clone()), vals);
        Ok(Some(match hint.kind {
            HintKind::Stable => applied,
            HintKind::Decidable => dec_witness(n, goal, &applied),
        }))
    }
}

/// First-order matching of a hint pattern (scoped in a telescope of length
/// `k`, under `d` local binders) against a goal term.
fn matches(p: &Term, g: &Term, d: usize, k: usize, sigma: &mut [Option<Term>]) -> bool {
    if let Term::Var(i) = p {
        if *i < d {
            return g == p;
        }
        let j = k - 1 - (i - d);
        // Fails when the goal mentions a binder local to the pattern.
        let Ok(v) = g.shift(0, -(d as isize)) else { return false };
        return match &sigma[j] {
            Some(prev) => *prev == v,
            None => {
                sigma[j] = Some(v);
                true
            }
        };
    }
    if std::mem::discriminant(p) != std::mem::discriminant(g) {
        return false;
    }
    let (pk, gk) = (p.children(), g.children());
    if pk.is_empty() {
        return p == g;
    }
    pk.iter()
        .zip(gk.iter())
        .all(|((pc, b), (gc, _))| matches(pc, gc, d + b, k, sigma))
}

/// Instantiates a closed telescope entry (scoped in `vals.len()` binders)
/// with values from the ambient context.
fn close(t: &Term, vals: &[Term]) -> Term {
    let m = vals.len();
    let r: Result<Term, crate::term::NegativeIndex> = t.map_vars(0, &mut |d, i| {
        Ok(if i < d { Term::Var(i) } else { vals[m - 1 - (i - d)].shifted(0, d) })
    });
    r.expect("closing is total")
}

/// `λx:¬¬φ. λk:¬ψ. x (λf:φ. f k)` where `φ ≡ ¬¬ψ`.
fn join_witness(n: usize, phi: &Term, psi: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(nn(phi.clone()), |b, x| {
        b.lam(neg(b.lift(psi)), |b, k| {
            let inner = b.lam(b.lift(phi), |b, f| Term::app(b.var(f), b.var(k)));
            Term::app(b.var(x), inner)
        })
    })
}

/// `λk. λx:A. W (λnb. k (λf. nb (f x)))`.
fn pi_witness(n: usize, pi: &Term, a: &Term, cod: &Term, wc: &Term) -> Term {
    let mut b = Builder::new(n);
    let lv = levels(n);
    b.lam(nn(pi.clone()), |b, k| {
        b.lam(b.lift(a), |b, x| {
            let mut ls = lv.clone();
            ls.push(x);
            let w = b.embed(wc, &ls);
            let c = b.embed(cod, &ls);
            let inner = b.lam(neg(c), |b, nb| {
                let g = b.lam(b.lift(pi), |b, f| {
                    Term::app(b.var(nb), Term::app(b.var(f), b.var(x)))
                });
                Term::app(b.var(k), g)
            });
            Term::app(w, inner)
        })
    })
}

fn proj(b: &mut Builder, p: Level, a: &Term, s: &Term, first: bool) -> Term {
    let motive = b.under(|b, _| b.lift(if first { a } else { s }));
    let branch = b.under2(|b, x, y| b.var(if first { x } else { y }));
    Term::sig_elim(motive, b.var(p), branch)
}

/// Componentwise witness for a non-dependent pair type.
fn product_witness(n: usize, a: &Term, s: &Term, wa: &Term, ws: &Term) -> Term {
    let prod = Term::product(a.clone(), s.clone());
    let mut b = Builder::new(n);
    b.lam(nn(prod.clone()), |b, k| {
        let component = |b: &mut Builder, first: bool| {
            let (ty, w) = if first { (a, wa) } else { (s, ws) };
            let arg = b.lam(neg(b.lift(ty)), |b, nc| {
                let g = b.lam(b.lift(&prod), |b, p| {
                    let pr = proj(b, p, a, s, first);
                    Term::app(b.var(nc), pr)
                });
                Term::app(b.var(k), g)
            });
            Term::app(b.lift(w), arg)
        };
        let l = component(b, true);
        let r = component(b, false);
        Term::pair(l, r, b.lift(&prod))
    })
}

/// `λk. elimS(_. φ, d, a. a, na. elimV(_. φ, k na))`.
fn dec_witness(n: usize, phi: &Term, d: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(nn(phi.clone()), |b, k| {
        let motive = b.under(|b, _| b.lift(phi));
        let left = b.under(|b, a| b.var(a));
        let right = b.under(|b, na| {
            let m = b.under(|b, _| b.lift(phi));
            Term::void_elim(m, Term::app(b.var(k), b.var(na)))
        });
        Term::sum_elim(motive, b.lift(d), left, right)
    })
}

/// Certifies `¬¬φ → φ` for `φ` in `ctx`, or explains why not.
pub fn prove_stable(
    env: &GlobalEnv,
    db: &HintDb,
    ctx: &Context,
    phi: &Term,
    fuel: u64,
) -> Result<StabilityCertificate, StabilityError> {
    let ck = Checker::with_fuel(env, fuel);
    ck.sort_of(ctx, phi)?;
    let engine = Engine { env, db, fuel };
    let witness = engine.prove(phi, ctx.len(), &mut Path::default(), 0)?;
    ck.check(ctx, &witness, &stability_type(phi)).map_err(|d| {
        StabilityError::Kernel(d.with_context("internal error: stability certificate rejected"))
    })?;
    Ok(StabilityCertificate { target: phi.clone(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s, "t").unwrap()
    }

    fn stable(env: &GlobalEnv, db: &HintDb, s: &str) -> Result<StabilityCertificate, StabilityError> {
        prove_stable(env, db, &Context::new(), &p(s), eval::DEFAULT_FUEL)
    }

    #[test]
    fn void_certificate_is_the_expected_term() {
        let env = GlobalEnv::new();
        let c = stable(&env, &HintDb::new(), "Void").unwrap();
        let expected = p("fun (k : (Void -> Void) -> Void) => k (fun (x : Void) => x)");
        assert_eq!(c.witness, expected);
    }

    #[test]
    fn structural_fragment() {
        let env = GlobalEnv::new();
        let db = HintDb::new();
        for s in [
            "Unit",
            "Nat -> Void",
            "Sig (_ : Unit), Void -> Unit",
            "Pi (n : Nat), elimB (_. Type0, elimN (_. Bool, n, true, m r. false), Unit, Void)",
            "Pi (A : Type0), (A -> Void) -> Void",
            "elimB (_. Type0, true, Unit, Sum(Unit, Unit))",
        ] {
            stable(&env, &db, s).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
    }

    #[test]
    fn constructive_heads_are_refused_with_paths() {
        let env = GlobalEnv::new();
        let db = HintDb::new();
        let cases = [
            ("Sum(Unit, Void)", "root"),
            ("Nat -> Sum(Unit, Void)", "root.cod"),
            ("Sig (_ : Unit), Sig (n : Nat), elimN (_. Type0, n, Unit, m r. Void)", "root.snd"),
            ("Sig (_ : Unit), Sig (n : Nat), Unit", "root.snd.fst"),
            ("Pi (A : Type0), Sum(A, A -> Void)", "root.cod"),
        ];
        for (s, want) in cases {
            match stable(&env, &db, s) {
                Err(StabilityError::NotStable { path, .. }) => assert_eq!(path, want, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn double_negation_head_uses_join() {
        let env = GlobalEnv::new();
        let c = stable(&env, &HintDb::new(), "(Sum(Unit, Nat) -> Void) -> Void").unwrap();
        assert!(matches!(c.witness, Term::Lam(..)));
    }

    #[test]
    fn hint_registration_validates_shape() {
        let mut env = GlobalEnv::new();
        let ck = Checker::new(&env);
        env = ck
            .define("P", crate::DefKind::Statement, &p("Nat -> Type0"), None)
            .unwrap();
        let ck = Checker::new(&env);
        env = ck
            .define(
                "P_stable",
                crate::DefKind::Statement,
                &p("Pi (n : Nat), ((P n -> Void) -> Void) -> P n"),
                None,
            )
            .unwrap();
        let ck = Checker::new(&env);
        env = ck.define("junk", crate::DefKind::Statement, &p("Nat -> Nat"), None).unwrap();
        let db = HintDb::new()
            .register(&env, "P_stable", HintKind::Stable, eval::DEFAULT_FUEL)
            .unwrap();
        let e = db.register(&env, "junk", HintKind::Stable, eval::DEFAULT_FUEL).unwrap_err();
        assert_eq!(e.code, DiagCode::Mismatch);
        stable(&env, &db, "Pi (m : Nat), P (succ m)").unwrap();
        assert!(matches!(
            stable(&env, &HintDb::new(), "P 0"),
            Err(StabilityError::NotStable { .. })
        ));
    }
}
