//! Type inference and checking.
//!
//! Inference is syntax-directed; the only place conversion enters is
//! [`Checker::check`], which decides convertibility up to cumulativity of
//! universes (`Type0 <= Type1 <= Type2`, covariant in Pi codomains).

use crate::diagnostic::{DiagCode, Diagnostic};
use crate::env::{DefKind, GlobalDef, GlobalEnv};
use crate::eval::{self, EvalError, Fuel, DEFAULT_FUEL};
use crate::term::Term;

/// Local typing context; the innermost entry is last. Each entry is scoped
/// in the entries before it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Context {
    entries: Vec<Term>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn extend(&self, ty: Term) -> Context {
        let mut c = self.clone();
        c.entries.push(ty);
        c
    }

    pub fn push(&mut self, ty: Term) {
        self.entries.push(ty);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    /// Type of `Var i`, moved into the full context.
    pub fn lookup(&self, i: usize) -> Option<Term> {
        let n = self.entries.len();
        (i < n).then(|| self.entries[n - 1 - i].shifted(0, i + 1))
    }

    pub fn entries(&self) -> &[Term] {
        &self.entries
    }
}

/// A type checker over a fixed environment. Every normalization it performs
/// gets a fresh budget of `fuel` steps.
#[derive(Debug, Clone)]
pub struct Checker<'a> {
    pub env: &'a GlobalEnv,
    pub fuel: u64,
}

pub(crate) fn fuel_diag(e: EvalError, limit: u64) -> Diagnostic {
    let EvalError::FuelExhausted { .. } = e;
    Diagnostic::new(DiagCode::Fuel, format!("reduction budget of {limit} steps exhausted"))
}

impl<'a> Checker<'a> {
    pub fn new(env: &'a GlobalEnv) -> Self {
        Checker { env, fuel: DEFAULT_FUEL }
    }

    pub fn with_fuel(env: &'a GlobalEnv, fuel: u64) -> Self {
        Checker { env, fuel }
    }

    pub fn normalize(&self, t: &Term) -> Result<Term, Diagnostic> {
        eval::normalize(self.env, t, &mut Fuel::new(self.fuel)).map_err(|e| fuel_diag(e, self.fuel))
    }

    pub fn whnf(&self, t: &Term) -> Result<Term, Diagnostic> {
        eval::whnf(self.env, t, &mut Fuel::new(self.fuel)).map_err(|e| fuel_diag(e, self.fuel))
    }

    pub fn infer(&self, ctx: &Context, t: &Term) -> Result<Term, Diagnostic> {
        let mut ctx = ctx.clone();
        self.infer_in(&mut ctx, t)
    }

    pub fn check(&self, ctx: &Context, t: &Term, ty: &Term) -> Result<(), Diagnostic> {
        let mut ctx = ctx.clone();
        self.check_in(&mut ctx, t, ty)
    }

    /// Universe level of a type.
    pub fn sort_of(&self, ctx: &Context, t: &Term) -> Result<u8, Diagnostic> {
        let mut ctx = ctx.clone();
        self.sort_in(&mut ctx, t)
    }

    fn under<R>(&self, ctx: &mut Context, tys: &[Term], f: impl FnOnce(&mut Context) -> R) -> R {
        for t in tys {
            ctx.push(t.clone());
        }
        let r = f(ctx);
        for _ in tys {
            ctx.pop();
        }
        r
    }

    fn sort_in(&self, ctx: &mut Context, t: &Term) -> Result<u8, Diagnostic> {
        let ty = self.infer_in(ctx, t)?;
        match self.whnf(&ty)? {
            Term::Univ(l) => Ok(l),
            _ => {
                let mut d = Diagnostic::new(DiagCode::Mismatch, "expected a type");
                d.actual = Some(self.normalize(&ty)?);
                Err(d)
            }
        }
    }

    /// Sort of a binder domain; `Type1` itself may not be abstracted over.
    fn domain_sort(&self, ctx: &mut Context, t: &Term) -> Result<u8, Diagnostic> {
        let l = self.sort_in(ctx, t)?;
        if l >= 2 {
            return Err(Diagnostic::new(
                DiagCode::Univ,
                format!("cannot quantify over `{t}`, whose type is Type2"),
            ));
        }
        Ok(l)
    }

    fn expect_whnf(&self, ty: &Term, what: &str) -> Result<Term, Diagnostic> {
        let w = self.whnf(ty)?;
        let ok = match what {
            "Pi" => matches!(w, Term::Pi(..)),
            "Sigma" => matches!(w, Term::Sigma(..)),
            _ => matches!(w, Term::Sum(..)),
        };
        if ok {
            Ok(w)
        } else {
            let mut d = Diagnostic::new(DiagCode::Mismatch, format!("expected a {what} type"));
            d.actual = Some(self.normalize(ty)?);
            Err(d)
        }
    }

    fn infer_in(&self, ctx: &mut Context, t: &Term) -> Result<Term, Diagnostic> {
        use Term::*;
        match t {
            Var(i) => ctx.lookup(*i).ok_or_else(|| {
                Diagnostic::new(DiagCode::Scope, format!("unbound variable #{i}"))
            }),
            Univ(l) if *l < 2 => Ok(Univ(l + 1)),
            Univ(_) => Err(Diagnostic::new(DiagCode::Univ, "Type2 has no type")),
            Pi(a, b) | Sigma(a, b) => {
                let la = self.domain_sort(ctx, a)?;
                let lb = self.under(ctx, &[(**a).clone()], |ctx| self.sort_in(ctx, b))?;
                Ok(Univ(la.max(lb)))
            }
            Sum(a, b) => {
                let la = self.sort_in(ctx, a)?;
                let lb = self.sort_in(ctx, b)?;
                Ok(Univ(la.max(lb)))
            }
            Lam(a, body) => {
                self.domain_sort(ctx, a)?;
                let b = self.under(ctx, &[(**a).clone()], |ctx| self.infer_in(ctx, body))?;
                Ok(Term::pi((**a).clone(), b))
            }
            App(f, x) => {
                let tf = self.infer_in(ctx, f)?;
                let Pi(a, b) = self.whnf(&tf)? else {
                    let mut d = Diagnostic::new(
                        DiagCode::NotFn,
                        format!("`{f}` is applied but its type is not a function type"),
                    );
                    d.actual = Some(self.normalize(&tf)?);
                    return Err(d);
                };
                self.check_in(ctx, x, &a)?;
                Ok(b.instantiate(x))
            }
            Pair { fst, snd, ty } => {
                self.sort_in(ctx, ty)?;
                let Sigma(a, b) = self.expect_whnf(ty, "Sigma")? else { unreachable!() };
                self.check_in(ctx, fst, &a)?;
                self.check_in(ctx, snd, &b.instantiate(fst))?;
                Ok((**ty).clone())
            }
            SigElim { motive, scrutinee, branch } => {
                let ts = self.infer_in(ctx, scrutinee)?;
                let sig = self.expect_whnf(&ts, "Sigma")?;
                let Sigma(a, b) = &sig else { unreachable!() };
                self.under(ctx, std::slice::from_ref(&sig), |ctx| self.sort_in(ctx, motive))?;
                let pair = Term::pair(Var(1), Var(0), sig.shifted(0, 2));
                let want = motive.instantiate_under(2, &pair);
                self.under(ctx, &[(**a).clone(), (**b).clone()], |ctx| {
                    self.check_in(ctx, branch, &want)
                })?;
                Ok(motive.instantiate(scrutinee))
            }
            Inl { payload, other } => {
                let a = self.infer_in(ctx, payload)?;
                self.sort_in(ctx, other)?;
                Ok(Term::sum(a, (**other).clone()))
            }
            Inr { payload, other } => {
                let b = self.infer_in(ctx, payload)?;
                self.sort_in(ctx, other)?;
                Ok(Term::sum((**other).clone(), b))
            }
            SumElim { motive, scrutinee, left, right } => {
                let ts = self.infer_in(ctx, scrutinee)?;
                let sum = self.expect_whnf(&ts, "Sum")?;
                let Sum(a, b) = &sum else { unreachable!() };
                self.under(ctx, std::slice::from_ref(&sum), |ctx| self.sort_in(ctx, motive))?;
                let wl = motive.instantiate_under(1, &Term::inl(Var(0), b.shifted(0, 1)));
                self.under(ctx, &[(**a).clone()], |ctx| self.check_in(ctx, left, &wl))?;
                let wr = motive.instantiate_under(1, &Term::inr(Var(0), a.shifted(0, 1)));
                self.under(ctx, &[(**b).clone()], |ctx| self.check_in(ctx, right, &wr))?;
                Ok(motive.instantiate(scrutinee))
            }
            UnitTy | VoidTy | BoolTy | NatTy => Ok(Univ(0)),
            UnitVal => Ok(UnitTy),
            TT | FF => Ok(BoolTy),
            Zero => Ok(NatTy),
            Succ(n) => {
                self.check_in(ctx, n, &NatTy)?;
                Ok(NatTy)
            }
            VoidElim { motive, scrutinee } => {
                self.check_in(ctx, scrutinee, &VoidTy)?;
                self.under(ctx, &[VoidTy], |ctx| self.sort_in(ctx, motive))?;
                Ok(motive.instantiate(scrutinee))
            }
            BoolElim { motive, scrutinee, if_true, if_false } => {
                self.check_in(ctx, scrutinee, &BoolTy)?;
                self.under(ctx, &[BoolTy], |ctx| self.sort_in(ctx, motive))?;
                self.check_in(ctx, if_true, &motive.instantiate(&TT))?;
                self.check_in(ctx, if_false, &motive.instantiate(&FF))?;
                Ok(motive.instantiate(scrutinee))
            }
            NatElim { motive, scrutinee, zero, succ } => {
                self.check_in(ctx, scrutinee, &NatTy)?;
                self.under(ctx, &[NatTy], |ctx| self.sort_in(ctx, motive))?;
                self.check_in(ctx, zero, &motive.instantiate(&Zero))?;
                let want = motive.instantiate_under(2, &Term::succ(Var(1)));
                self.under(ctx, &[NatTy, (**motive).clone()], |ctx| {
                    self.check_in(ctx, succ, &want)
                })?;
                Ok(motive.instantiate(scrutinee))
            }
            Const(n) => self.env.get(n).map(|d| d.ty.clone()).ok_or_else(|| {
                Diagnostic::new(DiagCode::Scope, format!("unknown constant `{n}`"))
            }),
        }
    }

    fn check_in(&self, ctx: &mut Context, t: &Term, ty: &Term) -> Result<(), Diagnostic> {
        let actual = self.infer_in(ctx, t)?;
        self.subtype(&actual, ty)
    }

    /// Succeeds iff `actual` converts to a subtype of `expected`.
    pub fn subtype(&self, actual: &Term, expected: &Term) -> Result<(), Diagnostic> {
        if actual == expected {
            return Ok(());
        }
        let mut fuel = Fuel::new(self.fuel);
        if eval::convertible_leq(self.env, actual, expected, &mut fuel)
            .map_err(|e| fuel_diag(e, self.fuel))?
        {
            return Ok(());
        }
        let a = self.normalize(actual)?;
        let e = self.normalize(expected)?;
        Err(Diagnostic::mismatch("type mismatch", e, a))
    }

    /// Checks `ty` is a type and `body`, if any, inhabits it; returns the
    /// extended environment.
    pub fn define(
        &self,
        name: &str,
        kind: DefKind,
        ty: &Term,
        body: Option<&Term>,
    ) -> Result<GlobalEnv, Diagnostic> {
        self.validate_definition(name, ty, body)?;
        Ok(self.env.push(GlobalDef {
            name: name.into(),
            ty: ty.clone(),
            body: body.cloned(),
            kind,
        }))
    }

    pub(crate) fn validate_definition(
        &self,
        name: &str,
        ty: &Term,
        body: Option<&Term>,
    ) -> Result<(), Diagnostic> {
        if self.env.contains(name) {
            return Err(Diagnostic::new(DiagCode::DupName, format!("`{name}` is already defined")));
        }
        for t in std::iter::once(ty).chain(body) {
            if !t.is_closed() {
                return Err(Diagnostic::new(DiagCode::Scope, "global definitions must be closed"));
            }
        }
        let ctx = Context::new();
        self.sort_of(&ctx, ty)?;
        if let Some(b) = body {
            self.check(&ctx, b, ty)?;
        }
        Ok(())
    }
}

pub fn infer(env: &GlobalEnv, ctx: &Context, t: &Term) -> Result<Term, Diagnostic> {
    Checker::new(env).infer(ctx, t)
}

pub fn check(env: &GlobalEnv, ctx: &Context, t: &Term, ty: &Term) -> Result<(), Diagnostic> {
    Checker::new(env).check(ctx, t, ty)
}

/// Checks and appends a definition.
pub fn define_global(
    env: &GlobalEnv,
    name: &str,
    ty: &Term,
    body: &Term,
) -> Result<GlobalEnv, Diagnostic> {
    Checker::new(env).define(name, DefKind::Definition, ty, Some(body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s, "t").unwrap()
    }

    fn ty_of(env: &GlobalEnv, s: &str) -> Result<Term, Diagnostic> {
        infer(env, &Context::new(), &p(s))
    }

    #[test]
    fn identity_on_a_proposition() {
        let env = GlobalEnv::new();
        let ctx = Context::new().extend(Term::Univ(0));
        let t = infer(&env, &ctx, &Term::lam(Term::Var(0), Term::Var(0))).unwrap();
        assert_eq!(t, Term::pi(Term::Var(0), Term::Var(1)));
    }

    #[test]
    fn universes() {
        let env = GlobalEnv::new();
        assert_eq!(ty_of(&env, "Type0").unwrap(), Term::Univ(1));
        assert_eq!(ty_of(&env, "Type2").unwrap_err().code, DiagCode::Univ);
        assert_eq!(ty_of(&env, "Pi (A : Type0), A").unwrap(), Term::Univ(1));
        assert_eq!(ty_of(&env, "Pi (A : Type1), A").unwrap_err().code, DiagCode::Univ);
        assert_eq!(ty_of(&env, "Nat -> Type1").unwrap(), Term::Univ(2));
    }

    #[test]
    fn constant_motive_recursion() {
        let env = GlobalEnv::new();
        assert_eq!(ty_of(&env, "elimN (n. Bool, 1, true, n ih. ih)").unwrap(), Term::BoolTy);
    }

    #[test]
    fn check_identity_and_mismatch() {
        let env = GlobalEnv::new();
        let ctx = Context::new();
        let id_void = Term::lam(Term::VoidTy, Term::Var(0));
        check(&env, &ctx, &id_void, &Term::arrow(Term::VoidTy, Term::VoidTy)).unwrap();
        let ctx2 = Context::new().extend(Term::Univ(0)).extend(Term::Univ(0));
        let e = check(&env, &ctx2, &Term::lam(Term::Var(1), Term::Var(0)), &Term::arrow(Term::Var(1), Term::Var(0)))
            .unwrap_err();
        assert_eq!(e.code, DiagCode::Mismatch);
        assert!(e.expected.is_some() && e.actual.is_some());
    }

    #[test]
    fn cumulativity() {
        let env = GlobalEnv::new();
        check(&env, &Context::new(), &Term::BoolTy, &Term::Univ(1)).unwrap();
        check(&env, &Context::new(), &Term::lam(Term::BoolTy, Term::NatTy), &p("Bool -> Type1")).unwrap();
        assert!(check(&env, &Context::new(), &Term::Univ(1), &Term::Univ(1)).is_err());
    }

    #[test]
    fn not_a_function() {
        let env = GlobalEnv::new();
        assert_eq!(ty_of(&env, "true false").unwrap_err().code, DiagCode::NotFn);
    }

    #[test]
    fn dependent_eliminators() {
        let env = GlobalEnv::new();
        ty_of(&env, "fun (p : Sig (b : Bool), elimB (_. Type0, b, Nat, Unit)) => elimSig (_. Bool, p, x y. x)")
            .unwrap();
        ty_of(&env, "fun (b : Bool) => elimB (c. elimB (_. Type0, c, Nat, Unit), b, 0, unit)").unwrap();
        ty_of(&env, "fun (s : Sum(Bool, Nat)) => elimS (_. Nat, s, b. 0, n. n)").unwrap();
        ty_of(&env, "fun (v : Void) => elimV (_. Nat, v)").unwrap();
        ty_of(&env, "pair (true, unit : Sig (b : Bool), elimB (_. Type0, b, Unit, Void))").unwrap();
        let e = ty_of(&env, "pair (false, unit : Sig (b : Bool), elimB (_. Type0, b, Unit, Void))")
            .unwrap_err();
        assert_eq!(e.code, DiagCode::Mismatch);
    }

    #[test]
    fn define_and_duplicate() {
        let env = GlobalEnv::new();
        let neg_ty = p("Type0 -> Type0");
        let neg = p("fun (A : Type0) => A -> Void");
        let env = define_global(&env, "neg", &neg_ty, &neg).unwrap();
        assert_eq!(env.len(), 1);
        let e = define_global(&env, "neg", &neg_ty, &neg).unwrap_err();
        assert_eq!(e.code, DiagCode::DupName);
        assert_eq!(ty_of(&env, "nope").unwrap_err().code, DiagCode::Scope);
    }
}
