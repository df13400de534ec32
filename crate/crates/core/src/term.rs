//! Abstract syntax shared by programs and propositions.
//!
//! Binding is nameless: `Var(0)` refers to the innermost enclosing binder.
//! Every binder position is listed in [`Term::children`] together with the
//! number of variables it brings into scope, and all structural traversals
//! (shifting, substitution, scope validation) are driven from that table.

use std::sync::Arc;

use thiserror::Error;

/// Global identifier.
pub type Name = Arc<str>;

/// A term of the calculus. Types are terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    /// `Type0`, `Type1`, `Type2`.
    Univ(u8),
    /// Dependent function type; the codomain binds one variable.
    Pi(Arc<Term>, Arc<Term>),
    /// Annotated lambda; the body binds one variable.
    Lam(Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// Dependent pair type; the second component binds one variable.
    Sigma(Arc<Term>, Arc<Term>),
    Pair {
        fst: Arc<Term>,
        snd: Arc<Term>,
        /// The intended `Sigma` type.
        ty: Arc<Term>,
    },
    SigElim {
        /// Binds the scrutinee.
        motive: Arc<Term>,
        scrutinee: Arc<Term>,
        /// Binds the two pair components.
        branch: Arc<Term>,
    },
    Sum(Arc<Term>, Arc<Term>),
    /// Left injection; `other` is the type of the right summand.
    Inl {
        payload: Arc<Term>,
        other: Arc<Term>,
    },
    /// Right injection; `other` is the type of the left summand.
    Inr {
        payload: Arc<Term>,
        other: Arc<Term>,
    },
    SumElim {
        motive: Arc<Term>,
        scrutinee: Arc<Term>,
        left: Arc<Term>,
        right: Arc<Term>,
    },
    UnitTy,
    UnitVal,
    VoidTy,
    VoidElim {
        motive: Arc<Term>,
        scrutinee: Arc<Term>,
    },
    BoolTy,
    TT,
    FF,
    BoolElim {
        motive: Arc<Term>,
        scrutinee: Arc<Term>,
        if_true: Arc<Term>,
        if_false: Arc<Term>,
    },
    NatTy,
    Zero,
    Succ(Arc<Term>),
    NatElim {
        motive: Arc<Term>,
        scrutinee: Arc<Term>,
        zero: Arc<Term>,
        /// Binds the predecessor (`Var 1`) and the inductive hypothesis (`Var 0`).
        succ: Arc<Term>,
    },
    Const(Name),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("downward shift over a variable that occurs")]
pub struct NegativeIndex;

fn a(t: Term) -> Arc<Term> {
    Arc::new(t)
}

impl Term {
    pub fn pi(dom: Term, cod: Term) -> Term {
        Term::Pi(a(dom), a(cod))
    }

    /// Non-dependent function type; `cod` lives in the same context as `dom`.
    pub fn arrow(dom: Term, cod: Term) -> Term {
        let cod = cod.shifted(0, 1);
        Term::pi(dom, cod)
    }

    pub fn lam(ann: Term, body: Term) -> Term {
        Term::Lam(a(ann), a(body))
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::App(a(f), a(x))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn sigma(first: Term, second: Term) -> Term {
        Term::Sigma(a(first), a(second))
    }

    /// Non-dependent pair type.
    pub fn product(left: Term, right: Term) -> Term {
        let right = right.shifted(0, 1);
        Term::sigma(left, right)
    }

    pub fn pair(fst: Term, snd: Term, ty: Term) -> Term {
        Term::Pair { fst: a(fst), snd: a(snd), ty: a(ty) }
    }

    pub fn sig_elim(motive: Term, scrutinee: Term, branch: Term) -> Term {
        Term::SigElim { motive: a(motive), scrutinee: a(scrutinee), branch: a(branch) }
    }

    pub fn sum(l: Term, r: Term) -> Term {
        Term::Sum(a(l), a(r))
    }

    pub fn inl(payload: Term, other: Term) -> Term {
        Term::Inl { payload: a(payload), other: a(other) }
    }

    pub fn inr(payload: Term, other: Term) -> Term {
        Term::Inr { payload: a(payload), other: a(other) }
    }

    pub fn sum_elim(motive: Term, scrutinee: Term, left: Term, right: Term) -> Term {
        Term::SumElim { motive: a(motive), scrutinee: a(scrutinee), left: a(left), right: a(right) }
    }

    pub fn void_elim(motive: Term, scrutinee: Term) -> Term {
        Term::VoidElim { motive: a(motive), scrutinee: a(scrutinee) }
    }

    pub fn bool_elim(motive: Term, scrutinee: Term, if_true: Term, if_false: Term) -> Term {
        Term::BoolElim {
            motive: a(motive),
            scrutinee: a(scrutinee),
            if_true: a(if_true),
            if_false: a(if_false),
        }
    }

    pub fn succ(pred: Term) -> Term {
        Term::Succ(a(pred))
    }

    pub fn nat_elim(motive: Term, scrutinee: Term, zero: Term, succ: Term) -> Term {
        Term::NatElim { motive: a(motive), scrutinee: a(scrutinee), zero: a(zero), succ: a(succ) }
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Name::from(name))
    }

    /// `succ^n zero`.
    pub fn nat(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    /// `¬A`, spelled out as `A -> Void`.
    pub fn not(t: Term) -> Term {
        Term::arrow(t, Term::VoidTy)
    }

    /// Immediate subterms, each paired with the number of variables bound
    /// around it. Order is field order and defines left-to-right traversal.
    pub fn children(&self) -> Vec<(&Arc<Term>, usize)> {
        use Term::*;
        match self {
            Var(_) | Univ(_) | UnitTy | UnitVal | VoidTy | BoolTy | TT | FF | NatTy | Zero
            | Const(_) => Vec::new(),
            Pi(x, y) | Lam(x, y) | Sigma(x, y) => vec![(x, 0), (y, 1)],
            App(x, y) | Sum(x, y) => vec![(x, 0), (y, 0)],
            Pair { fst, snd, ty } => vec![(fst, 0), (snd, 0), (ty, 0)],
            SigElim { motive, scrutinee, branch } => {
                vec![(motive, 1), (scrutinee, 0), (branch, 2)]
            }
            Inl { payload, other } | Inr { payload, other } => vec![(payload, 0), (other, 0)],
            SumElim { motive, scrutinee, left, right } => {
                vec![(motive, 1), (scrutinee, 0), (left, 1), (right, 1)]
            }
            VoidElim { motive, scrutinee } => vec![(motive, 1), (scrutinee, 0)],
            BoolElim { motive, scrutinee, if_true, if_false } => {
                vec![(motive, 1), (scrutinee, 0), (if_true, 0), (if_false, 0)]
            }
            Succ(p) => vec![(p, 0)],
            NatElim { motive, scrutinee, zero, succ } => {
                vec![(motive, 1), (scrutinee, 0), (zero, 0), (succ, 2)]
            }
        }
    }

    /// Rebuilds this node with new children, in [`Term::children`] order.
    ///
    /// Panics if the number of children does not match.
    pub fn rebuild(&self, kids: Vec<Arc<Term>>) -> Term {
        use Term::*;
        let mut it = kids.into_iter();
        let mut next = || it.next().expect("rebuild: too few children");
        match self {
            Var(_) | Univ(_) | UnitTy | UnitVal | VoidTy | BoolTy | TT | FF | NatTy | Zero
            | Const(_) => self.clone(),
            Pi(..) => Pi(next(), next()),
            Lam(..) => Lam(next(), next()),
            Sigma(..) => Sigma(next(), next()),
            App(..) => App(next(), next()),
            Sum(..) => Sum(next(), next()),
            Pair { .. } => Pair { fst: next(), snd: next(), ty: next() },
            SigElim { .. } => SigElim { motive: next(), scrutinee: next(), branch: next() },
            Inl { .. } => Inl { payload: next(), other: next() },
            Inr { .. } => Inr { payload: next(), other: next() },
            SumElim { .. } => {
                SumElim { motive: next(), scrutinee: next(), left: next(), right: next() }
            }
            VoidElim { .. } => VoidElim { motive: next(), scrutinee: next() },
            BoolElim { .. } => BoolElim {
                motive: next(),
                scrutinee: next(),
                if_true: next(),
                if_false: next(),
            },
            Succ(_) => Succ(next()),
            NatElim { .. } => {
                NatElim { motive: next(), scrutinee: next(), zero: next(), succ: next() }
            }
        }
    }

    /// Replaces child `i` (in [`Term::children`] order).
    pub fn with_child(&self, i: usize, new: Arc<Term>) -> Term {
        let mut kids: Vec<Arc<Term>> = self.children().into_iter().map(|(c, _)| c.clone()).collect();
        kids[i] = new;
        self.rebuild(kids)
    }

    /// Rewrites every variable occurrence. `f` receives the number of binders
    /// crossed so far and the raw index.
    pub fn map_vars<E>(
        &self,
        depth: usize,
        f: &mut impl FnMut(usize, usize) -> Result<Term, E>,
    ) -> Result<Term, E> {
        if let Term::Var(i) = self {
            return f(depth, *i);
        }
        let kids = self.children();
        if kids.is_empty() {
            return Ok(self.clone());
        }
        let mut new = Vec::with_capacity(kids.len());
        for (c, b) in kids {
            new.push(Arc::new(c.map_vars(depth + b, f)?));
        }
        Ok(self.rebuild(new))
    }

    fn any_var(&self, depth: usize, f: &mut impl FnMut(usize, usize) -> bool) -> bool {
        if let Term::Var(i) = self {
            return f(depth, *i);
        }
        self.children().into_iter().any(|(c, b)| c.any_var(depth + b, f))
    }

    /// Displaces free variables with index `>= cutoff` by `amount`. A
    /// downward shift fails if any of the variables it would remove occurs.
    pub fn shift(&self, cutoff: usize, amount: isize) -> Result<Term, NegativeIndex> {
        if amount == 0 {
            return Ok(self.clone());
        }
        self.map_vars(0, &mut |depth, i| {
            if i >= cutoff + depth {
                let j = i as isize + amount;
                // A downward shift must not move a variable into the cutoff.
                if j < (cutoff + depth) as isize {
                    Err(NegativeIndex)
                } else {
                    Ok(Term::Var(j as usize))
                }
            } else {
                Ok(Term::Var(i))
            }
        })
    }

    /// Upward shift, which cannot fail.
    pub fn shifted(&self, cutoff: usize, amount: usize) -> Term {
        self.shift(cutoff, amount as isize).expect("upward shift is total")
    }

    /// Replaces `Var target` by `replacement` and removes that binder.
    ///
    /// `replacement` is scope-valid in the context outside the consumed
    /// binder; free indices above the target are decremented.
    pub fn subst(&self, target: usize, replacement: &Term) -> Term {
        let r: Result<Term, NegativeIndex> = self.map_vars(0, &mut |depth, i| {
            let t = target + depth;
            Ok(if i == t {
                replacement.shifted(0, t)
            } else if i > t {
                Term::Var(i - 1)
            } else {
                Term::Var(i)
            })
        });
        r.expect("substitution never shifts downward past zero")
    }

    /// Instantiates a one-binder body.
    pub fn instantiate(&self, value: &Term) -> Term {
        self.subst(0, value)
    }

    /// Instantiates a two-binder body: `Var 1 := outer`, `Var 0 := inner`.
    pub fn instantiate2(&self, outer: &Term, inner: &Term) -> Term {
        self.subst(0, &inner.shifted(0, 1)).subst(0, outer)
    }

    /// Instantiates a one-binder `motive` (scoped in ctx + 1) with a value
    /// scoped `extra` binders deeper than ctx; result is scoped in ctx + extra.
    pub fn instantiate_under(&self, extra: usize, value: &Term) -> Term {
        self.shifted(1, extra).instantiate(value)
    }

    /// True iff every variable is bound or refers into a context of length `ctx_len`.
    pub fn is_scoped_in(&self, ctx_len: usize) -> bool {
        !self.any_var(0, &mut |depth, i| i >= depth + ctx_len)
    }

    pub fn is_closed(&self) -> bool {
        self.is_scoped_in(0)
    }

    /// Does free variable `index` occur?
    pub fn mentions(&self, index: usize) -> bool {
        self.any_var(0, &mut |depth, i| i == index + depth)
    }

    /// Structural equality. Annotations are compared too.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    /// Names of all constants occurring in the term.
    pub fn constants(&self, out: &mut Vec<Name>) {
        if let Term::Const(n) = self {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        for (c, _) in self.children() {
            c.constants(out);
        }
    }

    /// Splits an application spine into head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, x) = t {
            args.push(&**x);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(|(c, _)| c.size()).sum::<usize>()
    }
}

/// A position in the builder's context, counted from the outermost entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Level(pub usize);

/// Constructs terms with level-addressed variables, so that callers never
/// compute de Bruijn indices by hand.
///
/// The builder starts at some ambient context length; terms passed in from
/// that context are lifted with [`Builder::lift`].
#[derive(Debug, Clone)]
pub struct Builder {
    base: usize,
    depth: usize,
}

impl Builder {
    pub fn new(ctx_len: usize) -> Self {
        Builder { base: ctx_len, depth: ctx_len }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn var(&self, l: Level) -> Term {
        debug_assert!(l.0 < self.depth);
        Term::Var(self.depth - 1 - l.0)
    }

    /// Moves a term scoped in the ambient context to the current depth.
    pub fn lift(&self, t: &Term) -> Term {
        t.shifted(0, self.depth - self.base)
    }

    /// Moves a term scoped in a context whose entries correspond, outermost
    /// first, to `levels` into the current depth.
    pub fn embed(&self, t: &Term, levels: &[Level]) -> Term {
        let m = levels.len();
        let depth = self.depth;
        let r: Result<Term, NegativeIndex> = t.map_vars(0, &mut |d, i| {
            if i < d {
                return Ok(Term::Var(i));
            }
            let lvl = m - 1 - (i - d);
            Ok(Term::Var(depth - 1 - levels[lvl].0 + d))
        });
        r.expect("embedding is total")
    }

    /// Runs `body` under one fresh binder and returns its result.
    pub fn under<R>(&mut self, body: impl FnOnce(&mut Self, Level) -> R) -> R {
        let l = Level(self.depth);
        self.depth += 1;
        let r = body(self, l);
        self.depth -= 1;
        r
    }

    pub fn under2<R>(&mut self, body: impl FnOnce(&mut Self, Level, Level) -> R) -> R {
        self.under(|b, x| b.under(|b, y| body(b, x, y)))
    }

    pub fn lam(&mut self, ann: Term, body: impl FnOnce(&mut Self, Level) -> Term) -> Term {
        let b = self.under(body);
        Term::lam(ann, b)
    }

    pub fn pi(&mut self, dom: Term, cod: impl FnOnce(&mut Self, Level) -> Term) -> Term {
        let c = self.under(cod);
        Term::pi(dom, c)
    }

    pub fn sigma(&mut self, first: Term, second: impl FnOnce(&mut Self, Level) -> Term) -> Term {
        let s = self.under(second);
        Term::sigma(first, s)
    }

    /// `A -> B` with both sides built at the current depth.
    pub fn arrow(&mut self, dom: Term, cod: Term) -> Term {
        Term::arrow(dom, cod)
    }
}
