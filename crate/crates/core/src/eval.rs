//! Leftmost-outermost reduction, normalization and convertibility.
//!
//! [`step`] is the reference one-step relation. [`normalize`] computes the
//! same reduction sequence without re-traversing the term after every step,
//! and on fuel exhaustion returns exactly the term that the corresponding
//! number of [`step`] calls would have produced.

use std::sync::Arc;

use thiserror::Error;

use crate::env::GlobalEnv;
use crate::term::Term;

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Remaining number of redex contractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    pub remaining: u64,
}

impl Fuel {
    pub fn new(remaining: u64) -> Self {
        Fuel { remaining }
    }

    fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("reduction budget exhausted")]
    FuelExhausted { partial: Term },
}

/// Contracts `t` if it is a redex at the root.
pub fn contract(env: &GlobalEnv, t: &Term) -> Option<Term> {
    use Term::*;
    match t {
        App(f, x) => match &**f {
            Lam(_, body) => Some(body.instantiate(x)),
            _ => None,
        },
        BoolElim { scrutinee, if_true, if_false, .. } => match &**scrutinee {
            TT => Some((**if_true).clone()),
            FF => Some((**if_false).clone()),
            _ => None,
        },
        NatElim { motive, scrutinee, zero, succ } => match &**scrutinee {
            Zero => Some((**zero).clone()),
            Succ(n) => {
                let ih = NatElim {
                    motive: motive.clone(),
                    scrutinee: n.clone(),
                    zero: zero.clone(),
                    succ: succ.clone(),
                };
                Some(succ.instantiate2(n, &ih))
            }
            _ => None,
        },
        SumElim { scrutinee, left, right, .. } => match &**scrutinee {
            Inl { payload, .. } => Some(left.instantiate(payload)),
            Inr { payload, .. } => Some(right.instantiate(payload)),
            _ => None,
        },
        SigElim { scrutinee, branch, .. } => match &**scrutinee {
            Pair { fst, snd, .. } => Some(branch.instantiate2(fst, snd)),
            _ => None,
        },
        Const(name) => env.body(name).cloned(),
        _ => None,
    }
}

/// Contracts the leftmost-outermost redex, or returns `None` if `t` is normal.
pub fn step(env: &GlobalEnv, t: &Term) -> Option<Term> {
    if let Some(r) = contract(env, t) {
        return Some(r);
    }
    for (i, (c, _)) in t.children().into_iter().enumerate() {
        if let Some(c2) = step(env, c) {
            return Some(t.with_child(i, Arc::new(c2)));
        }
    }
    None
}

/// The child whose shape decides whether the node is a redex.
fn head_child(t: &Term) -> Option<usize> {
    match t {
        Term::App(..) => Some(0),
        Term::BoolElim { .. }
        | Term::NatElim { .. }
        | Term::SumElim { .. }
        | Term::SigElim { .. }
        | Term::VoidElim { .. } => Some(1),
        _ => None,
    }
}

fn is_intro(t: &Term) -> bool {
    matches!(
        t,
        Term::Lam(..)
            | Term::TT
            | Term::FF
            | Term::Zero
            | Term::Succ(_)
            | Term::Inl { .. }
            | Term::Inr { .. }
            | Term::Pair { .. }
    )
}

/// Leftmost-outermost reduction of `t`. With `stop_at_intro`, returns as
/// soon as the root is an introduction form, since the caller may then have
/// a redex of its own. `Err` carries the partial result.
fn lo(env: &GlobalEnv, t: Term, stop_at_intro: bool, fuel: &mut Fuel) -> Result<Term, Term> {
    let mut t = t;
    'outer: loop {
        if let Some(r) = contract(env, &t) {
            if !fuel.tick() {
                return Err(t);
            }
            t = r;
            continue;
        }
        if stop_at_intro && is_intro(&t) {
            return Ok(t);
        }
        let head = head_child(&t);
        let mut kids: Vec<Arc<Term>> = t.children().into_iter().map(|(c, _)| c.clone()).collect();
        for i in 0..kids.len() {
            if Some(i) == head {
                match lo(env, (*kids[i]).clone(), true, fuel) {
                    Ok(c) => kids[i] = Arc::new(c),
                    Err(p) => {
                        kids[i] = Arc::new(p);
                        return Err(t.rebuild(kids));
                    }
                }
                let candidate = t.rebuild(kids.clone());
                if contract(env, &candidate).is_some() {
                    t = candidate;
                    continue 'outer;
                }
            }
            match lo(env, (*kids[i]).clone(), false, fuel) {
                Ok(c) => kids[i] = Arc::new(c),
                Err(p) => {
                    kids[i] = Arc::new(p);
                    return Err(t.rebuild(kids));
                }
            }
        }
        return Ok(if kids.is_empty() { t } else { t.rebuild(kids) });
    }
}

/// Full normal form, reducing under binders.
pub fn normalize(env: &GlobalEnv, t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    lo(env, t.clone(), false, fuel).map_err(|partial| EvalError::FuelExhausted { partial })
}

fn head_is_const(t: &Term) -> bool {
    matches!(t.spine().0, Term::Const(_))
}

fn whnf_inner(
    env: &GlobalEnv,
    t: Term,
    keep_head: bool,
    fuel: &mut Fuel,
) -> Result<Term, EvalError> {
    let mut t = t;
    loop {
        if keep_head && head_is_const(&t) {
            return Ok(t);
        }
        if let Some(r) = contract(env, &t) {
            if !fuel.tick() {
                return Err(EvalError::FuelExhausted { partial: t });
            }
            t = r;
            continue;
        }
        let Some(i) = head_child(&t) else { return Ok(t) };
        let (c, _) = t.children()[i];
        let c = whnf_inner(env, (**c).clone(), false, fuel)?;
        let candidate = t.with_child(i, Arc::new(c));
        if contract(env, &candidate).is_none() {
            return Ok(candidate);
        }
        t = candidate;
    }
}

/// Weak head normal form: no redex at the root or along the head path.
pub fn whnf(env: &GlobalEnv, t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    whnf_inner(env, t.clone(), false, fuel)
}

/// Like [`whnf`], but stops as soon as the application spine is headed by a
/// constant, so that named connectives stay visible.
pub fn whnf_keep_head(env: &GlobalEnv, t: &Term, fuel: &mut Fuel) -> Result<Term, EvalError> {
    whnf_inner(env, t.clone(), true, fuel)
}

/// Convertibility: equal normal forms.
///
/// Decided lazily. Applications of the same constant are first compared
/// argument-wise, and only unfolded when that fails; otherwise both sides are
/// put in weak head normal form and compared node by node. By confluence this
/// agrees with comparing full normal forms, at a fraction of the cost on
/// large definitions.
pub fn convertible(
    env: &GlobalEnv,
    t: &Term,
    u: &Term,
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    conv(env, t, u, false, fuel)
}

/// Like [`convertible`], but up to cumulativity: `Type i` is below `Type j`
/// when `i <= j`, covariantly in Pi codomains.
pub fn convertible_leq(
    env: &GlobalEnv,
    t: &Term,
    u: &Term,
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    conv(env, t, u, true, fuel)
}

/// Same node with the same non-term data, ignoring children.
fn same_shape(t: &Term, u: &Term) -> bool {
    let (n, m) = (t.children().len(), u.children().len());
    if n != m {
        return false;
    }
    if n == 0 {
        return t == u;
    }
    let hole = Arc::new(Term::TT);
    t.rebuild(vec![hole.clone(); n]) == u.rebuild(vec![hole; m])
}

fn conv(env: &GlobalEnv, t: &Term, u: &Term, leq: bool, fuel: &mut Fuel) -> Result<bool, EvalError> {
    if t == u {
        return Ok(true);
    }
    let t = whnf_keep_head(env, t, fuel)?;
    let u = whnf_keep_head(env, u, fuel)?;
    if t == u {
        return Ok(true);
    }
    {
        let (ht, at) = t.spine();
        let (hu, au) = u.spine();
        if let (Term::Const(a), Term::Const(b)) = (ht, hu) {
            if a == b && at.len() == au.len() {
                let mut same = true;
                for (x, y) in at.iter().zip(&au) {
                    if !conv(env, x, y, false, fuel)? {
                        same = false;
                        break;
                    }
                }
                if same {
                    return Ok(true);
                }
            }
        }
    }
    let t = whnf(env, &t, fuel)?;
    let u = whnf(env, &u, fuel)?;
    match (&t, &u) {
        (Term::Univ(i), Term::Univ(j)) if leq => return Ok(i <= j),
        (Term::Pi(a1, b1), Term::Pi(a2, b2)) => {
            return Ok(conv(env, a1, a2, false, fuel)? && conv(env, b1, b2, leq, fuel)?);
        }
        _ => {}
    }
    if !same_shape(&t, &u) {
        return Ok(false);
    }
    for ((x, _), (y, _)) in t.children().into_iter().zip(u.children()) {
        if !conv(env, x, y, false, fuel)? {
            return Ok(false);
        }
    }
    Ok(true)
}
