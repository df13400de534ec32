//! Proof terms for the derived classical rules and the double-negation
//! monad. Each emitter returns the term together with the type it is meant
//! to have; callers (and the tests) re-check the pair in the kernel.
//!
//! All terms are built at an ambient context depth `n`, in which the
//! formula arguments are scoped.

use thiserror::Error;

use super::{neg, nn};
use crate::term::{Builder, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Args `φ ψ θ`.
    OrWElim,
    /// Args `A P θ`, with `P : A -> Type0`.
    ExWElim,
    /// Args `φ θ`.
    DnElim,
    /// Args `φ`.
    Lem,
    /// Args `φ ψ`.
    WeakenOr,
    /// Args `A P`.
    WeakenEx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DnKind {
    /// Args `φ`.
    Unit,
    /// Args `φ ψ`.
    Map,
    /// Args `φ`.
    Join,
    /// Args `φ ψ`.
    Bind,
    /// Args `φ ψ`.
    Ap,
    /// Args `φ ψ θ`.
    Map2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected {expected} formula arguments, got {got}")]
pub struct ArityError {
    pub expected: usize,
    pub got: usize,
}

fn arity(args: &[Term], expected: usize) -> Result<(), ArityError> {
    if args.len() == expected {
        Ok(())
    } else {
        Err(ArityError { expected, got: args.len() })
    }
}

pub fn and(a: Term, b: Term) -> Term {
    Term::product(a, b)
}

/// `¬(¬φ ∧ ¬ψ)`.
pub fn or_w(a: Term, b: Term) -> Term {
    neg(and(neg(a), neg(b)))
}

/// `¬Π a:A. ¬(P a)`.
pub fn ex_w(dom: Term, pred: &Term) -> Term {
    neg(Term::pi(dom, neg(Term::app(pred.shifted(0, 1), Term::Var(0)))))
}

fn arrows(tys: &[Term]) -> Term {
    let (last, init) = tys.split_last().expect("nonempty");
    init.iter().rev().fold(last.clone(), |acc, t| Term::arrow(t.clone(), acc))
}

/// Projection out of a non-dependent pair; `a` and `s` are the component
/// types at the depth of `p`.
fn proj(p: Term, a: &Term, s: &Term, first: bool) -> Term {
    let motive = if first { a } else { s }.shifted(0, 1);
    Term::sig_elim(motive, p, Term::Var(if first { 1 } else { 0 }))
}

/// Emits the proof term and its schema type.
pub fn emit_rule(kind: RuleKind, args: &[Term], n: usize) -> Result<(Term, Term), ArityError> {
    let mut b = Builder::new(n);
    Ok(match kind {
        RuleKind::OrWElim => {
            arity(args, 3)?;
            let (phi, psi, th) = (&args[0], &args[1], &args[2]);
            let ty = arrows(&[
                Term::arrow(phi.clone(), th.clone()),
                Term::arrow(psi.clone(), th.clone()),
                Term::arrow(nn(th.clone()), th.clone()),
                or_w(phi.clone(), psi.clone()),
                th.clone(),
            ]);
            let t = b.lam(Term::arrow(phi.clone(), th.clone()), |b, f| {
                b.lam(b.lift(&Term::arrow(psi.clone(), th.clone())), |b, g| {
                    b.lam(b.lift(&Term::arrow(nn(th.clone()), th.clone())), |b, s| {
                        b.lam(b.lift(&or_w(phi.clone(), psi.clone())), |b, o| {
                            let k = b.lam(neg(b.lift(th)), |b, nt| {
                                let l = b.lam(b.lift(phi), |b, a| {
                                    Term::app(b.var(nt), Term::app(b.var(f), b.var(a)))
                                });
                                let r = b.lam(b.lift(psi), |b, x| {
                                    Term::app(b.var(nt), Term::app(b.var(g), b.var(x)))
                                });
                                let pty = b.lift(&and(neg(phi.clone()), neg(psi.clone())));
                                Term::app(b.var(o), Term::pair(l, r, pty))
                            });
                            Term::app(b.var(s), k)
                        })
                    })
                })
            });
            (t, ty)
        }
        RuleKind::ExWElim => {
            arity(args, 3)?;
            let (dom, pred, th) = (&args[0], &args[1], &args[2]);
            let branch_ty = Term::pi(
                dom.clone(),
                Term::arrow(Term::app(pred.shifted(0, 1), Term::Var(0)), th.shifted(0, 1)),
            );
            let ty = arrows(&[
                branch_ty.clone(),
                Term::arrow(nn(th.clone()), th.clone()),
                ex_w(dom.clone(), pred),
                th.clone(),
            ]);
            let t = b.lam(branch_ty, |b, f| {
                b.lam(b.lift(&Term::arrow(nn(th.clone()), th.clone())), |b, s| {
                    b.lam(b.lift(&ex_w(dom.clone(), pred)), |b, e| {
                        let k = b.lam(neg(b.lift(th)), |b, nt| {
                            let h = b.lam(b.lift(dom), |b, a| {
                                let pa = Term::app(b.lift(pred), b.var(a));
                                b.lam(pa, |b, x| {
                                    let fx = Term::apps(b.var(f), [b.var(a), b.var(x)]);
                                    Term::app(b.var(nt), fx)
                                })
                            });
                            Term::app(b.var(e), h)
                        });
                        Term::app(b.var(s), k)
                    })
                })
            });
            (t, ty)
        }
        RuleKind::DnElim => {
            arity(args, 2)?;
            let (phi, th) = (&args[0], &args[1]);
            let ty = arrows(&[
                Term::arrow(phi.clone(), th.clone()),
                Term::arrow(nn(th.clone()), th.clone()),
                nn(phi.clone()),
                th.clone(),
            ]);
            let t = b.lam(Term::arrow(phi.clone(), th.clone()), |b, f| {
                b.lam(b.lift(&Term::arrow(nn(th.clone()), th.clone())), |b, s| {
                    b.lam(b.lift(&nn(phi.clone())), |b, x| {
                        let k = b.lam(neg(b.lift(th)), |b, nt| {
                            let g = b.lam(b.lift(phi), |b, a| {
                                Term::app(b.var(nt), Term::app(b.var(f), b.var(a)))
                            });
                            Term::app(b.var(x), g)
                        });
                        Term::app(b.var(s), k)
                    })
                })
            });
            (t, ty)
        }
        RuleKind::Lem => {
            arity(args, 1)?;
            let phi = &args[0];
            let np = neg(phi.clone());
            let ty = or_w(phi.clone(), np.clone());
            let pty = and(np.clone(), neg(np));
            let t = b.lam(pty, |b, p| {
                let (a, s) = (b.lift(&neg(phi.clone())), b.lift(&nn(phi.clone())));
                let snd = proj(b.var(p), &a, &s, false);
                let fst = proj(b.var(p), &a, &s, true);
                Term::app(snd, fst)
            });
            (t, ty)
        }
        RuleKind::WeakenOr => {
            arity(args, 2)?;
            let (phi, psi) = (&args[0], &args[1]);
            let ty = Term::arrow(Term::sum(phi.clone(), psi.clone()), or_w(phi.clone(), psi.clone()));
            let t = b.lam(Term::sum(phi.clone(), psi.clone()), |b, s| {
                b.lam(b.lift(&and(neg(phi.clone()), neg(psi.clone()))), |b, p| {
                    let motive = b.under(|_, _| Term::VoidTy);
                    let left = b.under(|b, x| {
                        let (na, nb) = (b.lift(&neg(phi.clone())), b.lift(&neg(psi.clone())));
                        let f = proj(b.var(p), &na, &nb, true);
                        Term::app(f, b.var(x))
                    });
                    let right = b.under(|b, y| {
                        let (na, nb) = (b.lift(&neg(phi.clone())), b.lift(&neg(psi.clone())));
                        let g = proj(b.var(p), &na, &nb, false);
                        Term::app(g, b.var(y))
                    });
                    Term::sum_elim(motive, b.var(s), left, right)
                })
            });
            (t, ty)
        }
        RuleKind::WeakenEx => {
            arity(args, 2)?;
            let (dom, pred) = (&args[0], &args[1]);
            let sig = Term::sigma(dom.clone(), Term::app(pred.shifted(0, 1), Term::Var(0)));
            let ty = Term::arrow(sig.clone(), ex_w(dom.clone(), pred));
            let all_not = Term::pi(dom.clone(), neg(Term::app(pred.shifted(0, 1), Term::Var(0))));
            let t = b.lam(sig, |b, s| {
                b.lam(b.lift(&all_not), |b, h| {
                    let motive = b.under(|_, _| Term::VoidTy);
                    let branch = b.under2(|b, a, pa| Term::apps(b.var(h), [b.var(a), b.var(pa)]));
                    Term::sig_elim(motive, b.var(s), branch)
                })
            });
            (t, ty)
        }
    })
}

fn unit_at(n: usize, phi: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(phi.clone(), |b, a| b.lam(neg(b.lift(phi)), |b, k| Term::app(b.var(k), b.var(a))))
}

fn map_at(n: usize, phi: &Term, psi: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(Term::arrow(phi.clone(), psi.clone()), |b, f| {
        b.lam(b.lift(&nn(phi.clone())), |b, x| {
            b.lam(neg(b.lift(psi)), |b, k| {
                let kf = b.lam(b.lift(phi), |b, a| {
                    Term::app(b.var(k), Term::app(b.var(f), b.var(a)))
                });
                Term::app(b.var(x), kf)
            })
        })
    })
}

fn join_at(n: usize, phi: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(nn(nn(phi.clone())), |b, x| {
        b.lam(neg(b.lift(phi)), |b, k| {
            let u = unit_at(b.depth(), &neg(b.lift(phi)));
            Term::app(b.var(x), Term::app(u, b.var(k)))
        })
    })
}

/// `λf x. join (map f x)`.
fn bind_at(n: usize, phi: &Term, psi: &Term) -> Term {
    let mut b = Builder::new(n);
    b.lam(Term::arrow(phi.clone(), nn(psi.clone())), |b, f| {
        b.lam(b.lift(&nn(phi.clone())), |b, x| {
            let d = b.depth();
            let m = map_at(d, &b.lift(phi), &nn(b.lift(psi)));
            Term::app(join_at(d, &b.lift(psi)), Term::apps(m, [b.var(f), b.var(x)]))
        })
    })
}

/// `λf x. bind (λf0. map f0 x) f`.
fn ap_at(n: usize, phi: &Term, psi: &Term) -> Term {
    let mut b = Builder::new(n);
    let fun = Term::arrow(phi.clone(), psi.clone());
    b.lam(nn(fun.clone()), |b, f| {
        b.lam(b.lift(&nn(phi.clone())), |b, x| {
            let g = b.lam(b.lift(&fun), |b, f0| {
                let m = map_at(b.depth(), &b.lift(phi), &b.lift(psi));
                Term::apps(m, [b.var(f0), b.var(x)])
            });
            let bd = bind_at(b.depth(), &b.lift(&fun), &b.lift(psi));
            Term::apps(bd, [g, b.var(f)])
        })
    })
}

/// `λf x y. ap (ap (unit f) x) y`.
fn map2_at(n: usize, phi: &Term, psi: &Term, th: &Term) -> Term {
    let mut b = Builder::new(n);
    let f_ty = arrows(&[phi.clone(), psi.clone(), th.clone()]);
    b.lam(f_ty.clone(), |b, f| {
        b.lam(b.lift(&nn(phi.clone())), |b, x| {
            b.lam(b.lift(&nn(psi.clone())), |b, y| {
                let d = b.depth();
                let (phi, psi, th, f_ty) = (b.lift(phi), b.lift(psi), b.lift(th), b.lift(&f_ty));
                let rest = Term::arrow(psi.clone(), th.clone());
                let uf = Term::app(unit_at(d, &f_ty), b.var(f));
                let first = Term::apps(ap_at(d, &phi, &rest), [uf, b.var(x)]);
                Term::apps(ap_at(d, &psi, &th), [first, b.var(y)])
            })
        })
    })
}

/// Emits a monad combinator and its signature.
pub fn dn_combinator(kind: DnKind, args: &[Term], n: usize) -> Result<(Term, Term), ArityError> {
    let a = |i: usize| args[i].clone();
    Ok(match kind {
        DnKind::Unit => {
            arity(args, 1)?;
            (unit_at(n, &a(0)), Term::arrow(a(0), nn(a(0))))
        }
        DnKind::Map => {
            arity(args, 2)?;
            (map_at(n, &a(0), &a(1)), arrows(&[Term::arrow(a(0), a(1)), nn(a(0)), nn(a(1))]))
        }
        DnKind::Join => {
            arity(args, 1)?;
            (join_at(n, &a(0)), Term::arrow(nn(nn(a(0))), nn(a(0))))
        }
        DnKind::Bind => {
            arity(args, 2)?;
            (bind_at(n, &a(0), &a(1)), arrows(&[Term::arrow(a(0), nn(a(1))), nn(a(0)), nn(a(1))]))
        }
        DnKind::Ap => {
            arity(args, 2)?;
            (ap_at(n, &a(0), &a(1)), arrows(&[nn(Term::arrow(a(0), a(1))), nn(a(0)), nn(a(1))]))
        }
        DnKind::Map2 => {
            arity(args, 3)?;
            let f = arrows(&[a(0), a(1), a(2)]);
            (map2_at(n, &a(0), &a(1), &a(2)), arrows(&[f, nn(a(0)), nn(a(1)), nn(a(2))]))
        }
    })
}
