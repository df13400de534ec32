//! Proof-checking kernel for a small dependent type theory, with a
//! classical-logic layer built from double-negation-stable propositions and
//! a finite Heyting-algebra countermodel finder.

#![allow(clippy::result_large_err)]

pub mod classical;
pub mod diagnostic;
pub mod env;
pub mod eval;
pub mod heyting;
pub mod session;
pub mod stdlib;
pub mod syntax;
pub mod term;
pub mod typing;

pub use diagnostic::{DiagCode, Diagnostic, SourceSpan};
pub use env::{DefKind, GlobalDef, GlobalEnv};
pub use term::{Name, Term};
