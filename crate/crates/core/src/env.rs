//! The global environment of named, checked definitions.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::term::{Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DefKind {
    Definition,
    Theorem,
    /// Type checked, body absent. Never unfolds.
    Statement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDef {
    pub name: Name,
    pub ty: Term,
    pub body: Option<Term>,
    pub kind: DefKind,
}

/// Append-only, insertion-ordered map from names to definitions.
///
/// Cloning is cheap; extension copies the index once per definition.
#[derive(Debug, Clone, Default)]
pub struct GlobalEnv {
    defs: Arc<IndexMap<Name, Arc<GlobalDef>>>,
}

impl GlobalEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&GlobalDef> {
        self.defs.get(name).map(|d| &**d)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }

    pub fn body(&self, name: &str) -> Option<&Term> {
        self.get(name).and_then(|d| d.body.as_ref())
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GlobalDef> {
        self.defs.values().map(|d| &**d)
    }

    /// Appends without checking. Callers go through `typing::define_global`.
    pub(crate) fn push(&self, def: GlobalDef) -> GlobalEnv {
        let mut defs = (*self.defs).clone();
        defs.insert(def.name.clone(), Arc::new(def));
        GlobalEnv { defs: Arc::new(defs) }
    }

    /// Appends in place; same contract as [`GlobalEnv::push`].
    pub(crate) fn push_mut(&mut self, def: GlobalDef) {
        Arc::make_mut(&mut self.defs).insert(def.name.clone(), Arc::new(def));
    }
}
