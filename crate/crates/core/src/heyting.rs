//! Finite Heyting algebras as countermodels for propositional formulas.
//!
//! Carriers are `0..n`, with `0` the bottom and `n - 1` the top. Algebras are
//! enumerated as labeled posets (not up to isomorphism), in lexicographic
//! order of their order table, so every search has a canonical first answer.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::term::Term;

/// Largest carrier size [`enumerate_algebras`] accepts.
pub const MAX_ENUMERATION_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeytingAlgebra {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
    pub bottom: usize,
    pub top: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropFormula {
    Atom(String),
    Top,
    Bot,
    And(Box<PropFormula>, Box<PropFormula>),
    Imp(Box<PropFormula>, Box<PropFormula>),
    SumP(Box<PropFormula>, Box<PropFormula>),
}

pub type Valuation = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{law} fails at {witnesses:?}")]
pub struct Violation {
    pub law: &'static str,
    pub witnesses: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("valuation does not assign atom `{0}`")]
pub struct MissingAtom(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("algebras of size {requested} requested; at most {MAX_ENUMERATION_SIZE} are supported")]
pub struct SizeLimit {
    pub requested: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a propositional formula: {0}")]
pub struct NotPropositional(pub String);

impl PropFormula {
    pub fn atom(s: &str) -> Self {
        PropFormula::Atom(s.to_string())
    }

    pub fn and(a: Self, b: Self) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        PropFormula::Imp(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Self, b: Self) -> Self {
        PropFormula::SumP(Box::new(a), Box::new(b))
    }

    pub fn not(a: Self) -> Self {
        Self::imp(a, PropFormula::Bot)
    }

    /// `¬(¬a ∧ ¬b)`.
    pub fn or_w(a: Self, b: Self) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Self::and(Self::imp(a.clone(), b.clone()), Self::imp(b, a))
    }

    /// Sorted, deduplicated atom names.
    pub fn atoms(&self) -> Vec<String> {
        fn go(f: &PropFormula, out: &mut Vec<String>) {
            match f {
                PropFormula::Atom(a) => out.push(a.clone()),
                PropFormula::Top | PropFormula::Bot => {}
                PropFormula::And(a, b) | PropFormula::Imp(a, b) | PropFormula::SumP(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Reads a term as a formula. Unknown constants become atoms; the
    /// connective names of the standard library are recognised by name;
    /// variables `i` refer to `binders` (innermost last) and become atoms.
    pub fn from_term(t: &Term, binders: &[String]) -> Result<Self, NotPropositional> {
        let bad = || NotPropositional(t.to_string());
        let under = |c: &Term| -> Result<Self, NotPropositional> {
            let c = c.shift(0, -1).map_err(|_| bad())?;
            Self::from_term(&c, binders)
        };
        match t {
            Term::UnitTy => Ok(PropFormula::Top),
            Term::VoidTy => Ok(PropFormula::Bot),
            Term::Var(i) if *i < binders.len() => {
                Ok(PropFormula::Atom(binders[binders.len() - 1 - i].clone()))
            }
            Term::Const(n) => Ok(PropFormula::Atom(n.to_string())),
            Term::Pi(a, c) => Ok(Self::imp(Self::from_term(a, binders)?, under(c)?)),
            Term::Sigma(a, c) => Ok(Self::and(Self::from_term(a, binders)?, under(c)?)),
            Term::Sum(a, b) => {
                Ok(Self::sum(Self::from_term(a, binders)?, Self::from_term(b, binders)?))
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                let Term::Const(name) = head else { return Err(bad()) };
                let f: Vec<Self> =
                    args.iter().map(|a| Self::from_term(a, binders)).collect::<Result<_, _>>()?;
                match (&**name, f.as_slice()) {
                    ("neg" | "not", [a]) => Ok(Self::not(a.clone())),
                    ("nn" | "dn", [a]) => Ok(Self::not(Self::not(a.clone()))),
                    ("stable", [a]) => {
                        Ok(Self::imp(Self::not(Self::not(a.clone())), a.clone()))
                    }
                    ("decidable", [a]) => Ok(Self::sum(a.clone(), Self::not(a.clone()))),
                    ("and", [a, b]) => Ok(Self::and(a.clone(), b.clone())),
                    ("orW", [a, b]) => Ok(Self::or_w(a.clone(), b.clone())),
                    ("iff", [a, b]) => Ok(Self::iff(a.clone(), b.clone())),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropFormula::Atom(a) => f.write_str(a),
            PropFormula::Top => f.write_str("Unit"),
            PropFormula::Bot => f.write_str("Void"),
            PropFormula::And(a, b) => write!(f, "({a} /\\ {b})"),
            PropFormula::Imp(a, b) => write!(f, "({a} -> {b})"),
            PropFormula::SumP(a, b) => write!(f, "({a} + {b})"),
        }
    }
}

/// Checks every algebra law, reporting the first failure in a fixed scan
/// order (laws in order, witnesses ascending).
pub fn validate_algebra(h: &HeytingAlgebra) -> Result<(), Violation> {
    let n = h.size;
    let dims_ok = [&h.meet, &h.join, &h.imp].iter().all(|t| t.len() == n && t.iter().all(|r| r.len() == n))
        && h.leq.len() == n
        && h.leq.iter().all(|r| r.len() == n)
        && h.bottom < n.max(1)
        && h.top < n.max(1);
    if n == 0 || !dims_ok {
        return Err(Violation { law: "table dimensions", witnesses: vec![] });
    }
    let le = |a: usize, b: usize| h.leq[a][b];
    let v = |law, w: Vec<usize>| Err(Violation { law, witnesses: w });
    for a in 0..n {
        if !le(a, a) {
            return v("reflexivity", vec![a]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            if a != b && le(a, b) && le(b, a) {
                return v("antisymmetry", vec![a, b]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return v("transitivity", vec![a, b, c]);
                }
            }
        }
    }
    for a in 0..n {
        if !le(h.bottom, a) {
            return v("bottom", vec![a]);
        }
        if !le(a, h.top) {
            return v("top", vec![a]);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let m = h.meet[a][b];
            if !le(m, a) || !le(m, b) || (0..n).any(|c| le(c, a) && le(c, b) && !le(c, m)) {
                return v("meet is greatest lower bound", vec![a, b]);
            }
            let j = h.join[a][b];
            if !le(a, j) || !le(b, j) || (0..n).any(|c| le(a, c) && le(b, c) && !le(j, c)) {
                return v("join is least upper bound", vec![a, b]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if h.meet[a][h.join[b][c]] != h.join[h.meet[a][b]][h.meet[a][c]] {
                    return v("distributivity", vec![a, b, c]);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if le(h.meet[a][c], b) != le(c, h.imp[a][b]) {
                    return v("residuation", vec![a, b, c]);
                }
            }
        }
    }
    Ok(())
}

pub fn eval_formula(h: &HeytingAlgebra, v: &Valuation, f: &PropFormula) -> Result<usize, MissingAtom> {
    Ok(match f {
        PropFormula::Atom(a) => *v.get(a).ok_or_else(|| MissingAtom(a.clone()))?,
        PropFormula::Top => h.top,
        PropFormula::Bot => h.bottom,
        PropFormula::And(a, b) => h.meet[eval_formula(h, v, a)?][eval_formula(h, v, b)?],
        PropFormula::SumP(a, b) => h.join[eval_formula(h, v, a)?][eval_formula(h, v, b)?],
        PropFormula::Imp(a, b) => h.imp[eval_formula(h, v, a)?][eval_formula(h, v, b)?],
    })
}

/// Greatest element of `cands` under `le`, if there is one.
fn greatest(cands: impl Iterator<Item = usize> + Clone, le: impl Fn(usize, usize) -> bool) -> Option<usize> {
    cands.clone().find(|&m| cands.clone().all(|c| le(c, m)))
}

/// Completes an order table into an algebra, if it is a distributive lattice.
fn from_order(leq: Vec<Vec<bool>>) -> Option<HeytingAlgebra> {
    let n = leq.len();
    let le = |a: usize, b: usize| leq[a][b];
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            meet[a][b] = greatest((0..n).filter(|&c| le(c, a) && le(c, b)), le)?;
            join[a][b] = greatest((0..n).filter(|&c| le(a, c) && le(b, c)), |x, y| le(y, x))?;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                    return None;
                }
            }
        }
    }
    let mut imp = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            imp[a][b] = greatest((0..n).filter(|&c| le(meet[a][c], b)), le)?;
        }
    }
    Some(HeytingAlgebra { size: n, leq, meet, join, imp, bottom: 0, top: n - 1 })
}

/// All distributive lattices on `0..n` with `0` bottom and `n - 1` top,
/// for `n` in `1..=max_size`, sizes ascending and each size in
/// lexicographic order of the order table.
pub fn enumerate_algebras(max_size: usize) -> Result<Vec<HeytingAlgebra>, SizeLimit> {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(SizeLimit { requested: max_size });
    }
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(algebras_of_size(n));
    }
    Ok(out)
}

fn algebras_of_size(n: usize) -> Vec<HeytingAlgebra> {
    if n == 1 {
        return from_order(vec![vec![true]]).into_iter().collect();
    }
    // Each unordered pair of middle elements is incomparable, below, or above.
    let middle: Vec<(usize, usize)> =
        (1..n - 1).flat_map(|i| (i + 1..n - 1).map(move |j| (i, j))).collect();
    let mut orders = Vec::new();
    let total = 3usize.pow(middle.len() as u32);
    for code in 0..total {
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            leq[a][a] = true;
            leq[0][a] = true;
            leq[a][n - 1] = true;
        }
        let mut c = code;
        for &(i, j) in &middle {
            match c % 3 {
                1 => leq[i][j] = true,
                2 => leq[j][i] = true,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c]))
        });
        if transitive {
            orders.push(leq);
        }
    }
    orders.sort();
    orders.into_iter().filter_map(from_order).collect()
}

/// Every valuation of `atoms` in an algebra of size `n`, first atom most
/// significant, elements ascending.
fn valuations(atoms: &[String], n: usize) -> impl Iterator<Item = Valuation> + '_ {
    let k = atoms.len() as u32;
    (0..n.pow(k)).map(move |mut code| {
        let mut v = Valuation::new();
        for a in atoms.iter().rev() {
            v.insert(a.clone(), code % n);
            code /= n;
        }
        v
    })
}

/// The first algebra and valuation (in enumeration order) refuting `f`.
pub fn find_countermodel(
    f: &PropFormula,
    max_size: usize,
) -> Result<Option<(HeytingAlgebra, Valuation)>, SizeLimit> {
    let atoms = f.atoms();
    for h in enumerate_algebras(max_size)? {
        for v in valuations(&atoms, h.size) {
            if eval_formula(&h, &v, f).expect("valuation is total") != h.top {
                return Ok(Some((h, v)));
            }
        }
    }
    Ok(None)
}

/// True if `f` evaluates to top in every algebra up to `max_size` under
/// every valuation.
pub fn valid_up_to(f: &PropFormula, max_size: usize) -> Result<bool, SizeLimit> {
    Ok(find_countermodel(f, max_size)?.is_none())
}

/// Human-readable rendering: the order table, then the valuation.
pub fn render_countermodel(h: &HeytingAlgebra, v: &Valuation, value: usize) -> String {
    let mut s = format!("Heyting algebra of size {} (0 = bottom, {} = top)\n", h.size, h.top);
    s.push_str("order (row <= column):\n   ");
    for b in 0..h.size {
        s.push_str(&format!(" {b}"));
    }
    s.push('\n');
    for a in 0..h.size {
        s.push_str(&format!("  {a}"));
        for b in 0..h.size {
            s.push_str(if h.leq[a][b] { " 1" } else { " ." });
        }
        s.push('\n');
    }
    s.push_str("valuation:\n");
    for (k, e) in v {
        s.push_str(&format!("  {k} = {e}\n"));
    }
    s.push_str(&format!("formula evaluates to {value}, not {}", h.top));
    s
}

#[derive(Serialize)]
struct Witness<'a> {
    size: usize,
    leq: Vec<Vec<u8>>,
    valuation: &'a Valuation,
    value: usize,
}

/// One-line JSON form of a countermodel.
pub fn countermodel_json(h: &HeytingAlgebra, v: &Valuation, value: usize) -> String {
    let leq = h.leq.iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect();
    serde_json::to_string(&Witness { size: h.size, leq, valuation: v, value })
        .expect("witness serializes")
}
