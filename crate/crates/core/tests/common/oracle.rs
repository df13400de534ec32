//! Brute-force reference for finite Heyting algebras. Lattices are found by
//! trying every relation on the middle elements, and all operations are
//! recomputed from the order alone.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use clari_core::heyting::PropFormula;

pub struct Lattice {
    pub n: usize,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
}

fn bound(leq: &[Vec<bool>], cands: impl Iterator<Item = usize> + Clone, upper: bool) -> Option<usize> {
    let best: Vec<usize> = cands
        .clone()
        .filter(|&c| cands.clone().all(|d| if upper { leq[d][c] } else { leq[c][d] }))
        .collect();
    (best.len() == 1).then(|| best[0])
}

fn lattice(leq: Vec<Vec<bool>>) -> Option<Lattice> {
    let n = leq.len();
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let l = &leq;
            meet[a][b] = bound(l, (0..n).filter(|&c| l[c][a] && l[c][b]), true)?;
            join[a][b] = bound(l, (0..n).filter(|&c| l[a][c] && l[b][c]), false)?;
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
            imp[a][b] = bound(&leq, (0..n).filter(|&c| leq[meet[a][c]][b]), true)?;
        }
    }
    Some(Lattice { n, leq, meet, join, imp })
}

/// Every distributive lattice on `0..n` with bottom `0` and top `n - 1`.
pub fn lattices_of_size(n: usize) -> Vec<Lattice> {
    if n == 1 {
        return lattice(vec![vec![true]]).into_iter().collect();
    }
    let mid: Vec<usize> = (1..n - 1).collect();
    let pairs: Vec<(usize, usize)> =
        mid.iter().flat_map(|&i| mid.iter().filter(move |&&j| j != i).map(move |&j| (i, j))).collect();
    let mut orders = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut leq = vec![vec![false; n]; n];
        for a in 0..n {
            leq[a][a] = true;
            leq[0][a] = true;
            leq[a][n - 1] = true;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let antisym = (0..n).all(|a| (0..n).all(|b| a == b || !(leq[a][b] && leq[b][a])));
        let trans =
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(leq[a][b] && leq[b][c]) || leq[a][c])));
        if antisym && trans {
            orders.push(leq);
        }
    }
    orders.sort();
    orders.into_iter().filter_map(lattice).collect()
}

pub fn lattices(max: usize) -> Vec<Lattice> {
    (1..=max).flat_map(lattices_of_size).collect()
}

pub fn eval(l: &Lattice, v: &BTreeMap<String, usize>, f: &PropFormula) -> usize {
    match f {
        PropFormula::Atom(a) => v[a],
        PropFormula::Top => l.n - 1,
        PropFormula::Bot => 0,
        PropFormula::And(a, b) => l.meet[eval(l, v, a)][eval(l, v, b)],
        PropFormula::SumP(a, b) => l.join[eval(l, v, a)][eval(l, v, b)],
        PropFormula::Imp(a, b) => l.imp[eval(l, v, a)][eval(l, v, b)],
    }
}

fn atoms(f: &PropFormula, out: &mut std::collections::BTreeSet<String>) {
    match f {
        PropFormula::Atom(a) => {
            out.insert(a.clone());
        }
        PropFormula::Top | PropFormula::Bot => {}
        PropFormula::And(a, b) | PropFormula::Imp(a, b) | PropFormula::SumP(a, b) => {
            atoms(a, out);
            atoms(b, out);
        }
    }
}

/// First refuting (order table, valuation): lattices in order, valuations
/// counting upward with the alphabetically first atom as the high digit.
pub fn countermodel(
    f: &PropFormula,
    max: usize,
) -> Option<(Vec<Vec<bool>>, BTreeMap<String, usize>)> {
    let mut set = std::collections::BTreeSet::new();
    atoms(f, &mut set);
    let names: Vec<String> = set.into_iter().collect();
    for l in lattices(max) {
        let k = names.len() as u32;
        for code in 0..l.n.pow(k) {
            // Digits of `code` in base n, most significant first.
            let v: BTreeMap<String, usize> = names
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), code / l.n.pow(k - 1 - i as u32) % l.n))
                .collect();
            if eval(&l, &v, f) != l.n - 1 {
                return Some((l.leq.clone(), v));
            }
        }
    }
    None
}

/// A random formula over the given atoms.
pub fn formula(r: &mut ChaCha8Rng, atoms: &[&str], depth: usize) -> PropFormula {
    if depth == 0 || r.gen_bool(0.2) {
        return match r.gen_range(0..8) {
            0 => PropFormula::Top,
            1 => PropFormula::Bot,
            _ => PropFormula::atom(atoms.choose(r).unwrap()),
        };
    }
    let a = formula(r, atoms, depth - 1);
    let b = formula(r, atoms, depth - 1);
    match r.gen_range(0..3) {
        0 => PropFormula::and(a, b),
        1 => PropFormula::imp(a, b),
        _ => PropFormula::sum(a, b),
    }
}

/// Every formula of depth at most `depth` over `atoms`, `Top` and `Bot`.
pub fn all_formulas(atoms: &[&str], depth: usize) -> Vec<PropFormula> {
    let mut fs: Vec<PropFormula> = atoms.iter().map(|a| PropFormula::atom(a)).collect();
    fs.push(PropFormula::Top);
    fs.push(PropFormula::Bot);
    for _ in 0..depth {
        let prev = fs.clone();
        for a in &prev {
            for b in &prev {
                fs.push(PropFormula::and(a.clone(), b.clone()));
                fs.push(PropFormula::imp(a.clone(), b.clone()));
                fs.push(PropFormula::sum(a.clone(), b.clone()));
            }
        }
        fs.sort_by_key(|f| f.to_string());
        fs.dedup();
    }
    fs
}
