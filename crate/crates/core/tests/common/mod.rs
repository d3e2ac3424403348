//! Brute-force reference semantics, written without the library's evaluators.

#![allow(dead_code)]

use std::collections::BTreeMap;

use godel_delta::formula::{Formula, Term};

pub fn value(f: &Formula, env: &BTreeMap<String, u32>, top: u32) -> u32 {
    match f {
        Formula::Top => top,
        Formula::Bot => 0,
        Formula::Atom(a) => env[&a.name],
        Formula::And(a, b) => value(a, env, top).min(value(b, env, top)),
        Formula::Or(a, b) => value(a, env, top).max(value(b, env, top)),
        Formula::Imp(a, b) => {
            let (x, y) = (value(a, env, top), value(b, env, top));
            if x <= y {
                top
            } else {
                y
            }
        }
        Formula::Delta(a) => {
            if value(a, env, top) == top {
                top
            } else {
                0
            }
        }
        Formula::Forall(..) | Formula::Exists(..) => panic!("propositional oracle"),
    }
}

fn atom_names(fs: &[&Formula]) -> Vec<String> {
    let mut names: Vec<String> = fs
        .iter()
        .flat_map(|f| f.free_atoms())
        .map(|a| a.name)
        .collect();
    names.sort();
    names.dedup();
    names
}

/// Every assignment of `names` on `k` levels (atoms below the top if restricted).
pub fn assignments(names: &[String], k: u32, restricted: bool) -> Vec<BTreeMap<String, u32>> {
    let base = if restricted { k - 1 } else { k };
    let mut out = vec![BTreeMap::new()];
    for n in names {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..base).map(move |l| {
                    let mut m = m.clone();
                    m.insert(n.clone(), l);
                    m
                })
            })
            .collect();
    }
    out
}

pub fn valid_at(f: &Formula, k: u32, restricted: bool) -> bool {
    let names = atom_names(&[f]);
    assignments(&names, k, restricted)
        .iter()
        .all(|m| value(f, m, k - 1) == k - 1)
}

pub fn valid(f: &Formula, restricted: bool) -> bool {
    valid_at(f, f.free_atoms().len() as u32 + 2, restricted)
}

/// Same interpretations give the top level.
pub fn designated_equiv_at(f: &Formula, g: &Formula, k: u32, restricted: bool) -> bool {
    let names = atom_names(&[f, g]);
    assignments(&names, k, restricted)
        .iter()
        .all(|m| (value(f, m, k - 1) == k - 1) == (value(g, m, k - 1) == k - 1))
}

pub fn designated_equiv(f: &Formula, g: &Formula, restricted: bool) -> bool {
    let n = atom_names(&[f, g]).len() as u32;
    designated_equiv_at(f, g, n + 2, restricted)
}

pub fn value_equiv_at(f: &Formula, g: &Formula, k: u32, restricted: bool) -> bool {
    let names = atom_names(&[f, g]);
    assignments(&names, k, restricted)
        .iter()
        .all(|m| value(f, m, k - 1) == value(g, m, k - 1))
}

/// First-order value over a finite model given as `(predicate, tuple) -> level`.
pub fn fo_value(
    f: &Formula,
    d: usize,
    table: &BTreeMap<(String, Vec<usize>), u32>,
    env: &mut BTreeMap<String, usize>,
    top: u32,
) -> u32 {
    match f {
        Formula::Top => top,
        Formula::Bot => 0,
        Formula::Atom(a) => {
            let tuple: Vec<usize> = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => env[v],
                    Term::Elem(e) => *e,
                })
                .collect();
            table[&(a.name.clone(), tuple)]
        }
        Formula::And(a, b) => fo_value(a, d, table, env, top).min(fo_value(b, d, table, env, top)),
        Formula::Or(a, b) => fo_value(a, d, table, env, top).max(fo_value(b, d, table, env, top)),
        Formula::Imp(a, b) => {
            let (x, y) = (fo_value(a, d, table, env, top), fo_value(b, d, table, env, top));
            if x <= y {
                top
            } else {
                y
            }
        }
        Formula::Delta(a) => {
            if fo_value(a, d, table, env, top) == top {
                top
            } else {
                0
            }
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let saved = env.get(v).copied();
            let vals: Vec<u32> = (0..d)
                .map(|e| {
                    env.insert(v.clone(), e);
                    fo_value(body, d, table, env, top)
                })
                .collect();
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            if matches!(f, Formula::Forall(..)) {
                vals.into_iter().min().unwrap()
            } else {
                vals.into_iter().max().unwrap()
            }
        }
    }
}

fn tuples(arity: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether a closed formula has a countermodel with domain `1..=max_d` and `2..=max_k` levels.
pub fn fo_countermodel_exists(f: &Formula, max_d: usize, max_k: u32, restricted: bool) -> bool {
    let sig = f.signature().unwrap();
    for d in 1..=max_d {
        let cells: Vec<(String, Vec<usize>)> = sig
            .iter()
            .flat_map(|(p, &arity)| tuples(arity, d).into_iter().map(move |t| (p.clone(), t)))
            .collect();
        for k in 2..=max_k {
            let base = if restricted { k - 1 } else { k };
            let total = (base as u64).pow(cells.len() as u32);
            for idx in 0..total {
                let mut i = idx;
                let mut table = BTreeMap::new();
                for c in &cells {
                    table.insert(c.clone(), (i % base as u64) as u32);
                    i /= base as u64;
                }
                if fo_value(f, d, &table, &mut BTreeMap::new(), k - 1) != k - 1 {
                    return true;
                }
            }
        }
    }
    false
}
