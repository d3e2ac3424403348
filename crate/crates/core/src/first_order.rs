//! Bounded first-order layer over finite (hence witnessed) models.
//!
//! Quantifiers evaluate as min/max over a finite domain, so every infimum
//! and supremum is attained. The bounded search never claims validity: it
//! reports either a concrete countermodel or that none exists within the
//! searched domain sizes and scales.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, Term};
use crate::par::{self, Strategy};
use crate::semantics::{delta, implies, Level, Mode, TruthScale};

/// Level table of one predicate, indexed by argument tuples in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub arity: usize,
    pub values: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    domain: usize,
    scale: TruthScale,
    restricted: bool,
    tables: BTreeMap<String, Table>,
}

fn tuple_index(tuple: &[usize], domain: usize) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * domain + e)
}

fn tuple_of(mut index: usize, arity: usize, domain: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = index % domain;
        index /= domain;
    }
    t
}

impl FiniteModel {
    pub fn new(
        domain: usize,
        scale: TruthScale,
        restricted: bool,
        tables: BTreeMap<String, Table>,
    ) -> Result<Self> {
        if domain == 0 {
            return Err(Error::Precondition("domain must be nonempty".into()));
        }
        let limit = if restricted {
            scale.top()
        } else {
            scale.levels()
        };
        for (name, t) in &tables {
            if t.values.len() != domain.pow(t.arity as u32) {
                return Err(Error::MissingEntry(format!(
                    "{name}: expected {} entries, got {}",
                    domain.pow(t.arity as u32),
                    t.values.len()
                )));
            }
            if let Some(&level) = t.values.iter().find(|&&v| v >= limit) {
                return Err(Error::LevelOutOfRange {
                    atom: name.clone(),
                    level,
                    levels: scale.levels(),
                    restricted,
                });
            }
        }
        Ok(FiniteModel {
            domain,
            scale,
            restricted,
            tables,
        })
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn scale(&self) -> TruthScale {
        self.scale
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }

    pub fn tables(&self) -> &BTreeMap<String, Table> {
        &self.tables
    }

    pub fn get(&self, name: &str, tuple: &[usize]) -> Result<Level> {
        let t = self
            .tables
            .get(name)
            .ok_or_else(|| Error::MissingEntry(format!("no table for `{name}`")))?;
        if t.arity != tuple.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                first: t.arity,
                second: tuple.len(),
            });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.domain) {
            return Err(Error::ElementOutOfRange {
                element: e,
                domain: self.domain,
            });
        }
        Ok(t.values[tuple_index(tuple, self.domain)])
    }
}

fn tuple_key(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} k={}:", self.domain, self.scale.levels())?;
        let mut first = true;
        for (name, t) in &self.tables {
            for (i, v) in t.values.iter().enumerate() {
                let sep = if first { " " } else { ", " };
                first = false;
                if t.arity == 0 {
                    write!(f, "{sep}{name}={v}")?;
                } else {
                    let key = tuple_key(&tuple_of(i, t.arity, self.domain));
                    write!(f, "{sep}{name}{key}={v}")?;
                }
            }
        }
        Ok(())
    }
}

/// `{"domain": d, "scale": k, "tables": {"P": {"(0,1)": 2}}}`
impl Serialize for FiniteModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a Table, usize);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.values.len()))?;
                for (i, v) in self.0.values.iter().enumerate() {
                    m.serialize_entry(&tuple_key(&tuple_of(i, self.0.arity, self.1)), v)?;
                }
                m.end()
            }
        }
        struct Tables<'a>(&'a FiniteModel);
        impl Serialize for Tables<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let m = self.0;
                s.collect_map(m.tables.iter().map(|(n, t)| (n, Entries(t, m.domain))))
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("domain", &self.domain)?;
        m.serialize_entry("scale", &self.scale)?;
        m.serialize_entry("tables", &Tables(self))?;
        m.end()
    }
}

/// Evaluates `f` in `model` with free variables bound by `env`.
pub fn eval_fo(f: &Formula, model: &FiniteModel, env: &BTreeMap<String, usize>) -> Result<Level> {
    let mut env = env.clone();
    eval_in(f, model, &mut env)
}

fn eval_in(f: &Formula, m: &FiniteModel, env: &mut BTreeMap<String, usize>) -> Result<Level> {
    let top = m.scale.top();
    Ok(match f {
        Formula::Top => top,
        Formula::Bot => 0,
        Formula::Atom(a) => {
            let tuple = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::Unbound(v.clone())),
                    Term::Elem(e) => Ok(*e),
                })
                .collect::<Result<Vec<_>>>()?;
            m.get(&a.name, &tuple)?
        }
        Formula::And(a, b) => eval_in(a, m, env)?.min(eval_in(b, m, env)?),
        Formula::Or(a, b) => eval_in(a, m, env)?.max(eval_in(b, m, env)?),
        Formula::Imp(a, b) => implies(eval_in(a, m, env)?, eval_in(b, m, env)?, top),
        Formula::Delta(a) => delta(eval_in(a, m, env)?, top),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let saved = env.get(v).copied();
            let mut values = Vec::with_capacity(m.domain);
            for e in 0..m.domain {
                env.insert(v.clone(), e);
                values.push(eval_in(body, m, env));
            }
            match saved {
                Some(s) => env.insert(v.clone(), s),
                None => env.remove(v),
            };
            let values = values.into_iter().collect::<Result<Vec<_>>>()?;
            if matches!(f, Formula::Forall(..)) {
                values.into_iter().min().unwrap_or(top)
            } else {
                values.into_iter().max().unwrap_or(0)
            }
        }
    })
}

/// Wraps `body` in `forall` over `vars`, outermost first.
pub fn forall_all(vars: &[String], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |acc, v| Formula::forall(v.clone(), acc))
}

pub fn exists_all(vars: &[String], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |acc, v| Formula::exists(v.clone(), acc))
}

/// Universal closure over the free variables.
pub fn universal_closure(f: &Formula) -> Formula {
    forall_all(&f.free_variables(), f.clone())
}

#[derive(Debug, Clone, Copy)]
enum Arg {
    Slot(usize),
    Elem(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Pred(usize, Vec<Arg>),
    Top,
    Bot,
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Delta(Box<Node>),
    Forall(usize, Box<Node>),
    Exists(usize, Box<Node>),
}

/// Closed formula with predicates resolved to table indices and variables to slots.
struct Compiled {
    root: Node,
    signature: Vec<(String, usize)>,
    slots: usize,
}

impl Compiled {
    fn new(f: &Formula) -> Result<Self> {
        let signature: Vec<(String, usize)> = f.signature()?.into_iter().collect();
        let mut scope = Vec::new();
        let root = Self::node(f, &signature, &mut scope)?;
        let slots = Self::nesting(&root);
        Ok(Compiled {
            root,
            signature,
            slots,
        })
    }

    fn node(
        f: &Formula,
        sig: &[(String, usize)],
        scope: &mut Vec<String>,
    ) -> Result<Node> {
        let rec = |g: &Formula, scope: &mut Vec<String>| Self::node(g, sig, scope);
        Ok(match f {
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
            Formula::Atom(a) => {
                let p = sig
                    .iter()
                    .position(|(n, _)| *n == a.name)
                    .expect("signature covers every predicate");
                let args = a
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => scope
                            .iter()
                            .rposition(|s| s == v)
                            .map(Arg::Slot)
                            .ok_or_else(|| Error::Unbound(v.clone())),
                        Term::Elem(e) => Ok(Arg::Elem(*e)),
                    })
                    .collect::<Result<_>>()?;
                Node::Pred(p, args)
            }
            Formula::And(a, b) => Node::And(Box::new(rec(a, scope)?), Box::new(rec(b, scope)?)),
            Formula::Or(a, b) => Node::Or(Box::new(rec(a, scope)?), Box::new(rec(b, scope)?)),
            Formula::Imp(a, b) => Node::Imp(Box::new(rec(a, scope)?), Box::new(rec(b, scope)?)),
            Formula::Delta(a) => Node::Delta(Box::new(rec(a, scope)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = scope.len();
                scope.push(v.clone());
                let inner = Box::new(rec(body, scope)?);
                scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    Node::Forall(slot, inner)
                } else {
                    Node::Exists(slot, inner)
                }
            }
        })
    }

    fn nesting(node: &Node) -> usize {
        match node {
            Node::Pred(..) | Node::Top | Node::Bot => 0,
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                Self::nesting(a).max(Self::nesting(b))
            }
            Node::Delta(a) => Self::nesting(a),
            Node::Forall(_, a) | Node::Exists(_, a) => 1 + Self::nesting(a),
        }
    }

    fn max_element(node: &Node) -> Option<usize> {
        match node {
            Node::Pred(_, args) => args
                .iter()
                .filter_map(|a| match a {
                    Arg::Elem(e) => Some(*e),
                    Arg::Slot(_) => None,
                })
                .max(),
            Node::Top | Node::Bot => None,
            Node::And(a, b) | Node::Or(a, b) | Node::Imp(a, b) => {
                Self::max_element(a).max(Self::max_element(b))
            }
            Node::Delta(a) | Node::Forall(_, a) | Node::Exists(_, a) => Self::max_element(a),
        }
    }

    fn cells(&self, domain: usize) -> usize {
        self.signature
            .iter()
            .map(|(_, arity)| domain.pow(*arity as u32))
            .sum()
    }

    fn offsets(&self, domain: usize) -> Vec<usize> {
        let mut acc = 0;
        self.signature
            .iter()
            .map(|(_, arity)| {
                let o = acc;
                acc += domain.pow(*arity as u32);
                o
            })
            .collect()
    }
}

struct Ctx<'a> {
    cells: &'a [Level],
    offsets: &'a [usize],
    domain: usize,
    top: Level,
}

fn eval_node(n: &Node, cx: &Ctx<'_>, env: &mut [usize]) -> Level {
    match n {
        Node::Top => cx.top,
        Node::Bot => 0,
        Node::Pred(p, args) => {
            let idx = args.iter().fold(0, |acc, a| {
                acc * cx.domain
                    + match *a {
                        Arg::Slot(s) => env[s],
                        Arg::Elem(e) => e,
                    }
            });
            cx.cells[cx.offsets[*p] + idx]
        }
        Node::And(a, b) => eval_node(a, cx, env).min(eval_node(b, cx, env)),
        Node::Or(a, b) => eval_node(a, cx, env).max(eval_node(b, cx, env)),
        Node::Imp(a, b) => implies(eval_node(a, cx, env), eval_node(b, cx, env), cx.top),
        Node::Delta(a) => delta(eval_node(a, cx, env), cx.top),
        Node::Forall(slot, body) => {
            let mut v = cx.top;
            for e in 0..cx.domain {
                env[*slot] = e;
                v = v.min(eval_node(body, cx, env));
                if v == 0 {
                    break;
                }
            }
            v
        }
        Node::Exists(slot, body) => {
            let mut v = 0;
            for e in 0..cx.domain {
                env[*slot] = e;
                v = v.max(eval_node(body, cx, env));
                if v == cx.top {
                    break;
                }
            }
            v
        }
    }
}

/// Search limits for [`is_valid_fo_bounded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub max_domain: usize,
    pub max_levels: u32,
    pub mode: Mode,
    /// Largest model space (per domain size and scale) that may be enumerated.
    pub budget: u128,
    pub strategy: Strategy,
}

pub const DEFAULT_BUDGET: u128 = 10_000_000;

impl Bounds {
    pub fn new(max_domain: usize, max_levels: u32) -> Self {
        Bounds {
            max_domain,
            max_levels,
            mode: Mode::Standard,
            budget: DEFAULT_BUDGET,
            strategy: Strategy::default(),
        }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Result of a bounded countermodel search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub countermodel_found: bool,
    pub countermodel: Option<FiniteModel>,
    pub max_domain: usize,
    pub max_levels: u32,
    pub mode: Mode,
    pub models_checked: u128,
}

impl BoundedVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

impl fmt::Display for BoundedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.countermodel {
            None => write!(
                f,
                "no countermodel within bounds (d<={}, k<={})",
                self.max_domain, self.max_levels
            ),
            Some(m) => write!(f, "countermodel {m}"),
        }
    }
}

fn space(base: u32, cells: usize) -> u128 {
    (base as u128).checked_pow(cells as u32).unwrap_or(u128::MAX)
}

/// Searches all models with domain size `1..=max_domain` and `2..=max_levels`
/// levels, in that order, for one where the universal closure of `f` is not
/// designated. Fails before searching if a model space exceeds the budget.
pub fn is_valid_fo_bounded(f: &Formula, bounds: &Bounds) -> Result<BoundedVerdict> {
    let closed = universal_closure(f);
    let compiled = Compiled::new(&closed)?;
    let min_domain = Compiled::max_element(&compiled.root).map_or(1, |e| e + 1).max(1);
    let biggest = space(
        TruthScale::new(bounds.max_levels.max(2))?.atom_levels(bounds.mode),
        compiled.cells(bounds.max_domain.max(min_domain)),
    );
    if biggest > bounds.budget {
        return Err(Error::Budget {
            models: biggest,
            budget: bounds.budget,
        });
    }
    let mut checked: u128 = 0;
    for domain in min_domain..=bounds.max_domain {
        for levels in 2..=bounds.max_levels {
            let scale = TruthScale::new(levels)?;
            let base = scale.atom_levels(bounds.mode);
            let cells = compiled.cells(domain);
            let total = space(base, cells);
            let offsets = compiled.offsets(domain);
            let top = scale.top();
            let decode = |i: u64| {
                let mut v = vec![0; cells];
                crate::semantics::decode(i, base, &mut v);
                v
            };
            let hit = par::find_first_with(
                total as u64,
                bounds.strategy,
                || (vec![0; cells], vec![0; compiled.slots]),
                |(v, env), i| {
                    crate::semantics::decode(i, base, v);
                    let cx = Ctx {
                        cells: v,
                        offsets: &offsets,
                        domain,
                        top,
                    };
                    eval_node(&compiled.root, &cx, env) != top
                },
            );
            match hit {
                Some(i) => {
                    checked += i as u128 + 1;
                    let values = decode(i);
                    let tables = compiled
                        .signature
                        .iter()
                        .zip(&offsets)
                        .map(|((name, arity), &o)| {
                            let n = domain.pow(*arity as u32);
                            (
                                name.clone(),
                                Table {
                                    arity: *arity,
                                    values: values[o..o + n].to_vec(),
                                },
                            )
                        })
                        .collect();
                    let model = FiniteModel::new(domain, scale, bounds.mode.is_restricted(), tables)?;
                    return Ok(BoundedVerdict {
                        countermodel_found: true,
                        countermodel: Some(model),
                        max_domain: bounds.max_domain,
                        max_levels: bounds.max_levels,
                        mode: bounds.mode,
                        models_checked: checked,
                    });
                }
                None => checked += total,
            }
        }
    }
    Ok(BoundedVerdict {
        countermodel_found: false,
        countermodel: None,
        max_domain: bounds.max_domain,
        max_levels: bounds.max_levels,
        mode: bounds.mode,
        models_checked: checked,
    })
}

/// One definitional conjunct of the structural normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Definition {
    /// Fresh predicate symbol, `F_i` or `F4_i` for `D`-subformulas.
    pub symbol: String,
    /// Free variables of the subformula, in first-occurrence order.
    pub params: Vec<String>,
    /// The subformula being named.
    #[serde(serialize_with = "formula_str")]
    pub subformula: Formula,
    /// The subformula with its immediate subformulas replaced by their symbols.
    #[serde(serialize_with = "formula_str")]
    pub body: Formula,
}

fn formula_str<S: Serializer>(f: &Formula, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

impl Definition {
    pub fn is_delta(&self) -> bool {
        matches!(self.subformula, Formula::Delta(_))
    }

    /// `F(x1, ..., xn)` applied to the parameters.
    pub fn head(&self) -> Formula {
        apply(&self.symbol, &self.params)
    }
}

fn apply(symbol: &str, params: &[String]) -> Formula {
    Formula::Atom(Atom::pred(
        symbol,
        params.iter().map(|p| Term::Var(p.clone())).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrucResult {
    #[serde(serialize_with = "formula_str")]
    pub formula: Formula,
    pub definitions: Vec<Definition>,
    pub root: String,
}

/// Structural normal form: one fresh predicate per subformula, defined by
/// `D forall x. (F_G(x) <-> G'(x))`, implying the root's predicate.
/// Open input is universally closed first.
pub fn struc(f: &Formula) -> Result<StrucResult> {
    let closed = universal_closure(f);
    closed.signature()?;
    let subs = closed.subformulas();
    let vocab: Vec<String> = closed.free_atoms().into_iter().map(|a| a.name).collect();
    let mut prefix = String::new();
    let names = loop {
        let names: Vec<String> = subs
            .iter()
            .enumerate()
            .map(|(i, g)| match g {
                Formula::Delta(_) => format!("{prefix}F4_{i}"),
                _ => format!("{prefix}F_{i}"),
            })
            .collect();
        if names.iter().all(|n| !vocab.contains(n)) {
            break names;
        }
        prefix.push('_');
    };
    let head_of = |g: &Formula| {
        let i = subs.iter().position(|s| s == g).expect("subformula listed");
        apply(&names[i], &g.free_variables())
    };
    let definitions: Vec<Definition> = subs
        .iter()
        .zip(&names)
        .map(|(g, name)| {
            let h = |x: &Formula| Box::new(head_of(x));
            let body = match g {
                Formula::Atom(_) | Formula::Top | Formula::Bot => g.clone(),
                Formula::And(a, b) => Formula::And(h(a), h(b)),
                Formula::Or(a, b) => Formula::Or(h(a), h(b)),
                Formula::Imp(a, b) => Formula::Imp(h(a), h(b)),
                Formula::Delta(a) => Formula::Delta(h(a)),
                Formula::Forall(v, a) => Formula::Forall(v.clone(), h(a)),
                Formula::Exists(v, a) => Formula::Exists(v.clone(), h(a)),
            };
            Definition {
                symbol: name.clone(),
                params: g.free_variables(),
                subformula: g.clone(),
                body,
            }
        })
        .collect();
    let root = definitions.last().expect("at least one subformula").symbol.clone();
    let antecedent = Formula::conjunction(definitions.iter().map(|d| {
        Formula::delta(forall_all(&d.params, Formula::equiv(d.head(), d.body.clone())))
    }));
    Ok(StrucResult {
        formula: Formula::imp(antecedent, Formula::Atom(Atom::var(root.clone()))),
        definitions,
        root,
    })
}

/// `D`-free translation built on the structural normal form: every
/// `D`-subformula definition becomes a crispness and a lower-bound
/// condition, other definitions lose their `D`, and the conclusion gains one
/// disjunct per `D`-subformula.
pub fn translate_t(f: &Formula) -> Result<Formula> {
    let s = struc(f)?;
    let mut conds = Vec::new();
    let mut escapes = Vec::new();
    for d in s.definitions.iter().filter(|d| d.is_delta()) {
        let inner = match &d.body {
            Formula::Delta(h) => (**h).clone(),
            _ => unreachable!(),
        };
        let head = d.head();
        conds.push(forall_all(
            &d.params,
            Formula::or(Formula::not(head.clone()), head.clone()),
        ));
        conds.push(forall_all(&d.params, Formula::imp(head.clone(), inner.clone())));
        escapes.push(exists_all(
            &d.params,
            Formula::and(Formula::not(head), inner),
        ));
    }
    for d in s.definitions.iter().filter(|d| !d.is_delta()) {
        conds.push(forall_all(&d.params, Formula::equiv(d.head(), d.body.clone())));
    }
    let conclusion = Formula::disjunction(
        std::iter::once(Formula::Atom(Atom::var(s.root))).chain(escapes),
    );
    Ok(Formula::imp(Formula::conjunction(conds), conclusion))
}

/// Name of the 0-ary atom marking the hole of a context template.
pub const HOLE: &str = "_";

/// Which premise the equivalence principle is checked with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Premise {
    /// `forall x. (A <-> B)`
    Plain,
    /// `forall x. D(A <-> B)`
    Delta,
}

/// The instance `premise -> (C(A) <-> C(B))` of the equivalence principle,
/// with `C` given as a template whose hole is the atom `_`.
pub fn equivalence_instance(
    a: &Formula,
    b: &Formula,
    template: &Formula,
    premise: Premise,
) -> Result<Formula> {
    if !template.free_atoms().iter().any(|x| x.name == HOLE && x.args.is_empty()) {
        return Err(Error::Precondition("template has no hole `_`".into()));
    }
    let mut vars = a.free_variables();
    for v in b.free_variables() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    let eq = Formula::equiv(a.clone(), b.clone());
    let body = match premise {
        Premise::Plain => eq,
        Premise::Delta => Formula::delta(eq),
    };
    let conclusion = Formula::equiv(template.replace_atom(HOLE, a), template.replace_atom(HOLE, b));
    Ok(Formula::imp(forall_all(&vars, body), conclusion))
}

/// Bounded countermodel search for an instance of the equivalence principle.
pub fn equivalence_theorem_check(
    a: &Formula,
    b: &Formula,
    template: &Formula,
    premise: Premise,
    bounds: &Bounds,
) -> Result<BoundedVerdict> {
    is_valid_fo_bounded(&equivalence_instance(a, b, template, premise)?, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_first_order as p;

    fn model(domain: usize, k: u32, tables: &[(&str, usize, &[Level])]) -> FiniteModel {
        let t = tables
            .iter()
            .map(|(n, arity, v)| {
                (
                    n.to_string(),
                    Table {
                        arity: *arity,
                        values: v.to_vec(),
                    },
                )
            })
            .collect();
        FiniteModel::new(domain, TruthScale::new(k).unwrap(), false, t).unwrap()
    }

    #[test]
    fn quantifiers_are_min_and_max() {
        let m = model(2, 3, &[("P", 1, &[1, 2])]);
        let env = BTreeMap::new();
        assert_eq!(eval_fo(&p("forall x. P(x)").unwrap(), &m, &env).unwrap(), 1);
        assert_eq!(eval_fo(&p("exists x. P(x)").unwrap(), &m, &env).unwrap(), 2);
        assert_eq!(eval_fo(&p("P(1)").unwrap(), &m, &env).unwrap(), 2);
        let env = BTreeMap::from([("y".to_string(), 0)]);
        assert_eq!(eval_fo(&p("P(y)").unwrap(), &m, &env).unwrap(), 1);
    }

    #[test]
    fn eval_errors() {
        let m = model(2, 3, &[("P", 1, &[1, 2])]);
        let env = BTreeMap::new();
        assert!(matches!(
            eval_fo(&p("P(x)").unwrap(), &m, &env),
            Err(Error::Unbound(_))
        ));
        assert!(matches!(
            eval_fo(&p("Q(0)").unwrap(), &m, &env),
            Err(Error::MissingEntry(_))
        ));
        assert!(matches!(
            eval_fo(&p("P(5)").unwrap(), &m, &env),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(FiniteModel::new(
            1,
            TruthScale::new(3).unwrap(),
            true,
            BTreeMap::from([("P".into(), Table { arity: 1, values: vec![2] })])
        )
        .is_err());
    }

    #[test]
    fn compiled_agrees_with_direct_eval() {
        let f = p("forall x. exists y. (R(x, y) -> D(P(y))) | ~P(x)").unwrap();
        let c = Compiled::new(&f).unwrap();
        let mut r = crate::gen::rng(11);
        use rand::Rng;
        for _ in 0..200 {
            let p_vals: Vec<Level> = (0..2).map(|_| r.gen_range(0..4)).collect();
            let r_vals: Vec<Level> = (0..4).map(|_| r.gen_range(0..4)).collect();
            let m = model(2, 4, &[("P", 1, &p_vals), ("R", 2, &r_vals)]);
            let cells: Vec<Level> = p_vals.iter().chain(&r_vals).copied().collect();
            let offsets = c.offsets(2);
            let cx = Ctx {
                cells: &cells,
                offsets: &offsets,
                domain: 2,
                top: 3,
            };
            let mut env = vec![0; c.slots];
            assert_eq!(
                eval_node(&c.root, &cx, &mut env),
                eval_fo(&f, &m, &BTreeMap::new()).unwrap()
            );
        }
    }

    #[test]
    fn bounded_search_finds_first_countermodel() {
        let f = p("(forall x. P(x)) | exists x. ~P(x)").unwrap();
        let v = is_valid_fo_bounded(&f, &Bounds::new(3, 4)).unwrap();
        let m = v.countermodel.unwrap();
        assert_eq!(m.domain(), 1);
        assert_eq!(m.scale().levels(), 3);
        assert_eq!(m.get("P", &[0]).unwrap(), 1);
        assert_eq!(
            serde_json::to_value(&m).unwrap(),
            serde_json::json!({"domain": 1, "scale": 3, "tables": {"P": {"(0)": 1}}})
        );
    }

    #[test]
    fn witness_axioms_hold_on_finite_models() {
        for s in [
            "exists x. (A(x) -> forall y. A(y))",
            "exists x. ((exists y. A(y)) -> A(x))",
        ] {
            let v = is_valid_fo_bounded(&p(s).unwrap(), &Bounds::new(3, 4)).unwrap();
            assert!(!v.countermodel_found, "{s}: {v}");
        }
    }

    #[test]
    fn strategies_agree() {
        let f = p("forall x. (P(x) | ~P(x))").unwrap();
        let b = Bounds::new(3, 4);
        let seq = is_valid_fo_bounded(&f, &b.strategy(Strategy::Sequential)).unwrap();
        let par = is_valid_fo_bounded(&f, &b.strategy(Strategy::Parallel)).unwrap();
        assert_eq!(seq, par);
        assert!(seq.countermodel_found);
    }

    #[test]
    fn budget_guard() {
        let f = p("forall x. forall y. R(x, y)").unwrap();
        let e = is_valid_fo_bounded(&f, &Bounds::new(4, 4).budget(1000)).unwrap_err();
        assert!(matches!(e, Error::Budget { .. }));
    }

    #[test]
    fn restricted_models_keep_atoms_below_top() {
        let f = p("forall x. ~D(P(x))").unwrap();
        assert!(is_valid_fo_bounded(&f, &Bounds::new(2, 3)).unwrap().countermodel_found);
        let r = is_valid_fo_bounded(&f, &Bounds::new(2, 3).mode(Mode::Restricted)).unwrap();
        assert!(!r.countermodel_found);
    }

    #[test]
    fn struc_shapes() {
        let s = struc(&p("P").unwrap()).unwrap();
        assert_eq!(s.definitions.len(), 1);
        assert_eq!(s.root, "F_0");
        assert_eq!(s.formula.render(), "D(F_0 <-> P) -> F_0");

        let s = struc(&p("D(exists x. P(x))").unwrap()).unwrap();
        let syms: Vec<_> = s.definitions.iter().map(|d| d.symbol.as_str()).collect();
        assert_eq!(syms, ["F_0", "F_1", "F4_2"]);
        assert_eq!(s.root, "F4_2");
        assert_eq!(s.definitions[0].params, ["x"]);
        assert_eq!(s.definitions[1].body.render(), "exists x. F_0(x)");
        assert_eq!(s.definitions[2].body.render(), "D(F_1)");
    }

    #[test]
    fn struc_avoids_input_vocabulary() {
        let s = struc(&p("F_0 | F_1").unwrap()).unwrap();
        assert!(s.definitions.iter().all(|d| d.symbol.starts_with('_')));
    }

    #[test]
    fn translation_shapes() {
        let t = translate_t(&p("P -> Q").unwrap()).unwrap();
        assert!(!t.contains_delta());
        assert_eq!(
            t.render(),
            "(F_0 <-> P) & (F_1 <-> Q) & (F_2 <-> F_0 -> F_1) -> F_2"
        );
        let t = translate_t(&p("D(P)").unwrap()).unwrap();
        assert!(!t.contains_delta());
        assert_eq!(
            t.render(),
            "(~F4_1 | F4_1) & (F4_1 -> F_0) & (F_0 <-> P) -> F4_1 | ~F4_1 & F_0"
        );
        let t = translate_t(&p("D(exists x. D(P(x)))").unwrap()).unwrap();
        assert!(!t.contains_delta());
        assert!(t.render().contains("forall x. ~F4_1(x) | F4_1(x)"));
    }

    #[test]
    fn equivalence_instances() {
        let (a, b) = (p("P(x)").unwrap(), p("Q(x)").unwrap());
        let inst = equivalence_instance(&a, &b, &p("exists x. D(_)").unwrap(), Premise::Delta).unwrap();
        assert_eq!(
            inst.render(),
            "(forall x. D(P(x) <-> Q(x))) -> (exists x. D(P(x))) <-> (exists x. D(Q(x)))"
        );
        assert!(equivalence_instance(&a, &b, &p("R").unwrap(), Premise::Plain).is_err());
    }
}
