//! Chains: syntactic total preorders of variables between `F` and `T`.
//!
//! A chain is stored as its equivalence classes listed bottom to top, plus
//! two flags saying whether the lowest class sits in the class of `F` and
//! whether the highest class sits in the class of `T`. Its formula is the
//! conjunction, over neighbours in the flattened sequence
//! `F, x1, ..., xn, T`, of `x <-> y` (same class) or `x < y` (strict step).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::semantics::{Interpretation, Level};

/// A chain anchor or variable; also the result of syntactic evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Bot,
    Var(Atom),
    Top,
}

impl Symbol {
    pub fn var(name: &str) -> Symbol {
        Symbol::Var(Atom::var(name))
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            Symbol::Bot => Formula::Bot,
            Symbol::Top => Formula::Top,
            Symbol::Var(a) => Formula::Atom(a.clone()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Bot => f.write_str("F"),
            Symbol::Top => f.write_str("T"),
            Symbol::Var(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Strict,
    Equiv,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    blocks: Vec<Vec<Atom>>,
    bot_merged: bool,
    top_merged: bool,
}

impl Chain {
    /// Builds a canonical chain from its classes (bottom to top).
    pub fn new(blocks: Vec<Vec<Atom>>, bot_merged: bool, top_merged: bool) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut canon = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::InvalidChain("empty class".into()));
            }
            for a in &block {
                if !a.is_propositional() {
                    return Err(Error::InvalidChain(format!("`{a}` is not a variable")));
                }
                if !seen.insert(a.clone()) {
                    return Err(Error::InvalidChain(format!("`{a}` occurs twice")));
                }
            }
            block.sort();
            canon.push(block);
        }
        if canon.is_empty() && (bot_merged || top_merged) {
            return Err(Error::InvalidChain("no class to merge with F or T".into()));
        }
        if canon.len() == 1 && bot_merged && top_merged {
            return Err(Error::InvalidChain("F would be in the class of T".into()));
        }
        Ok(Chain {
            blocks: canon,
            bot_merged,
            top_merged,
        })
    }

    /// Builds a chain from groups joined by explicit links; `Equiv` links merge
    /// neighbouring groups. `links.len()` must be `groups.len() - 1`.
    pub fn from_links(
        groups: Vec<Vec<Atom>>,
        bot_merged: bool,
        top_merged: bool,
        links: &[Link],
    ) -> Result<Self> {
        if !groups.is_empty() && links.len() + 1 != groups.len() {
            return Err(Error::InvalidChain(format!(
                "{} groups need {} links, got {}",
                groups.len(),
                groups.len() - 1,
                links.len()
            )));
        }
        let mut blocks: Vec<Vec<Atom>> = Vec::new();
        for (i, g) in groups.into_iter().enumerate() {
            match (i, blocks.last_mut()) {
                (i, Some(last)) if links[i - 1] == Link::Equiv => last.extend(g),
                _ => blocks.push(g),
            }
        }
        Chain::new(blocks, bot_merged, top_merged)
    }

    pub fn empty() -> Chain {
        Chain {
            blocks: Vec::new(),
            bot_merged: false,
            top_merged: false,
        }
    }

    pub fn blocks(&self) -> &[Vec<Atom>] {
        &self.blocks
    }

    pub fn bot_merged(&self) -> bool {
        self.bot_merged
    }

    pub fn top_merged(&self) -> bool {
        self.top_merged
    }

    /// Links between consecutive classes; always strict in canonical form.
    pub fn links(&self) -> Vec<Link> {
        vec![Link::Strict; self.blocks.len().saturating_sub(1)]
    }

    /// No variable in the class of `T`.
    pub fn is_restricted(&self) -> bool {
        !self.top_merged
    }

    pub fn vars(&self) -> BTreeSet<Atom> {
        self.blocks.iter().flatten().cloned().collect()
    }

    fn offset(&self) -> usize {
        usize::from(!self.bot_merged)
    }

    /// Rank of a symbol in the preorder; `F` has rank 0.
    pub fn position(&self, s: &Symbol) -> Result<usize> {
        match s {
            Symbol::Bot => Ok(0),
            Symbol::Top => Ok(self.top_position()),
            Symbol::Var(a) => self
                .blocks
                .iter()
                .position(|b| b.binary_search(a).is_ok())
                .map(|i| i + self.offset())
                .ok_or_else(|| Error::NotInChain(a.to_string())),
        }
    }

    fn top_position(&self) -> usize {
        let last = self.blocks.len() + self.offset();
        if self.top_merged {
            last - 1
        } else {
            last
        }
    }

    /// Whether `x -> y` follows from the chain, i.e. `x` sits no higher than `y`.
    pub fn entails(&self, x: &Symbol, y: &Symbol) -> Result<bool> {
        Ok(self.position(x)? <= self.position(y)?)
    }

    /// The flattened sequence `F, x1, ..., xn, T` with each symbol's rank.
    pub fn sequence(&self) -> Vec<(Symbol, usize)> {
        let mut seq = vec![(Symbol::Bot, 0)];
        for (i, b) in self.blocks.iter().enumerate() {
            for a in b {
                seq.push((Symbol::Var(a.clone()), i + self.offset()));
            }
        }
        seq.push((Symbol::Top, self.top_position()));
        seq
    }

    /// Conjunction of neighbour constraints, `x <-> y` or `x < y`.
    pub fn to_formula(&self) -> Formula {
        let seq = self.sequence();
        Formula::conjunction(seq.windows(2).map(|w| {
            let (x, px) = &w[0];
            let (y, py) = &w[1];
            if px == py {
                Formula::equiv(x.to_formula(), y.to_formula())
            } else {
                Formula::less(x.to_formula(), y.to_formula())
            }
        }))
    }

    /// Whether the interpretation realizes exactly this order type.
    pub fn matches(&self, interp: &Interpretation) -> bool {
        let top = interp.scale().top();
        let level = |s: &Symbol| -> Option<Level> {
            match s {
                Symbol::Bot => Some(0),
                Symbol::Top => Some(top),
                Symbol::Var(a) => interp.get(a),
            }
        };
        let seq = self.sequence();
        seq.windows(2).all(|w| match (level(&w[0].0), level(&w[1].0)) {
            (Some(x), Some(y)) if w[0].1 == w[1].1 => x == y,
            (Some(x), Some(y)) => x < y,
            _ => false,
        })
    }

    /// The chain whose order type an interpretation realizes.
    pub fn of_interpretation(interp: &Interpretation) -> Chain {
        let top = interp.scale().top();
        let mut levels: Vec<Level> = interp.assignment().values().copied().collect();
        levels.sort_unstable();
        levels.dedup();
        let blocks = levels
            .iter()
            .map(|&l| {
                interp
                    .assignment()
                    .iter()
                    .filter(|(_, &v)| v == l)
                    .map(|(a, _)| a.clone())
                    .collect()
            })
            .collect();
        Chain {
            blocks,
            bot_merged: levels.first() == Some(&0),
            top_merged: levels.last() == Some(&top),
        }
    }

    /// This chain with the class of `a` and everything above merged into `T`.
    /// `None` when `a` sits in the class of `F`.
    pub fn raise_to_top(&self, a: &Atom) -> Result<Option<Chain>> {
        let i = self
            .blocks
            .iter()
            .position(|b| b.binary_search(a).is_ok())
            .ok_or_else(|| Error::NotInChain(a.to_string()))?;
        if i == 0 && self.bot_merged {
            return Ok(None);
        }
        let mut blocks = self.blocks[..i].to_vec();
        blocks.push(self.blocks[i..].concat());
        Chain::new(blocks, self.bot_merged, true).map(Some)
    }

    fn sort_key(&self) -> (usize, &Vec<Vec<Atom>>, bool, bool) {
        (
            self.blocks.len(),
            &self.blocks,
            !self.bot_merged,
            self.top_merged,
        )
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: number of classes, then classes lexicographically,
/// then `F`-merged before unmerged, then `T`-unmerged before merged.
impl Ord for Chain {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

/// Text form `B < a <= b < T`: `B`/`T` are the anchors, `<` a strict step,
/// `<=` an equivalence.
impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("B")?;
        for (i, b) in self.blocks.iter().enumerate() {
            let link = if i == 0 && self.bot_merged { "<=" } else { "<" };
            for (j, a) in b.iter().enumerate() {
                write!(f, " {} {a}", if j == 0 { link } else { "<=" })?;
            }
        }
        f.write_str(if self.top_merged { " <= T" } else { " < T" })
    }
}

impl FromStr for Chain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let bad = |m: &str| Error::InvalidChain(format!("{m} in `{s}`"));
        if toks.len() < 3 || toks.len().is_multiple_of(2) {
            return Err(bad("expected `B op x op ... T`"));
        }
        if toks[0] != "B" || toks[toks.len() - 1] != "T" {
            return Err(bad("chain must start with B and end with T"));
        }
        let link = |t: &str| match t {
            "<" => Ok(Link::Strict),
            "<=" => Ok(Link::Equiv),
            _ => Err(bad("expected `<` or `<=`")),
        };
        let links = toks[1..]
            .iter()
            .step_by(2)
            .map(|t| link(t))
            .collect::<Result<Vec<_>>>()?;
        let mut vars = Vec::new();
        for name in toks[2..toks.len() - 1].iter().step_by(2) {
            if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(bad("bad variable name"));
            }
            vars.push(Atom::var(*name));
        }
        let first = links[0];
        let last = links[links.len() - 1];
        if vars.is_empty() {
            return if first == Link::Strict {
                Ok(Chain::empty())
            } else {
                Err(Error::InvalidChain("F would be in the class of T".into()))
            };
        }
        let groups = vars.into_iter().map(|a| vec![a]).collect();
        Chain::from_links(
            groups,
            first == Link::Equiv,
            last == Link::Equiv,
            &links[1..links.len() - 1],
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    blocks: Vec<Vec<String>>,
    bot_merged: bool,
    top_merged: bool,
    links: Vec<Link>,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainJson {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|a| a.name.clone()).collect())
                .collect(),
            bot_merged: self.bot_merged,
            top_merged: self.top_merged,
            links: self.links(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ChainJson::deserialize(d)?;
        let groups = j
            .blocks
            .into_iter()
            .map(|b| b.into_iter().map(Atom::var).collect())
            .collect();
        Chain::from_links(groups, j.bot_merged, j.top_merged, &j.links)
            .map_err(serde::de::Error::custom)
    }
}

/// Every canonical chain over `vars`, without duplicates, in canonical order.
pub fn enumerate_chains(vars: &BTreeSet<Atom>) -> Vec<Chain> {
    let vars: Vec<Atom> = vars.iter().cloned().collect();
    let mut partitions = Vec::new();
    ordered_partitions(&vars, (1u64 << vars.len()) - 1, &mut Vec::new(), &mut partitions);
    let mut chains = Vec::new();
    for blocks in partitions {
        let merges: &[(bool, bool)] = match blocks.len() {
            0 => &[(false, false)],
            1 => &[(true, false), (false, false), (false, true)],
            _ => &[(true, false), (false, false), (true, true), (false, true)],
        };
        for &(b, t) in merges {
            chains.push(Chain::new(blocks.clone(), b, t).expect("well-formed by construction"));
        }
    }
    chains.sort();
    chains.dedup();
    chains
}

/// Chains with no variable in the class of `T`.
pub fn enumerate_restricted_chains(vars: &BTreeSet<Atom>) -> Vec<Chain> {
    enumerate_chains(vars)
        .into_iter()
        .filter(Chain::is_restricted)
        .collect()
}

fn ordered_partitions(
    vars: &[Atom],
    remaining: u64,
    prefix: &mut Vec<Vec<Atom>>,
    out: &mut Vec<Vec<Vec<Atom>>>,
) {
    if remaining == 0 {
        out.push(prefix.clone());
        return;
    }
    // iterate over nonempty submasks of `remaining`
    let mut sub = remaining;
    while sub != 0 {
        let block = (0..vars.len())
            .filter(|i| sub & (1 << i) != 0)
            .map(|i| vars[i].clone())
            .collect();
        prefix.push(block);
        ordered_partitions(vars, remaining & !sub, prefix, out);
        prefix.pop();
        sub = (sub - 1) & remaining;
    }
}

/// How `D(..)` is treated during syntactic evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRules {
    /// `D` is rejected.
    None,
    /// `D(F)` is `F`, `D(x)` is `F` for variables, `D(T)` is `T`; needs a restricted chain.
    Restricted,
}

/// Reduces `f` under `chain`, innermost connective first, to a single symbol
/// `P` with `chain & f <-> chain & P`.
pub fn syntactic_eval(chain: &Chain, f: &Formula, rules: DeltaRules) -> Result<Symbol> {
    let rec = |g: &Formula| syntactic_eval(chain, g, rules);
    match f {
        Formula::Top => Ok(Symbol::Top),
        Formula::Bot => Ok(Symbol::Bot),
        Formula::Atom(a) => {
            if !a.is_propositional() {
                return Err(Error::FirstOrder(a.to_string()));
            }
            let s = Symbol::Var(a.clone());
            chain.position(&s)?;
            Ok(s)
        }
        Formula::And(x, y) => {
            let (x, y) = (rec(x)?, rec(y)?);
            Ok(if chain.entails(&x, &y)? { x } else { y })
        }
        Formula::Or(x, y) => {
            let (x, y) = (rec(x)?, rec(y)?);
            Ok(if chain.entails(&y, &x)? { x } else { y })
        }
        Formula::Imp(x, y) => {
            let (x, y) = (rec(x)?, rec(y)?);
            Ok(if chain.entails(&x, &y)? { Symbol::Top } else { y })
        }
        Formula::Delta(x) => {
            if rules == DeltaRules::None {
                return Err(Error::DeltaNotAllowed);
            }
            match rec(x)? {
                Symbol::Top => Ok(Symbol::Top),
                Symbol::Bot => Ok(Symbol::Bot),
                Symbol::Var(_) if chain.is_restricted() => Ok(Symbol::Bot),
                Symbol::Var(a) => Err(Error::UnrestrictedDelta(a.to_string())),
            }
        }
        Formula::Forall(v, _) => Err(Error::FirstOrder(format!("forall {v}"))),
        Formula::Exists(v, _) => Err(Error::FirstOrder(format!("exists {v}"))),
    }
}
