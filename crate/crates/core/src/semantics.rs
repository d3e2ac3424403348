//! Finite-scale evaluation and exhaustive validity / equivalence deciders.
//!
//! A [`TruthScale`] with `k` levels stands for the Gödel set
//! `{0, 1/(k-1), ..., 1}`; only the order of levels matters, so levels are
//! plain integers with `k - 1` designated. A formula with `n` atoms is valid
//! in every Gödel logic iff it is valid on the `n + 2` level scale, which is
//! the scale [`is_valid`] decides on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::par::{self, Strategy};

pub type Level = u32;

/// Finite linearly ordered value set with `levels` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruthScale {
    levels: u32,
}

impl TruthScale {
    pub fn new(levels: u32) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidScale(levels));
        }
        Ok(TruthScale { levels })
    }

    /// The `n + 2` scale sufficient for formulas over `n` atoms.
    pub fn for_atoms(n: usize) -> Self {
        TruthScale {
            levels: n as u32 + 2,
        }
    }

    pub fn levels(self) -> u32 {
        self.levels
    }

    /// Level of `T`, the only designated value.
    pub fn top(self) -> Level {
        self.levels - 1
    }

    pub fn bot(self) -> Level {
        0
    }

    /// Number of levels an atom may take in `mode`.
    pub fn atom_levels(self, mode: Mode) -> u32 {
        match mode {
            Mode::Standard => self.levels,
            Mode::Restricted => self.levels - 1,
        }
    }
}

impl fmt::Display for TruthScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}", self.levels)
    }
}

/// Standard semantics, or restricted semantics where atoms stay below `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Standard,
    Restricted,
}

impl Mode {
    pub fn is_restricted(self) -> bool {
        self == Mode::Restricted
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Restricted => "restricted",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(Mode::Standard),
            "restricted" => Ok(Mode::Restricted),
            other => Err(format!("unknown mode `{other}` (expected standard|restricted)")),
        }
    }
}

/// Assignment of levels to atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    assignment: BTreeMap<Atom, Level>,
    scale: TruthScale,
    restricted: bool,
}

impl Interpretation {
    pub fn new(
        assignment: BTreeMap<Atom, Level>,
        scale: TruthScale,
        restricted: bool,
    ) -> Result<Self> {
        let limit = if restricted {
            scale.top()
        } else {
            scale.levels()
        };
        for (atom, &level) in &assignment {
            if level >= limit {
                return Err(Error::LevelOutOfRange {
                    atom: atom.to_string(),
                    level,
                    levels: scale.levels(),
                    restricted,
                });
            }
        }
        Ok(Interpretation {
            assignment,
            scale,
            restricted,
        })
    }

    /// Convenience constructor from `(name, level)` pairs.
    pub fn from_pairs(pairs: &[(&str, Level)], scale: TruthScale, restricted: bool) -> Result<Self> {
        let assignment = pairs
            .iter()
            .map(|&(n, l)| (Atom::var(n), l))
            .collect();
        Interpretation::new(assignment, scale, restricted)
    }

    pub fn get(&self, atom: &Atom) -> Option<Level> {
        self.assignment.get(atom).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<Atom, Level> {
        &self.assignment
    }

    pub fn scale(&self) -> TruthScale {
        self.scale
    }

    pub fn is_restricted(&self) -> bool {
        self.restricted
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, l) in &self.assignment {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}={l}")?;
        }
        if first {
            f.write_str("(empty)")?;
        }
        Ok(())
    }
}

impl Serialize for Interpretation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.assignment.iter().map(|(a, l)| (a.to_string(), l)))
    }
}

/// Outcome of an exhaustive decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub valid: bool,
    pub countermodel: Option<Interpretation>,
    pub scale: TruthScale,
    pub mode: Mode,
}

impl Verdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.countermodel {
            None => write!(f, "valid ({})", self.scale),
            Some(cm) => write!(f, "invalid ({}): countermodel {cm}", self.scale),
        }
    }
}

/// Which notion of equivalence [`are_equivalent_at_with`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    /// Both formulas take the designated value under exactly the same
    /// interpretations (`D(f) <-> D(g)` is valid). This is the sense in
    /// which chain normal forms are equivalent to their input.
    #[default]
    Designated,
    /// Both formulas take the same level everywhere (`f <-> g` is valid).
    Value,
}

/// Evaluates a propositional formula clause by clause.
pub fn eval(f: &Formula, interp: &Interpretation) -> Result<Level> {
    let top = interp.scale.top();
    let rec = |g: &Formula| eval(g, interp);
    Ok(match f {
        Formula::Bot => 0,
        Formula::Top => top,
        Formula::Atom(a) => {
            if !a.is_propositional() {
                return Err(Error::FirstOrder(a.to_string()));
            }
            interp
                .get(a)
                .ok_or_else(|| Error::Unassigned(a.to_string()))?
        }
        Formula::And(a, b) => rec(a)?.min(rec(b)?),
        Formula::Or(a, b) => rec(a)?.max(rec(b)?),
        Formula::Imp(a, b) => implies(rec(a)?, rec(b)?, top),
        Formula::Delta(a) => delta(rec(a)?, top),
        Formula::Forall(v, _) => return Err(Error::FirstOrder(format!("forall {v}"))),
        Formula::Exists(v, _) => return Err(Error::FirstOrder(format!("exists {v}"))),
    })
}

#[inline]
pub(crate) fn implies(a: Level, b: Level, top: Level) -> Level {
    if a <= b {
        top
    } else {
        b
    }
}

#[inline]
pub(crate) fn delta(a: Level, top: Level) -> Level {
    if a == top {
        top
    } else {
        0
    }
}

/// All interpretations of `atoms` in lexicographic order (first atom most significant).
pub fn enumerate_interps(
    atoms: &BTreeSet<Atom>,
    scale: TruthScale,
    restricted: bool,
) -> impl Iterator<Item = Interpretation> + '_ {
    let mode = if restricted {
        Mode::Restricted
    } else {
        Mode::Standard
    };
    let base = scale.atom_levels(mode);
    let atoms: Vec<Atom> = atoms.iter().cloned().collect();
    let total = assignment_count(base, atoms.len());
    let mut digits = vec![0; atoms.len()];
    (0..total).map(move |i| {
        decode(i, base, &mut digits);
        let assignment = atoms.iter().cloned().zip(digits.iter().copied()).collect();
        Interpretation {
            assignment,
            scale,
            restricted,
        }
    })
}

fn assignment_count(base: u32, n: usize) -> u64 {
    (base as u64)
        .checked_pow(n as u32)
        .expect("assignment space overflows u64")
}

#[inline]
pub(crate) fn decode(mut index: u64, base: u32, digits: &mut [Level]) {
    for d in digits.iter_mut().rev() {
        *d = (index % base as u64) as Level;
        index /= base as u64;
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Slot(usize),
    Top,
    Bot,
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Delta(usize),
}

/// Formula flattened into a shared-subterm DAG over indexed atom slots.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    nodes: Vec<Node>,
}

impl Compiled {
    /// `atoms` fixes the slot order; every atom of `f` must be listed.
    pub(crate) fn new(f: &Formula, atoms: &[Atom]) -> Result<Self> {
        f.require_propositional()?;
        let subs = f.subformulas();
        let index: HashMap<&Formula, usize> =
            subs.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let slot = |a: &Atom| {
            atoms
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| Error::Unassigned(a.to_string()))
        };
        let nodes = subs
            .iter()
            .map(|g| {
                Ok(match g {
                    Formula::Atom(a) => Node::Slot(slot(a)?),
                    Formula::Top => Node::Top,
                    Formula::Bot => Node::Bot,
                    Formula::And(a, b) => Node::And(index[&**a], index[&**b]),
                    Formula::Or(a, b) => Node::Or(index[&**a], index[&**b]),
                    Formula::Imp(a, b) => Node::Imp(index[&**a], index[&**b]),
                    Formula::Delta(a) => Node::Delta(index[&**a]),
                    Formula::Forall(..) | Formula::Exists(..) => unreachable!(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Compiled { nodes })
    }

    pub(crate) fn eval(&self, values: &[Level], top: Level, scratch: &mut Vec<Level>) -> Level {
        scratch.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Slot(i) => values[i],
                Node::Top => top,
                Node::Bot => 0,
                Node::And(a, b) => scratch[a].min(scratch[b]),
                Node::Or(a, b) => scratch[a].max(scratch[b]),
                Node::Imp(a, b) => implies(scratch[a], scratch[b], top),
                Node::Delta(a) => delta(scratch[a], top),
            };
            scratch.push(v);
        }
        *scratch.last().expect("compiled formula is nonempty")
    }
}

/// Lexicographically first assignment (as level digits) satisfying `bad`, if any.
fn search<F>(n: usize, base: u32, strategy: Strategy, bad: F) -> Option<Vec<Level>>
where
    F: Fn(&[Level], &mut Vec<Level>) -> bool + Sync + Send,
{
    let total = assignment_count(base, n);
    let hit = par::find_first_with(
        total,
        strategy,
        || (vec![0; n], Vec::new()),
        |(digits, scratch), i| {
            decode(i, base, digits);
            bad(digits, scratch)
        },
    )?;
    let mut digits = vec![0; n];
    decode(hit, base, &mut digits);
    Some(digits)
}

fn verdict(
    atoms: Vec<Atom>,
    hit: Option<Vec<Level>>,
    scale: TruthScale,
    mode: Mode,
) -> Verdict {
    let countermodel = hit.map(|digits| Interpretation {
        assignment: atoms.into_iter().zip(digits).collect(),
        scale,
        restricted: mode.is_restricted(),
    });
    Verdict {
        valid: countermodel.is_none(),
        countermodel,
        scale,
        mode,
    }
}

/// Decides validity on the `n + 2` scale.
pub fn is_valid(f: &Formula, mode: Mode) -> Result<Verdict> {
    let n = f.free_atoms().len();
    is_valid_at_with(f, n as u32 + 2, mode, Strategy::default())
}

/// Validity on a chosen scale. Below `n + 2` levels this is only a
/// necessary condition for validity in all Gödel logics.
pub fn is_valid_at(f: &Formula, levels: u32, mode: Mode) -> Result<Verdict> {
    is_valid_at_with(f, levels, mode, Strategy::default())
}

pub fn is_valid_at_with(f: &Formula, levels: u32, mode: Mode, strategy: Strategy) -> Result<Verdict> {
    let scale = TruthScale::new(levels)?;
    f.require_propositional()?;
    let atoms: Vec<Atom> = f.free_atoms().into_iter().collect();
    let compiled = Compiled::new(f, &atoms)?;
    let top = scale.top();
    let hit = search(atoms.len(), scale.atom_levels(mode), strategy, |v, s| {
        compiled.eval(v, top, s) != top
    });
    Ok(verdict(atoms, hit, scale, mode))
}

/// Designated equivalence on the `n + 2` scale over the union of atoms.
pub fn are_equivalent(f: &Formula, g: &Formula, mode: Mode) -> Result<Verdict> {
    are_equivalent_as(f, g, mode, Equivalence::Designated)
}

/// Value equivalence on the `n + 2` scale: valid iff `f <-> g` is valid.
pub fn are_value_equivalent(f: &Formula, g: &Formula, mode: Mode) -> Result<Verdict> {
    are_equivalent_as(f, g, mode, Equivalence::Value)
}

pub fn are_equivalent_as(
    f: &Formula,
    g: &Formula,
    mode: Mode,
    notion: Equivalence,
) -> Result<Verdict> {
    let n = f.free_atoms().union(&g.free_atoms()).count();
    are_equivalent_at_with(f, g, n as u32 + 2, mode, notion, Strategy::default())
}

/// Exhaustive comparison of `f` and `g`; the countermodel is the first
/// interpretation where they differ in the chosen sense.
pub fn are_equivalent_at_with(
    f: &Formula,
    g: &Formula,
    levels: u32,
    mode: Mode,
    notion: Equivalence,
    strategy: Strategy,
) -> Result<Verdict> {
    let scale = TruthScale::new(levels)?;
    f.require_propositional()?;
    g.require_propositional()?;
    let atoms: Vec<Atom> = f.free_atoms().union(&g.free_atoms()).cloned().collect();
    let cf = Compiled::new(f, &atoms)?;
    let cg = Compiled::new(g, &atoms)?;
    let top = scale.top();
    let hit = search(atoms.len(), scale.atom_levels(mode), strategy, |v, s| {
        let x = cf.eval(v, top, s);
        let y = cg.eval(v, top, s);
        match notion {
            Equivalence::Value => x != y,
            Equivalence::Designated => (x == top) != (y == top),
        }
    });
    Ok(verdict(atoms, hit, scale, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn scale(k: u32) -> TruthScale {
        TruthScale::new(k).unwrap()
    }

    fn interp(pairs: &[(&str, Level)], k: u32) -> Interpretation {
        Interpretation::from_pairs(pairs, scale(k), false).unwrap()
    }

    #[test]
    fn eval_clauses() {
        let f = parse("a -> b").unwrap();
        assert_eq!(eval(&f, &interp(&[("a", 2), ("b", 1)], 3)).unwrap(), 1);
        let d = parse("D(a)").unwrap();
        assert_eq!(eval(&d, &interp(&[("a", 1)], 3)).unwrap(), 0);
        assert_eq!(eval(&d, &interp(&[("a", 2)], 3)).unwrap(), 2);
        let lem = parse("~a | a").unwrap();
        assert_eq!(eval(&lem, &interp(&[("a", 1)], 3)).unwrap(), 1);
    }

    #[test]
    fn eval_errors() {
        let f = parse("a & b").unwrap();
        assert!(matches!(
            eval(&f, &interp(&[("a", 1)], 3)),
            Err(Error::Unassigned(_))
        ));
        let fo = crate::formula::parse_first_order("forall x. P(x)").unwrap();
        assert!(matches!(
            eval(&fo, &interp(&[], 3)),
            Err(Error::FirstOrder(_))
        ));
    }

    #[test]
    fn interpretation_invariants() {
        assert!(Interpretation::from_pairs(&[("a", 3)], scale(3), false).is_err());
        assert!(Interpretation::from_pairs(&[("a", 2)], scale(3), true).is_err());
        assert!(Interpretation::from_pairs(&[("a", 1)], scale(3), true).is_ok());
        assert!(TruthScale::new(1).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let a = BTreeSet::from([Atom::var("a")]);
        assert_eq!(enumerate_interps(&a, scale(3), false).count(), 3);
        let r: Vec<_> = enumerate_interps(&a, scale(3), true).collect();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].get(&Atom::var("a")), Some(1));
        let ab = BTreeSet::from([Atom::var("a"), Atom::var("b")]);
        let all: Vec<_> = enumerate_interps(&ab, scale(4), false).collect();
        assert_eq!(all.len(), 16);
        // b varies fastest
        assert_eq!(all[1].get(&Atom::var("a")), Some(0));
        assert_eq!(all[1].get(&Atom::var("b")), Some(1));
        assert_eq!(enumerate_interps(&BTreeSet::new(), scale(3), false).count(), 1);
    }

    #[test]
    fn validity_examples() {
        let lem = parse("a | ~a").unwrap();
        let v = is_valid(&lem, Mode::Standard).unwrap();
        assert!(!v.valid);
        assert_eq!(v.scale.levels(), 3);
        assert_eq!(v.countermodel.unwrap().get(&Atom::var("a")), Some(1));

        assert!(is_valid(&parse("D(a) -> a").unwrap(), Mode::Standard).unwrap().valid);

        let not_delta = parse("~D(a)").unwrap();
        assert!(is_valid(&not_delta, Mode::Restricted).unwrap().valid);
        let std = is_valid(&not_delta, Mode::Standard).unwrap();
        assert!(!std.valid);
        assert_eq!(std.countermodel.unwrap().get(&Atom::var("a")), Some(2));
    }

    #[test]
    fn validity_at_scale() {
        let lem = parse("a | ~a").unwrap();
        assert!(is_valid_at(&lem, 2, Mode::Standard).unwrap().valid);
        assert!(!is_valid_at(&lem, 3, Mode::Standard).unwrap().valid);
        assert!(matches!(
            is_valid_at(&lem, 1, Mode::Standard),
            Err(Error::InvalidScale(1))
        ));
    }

    #[test]
    fn equivalence_examples() {
        let f = parse("a | D(a | ~a)").unwrap();
        let g = parse("~a").unwrap();
        assert!(are_equivalent(&f, &g, Mode::Restricted).unwrap().valid);
        // levels differ at a = 1 (value 1 against 0)
        let v = are_value_equivalent(&f, &g, Mode::Restricted).unwrap();
        assert!(!v.valid);
        assert_eq!(v.countermodel.unwrap().get(&Atom::var("a")), Some(1));

        assert!(are_equivalent(&f, &f, Mode::Standard).unwrap().valid);

        let d = parse("D(a)").unwrap();
        assert!(are_equivalent(&d, &Formula::Bot, Mode::Restricted).unwrap().valid);
        assert!(are_value_equivalent(&d, &Formula::Bot, Mode::Restricted).unwrap().valid);
        assert!(!are_equivalent(&d, &Formula::Bot, Mode::Standard).unwrap().valid);
    }

    #[test]
    fn verdict_json_shape() {
        let v = is_valid(&parse("a | ~a").unwrap(), Mode::Standard).unwrap();
        let j = v.to_json();
        assert_eq!(
            j,
            serde_json::json!({"valid": false, "countermodel": {"a": 1}, "scale": 3, "mode": "standard"})
        );
        let ok = is_valid(&parse("a -> a").unwrap(), Mode::Restricted).unwrap();
        assert_eq!(
            ok.to_json(),
            serde_json::json!({"valid": true, "countermodel": null, "scale": 3, "mode": "restricted"})
        );
    }

    #[test]
    fn compiled_matches_tree_eval() {
        let f = parse("(a -> b) | D(~a & b) -> (b < a)").unwrap();
        let atoms: Vec<Atom> = f.free_atoms().into_iter().collect();
        let c = Compiled::new(&f, &atoms).unwrap();
        let set: BTreeSet<Atom> = atoms.iter().cloned().collect();
        let mut scratch = Vec::new();
        for i in enumerate_interps(&set, scale(5), false) {
            let vals: Vec<Level> = atoms.iter().map(|a| i.get(a).unwrap()).collect();
            assert_eq!(c.eval(&vals, 4, &mut scratch), eval(&f, &i).unwrap());
        }
    }
}
