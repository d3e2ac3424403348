//! Chain normal forms, `D`-elimination under restricted semantics, and the
//! reductions between restricted and standard validity.
//!
//! The normal form evaluates the input syntactically under every chain over
//! its variables and keeps the chains whose residue is `T`:
//!
//! * residue `F`: the chain is dropped;
//! * residue `T`: the chain is kept as is;
//! * residue a variable `x`, standard mode: the chain is replaced by the one
//!   with `x`'s class and everything above merged into `T` (dropped when `x`
//!   sits with `F`);
//! * residue a variable, restricted mode: the chain is dropped, since `x`
//!   never reaches `T` there.
//!
//! Identical chains are kept once. The disjunction of the surviving chain
//! formulas takes the designated value under exactly the interpretations
//! where the input does.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::chain::{enumerate_chains, enumerate_restricted_chains, syntactic_eval, Chain, DeltaRules, Symbol};
use crate::error::{Error, Result};
use crate::formula::{Atom, Formula};
use crate::par::{self, Strategy};
use crate::semantics::{are_value_equivalent, is_valid, Mode, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disjunct {
    /// Chain emitted into the normal form.
    pub chain: Chain,
    /// What the source chain reduced the formula to (`T` or a variable).
    #[serde(serialize_with = "symbol_str")]
    pub residue: Symbol,
}

fn symbol_str<S: serde::Serializer>(s: &Symbol, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainNormalForm {
    pub mode: Mode,
    #[serde(skip)]
    pub vars: BTreeSet<Atom>,
    pub disjuncts: Vec<Disjunct>,
}

impl ChainNormalForm {
    pub fn chains(&self) -> impl Iterator<Item = &Chain> {
        self.disjuncts.iter().map(|d| &d.chain)
    }

    /// Disjunction of the chain formulas; `F` when there are none.
    pub fn to_formula(&self) -> Formula {
        Formula::disjunction(self.chains().map(Chain::to_formula))
    }

    /// Drops disjuncts whose chain formula takes the same values as an
    /// earlier one. Cosmetic: the designated set is unchanged.
    pub fn optimize(&self) -> Result<ChainNormalForm> {
        let mut kept: Vec<Disjunct> = Vec::new();
        for d in &self.disjuncts {
            let f = d.chain.to_formula();
            let mut duplicate = false;
            for k in &kept {
                if are_value_equivalent(&f, &k.chain.to_formula(), self.mode)?.valid {
                    duplicate = true;
                    break;
                }
            }
            if !duplicate {
                kept.push(d.clone());
            }
        }
        Ok(ChainNormalForm {
            mode: self.mode,
            vars: self.vars.clone(),
            disjuncts: kept,
        })
    }
}

pub fn chain_normal_form(f: &Formula, mode: Mode) -> Result<ChainNormalForm> {
    chain_normal_form_with(f, mode, Strategy::default())
}

pub fn chain_normal_form_with(f: &Formula, mode: Mode, strategy: Strategy) -> Result<ChainNormalForm> {
    f.require_propositional()?;
    let (chains, rules) = match mode {
        Mode::Standard if f.contains_delta() => return Err(Error::DeltaNotAllowed),
        Mode::Standard => (enumerate_chains(&f.free_atoms()), DeltaRules::None),
        Mode::Restricted => (
            enumerate_restricted_chains(&f.free_atoms()),
            DeltaRules::Restricted,
        ),
    };
    let residues = par::map(&chains, strategy, |c| syntactic_eval(c, f, rules));
    let mut disjuncts: Vec<Disjunct> = Vec::new();
    for (chain, residue) in chains.into_iter().zip(residues) {
        let residue = residue?;
        let emitted = match (&residue, mode) {
            (Symbol::Bot, _) => None,
            (Symbol::Top, _) => Some(chain),
            (Symbol::Var(_), Mode::Restricted) => None,
            (Symbol::Var(a), Mode::Standard) => chain.raise_to_top(a)?,
        };
        if let Some(chain) = emitted {
            if !disjuncts.iter().any(|d| d.chain == chain) {
                disjuncts.push(Disjunct { chain, residue });
            }
        }
    }
    Ok(ChainNormalForm {
        mode,
        vars: f.free_atoms(),
        disjuncts,
    })
}

/// `D`-free disjunction of restricted chains, equivalent to `f` under
/// restricted semantics.
pub fn eliminate_delta(f: &Formula) -> Result<Formula> {
    Ok(chain_normal_form(f, Mode::Restricted)?.to_formula())
}

/// `(~D(x1) & ... & ~D(xn)) -> f`: standard-valid iff `f` is restricted-valid.
pub fn guard_formula(f: &Formula) -> Result<Formula> {
    f.require_propositional()?;
    let atoms = f.free_atoms();
    if atoms.is_empty() {
        return Ok(f.clone());
    }
    let guard = Formula::conjunction(
        atoms
            .into_iter()
            .map(|a| Formula::not(Formula::delta(Formula::Atom(a)))),
    );
    Ok(Formula::imp(guard, f.clone()))
}

/// `f | x1 | ... | xn`, validity-equivalent to the guard formula in standard semantics.
pub fn validity_companion(f: &Formula) -> Result<Formula> {
    f.require_propositional()?;
    Ok(Formula::disjunction(
        std::iter::once(f.clone()).chain(f.free_atoms().into_iter().map(Formula::Atom)),
    ))
}

/// Replaces the listed variables by `T`.
pub fn substitute_top(f: &Formula, atoms: &BTreeSet<Atom>) -> Formula {
    f.map_atoms(&|a| atoms.contains(a).then_some(Formula::Top))
}

/// Restricted validity of `f` with `atoms` replaced by `T`, for a `D`-free,
/// restricted-valid `f`.
pub fn replace_top_stability_check(f: &Formula, atoms: &BTreeSet<Atom>) -> Result<Verdict> {
    f.require_propositional()?;
    if f.contains_delta() {
        return Err(Error::Precondition("formula must be D-free".into()));
    }
    if !is_valid(f, Mode::Restricted)?.valid {
        return Err(Error::Precondition(
            "formula must be valid under restricted semantics".into(),
        ));
    }
    is_valid(&substitute_top(f, atoms), Mode::Restricted)
}
