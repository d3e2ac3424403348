//! Golden corpus behind `godel selftest`.

use std::collections::BTreeSet;

use crate::chain::{enumerate_chains, enumerate_restricted_chains};
use crate::elimination::{chain_normal_form, eliminate_delta};
use crate::error::Result;
use crate::first_order::{equivalence_theorem_check, is_valid_fo_bounded, Bounds, Premise};
use crate::formula::{parse, parse_first_order, Atom, Formula};
use crate::semantics::{are_equivalent, eval, is_valid, is_valid_at, Interpretation, Mode, TruthScale};

pub struct Item {
    pub name: &'static str,
    pub check: fn() -> Result<bool>,
}

pub const AXIOMS: [(&str, &str); 5] = [
    ("D1", "D(A) | ~D(A)"),
    ("D2", "D(A | B) -> D(A) | D(B)"),
    ("D3", "D(A) -> A"),
    ("D4", "D(A) -> D(D(A))"),
    ("D5", "D(A -> B) -> D(A) -> D(B)"),
];

/// The six unary functions closed under the connectives on three levels.
pub const UNARY_FUNCTIONS: [&str; 6] = ["T", "F", "A", "~A", "A | ~A", "~A -> A"];

/// Rows `A = 0, 1, 2` of the three-valued table, in the order of [`UNARY_FUNCTIONS`].
pub const UNARY_TABLE: [[u32; 3]; 6] = [
    [2, 2, 2],
    [0, 0, 0],
    [0, 1, 2],
    [2, 0, 0],
    [2, 1, 2],
    [0, 2, 2],
];

pub const FO_LAWS: [&str; 6] = [
    "exists x. (A(x) -> forall y. A(y))",
    "exists x. ((exists y. A(y)) -> A(x))",
    "((forall x. A(x)) -> B) -> exists x. (A(x) -> B)",
    "(B -> exists x. A(x)) -> exists x. (B -> A(x))",
    "D(forall x. A(x)) <-> forall x. D(A(x))",
    "(exists x. D(A(x))) <-> D(exists x. A(x))",
];

fn p(s: &str) -> Formula {
    parse(s).expect("corpus formula parses")
}

fn fo(s: &str) -> Formula {
    parse_first_order(s).expect("corpus formula parses")
}

fn chain_texts(f: &str, mode: Mode) -> Result<BTreeSet<String>> {
    Ok(chain_normal_form(&p(f), mode)?
        .optimize()?
        .chains()
        .map(ToString::to_string)
        .collect())
}

pub const CORPUS: &[Item] = &[
    Item {
        name: "elimination of a | D(a | ~a) gives ~a",
        check: || {
            let f = p("a | D(a | ~a)");
            let out = eliminate_delta(&f)?;
            Ok(!out.contains_delta()
                && are_equivalent(&f, &out, Mode::Restricted)?.valid
                && are_equivalent(&out, &p("~a"), Mode::Restricted)?.valid)
        },
    },
    Item {
        name: "elimination of D(A | (A -> F)) gives one chain",
        check: || {
            let texts = chain_texts("D(A | (A -> F))", Mode::Restricted)?;
            let out = eliminate_delta(&p("D(A | (A -> F))"))?;
            Ok(texts == BTreeSet::from(["B <= A < T".to_string()])
                && are_equivalent(&out, &p("~A"), Mode::Restricted)?.valid)
        },
    },
    Item {
        name: "chain counts 3, 11 and restricted 2, 6",
        check: || {
            let one = BTreeSet::from([Atom::var("a")]);
            let two = BTreeSet::from([Atom::var("a"), Atom::var("b")]);
            Ok(enumerate_chains(&one).len() == 3
                && enumerate_chains(&two).len() == 11
                && enumerate_restricted_chains(&one).len() == 2
                && enumerate_restricted_chains(&two).len() == 6)
        },
    },
    Item {
        name: "chain normal form of (A -> B) -> B has seven chains",
        check: || {
            let expected: BTreeSet<String> = [
                "B <= A < B <= T",
                "B <= B < A < T",
                "B < B < A < T",
                "B < A <= B <= T",
                "B < A < B <= T",
                "B <= B < A <= T",
                "B < B < A <= T",
            ]
            .iter()
            .map(ToString::to_string)
            .collect();
            Ok(chain_texts("(A -> B) -> B", Mode::Standard)? == expected)
        },
    },
    Item {
        name: "three-valued table: no unary function equals D(A)",
        check: || {
            let scale = TruthScale::new(3)?;
            let d = p("D(A)");
            for (src, row) in UNARY_FUNCTIONS.iter().zip(UNARY_TABLE) {
                let g = p(src);
                for level in 0..3 {
                    let i = Interpretation::from_pairs(&[("A", level)], scale, false)?;
                    if eval(&g, &i)? != row[level as usize] {
                        return Ok(false);
                    }
                }
                if is_valid_at(&Formula::equiv(g, d.clone()), 3, Mode::Standard)?.valid {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    },
    Item {
        name: "axioms D1-D5 valid in both semantics",
        check: || {
            for (_, a) in AXIOMS {
                for k in 2..=6 {
                    for mode in [Mode::Standard, Mode::Restricted] {
                        if !is_valid_at(&p(a), k, mode)?.valid {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        },
    },
    Item {
        name: "D(a) -> a valid, a -> D(a) invalid",
        check: || {
            Ok(is_valid(&p("D(a) -> a"), Mode::Standard)?.valid
                && !is_valid(&p("a -> D(a)"), Mode::Standard)?.valid)
        },
    },
    Item {
        name: "witness axioms, quantifier shifts and D/quantifier laws",
        check: || {
            for law in FO_LAWS {
                if is_valid_fo_bounded(&fo(law), &Bounds::new(2, 3))?.countermodel_found {
                    return Ok(false);
                }
            }
            let sanity = is_valid_fo_bounded(&fo("(forall x. P(x)) | exists x. ~P(x)"), &Bounds::new(2, 3))?;
            Ok(sanity.countermodel_found)
        },
    },
    Item {
        name: "equivalence principle needs D in the premise",
        check: || {
            let hole = fo("D(_)");
            let b = Bounds::new(1, 3).mode(Mode::Restricted);
            let fails = equivalence_theorem_check(&fo("P -> P"), &fo("Q"), &hole, Premise::Plain, &b)?;
            let holds = equivalence_theorem_check(&fo("P"), &fo("Q"), &hole, Premise::Delta, &Bounds::new(2, 3))?;
            Ok(fails.countermodel_found && !holds.countermodel_found)
        },
    },
];

#[cfg(test)]
mod tests {
    #[test]
    fn corpus_passes() {
        for item in super::CORPUS {
            assert!((item.check)().unwrap(), "{}", item.name);
        }
    }
}
