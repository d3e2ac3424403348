//! `godel` command-line front end.
//!
//! Exit status: 0 success or valid, 1 invalid or countermodel found,
//! 2 usage or input error, 3 model space over budget.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::chain::{enumerate_chains, enumerate_restricted_chains};
use crate::elimination::{chain_normal_form, eliminate_delta, guard_formula, validity_companion};
use crate::error::Error;
use crate::first_order::{is_valid_fo_bounded, struc, translate_t, Bounds, DEFAULT_BUDGET};
use crate::formula::{parse, parse_first_order, parse_lines, Atom, Formula};
use crate::semantics::{
    are_equivalent_as, are_equivalent_at_with, eval, is_valid, is_valid_at, Equivalence,
    Interpretation, Level, Mode, TruthScale,
};
use crate::selftest::CORPUS;

#[derive(Parser, Debug)]
#[command(name = "godel", version, about = "Goedel logics with the absoluteness operator D")]
struct Cli {
    /// Machine-readable JSON output, one document per line.
    #[arg(long, global = true)]
    json: bool,

    /// Semantics: standard, or restricted (atoms stay below the top level).
    #[arg(long, global = true, default_value = "standard")]
    mode: Mode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Formula text.
    formula: Option<String>,

    /// Read formulas from a file, one per line (`#` starts a comment).
    #[arg(long)]
    file: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print formulas in normalized syntax.
    Parse {
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate a formula under an assignment.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Assignment such as `a=1,b=2`.
        #[arg(long, default_value = "")]
        assign: String,
        /// Number of levels (default n+2).
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Decide validity.
    Valid {
        #[command(flatten)]
        input: Input,
        /// Number of levels (default n+2).
        #[arg(long)]
        levels: Option<u32>,
    },
    /// Decide equivalence of two formulas.
    Equiv {
        left: String,
        right: String,
        /// Require equal values everywhere instead of equal designated sets.
        #[arg(long)]
        value: bool,
        #[arg(long)]
        levels: Option<u32>,
    },
    /// List the chains over a set of variables.
    Chains {
        /// Comma-separated variables.
        #[arg(long, default_value = "")]
        vars: String,
        /// Only chains with no variable at the top.
        #[arg(long)]
        restricted: bool,
    },
    /// Chain normal form.
    Cnf {
        #[command(flatten)]
        input: Input,
    },
    /// D-free restricted-equivalent formula.
    Eliminate {
        #[command(flatten)]
        input: Input,
    },
    /// Guard formula reducing restricted to standard validity.
    Guard {
        #[command(flatten)]
        input: Input,
    },
    /// Validity companion `f | x1 | ... | xn`.
    Companion {
        #[command(flatten)]
        input: Input,
    },
    /// Structural normal form of a first-order formula.
    Struc {
        #[command(flatten)]
        input: Input,
    },
    /// D-free translation of a first-order formula.
    Translate {
        #[command(flatten)]
        input: Input,
    },
    /// Bounded countermodel search over finite models.
    FoCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        max_domain: usize,
        #[arg(long, default_value_t = 3)]
        max_levels: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Run the built-in corpus of worked examples.
    Selftest,
}

const OK: i32 = 0;
const INVALID: i32 = 1;
const USAGE: i32 = 2;
const BUDGET: i32 = 3;

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => BUDGET,
        _ => USAGE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let text = e.render().to_string();
            let _ = if code == OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        mode: cli.mode,
        out,
        err,
    };
    match ctx.dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            error_code(&e)
        }
    }
}

struct Ctx<'a> {
    json: bool,
    mode: Mode,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type Step = crate::Result<(String, serde_json::Value, i32)>;

impl Ctx<'_> {
    fn emit(&mut self, text: &str, value: &serde_json::Value) {
        let _ = if self.json {
            writeln!(self.out, "{value}")
        } else {
            writeln!(self.out, "{text}")
        };
    }

    /// Applies `step` to each input formula, streaming results in input order.
    fn each(
        &mut self,
        input: &Input,
        first_order: bool,
        step: &dyn Fn(&str, &Formula) -> Step,
    ) -> crate::Result<i32> {
        let items: Vec<(String, usize, crate::Result<Formula>)> = match (&input.formula, &input.file) {
            (Some(text), None) => {
                let f = if first_order {
                    parse_first_order(text)
                } else {
                    parse(text)
                };
                vec![(text.clone(), 0, f)]
            }
            (None, Some(path)) => {
                let content = std::fs::read_to_string(path)
                    .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
                let lines: Vec<&str> = content.lines().collect();
                parse_lines(&content, first_order)
                    .into_iter()
                    .map(|(n, f)| (lines[n - 1].trim().to_string(), n, f))
                    .collect()
            }
            _ => {
                return Err(Error::Precondition(
                    "give exactly one of a formula or --file".into(),
                ))
            }
        };
        let mut code = OK;
        for (text, line, f) in items {
            let result = f.and_then(|f| step(&text, &f));
            match result {
                Ok((t, v, c)) => {
                    self.emit(&t, &v);
                    code = code.max(c);
                }
                Err(e) => {
                    let _ = if line > 0 {
                        writeln!(self.err, "error: line {line}: {e}")
                    } else {
                        writeln!(self.err, "error: {e}")
                    };
                    code = code.max(error_code(&e));
                }
            }
        }
        Ok(code)
    }

    fn dispatch(&mut self, command: &Command) -> crate::Result<i32> {
        let mode = self.mode;
        match command {
            Command::Parse { input } => self.each(input, true, &|text, f| {
                let rendered = f.render();
                let value = json!({
                    "input": text,
                    "formula": rendered,
                    "raw": f.render_raw(),
                    "first_order": !f.is_propositional(),
                });
                Ok((rendered, value, OK))
            }),
            Command::Eval {
                input,
                assign,
                levels,
            } => {
                let pairs = parse_assignment(assign)?;
                self.each(input, false, &|text, f| {
                    let k = levels.unwrap_or(f.free_atoms().len() as u32 + 2);
                    let scale = TruthScale::new(k)?;
                    let refs: Vec<(&str, Level)> = pairs.iter().map(|(a, l)| (a.as_str(), *l)).collect();
                    let interp = Interpretation::from_pairs(&refs, scale, mode.is_restricted())?;
                    let level = eval(f, &interp)?;
                    let value = json!({
                        "input": text,
                        "level": level,
                        "scale": k,
                        "mode": mode,
                    });
                    Ok((level.to_string(), value, OK))
                })
            }
            Command::Valid { input, levels } => self.each(input, false, &|_, f| {
                let v = match levels {
                    Some(k) => {
                        check_levels(f, *k)?;
                        is_valid_at(f, *k, mode)?
                    }
                    None => is_valid(f, mode)?,
                };
                let code = if v.valid { OK } else { INVALID };
                Ok((v.to_string(), v.to_json(), code))
            }),
            Command::Equiv {
                left,
                right,
                value,
                levels,
            } => {
                let (f, g) = (parse(left)?, parse(right)?);
                let notion = if *value {
                    Equivalence::Value
                } else {
                    Equivalence::Designated
                };
                let v = match levels {
                    Some(k) => {
                        check_levels(&Formula::and(f.clone(), g.clone()), *k)?;
                        are_equivalent_at_with(&f, &g, *k, mode, notion, Default::default())?
                    }
                    None => are_equivalent_as(&f, &g, mode, notion)?,
                };
                self.emit(&v.to_string(), &v.to_json());
                Ok(if v.valid { OK } else { INVALID })
            }
            Command::Chains { vars, restricted } => {
                let vars: BTreeSet<Atom> = split_list(vars).map(Atom::var).collect();
                let chains = if *restricted {
                    enumerate_restricted_chains(&vars)
                } else {
                    enumerate_chains(&vars)
                };
                for c in &chains {
                    self.emit(&c.to_string(), &serde_json::to_value(c).expect("chain serializes"));
                }
                Ok(OK)
            }
            Command::Cnf { input } => self.each(input, false, &|text, f| {
                let cnf = chain_normal_form(f, mode)?.optimize()?;
                let check = are_equivalent_as(f, &cnf.to_formula(), mode, Equivalence::Designated)?;
                let lines: Vec<String> = cnf.chains().map(ToString::to_string).collect();
                let value = json!({
                    "input": text,
                    "mode": mode,
                    "disjuncts": cnf.chains().collect::<Vec<_>>(),
                    "equivalent_check": check,
                });
                let text = if lines.is_empty() {
                    "F".to_string()
                } else {
                    lines.join("\n")
                };
                Ok((text, value, OK))
            }),
            Command::Eliminate { input } => self.each(input, false, &|text, f| {
                let cnf = chain_normal_form(f, Mode::Restricted)?;
                let output = eliminate_delta(f)?;
                let check = are_equivalent_as(f, &output, Mode::Restricted, Equivalence::Designated)?;
                let value = json!({
                    "input": text,
                    "mode": Mode::Restricted,
                    "output": output.render(),
                    "disjuncts": cnf.chains().collect::<Vec<_>>(),
                    "equivalent_check": check,
                });
                Ok((
                    format!("{}\nequivalent (restricted): {check}", output.render()),
                    value,
                    if check.valid { OK } else { INVALID },
                ))
            }),
            Command::Guard { input } => {
                self.each(input, false, &|text, f| transformed(text, guard_formula(f)?))
            }
            Command::Companion { input } => {
                self.each(input, false, &|text, f| transformed(text, validity_companion(f)?))
            }
            Command::Struc { input } => self.each(input, true, &|_, f| {
                let s = struc(f)?;
                let mut lines = vec![s.formula.render()];
                for d in &s.definitions {
                    lines.push(format!("  {} := {}", d.head(), d.subformula));
                }
                Ok((lines.join("\n"), serde_json::to_value(&s).expect("struc serializes"), OK))
            }),
            Command::Translate { input } => {
                self.each(input, true, &|text, f| transformed(text, translate_t(f)?))
            }
            Command::FoCheck {
                input,
                max_domain,
                max_levels,
                budget,
            } => self.each(input, true, &|text, f| {
                let bounds = Bounds::new(*max_domain, *max_levels).mode(mode).budget(*budget);
                let v = is_valid_fo_bounded(f, &bounds)?;
                let mut value = v.to_json();
                value["input"] = json!(text);
                let code = if v.countermodel_found { INVALID } else { OK };
                Ok((v.to_string(), value, code))
            }),
            Command::Selftest => {
                let mut code = OK;
                for item in CORPUS {
                    let (status, detail) = match (item.check)() {
                        Ok(true) => ("PASS", None),
                        Ok(false) => ("FAIL", None),
                        Err(e) => ("FAIL", Some(e.to_string())),
                    };
                    if status == "FAIL" {
                        code = INVALID;
                    }
                    let text = match &detail {
                        Some(d) => format!("{status} {} ({d})", item.name),
                        None => format!("{status} {}", item.name),
                    };
                    let value = json!({"name": item.name, "pass": status == "PASS", "error": detail});
                    self.emit(&text, &value);
                }
                Ok(code)
            }
        }
    }
}

fn transformed(text: &str, output: Formula) -> Step {
    let rendered = output.render();
    Ok((rendered.clone(), json!({"input": text, "output": rendered}), OK))
}

fn check_levels(f: &Formula, k: u32) -> crate::Result<()> {
    let n = f.free_atoms().len() as u32;
    if f.contains_delta() && k < n + 2 {
        return Err(Error::Precondition(format!(
            "--levels {k} is below n+2 = {} for a formula with D",
            n + 2
        )));
    }
    Ok(())
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn parse_assignment(s: &str) -> crate::Result<BTreeMap<String, Level>> {
    split_list(s)
        .map(|pair| {
            let (name, level) = pair
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("expected name=level, got `{pair}`")))?;
            let level = level
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("bad level in `{pair}`")))?;
            Ok((name.trim().to_string(), level))
        })
        .collect()
}
