//! Formula syntax tree, concrete syntax and structural traversals.
//!
//! The concrete syntax is a small infix language:
//!
//! ```text
//! formula := quant | imp
//! quant   := ("forall" | "exists") ident "." formula
//! imp     := or (("->" | "<->" | "<") formula)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "D" "(" formula ")" | "(" formula ")"
//!          | "T" | "F" | quant | ident ("(" term ("," term)* ")")?
//! term    := ident | digits
//! ```
//!
//! `T` and `F` are the truth constants, `D(..)` is the absoluteness operator.
//! Negation, `<->` and `<` are sugar and never appear in the tree:
//! `~A` is `A -> F`, `A <-> B` is `(A -> B) & (B -> A)` and `A < B` is
//! `(B -> A) -> B`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Argument of a predicate: a bound/free variable or a domain element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Elem(usize),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Elem(e) => write!(f, "{e}"),
        }
    }
}

/// A propositional variable, or a predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub args: Vec<Term>,
}

impl Atom {
    /// Propositional variable.
    pub fn var(name: impl Into<String>) -> Self {
        Atom {
            name: name.into(),
            args: Vec::new(),
        }
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            name: name.into(),
            args,
        }
    }

    pub fn is_propositional(&self) -> bool {
        self.args.is_empty()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Delta(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Atom(Atom::var(name))
    }

    /// Predicate over variables, e.g. `Formula::pred("P", &["x"])`.
    pub fn pred(name: impl Into<String>, vars: &[&str]) -> Formula {
        Formula::Atom(Atom::pred(
            name,
            vars.iter().map(|v| Term::Var(v.to_string())).collect(),
        ))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `~a`, i.e. `a -> F`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    pub fn delta(a: Formula) -> Formula {
        Formula::Delta(Box::new(a))
    }

    /// `a <-> b`, i.e. `(a -> b) & (b -> a)`.
    pub fn equiv(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// `a < b`, i.e. `(b -> a) -> b`.
    pub fn less(a: Formula, b: Formula) -> Formula {
        Formula::imp(Formula::imp(b.clone(), a), b)
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Left-nested conjunction; the empty conjunction is `T`.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; the empty disjunction is `F`.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => vec![],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![a, b],
            Formula::Delta(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => vec![a],
        }
    }

    /// Distinct subformulas in post-order; `self` comes last.
    pub fn subformulas(&self) -> Vec<Formula> {
        fn walk<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
            if seen.contains(f) {
                return;
            }
            for c in f.children() {
                walk(c, seen, out);
            }
            if seen.insert(f) {
                out.push(f);
            }
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        walk(self, &mut seen, &mut out);
        out.into_iter().cloned().collect()
    }

    /// All atoms, excluding the constants.
    pub fn free_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            _ => self.children().into_iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn contains_delta(&self) -> bool {
        match self {
            Formula::Delta(_) => true,
            _ => self.children().into_iter().any(Formula::contains_delta),
        }
    }

    /// True when no quantifier and no predicate arguments occur.
    pub fn is_propositional(&self) -> bool {
        self.first_order_witness().is_none()
    }

    fn first_order_witness(&self) -> Option<String> {
        match self {
            Formula::Atom(a) if !a.is_propositional() => Some(a.to_string()),
            Formula::Forall(v, _) => Some(format!("forall {v}")),
            Formula::Exists(v, _) => Some(format!("exists {v}")),
            _ => self
                .children()
                .into_iter()
                .find_map(Formula::first_order_witness),
        }
    }

    /// Fails with [`Error::FirstOrder`] on quantifiers or predicate arguments.
    pub fn require_propositional(&self) -> Result<()> {
        match self.first_order_witness() {
            Some(w) => Err(Error::FirstOrder(w)),
            None => Ok(()),
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_variables(&self) -> Vec<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match f {
                Formula::Atom(a) => {
                    for t in &a.args {
                        if let Term::Var(v) = t {
                            if !bound.contains(v) && !out.contains(v) {
                                out.push(v.clone());
                            }
                        }
                    }
                }
                Formula::Forall(v, body) | Formula::Exists(v, body) => {
                    bound.push(v.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
                _ => f.children().into_iter().for_each(|c| walk(c, bound, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Predicate symbols with their arities, in name order.
    pub fn signature(&self) -> Result<std::collections::BTreeMap<String, usize>> {
        let mut sig = std::collections::BTreeMap::new();
        for atom in self.free_atoms() {
            let arity = atom.args.len();
            match sig.insert(atom.name.clone(), arity) {
                Some(prev) if prev != arity => {
                    return Err(Error::ArityMismatch {
                        name: atom.name,
                        first: prev,
                        second: arity,
                    })
                }
                _ => {}
            }
        }
        Ok(sig)
    }

    /// Replaces every occurrence of the 0-ary atom `name` by `by`.
    /// Capture of variables free in `by` is intended.
    pub fn replace_atom(&self, name: &str, by: &Formula) -> Formula {
        self.map_atoms(&|a| {
            if a.name == name && a.args.is_empty() {
                Some(by.clone())
            } else {
                None
            }
        })
    }

    /// Rebuilds the formula, replacing atoms for which `f` returns a formula.
    pub fn map_atoms(&self, f: &dyn Fn(&Atom) -> Option<Formula>) -> Formula {
        let rec = |x: &Formula| Box::new(x.map_atoms(f));
        match self {
            Formula::Atom(a) => f(a).unwrap_or_else(|| self.clone()),
            Formula::Top | Formula::Bot => self.clone(),
            Formula::And(a, b) => Formula::And(rec(a), rec(b)),
            Formula::Or(a, b) => Formula::Or(rec(a), rec(b)),
            Formula::Imp(a, b) => Formula::Imp(rec(a), rec(b)),
            Formula::Delta(a) => Formula::Delta(rec(a)),
            Formula::Forall(v, a) => Formula::Forall(v.clone(), rec(a)),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), rec(a)),
        }
    }

    /// Number of connective and quantifier nodes on the longest branch.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Concrete syntax with the `<->` and `<` abbreviations reintroduced.
    pub fn render(&self) -> String {
        let mut s = String::new();
        write_formula(self, 0, false, &mut s);
        s
    }

    /// Concrete syntax without the `<->`/`<` abbreviations (negation is still `~`).
    pub fn render_raw(&self) -> String {
        let mut s = String::new();
        write_formula(self, 0, true, &mut s);
        s
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

// precedence levels used by the printer
const P_QUANT: u8 = 0;
const P_IMP: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_UNARY: u8 = 4;

enum View<'a> {
    Leaf,
    Not(&'a Formula),
    Delta(&'a Formula),
    Quant(&'static str, &'a str, &'a Formula),
    Infix(&'static str, u8, &'a Formula, &'a Formula),
}

fn view(f: &Formula, raw: bool) -> View<'_> {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => View::Leaf,
        Formula::Imp(a, b) if **b == Formula::Bot => View::Not(a),
        Formula::Imp(a, b) => match &**a {
            // (y -> x) -> y  is  x < y
            Formula::Imp(y, x) if !raw && y == b => View::Infix("<", P_IMP, x, b),
            _ => View::Infix("->", P_IMP, a, b),
        },
        Formula::And(l, r) => match (&**l, &**r) {
            (Formula::Imp(a, b), Formula::Imp(b2, a2)) if !raw && a == a2 && b == b2 => {
                View::Infix("<->", P_IMP, a, b)
            }
            _ => View::Infix("&", P_AND, l, r),
        },
        Formula::Or(l, r) => View::Infix("|", P_OR, l, r),
        Formula::Delta(a) => View::Delta(a),
        Formula::Forall(v, a) => View::Quant("forall", v, a),
        Formula::Exists(v, a) => View::Quant("exists", v, a),
    }
}

fn write_formula(f: &Formula, min_prec: u8, raw: bool, out: &mut String) {
    let v = view(f, raw);
    let prec = match &v {
        View::Leaf | View::Not(_) | View::Delta(_) => P_UNARY,
        View::Quant(..) => P_QUANT,
        View::Infix(_, p, ..) => *p,
    };
    let wrap = prec < min_prec;
    if wrap {
        out.push('(');
    }
    match v {
        View::Leaf => match f {
            Formula::Top => out.push('T'),
            Formula::Bot => out.push('F'),
            Formula::Atom(a) => out.push_str(&a.to_string()),
            _ => unreachable!(),
        },
        View::Not(a) => {
            out.push('~');
            write_formula(a, P_UNARY, raw, out);
        }
        View::Delta(a) => {
            out.push_str("D(");
            write_formula(a, 0, raw, out);
            out.push(')');
        }
        View::Quant(q, var, body) => {
            out.push_str(q);
            out.push(' ');
            out.push_str(var);
            out.push_str(". ");
            write_formula(body, 0, raw, out);
        }
        View::Infix(op, p, l, r) => {
            // -> family is right-associative, & and | are left-associative
            let (lp, rp) = if p == P_IMP { (P_OR, P_IMP) } else { (p, p + 1) };
            write_formula(l, lp, raw, out);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            write_formula(r, rp, raw, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Parses a propositional formula; quantifiers and predicate arguments are rejected.
pub fn parse(text: &str) -> Result<Formula> {
    Parser::new(text, false)?.parse_all()
}

/// Parses a first-order formula.
pub fn parse_first_order(text: &str) -> Result<Formula> {
    Parser::new(text, true)?.parse_all()
}

/// Parses a file body: one formula per line, `#` starts a comment, blank lines are skipped.
/// Each item carries its 1-based line number.
pub fn parse_lines(text: &str, first_order: bool) -> Vec<(usize, Result<Formula>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                None
            } else if first_order {
                Some((i + 1, parse_first_order(body)))
            } else {
                Some((i + 1, parse(body)))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Iff,
    Less,
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::Iff
            }
            b'<' => Tok::Less,
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i].parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: "number too large".into(),
                })?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        toks.push((start, tok));
        i += 1;
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

const RESERVED: [&str; 5] = ["T", "F", "D", "forall", "exists"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    first_order: bool,
}

impl Parser {
    fn new(text: &str, first_order: bool) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            first_order,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn parse_all(mut self) -> Result<Formula> {
        let f = self.formula()?;
        if *self.peek() != Tok::End {
            return self.fail("unexpected trailing input");
        }
        Ok(f)
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quant(),
            _ => self.imp(),
        }
    }

    fn quant(&mut self) -> Result<Formula> {
        let kw = match self.bump() {
            Tok::Ident(k) => k,
            _ => unreachable!(),
        };
        if !self.first_order {
            return Err(Error::FirstOrder(kw));
        }
        let var = match self.peek().clone() {
            Tok::Ident(v) if !RESERVED.contains(&v.as_str()) => {
                self.bump();
                v
            }
            _ => return self.fail("expected a variable after quantifier"),
        };
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if kw == "forall" {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Ok(Formula::imp(lhs, self.formula()?))
            }
            Tok::Iff => {
                self.bump();
                Ok(Formula::equiv(lhs, self.formula()?))
            }
            Tok::Less => {
                self.bump();
                Ok(Formula::less(lhs, self.formula()?))
            }
            _ => Ok(lhs),
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quant(),
            Tok::Ident(k) if k == "T" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(k) if k == "F" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(k) if k == "D" => {
                self.bump();
                self.expect(Tok::LParen, "`(` after D")?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::delta(f))
            }
            Tok::Ident(name) => {
                let start = self.pos();
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Formula::Atom(Atom::var(name)));
                }
                if !self.first_order {
                    return Err(Error::FirstOrder(format!("{name}(..) at {start}")));
                }
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(Formula::Atom(Atom::pred(name, args)))
            }
            Tok::End => self.fail("unexpected end of input"),
            t => self.fail(format!("unexpected token {t:?}")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(v) if !RESERVED.contains(&v.as_str()) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Term::Elem(n))
            }
            _ => self.fail("expected a variable or domain element"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::var("a")
    }
    fn b() -> Formula {
        Formula::var("b")
    }

    #[test]
    fn parses_delta_example() {
        let f = parse("a | D(a | ~a)").unwrap();
        let expected = Formula::or(
            a(),
            Formula::delta(Formula::or(a(), Formula::imp(a(), Formula::Bot))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_constants_and_nesting() {
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(parse("F").unwrap(), Formula::Bot);
        let ab = Formula::imp(Formula::var("A"), Formula::var("B"));
        assert_eq!(
            parse("(A -> B) -> B").unwrap(),
            Formula::imp(ab, Formula::var("B"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // a & b | c -> d -> e  ==  ((a&b)|c) -> (d -> e)
        let f = parse("a & b | c -> d -> e").unwrap();
        let lhs = Formula::or(Formula::and(a(), b()), Formula::var("c"));
        let rhs = Formula::imp(Formula::var("d"), Formula::var("e"));
        assert_eq!(f, Formula::imp(lhs, rhs));
        assert_eq!(
            parse("a | b | c").unwrap(),
            Formula::or(Formula::or(a(), b()), Formula::var("c"))
        );
    }

    #[test]
    fn sugar_desugars() {
        assert_eq!(parse("a < b").unwrap(), Formula::imp(Formula::imp(b(), a()), b()));
        assert_eq!(
            parse("a <-> b").unwrap(),
            Formula::and(Formula::imp(a(), b()), Formula::imp(b(), a()))
        );
        assert_eq!(parse("~~a").unwrap(), Formula::not(Formula::not(a())));
    }

    #[test]
    fn renders_sugar() {
        assert_eq!(Formula::not(a()).render(), "~a");
        assert_eq!(Formula::delta(Formula::Top).render(), "D(T)");
        assert_eq!(Formula::or(a(), b()).render(), "a | b");
        assert_eq!(Formula::equiv(a(), b()).render(), "a <-> b");
        assert_eq!(Formula::less(a(), b()).render(), "a < b");
        assert_eq!(Formula::less(a(), b()).render_raw(), "(b -> a) -> b");
        assert_eq!(
            Formula::equiv(a(), b()).render_raw(),
            "(a -> b) & (b -> a)"
        );
    }

    #[test]
    fn render_parenthesizes() {
        let f = Formula::or(a(), Formula::or(b(), Formula::var("c")));
        assert_eq!(f.render(), "a | (b | c)");
        let g = Formula::imp(Formula::imp(a(), b()), b());
        assert_eq!(g.render(), "(a -> b) -> b");
        let h = Formula::or(Formula::equiv(a(), b()), a());
        assert_eq!(h.render(), "(a <-> b) | a");
        assert_eq!(parse(&h.render()).unwrap(), h);
    }

    #[test]
    fn first_order_syntax() {
        let f = parse_first_order("forall x. P(x) -> exists y. Q(x, y)").unwrap();
        let expected = Formula::forall(
            "x",
            Formula::imp(
                Formula::pred("P", &["x"]),
                Formula::exists("y", Formula::pred("Q", &["x", "y"])),
            ),
        );
        assert_eq!(f, expected);
        assert_eq!(parse_first_order(&f.render()).unwrap(), f);

        let g = parse_first_order("P(0, x) & D(exists y. R(y))").unwrap();
        assert_eq!(parse_first_order(&g.render()).unwrap(), g);
    }

    #[test]
    fn quantifier_operand_round_trips() {
        let f = Formula::and(
            Formula::forall("x", Formula::pred("P", &["x"])),
            Formula::var("q"),
        );
        assert_eq!(f.render(), "(forall x. P(x)) & q");
        assert_eq!(parse_first_order(&f.render()).unwrap(), f);
    }

    #[test]
    fn rejects_first_order_in_propositional_mode() {
        assert!(matches!(parse("forall x. P(x)"), Err(Error::FirstOrder(_))));
        assert!(matches!(parse("P(x)"), Err(Error::FirstOrder(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("a & ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse("a $ b") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("(a").is_err());
        assert!(parse("a b").is_err());
        assert!(parse("D a").is_err());
    }

    #[test]
    fn subformulas_post_order() {
        let f = Formula::imp(a(), b());
        assert_eq!(f.subformulas(), vec![a(), b(), f.clone()]);
        let d = Formula::delta(a());
        assert_eq!(d.subformulas(), vec![a(), d.clone()]);
        let o = Formula::or(a(), a());
        assert_eq!(o.subformulas(), vec![a(), o.clone()]);
    }

    #[test]
    fn atoms_and_delta() {
        let f = parse("a | D(a | ~a)").unwrap();
        assert_eq!(f.free_atoms(), BTreeSet::from([Atom::var("a")]));
        assert!(Formula::Top.free_atoms().is_empty());
        assert_eq!(
            parse("a -> b").unwrap().free_atoms(),
            BTreeSet::from([Atom::var("a"), Atom::var("b")])
        );
        assert!(Formula::delta(a()).contains_delta());
        assert!(!a().contains_delta());
        let fo = parse_first_order("forall x. D(P(x))").unwrap();
        assert!(fo.contains_delta());
        assert!(!fo.is_propositional());
    }

    #[test]
    fn free_variables_in_first_occurrence_order() {
        let f = parse_first_order("Q(y, x) & exists y. P(y, z)").unwrap();
        assert_eq!(f.free_variables(), vec!["y", "x", "z"]);
    }

    #[test]
    fn file_lines() {
        let items = parse_lines("# header\na -> a\n\n  b | ~b  # trailing\n", false);
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].0, 2);
        assert_eq!(items[1].0, 4);
        assert!(items.iter().all(|(_, r)| r.is_ok()));
    }
}
