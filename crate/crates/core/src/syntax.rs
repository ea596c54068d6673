//! Linear logic formulas and sequents.
//!
//! Formulas are trees over named atoms. The parser accepts explicit duals
//! (`(a * b)^`); everything downstream works on negation normal form, where
//! negation only appears on atoms.

use std::fmt;

use thiserror::Error;

/// A propositional linear logic formula.
///
/// The derived `Ord` is the canonical order used to sort sequents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    DualAtom(String),
    /// Explicit linear negation. Never present in negation normal form.
    Dual(Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
    OfCourse(Box<Formula>),
    WhyNot(Box<Formula>),
    One,
    Bot,
    Zero,
    Top,
}

/// Polarity of the top connective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    Atomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Tensor,
    Par,
    With,
    Plus,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Tensor => "*",
            BinOp::Par => "@",
            BinOp::With => "&",
            BinOp::Plus => "+",
        }
    }

    pub fn build(self, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match self {
            BinOp::Tensor => Formula::Tensor(a, b),
            BinOp::Par => Formula::Par(a, b),
            BinOp::With => Formula::With(a, b),
            BinOp::Plus => Formula::Plus(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("formula is not in negation normal form: {0}")]
    NotNnf(String),
}

fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError::Parse { pos, msg: msg.into() })
}

pub fn atom(name: &str) -> Formula {
    Formula::Atom(name.to_string())
}

pub fn dual_atom(name: &str) -> Formula {
    Formula::DualAtom(name.to_string())
}

/// True when `name` matches `[a-z][a-z0-9_]*` and is not a unit keyword.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && name != "bot"
        && name != "top"
}

impl Formula {
    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }
    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }
    pub fn with(a: Formula, b: Formula) -> Formula {
        Formula::With(Box::new(a), Box::new(b))
    }
    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::Plus(Box::new(a), Box::new(b))
    }
    pub fn of_course(a: Formula) -> Formula {
        Formula::OfCourse(Box::new(a))
    }
    pub fn why_not(a: Formula) -> Formula {
        Formula::WhyNot(Box::new(a))
    }
    pub fn negation(a: Formula) -> Formula {
        Formula::Dual(Box::new(a))
    }
    /// `a -o b`, i.e. `a^ @ b` with the left side normalized.
    pub fn lolli(a: Formula, b: Formula) -> Formula {
        Formula::par(nnf(&Formula::negation(a)), b)
    }

    pub fn binary_parts(&self) -> Option<(BinOp, &Formula, &Formula)> {
        match self {
            Formula::Tensor(a, b) => Some((BinOp::Tensor, a, b)),
            Formula::Par(a, b) => Some((BinOp::Par, a, b)),
            Formula::With(a, b) => Some((BinOp::With, a, b)),
            Formula::Plus(a, b) => Some((BinOp::Plus, a, b)),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::DualAtom(_))
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Dual(_) => false,
            Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::With(a, b) | Formula::Plus(a, b) => {
                a.is_nnf() && b.is_nnf()
            }
            Formula::OfCourse(a) | Formula::WhyNot(a) => a.is_nnf(),
            _ => true,
        }
    }

    /// True when no `!` or `?` occurs.
    pub fn is_exponential_free(&self) -> bool {
        match self {
            Formula::OfCourse(_) | Formula::WhyNot(_) => false,
            Formula::Dual(a) => a.is_exponential_free(),
            Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::With(a, b) | Formula::Plus(a, b) => {
                a.is_exponential_free() && b.is_exponential_free()
            }
            _ => true,
        }
    }

    pub fn is_why_not(&self) -> bool {
        matches!(self, Formula::WhyNot(_))
    }

    /// Names of atoms occurring in the formula, with or without negation.
    pub fn atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(n) | Formula::DualAtom(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Formula::Dual(a) | Formula::OfCourse(a) | Formula::WhyNot(a) => a.atoms(out),
            Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::With(a, b) | Formula::Plus(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
            Formula::One | Formula::Bot | Formula::Zero | Formula::Top => {}
        }
    }
}

/// Negation normal form, pushing every `Dual` down to the atoms.
pub fn nnf(f: &Formula) -> Formula {
    match f {
        Formula::Dual(inner) => negate_nnf(inner),
        Formula::Tensor(a, b) => Formula::tensor(nnf(a), nnf(b)),
        Formula::Par(a, b) => Formula::par(nnf(a), nnf(b)),
        Formula::With(a, b) => Formula::with(nnf(a), nnf(b)),
        Formula::Plus(a, b) => Formula::plus(nnf(a), nnf(b)),
        Formula::OfCourse(a) => Formula::of_course(nnf(a)),
        Formula::WhyNot(a) => Formula::why_not(nnf(a)),
        other => other.clone(),
    }
}

// NNF of the negation of `f`, for arbitrary `f`.
fn negate_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Atom(n) => Formula::DualAtom(n.clone()),
        Formula::DualAtom(n) => Formula::Atom(n.clone()),
        Formula::Dual(inner) => nnf(inner),
        Formula::Tensor(a, b) => Formula::par(negate_nnf(a), negate_nnf(b)),
        Formula::Par(a, b) => Formula::tensor(negate_nnf(a), negate_nnf(b)),
        Formula::With(a, b) => Formula::plus(negate_nnf(a), negate_nnf(b)),
        Formula::Plus(a, b) => Formula::with(negate_nnf(a), negate_nnf(b)),
        Formula::OfCourse(a) => Formula::why_not(negate_nnf(a)),
        Formula::WhyNot(a) => Formula::of_course(negate_nnf(a)),
        Formula::One => Formula::Bot,
        Formula::Bot => Formula::One,
        Formula::Zero => Formula::Top,
        Formula::Top => Formula::Zero,
    }
}

/// NNF of `f^`, accepting any input.
pub fn neg(f: &Formula) -> Formula {
    negate_nnf(f)
}

/// Linear negation of an NNF formula, again in NNF.
pub fn dual(f: &Formula) -> Result<Formula, SyntaxError> {
    if !f.is_nnf() {
        return Err(SyntaxError::NotNnf(f.to_string()));
    }
    Ok(negate_nnf(f))
}

/// Node count: connectives, literals and units each count one.
pub fn size(f: &Formula) -> usize {
    match f {
        Formula::Dual(a) | Formula::OfCourse(a) | Formula::WhyNot(a) => 1 + size(a),
        Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::With(a, b) | Formula::Plus(a, b) => {
            1 + size(a) + size(b)
        }
        _ => 1,
    }
}

pub fn polarity(f: &Formula) -> Polarity {
    match f {
        Formula::Tensor(..) | Formula::Plus(..) | Formula::One | Formula::Zero | Formula::OfCourse(_) => {
            Polarity::Positive
        }
        Formula::Par(..) | Formula::With(..) | Formula::Bot | Formula::Top | Formula::WhyNot(_) => {
            Polarity::Negative
        }
        Formula::Atom(_) | Formula::DualAtom(_) => Polarity::Atomic,
        Formula::Dual(inner) => match polarity(inner) {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Atomic => Polarity::Atomic,
        },
    }
}

/// Whether the top connective belongs to the multiplicative family
/// (`*`, `@`, `1`, `bot`). `None` for literals, exponentials and duals.
pub fn is_multiplicative(f: &Formula) -> Option<bool> {
    match f {
        Formula::Tensor(..) | Formula::Par(..) | Formula::One | Formula::Bot => Some(true),
        Formula::With(..) | Formula::Plus(..) | Formula::Zero | Formula::Top => Some(false),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Rendering

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n) => write!(f, "{n}"),
            Formula::DualAtom(n) => write!(f, "{n}^"),
            Formula::One => write!(f, "1"),
            Formula::Bot => write!(f, "bot"),
            Formula::Zero => write!(f, "0"),
            Formula::Top => write!(f, "top"),
            Formula::Dual(inner) => match **inner {
                Formula::DualAtom(_) | Formula::Dual(_) | Formula::One | Formula::Bot | Formula::Zero
                | Formula::Top => write!(f, "{inner}^"),
                _ => write!(f, "({inner})^"),
            },
            Formula::OfCourse(inner) => {
                write!(f, "!")?;
                write_unary_operand(f, inner)
            }
            Formula::WhyNot(inner) => {
                write!(f, "?")?;
                write_unary_operand(f, inner)
            }
            _ => {
                let (op, a, b) = self.binary_parts().expect("binary");
                match a.binary_parts() {
                    Some((lop, ..)) if lop == op => write!(f, "{a}")?,
                    Some(_) => write!(f, "({a})")?,
                    None => write!(f, "{a}")?,
                }
                write!(f, " {} ", op.symbol())?;
                if b.binary_parts().is_some() {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

fn write_unary_operand(f: &mut fmt::Formatter<'_>, inner: &Formula) -> fmt::Result {
    if inner.binary_parts().is_some() {
        write!(f, "({inner})")
    } else {
        write!(f, "{inner}")
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    One,
    Zero,
    Bot,
    Top,
    Op(BinOp),
    Lolli,
    Caret,
    Bang,
    Quest,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'*' => Tok::Op(BinOp::Tensor),
            b'@' => Tok::Op(BinOp::Par),
            b'&' => Tok::Op(BinOp::With),
            b'+' => Tok::Op(BinOp::Plus),
            b'^' => Tok::Caret,
            b'!' => Tok::Bang,
            b'?' => Tok::Quest,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'1' => Tok::One,
            b'0' => Tok::Zero,
            b'-' if bytes.get(i + 1) == Some(&b'o') => {
                i += 1;
                Tok::Lolli
            }
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                i += 1;
                Tok::Turnstile
            }
            b'a'..=b'z' => {
                while i + 1 < bytes.len() && matches!(bytes[i + 1], b'a'..=b'z' | b'0'..=b'9' | b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "bot" => Tok::Bot,
                    "top" => Tok::Top,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => return parse_err(i, format!("unexpected character {:?}", c as char)),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    // formula := chain ('-o' formula)?
    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.chain()?;
        if self.peek() == Some(&Tok::Lolli) {
            self.bump();
            let rhs = self.formula()?;
            let lhs = match lhs {
                Formula::Atom(n) => Formula::DualAtom(n),
                other => Formula::negation(other),
            };
            return Ok(Formula::par(lhs, rhs));
        }
        Ok(lhs)
    }

    // chain := unary (op unary)*, with a single repeated op
    fn chain(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        let mut chain_op: Option<BinOp> = None;
        while let Some(Tok::Op(op)) = self.peek().cloned() {
            if let Some(prev) = chain_op {
                if prev != op {
                    return parse_err(
                        self.offset(),
                        format!(
                            "mixing '{}' and '{}' requires parentheses",
                            prev.symbol(),
                            op.symbol()
                        ),
                    );
                }
            }
            chain_op = Some(op);
            self.bump();
            let rhs = self.unary()?;
            acc = op.build(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                Ok(Formula::of_course(self.unary()?))
            }
            Some(Tok::Quest) => {
                self.bump();
                Ok(Formula::why_not(self.unary()?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Formula, SyntaxError> {
        let at = self.offset();
        let (mut f, bare_ident) = match self.bump() {
            Some(Tok::Ident(n)) => (Formula::Atom(n), true),
            Some(Tok::One) => (Formula::One, false),
            Some(Tok::Zero) => (Formula::Zero, false),
            Some(Tok::Bot) => (Formula::Bot, false),
            Some(Tok::Top) => (Formula::Top, false),
            Some(Tok::LParen) => {
                let inner = self.formula()?;
                if self.bump() != Some(Tok::RParen) {
                    return parse_err(self.offset().min(self.end), "expected ')'");
                }
                (inner, false)
            }
            Some(t) => return parse_err(at, format!("unexpected token {t:?}")),
            None => return parse_err(at, "unexpected end of input"),
        };
        let mut first = true;
        while self.peek() == Some(&Tok::Caret) {
            self.bump();
            f = match f {
                Formula::Atom(n) if first && bare_ident => Formula::DualAtom(n),
                other => Formula::negation(other),
            };
            first = false;
        }
        Ok(f)
    }
}

/// Parses a formula, keeping explicit `Dual` nodes.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.pos != toks.len() {
        return parse_err(p.offset(), "trailing input");
    }
    Ok(f)
}

/// Parses a formula and normalizes it.
pub fn parse_nnf(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula(text).map(|f| nnf(&f))
}

// ---------------------------------------------------------------------------
// Sequents

/// A monolateral sequent `|- F1, ..., Fn`.
///
/// Formulas are stored sorted in canonical order, so derived equality is
/// multiset equality. Positions in proofs refer to this order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    formulas: Vec<Formula>,
}

impl Sequent {
    pub fn new(mut formulas: Vec<Formula>) -> Sequent {
        formulas.sort();
        Sequent { formulas }
    }

    pub fn empty() -> Sequent {
        Sequent::default()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn into_formulas(self) -> Vec<Formula> {
        self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        self.formulas.get(i)
    }

    pub fn is_nnf(&self) -> bool {
        self.formulas.iter().all(Formula::is_nnf)
    }

    pub fn is_exponential_free(&self) -> bool {
        self.formulas.iter().all(Formula::is_exponential_free)
    }

    pub fn total_size(&self) -> usize {
        self.formulas.iter().map(size).sum()
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.formulas.iter().filter(|g| *g == f).count()
    }

    /// Multiset union.
    pub fn union(&self, other: &Sequent) -> Sequent {
        let mut v = self.formulas.clone();
        v.extend(other.formulas.iter().cloned());
        Sequent::new(v)
    }

    /// Removes one occurrence of each given formula; `None` if one is missing.
    pub fn remove_all(&self, items: &[&Formula]) -> Option<Sequent> {
        let mut v = self.formulas.clone();
        for it in items {
            let i = v.iter().position(|g| g == *it)?;
            v.remove(i);
        }
        Some(Sequent { formulas: v })
    }

    pub fn with_added(&self, items: &[Formula]) -> Sequent {
        let mut v = self.formulas.clone();
        v.extend(items.iter().cloned());
        Sequent::new(v)
    }

    /// The sequent as one left-nested `@` fold, `bot` when empty.
    pub fn par_fold(&self) -> Formula {
        let mut it = self.formulas.iter().cloned();
        match it.next() {
            None => Formula::Bot,
            Some(first) => it.fold(first, Formula::par),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|-")?;
        for (i, g) in self.formulas.iter().enumerate() {
            write!(f, "{}{g}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

impl FromIterator<Formula> for Sequent {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        Sequent::new(iter.into_iter().collect())
    }
}

/// Parses `|- F1, ..., Fn` and normalizes every formula.
pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    let toks = lex(text)?;
    if toks.first().map(|(_, t)| t) != Some(&Tok::Turnstile) {
        return parse_err(0, "sequent must start with '|-'");
    }
    let mut p = Parser { toks: &toks, pos: 1, end: text.len() };
    let mut formulas = Vec::new();
    if p.peek().is_some() {
        loop {
            formulas.push(nnf(&p.formula()?));
            match p.bump() {
                None => break,
                Some(Tok::Comma) => continue,
                Some(t) => return parse_err(p.toks[p.pos - 1].0, format!("expected ',' but found {t:?}")),
            }
        }
    }
    Ok(Sequent::new(formulas))
}
