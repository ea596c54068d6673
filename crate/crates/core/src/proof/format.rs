//! S-expression proof format.
//!
//! ```text
//! ; comment
//! (tensor "|- a * b, a^, b^" (principal 0) (left 1)
//!   (ax "|- a, a^")
//!   (ax "|- b, b^"))
//! ```
//!
//! `principal`, `left` and `formula` may be omitted; they are then inferred
//! from the conclusion and the premises.

use std::fmt::Write as _;

use thiserror::Error;

use super::{check_node, Proof, Rule};
use crate::syntax::{neg, parse_nnf, parse_sequent, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof syntax error at byte {pos}: {msg}")]
pub struct ProofParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ProofParseError> {
    Err(ProofParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Word(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ProofParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            b'"' => {
                let start = i;
                i += 1;
                let s = i;
                while i < bytes.len() && bytes[i] != b'"' {
                    i += 1;
                }
                if i == bytes.len() {
                    return err(start, "unterminated string");
                }
                out.push((start, Tok::Str(text[s..i].to_string())));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let s = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !b"()\";".contains(&bytes[i]) {
                    i += 1;
                }
                out.push((s, Tok::Word(text[s..i].to_string())));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn expect_open(&mut self) -> Result<(), ProofParseError> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => err(self.here(), "expected '('"),
        }
    }

    fn word(&mut self) -> Result<(usize, String), ProofParseError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok((at, w))
            }
            _ => err(at, "expected a name"),
        }
    }

    fn string(&mut self) -> Result<(usize, String), ProofParseError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok((at, s))
            }
            _ => err(at, "expected a quoted string"),
        }
    }

    fn node(&mut self) -> Result<Proof, ProofParseError> {
        let start = self.here();
        self.expect_open()?;
        let (rat, name) = self.word()?;
        let (sat, seq_text) = self.string()?;
        let conclusion = parse_sequent(&seq_text).map_err(|e| ProofParseError { pos: sat, msg: e.to_string() })?;
        let mut principal: Option<Vec<usize>> = None;
        let mut left: Option<Vec<usize>> = None;
        let mut formula: Option<Formula> = None;
        let mut premises = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Open) => {
                    // attribute or premise
                    let key = match self.toks.get(self.pos + 1) {
                        Some((_, Tok::Word(w))) if matches!(w.as_str(), "principal" | "left" | "formula") => {
                            Some(w.clone())
                        }
                        _ => None,
                    };
                    match key.as_deref() {
                        Some("formula") => {
                            self.pos += 2;
                            let (fat, ft) = self.string()?;
                            let f = parse_nnf(&ft).map_err(|e| ProofParseError { pos: fat, msg: e.to_string() })?;
                            formula = Some(f);
                            self.close()?;
                        }
                        Some(k) => {
                            self.pos += 2;
                            let mut v = Vec::new();
                            while let Some(Tok::Word(w)) = self.peek().cloned() {
                                let at = self.here();
                                let n = w.parse::<usize>().map_err(|_| ProofParseError {
                                    pos: at,
                                    msg: format!("expected a position, found {w}"),
                                })?;
                                v.push(n);
                                self.pos += 1;
                            }
                            self.close()?;
                            if k == "principal" {
                                principal = Some(v);
                            } else {
                                left = Some(v);
                            }
                        }
                        None => premises.push(self.node()?),
                    }
                }
                None => return err(start, "unclosed proof node"),
                _ => return err(self.here(), "unexpected token in proof node"),
            }
        }
        build_node(rat, &name, conclusion, principal, left, formula, premises)
    }

    fn close(&mut self) -> Result<(), ProofParseError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => err(self.here(), "expected ')'"),
        }
    }
}

fn build_node(
    at: usize,
    name: &str,
    conclusion: Sequent,
    principal: Option<Vec<usize>>,
    left: Option<Vec<usize>>,
    formula: Option<Formula>,
    premises: Vec<Proof>,
) -> Result<Proof, ProofParseError> {
    let base = match name {
        "ax" => Rule::Axiom,
        "cut" => Rule::Cut { formula: Formula::One, left: vec![] },
        "tensor" => Rule::Tensor { left: vec![] },
        "par" => Rule::Par,
        "one" => Rule::One,
        "bot" => Rule::Bot,
        "top" => Rule::Top,
        "with" => Rule::With,
        "plus_l" => Rule::PlusL,
        "plus_r" => Rule::PlusR,
        "der" => Rule::Dereliction,
        "prom" => Rule::Promotion,
        "contr" => Rule::Contraction,
        "weak" => Rule::Weakening,
        _ => return err(at, format!("unknown rule {name}")),
    };
    let mut p = Proof { conclusion, rule: base, principal: principal.clone().unwrap_or_default(), premises };
    let split_given = left.is_some();
    if let Some(l) = left.clone() {
        match &mut p.rule {
            Rule::Cut { left, .. } | Rule::Tensor { left } => *left = l,
            _ => return err(at, format!("rule {name} takes no split")),
        }
    }
    let cut_given = formula.is_some();
    match (&mut p.rule, formula) {
        (Rule::Cut { formula, .. }, Some(f)) => *formula = f,
        (_, Some(_)) => return err(at, format!("rule {name} takes no cut formula")),
        _ => {}
    }
    let needs_split = matches!(p.rule, Rule::Cut { .. } | Rule::Tensor { .. });
    let needs_formula = matches!(p.rule, Rule::Cut { .. });
    let needs_principal = p.rule.principal_count() > 0;
    if (principal.is_some() || !needs_principal)
        && (split_given || !needs_split)
        && (cut_given || !needs_formula)
    {
        return Ok(p);
    }
    infer(&mut p, principal.is_some(), split_given, cut_given);
    Ok(p)
}

// Fills in omitted fields, preferring choices that make the node check.
fn infer(p: &mut Proof, have_principal: bool, have_split: bool, have_cut: bool) {
    let conc = p.conclusion.formulas().to_vec();
    let n = conc.len();
    let principals: Vec<Vec<usize>> = if have_principal {
        vec![p.principal.clone()]
    } else {
        match p.rule {
            Rule::Axiom => {
                let mut v = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j && neg(&conc[i]) == conc[j] {
                            v.push(vec![i, j]);
                        }
                    }
                }
                v
            }
            Rule::Cut { .. } => vec![vec![]],
            _ => (0..n).map(|i| vec![i]).collect(),
        }
    };
    let cut_formulas: Vec<Formula> = match (&p.rule, have_cut) {
        (Rule::Cut { formula, .. }, true) => vec![formula.clone()],
        (Rule::Cut { .. }, false) => p
            .premises
            .first()
            .map(|q| {
                let mut v = q.conclusion.formulas().to_vec();
                v.dedup();
                v
            })
            .unwrap_or_default(),
        _ => vec![Formula::One],
    };
    let original = p.clone();
    for pr in &principals {
        for cf in &cut_formulas {
            let mut cand = original.clone();
            cand.principal = pr.clone();
            if let Rule::Cut { formula, .. } = &mut cand.rule {
                if !have_cut {
                    *formula = cf.clone();
                }
            }
            if !have_split {
                let split = infer_split(&cand);
                match &mut cand.rule {
                    Rule::Cut { left, .. } | Rule::Tensor { left } => *left = split,
                    _ => {}
                }
            }
            if check_node(&cand).is_ok() {
                *p = cand;
                return;
            }
        }
    }
    // nothing checks: keep a deterministic guess so the checker can report
    if let Some(pr) = principals.first() {
        p.principal = pr.clone();
    }
    if let (Rule::Cut { formula, .. }, false, Some(cf)) = (&mut p.rule, have_cut, cut_formulas.first()) {
        *formula = cf.clone();
    }
}

// Left premise context claims the first matching conclusion occurrences.
fn infer_split(p: &Proof) -> Vec<usize> {
    let conc = p.conclusion.formulas();
    let Some(first) = p.premises.first() else { return vec![] };
    let active = match &p.rule {
        Rule::Cut { formula, .. } => Some(formula.clone()),
        Rule::Tensor { .. } => match p.principal.first().and_then(|&i| conc.get(i)) {
            Some(Formula::Tensor(a, _)) => Some((**a).clone()),
            _ => None,
        },
        _ => None,
    };
    let Some(active) = active else { return vec![] };
    let Some(ctx) = first.conclusion.remove_all(&[&active]) else { return vec![] };
    let mut used = vec![false; conc.len()];
    for &i in &p.principal {
        if i < used.len() {
            used[i] = true;
        }
    }
    let mut out = Vec::new();
    for f in ctx.formulas() {
        if let Some(i) = (0..conc.len()).find(|&i| !used[i] && &conc[i] == f) {
            used[i] = true;
            out.push(i);
        }
    }
    out.sort_unstable();
    out
}

/// Parses one proof; trailing content other than comments is an error.
pub fn parse_proof(text: &str) -> Result<Proof, ProofParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len() };
    let p = parser.node()?;
    if parser.pos != parser.toks.len() {
        return err(parser.here(), "trailing content after proof");
    }
    Ok(p)
}

/// Writes `p` with all positions explicit.
pub fn write_proof(p: &Proof) -> String {
    let mut out = String::new();
    write_node(p, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(p: &Proof, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let _ = write!(out, "{pad}({} \"{}\"", p.rule.name(), p.conclusion);
    if !p.principal.is_empty() {
        let ps: Vec<String> = p.principal.iter().map(|i| i.to_string()).collect();
        let _ = write!(out, " (principal {})", ps.join(" "));
    }
    match &p.rule {
        Rule::Cut { formula, left } => {
            let ls: Vec<String> = left.iter().map(|i| i.to_string()).collect();
            let _ = write!(out, " (formula \"{formula}\") (left {})", ls.join(" "));
        }
        Rule::Tensor { left } => {
            let ls: Vec<String> = left.iter().map(|i| i.to_string()).collect();
            let _ = write!(out, " (left {})", ls.join(" "));
        }
        _ => {}
    }
    for q in &p.premises {
        out.push('\n');
        write_node(q, indent + 1, out);
    }
    out.push(')');
}
