//! Sequent proofs with explicit conclusions, and a local checker.
//!
//! Every node stores its conclusion. Positions (`principal`, tensor and cut
//! splits) index into the canonically sorted conclusion. When equal formulas
//! occur several times, a premise's occurrences are matched to the
//! conclusion's by [`premise_layout`].

mod format;
mod pretty;

use std::fmt;

use thiserror::Error;

use crate::syntax::{dual, neg, Formula, Sequent};

pub use format::{parse_proof, write_proof, ProofParseError};
pub use pretty::pretty;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    /// Cut on `formula` (left premise) against its dual (right premise).
    /// `left` lists the conclusion positions that go to the left premise.
    Cut { formula: Formula, left: Vec<usize> },
    /// `left` lists the non-principal conclusion positions sent to the left premise.
    Tensor { left: Vec<usize> },
    Par,
    One,
    Bot,
    Top,
    With,
    PlusL,
    PlusR,
    Dereliction,
    Promotion,
    Contraction,
    Weakening,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "ax",
            Rule::Cut { .. } => "cut",
            Rule::Tensor { .. } => "tensor",
            Rule::Par => "par",
            Rule::One => "one",
            Rule::Bot => "bot",
            Rule::Top => "top",
            Rule::With => "with",
            Rule::PlusL => "plus_l",
            Rule::PlusR => "plus_r",
            Rule::Dereliction => "der",
            Rule::Promotion => "prom",
            Rule::Contraction => "contr",
            Rule::Weakening => "weak",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom | Rule::One | Rule::Top => 0,
            Rule::Tensor { .. } | Rule::Cut { .. } | Rule::With => 2,
            _ => 1,
        }
    }

    /// Number of principal positions the rule expects.
    pub fn principal_count(&self) -> usize {
        match self {
            Rule::Axiom => 2,
            Rule::Cut { .. } => 0,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: Rule,
    pub principal: Vec<usize>,
    pub premises: Vec<Proof>,
}

/// Address of a node: premise indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "root.{}", parts.join("."))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: NodePath,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, fail) in self.failures.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", fail.path, fail.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("rule {rule}: {msg}")]
    Build { rule: &'static str, msg: String },
}

fn build_err<T>(rule: &'static str, msg: impl Into<String>) -> Result<T, KernelError> {
    Err(KernelError::Build { rule, msg: msg.into() })
}

/// Where each premise occurrence comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// The `k`-th active formula the rule introduces in this premise.
    Active(usize),
    /// Context occurrence at this conclusion position.
    Context(usize),
}

/// Active formulas of premise `idx` in the rule's fixed order, plus the
/// conclusion positions forming that premise's context. `None` when the
/// node is malformed.
pub fn premise_shape(p: &Proof, idx: usize) -> Option<(Vec<Formula>, Vec<usize>)> {
    let conc = p.conclusion.formulas();
    let n = conc.len();
    let principal = p.principal.first().copied();
    let others = |skip: &[usize]| (0..n).filter(|i| !skip.contains(i)).collect::<Vec<_>>();
    let pf = principal.and_then(|i| conc.get(i));
    match (&p.rule, pf) {
        (Rule::Cut { formula, left }, _) => {
            if idx == 0 {
                Some((vec![formula.clone()], left.clone()))
            } else {
                let right: Vec<usize> = others(left);
                Some((vec![neg(formula)], right))
            }
        }
        (Rule::Tensor { left }, Some(Formula::Tensor(a, b))) => {
            let pi = principal?;
            if idx == 0 {
                Some((vec![(**a).clone()], left.clone()))
            } else {
                let mut skip = left.clone();
                skip.push(pi);
                Some((vec![(**b).clone()], others(&skip)))
            }
        }
        (Rule::Par, Some(Formula::Par(a, b))) => {
            Some((vec![(**a).clone(), (**b).clone()], others(&[principal?])))
        }
        (Rule::With, Some(Formula::With(a, b))) => {
            let side = if idx == 0 { a } else { b };
            Some((vec![(**side).clone()], others(&[principal?])))
        }
        (Rule::PlusL, Some(Formula::Plus(a, _))) => Some((vec![(**a).clone()], others(&[principal?]))),
        (Rule::PlusR, Some(Formula::Plus(_, b))) => Some((vec![(**b).clone()], others(&[principal?]))),
        (Rule::Bot, Some(Formula::Bot)) => Some((vec![], others(&[principal?]))),
        (Rule::Dereliction, Some(Formula::WhyNot(a))) => Some((vec![(**a).clone()], others(&[principal?]))),
        (Rule::Promotion, Some(Formula::OfCourse(a))) => Some((vec![(**a).clone()], others(&[principal?]))),
        (Rule::Contraction, Some(f @ Formula::WhyNot(_))) => {
            Some((vec![f.clone(), f.clone()], others(&[principal?])))
        }
        (Rule::Weakening, Some(Formula::WhyNot(_))) => Some((vec![], others(&[principal?]))),
        _ => None,
    }
}

/// Maps every position of premise `idx`'s conclusion to its origin.
///
/// Among equal formulas of the premise, active occurrences come first (in
/// rule order), then context occurrences in increasing conclusion position.
pub fn premise_layout(p: &Proof, idx: usize) -> Option<Vec<Origin>> {
    let (actives, ctx) = premise_shape(p, idx)?;
    let premise = p.premises.get(idx)?.conclusion.formulas();
    let conc = p.conclusion.formulas();
    let mut expected: Vec<(&Formula, Origin)> = actives
        .iter()
        .enumerate()
        .map(|(k, f)| (f, Origin::Active(k)))
        .collect();
    for &c in &ctx {
        expected.push((conc.get(c)?, Origin::Context(c)));
    }
    if expected.len() != premise.len() {
        return None;
    }
    // stable sort keeps actives-then-context order within equal formulas
    expected.sort_by(|x, y| x.0.cmp(y.0));
    let mut out = Vec::with_capacity(premise.len());
    for (f, (g, origin)) in premise.iter().zip(expected) {
        if f != g {
            return None;
        }
        out.push(origin);
    }
    Some(out)
}

impl Proof {
    pub fn conclusion(&self) -> &Sequent {
        &self.conclusion
    }

    pub fn count_cuts(&self) -> usize {
        usize::from(matches!(self.rule, Rule::Cut { .. }))
            + self.premises.iter().map(Proof::count_cuts).sum::<usize>()
    }

    pub fn is_cut_free(&self) -> bool {
        !matches!(self.rule, Rule::Cut { .. }) && self.premises.iter().all(Proof::is_cut_free)
    }

    /// Number of rule nodes.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Proof::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(Proof::depth).max().unwrap_or(0)
    }

    pub fn node(&self, path: &NodePath) -> Option<&Proof> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    pub fn node_mut(&mut self, path: &NodePath) -> Option<&mut Proof> {
        let mut cur = self;
        for &i in &path.0 {
            cur = cur.premises.get_mut(i)?;
        }
        Some(cur)
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        fn go(p: &Proof, cur: &mut Vec<usize>, out: &mut Vec<NodePath>) {
            out.push(NodePath(cur.clone()));
            for (i, q) in p.premises.iter().enumerate() {
                cur.push(i);
                go(q, cur, out);
                cur.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn uses_exponentials(&self) -> bool {
        !self.conclusion.is_exponential_free() || self.premises.iter().any(Proof::uses_exponentials)
    }

    // -----------------------------------------------------------------
    // Builders. Each computes the conclusion from its premises.

    /// `|- a, a^`.
    pub fn axiom(a: Formula) -> Result<Proof, KernelError> {
        let d = dual(&a).map_err(|e| KernelError::Build { rule: "ax", msg: e.to_string() })?;
        Ok(assemble(Rule::Axiom, vec![a, d], vec![], vec![]))
    }

    pub fn one() -> Proof {
        assemble(Rule::One, vec![Formula::One], vec![], vec![])
    }

    /// `|- top, ctx`.
    pub fn top(ctx: Vec<Formula>) -> Proof {
        assemble(Rule::Top, vec![Formula::Top], ctx, vec![])
    }

    pub fn bot(premise: Proof) -> Proof {
        let ctx = premise.conclusion.formulas().to_vec();
        assemble(Rule::Bot, vec![Formula::Bot], ctx, vec![premise])
    }

    pub fn par(premise: Proof, a: Formula, b: Formula) -> Result<Proof, KernelError> {
        let ctx = take(&premise, &[&a, &b], "par")?;
        Ok(assemble(Rule::Par, vec![Formula::par(a, b)], ctx, vec![premise]))
    }

    pub fn with(left: Proof, right: Proof, a: Formula, b: Formula) -> Result<Proof, KernelError> {
        let c1 = take(&left, &[&a], "with")?;
        let c2 = take(&right, &[&b], "with")?;
        if Sequent::new(c1.clone()) != Sequent::new(c2) {
            return build_err("with", "premise contexts differ");
        }
        Ok(assemble(Rule::With, vec![Formula::with(a, b)], c1, vec![left, right]))
    }

    /// From `|- a, ctx` conclude `|- a + b, ctx`.
    pub fn plus_l(premise: Proof, a: Formula, b: Formula) -> Result<Proof, KernelError> {
        let ctx = take(&premise, &[&a], "plus_l")?;
        Ok(assemble(Rule::PlusL, vec![Formula::plus(a, b)], ctx, vec![premise]))
    }

    /// From `|- b, ctx` conclude `|- a + b, ctx`.
    pub fn plus_r(premise: Proof, a: Formula, b: Formula) -> Result<Proof, KernelError> {
        let ctx = take(&premise, &[&b], "plus_r")?;
        Ok(assemble(Rule::PlusR, vec![Formula::plus(a, b)], ctx, vec![premise]))
    }

    pub fn tensor(left: Proof, right: Proof, a: Formula, b: Formula) -> Result<Proof, KernelError> {
        let c1 = take(&left, &[&a], "tensor")?;
        let c2 = take(&right, &[&b], "tensor")?;
        Ok(assemble_split(
            |l| Rule::Tensor { left: l },
            Some(Formula::tensor(a, b)),
            c1,
            c2,
            vec![left, right],
        ))
    }

    /// Cuts `a` in `left` against `a^` in `right`.
    pub fn cut(left: Proof, right: Proof, a: Formula) -> Result<Proof, KernelError> {
        let d = dual(&a).map_err(|e| KernelError::Build { rule: "cut", msg: e.to_string() })?;
        let c1 = take(&left, &[&a], "cut")?;
        let c2 = take(&right, &[&d], "cut")?;
        Ok(assemble_split(
            |l| Rule::Cut { formula: a.clone(), left: l },
            None,
            c1,
            c2,
            vec![left, right],
        ))
    }

    /// From `|- a, ctx` conclude `|- ?a, ctx`.
    pub fn dereliction(premise: Proof, a: Formula) -> Result<Proof, KernelError> {
        let ctx = take(&premise, &[&a], "der")?;
        Ok(assemble(Rule::Dereliction, vec![Formula::why_not(a)], ctx, vec![premise]))
    }

    /// From `|- ?G, a` conclude `|- ?G, !a`.
    pub fn promotion(premise: Proof, a: Formula) -> Result<Proof, KernelError> {
        let ctx = take(&premise, &[&a], "prom")?;
        if let Some(bad) = ctx.iter().find(|f| !f.is_why_not()) {
            return build_err("prom", format!("context formula {bad} is not ?-prefixed"));
        }
        Ok(assemble(Rule::Promotion, vec![Formula::of_course(a)], ctx, vec![premise]))
    }

    /// From `|- wn, wn, ctx` conclude `|- wn, ctx`; `wn` must be `?`-prefixed.
    pub fn contraction(premise: Proof, wn: Formula) -> Result<Proof, KernelError> {
        if !wn.is_why_not() {
            return build_err("contr", format!("{wn} is not ?-prefixed"));
        }
        let ctx = take(&premise, &[&wn, &wn], "contr")?;
        Ok(assemble(Rule::Contraction, vec![wn], ctx, vec![premise]))
    }

    /// Adds the `?`-prefixed formula `wn`.
    pub fn weakening(premise: Proof, wn: Formula) -> Result<Proof, KernelError> {
        if !wn.is_why_not() {
            return build_err("weak", format!("{wn} is not ?-prefixed"));
        }
        let ctx = premise.conclusion.formulas().to_vec();
        Ok(assemble(Rule::Weakening, vec![wn], ctx, vec![premise]))
    }

    /// Applies [`Proof::weakening`] for each formula in turn.
    pub fn weaken_all(mut premise: Proof, wns: &[Formula]) -> Result<Proof, KernelError> {
        for w in wns {
            premise = Proof::weakening(premise, w.clone())?;
        }
        Ok(premise)
    }

    /// Applies [`Proof::contraction`] once per formula.
    pub fn contract_all(mut premise: Proof, wns: &[Formula]) -> Result<Proof, KernelError> {
        for w in wns {
            premise = Proof::contraction(premise, w.clone())?;
        }
        Ok(premise)
    }
}

fn take(p: &Proof, items: &[&Formula], rule: &'static str) -> Result<Vec<Formula>, KernelError> {
    match p.conclusion.remove_all(items) {
        Some(s) => Ok(s.into_formulas()),
        None => {
            let wanted: Vec<String> = items.iter().map(|f| f.to_string()).collect();
            build_err(rule, format!("premise {} lacks {}", p.conclusion, wanted.join(", ")))
        }
    }
}

// Sorts principal + context; principal formulas take the first free
// occurrence of their value.
fn assemble(rule: Rule, principal: Vec<Formula>, ctx: Vec<Formula>, premises: Vec<Proof>) -> Proof {
    let mut all = principal.clone();
    all.extend(ctx);
    let conclusion = Sequent::new(all);
    let mut used = vec![false; conclusion.len()];
    let positions = principal.iter().map(|f| claim(&conclusion, &mut used, f)).collect();
    Proof { conclusion, rule, principal: positions, premises }
}

fn assemble_split(
    mk: impl FnOnce(Vec<usize>) -> Rule,
    principal: Option<Formula>,
    left_ctx: Vec<Formula>,
    right_ctx: Vec<Formula>,
    premises: Vec<Proof>,
) -> Proof {
    let mut all: Vec<Formula> = principal.iter().cloned().collect();
    all.extend(left_ctx.iter().cloned());
    all.extend(right_ctx);
    let conclusion = Sequent::new(all);
    let mut used = vec![false; conclusion.len()];
    let positions: Vec<usize> = principal.iter().map(|f| claim(&conclusion, &mut used, f)).collect();
    let mut left: Vec<usize> = left_ctx.iter().map(|f| claim(&conclusion, &mut used, f)).collect();
    left.sort_unstable();
    Proof { conclusion, rule: mk(left), principal: positions, premises }
}

fn claim(s: &Sequent, used: &mut [bool], f: &Formula) -> usize {
    let i = s
        .formulas()
        .iter()
        .enumerate()
        .position(|(i, g)| !used[i] && g == f)
        .expect("formula placed in conclusion");
    used[i] = true;
    i
}

// ---------------------------------------------------------------------------
// Checking

/// Checks every node of `p` against its rule schema.
pub fn check_proof(p: &Proof) -> CheckReport {
    let mut report = CheckReport::default();
    let mut path = Vec::new();
    check_rec(p, &mut path, &mut report);
    report
}

fn check_rec(p: &Proof, path: &mut Vec<usize>, report: &mut CheckReport) {
    if let Err(message) = check_node(p) {
        report.failures.push(CheckFailure { path: NodePath(path.clone()), message });
    }
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        check_rec(q, path, report);
        path.pop();
    }
}

/// Checks one node against its immediate premises.
pub fn check_node(p: &Proof) -> Result<(), String> {
    let conc = p.conclusion.formulas();
    let n = conc.len();
    if !p.conclusion.is_nnf() {
        return Err("conclusion is not in negation normal form".into());
    }
    if p.premises.len() != p.rule.arity() {
        return Err(format!(
            "{} expects {} premise(s), found {}",
            p.rule.name(),
            p.rule.arity(),
            p.premises.len()
        ));
    }
    if p.principal.len() != p.rule.principal_count() {
        return Err(format!(
            "{} expects {} principal position(s), found {}",
            p.rule.name(),
            p.rule.principal_count(),
            p.principal.len()
        ));
    }
    if p.principal.iter().any(|&i| i >= n) {
        return Err("principal position out of range".into());
    }
    let pf = p.principal.first().map(|&i| &conc[i]);
    match &p.rule {
        Rule::Axiom => {
            let (i, j) = (p.principal[0], p.principal[1]);
            if n != 2 || i == j {
                return Err("axiom must conclude exactly |- A, A^".into());
            }
            if neg(&conc[i]) != conc[j] {
                return Err(format!("{} and {} are not dual", conc[i], conc[j]));
            }
            return Ok(());
        }
        Rule::One => {
            return if n == 1 && conc[0] == Formula::One {
                Ok(())
            } else {
                Err("one rule must conclude |- 1 alone".into())
            };
        }
        Rule::Top => {
            return if pf == Some(&Formula::Top) { Ok(()) } else { Err("principal formula is not top".into()) };
        }
        Rule::Cut { formula, left } => {
            if !formula.is_nnf() {
                return Err("cut formula is not in negation normal form".into());
            }
            check_split(left, n, None)?;
        }
        Rule::Tensor { left } => {
            if !matches!(pf, Some(Formula::Tensor(..))) {
                return Err("principal formula is not a tensor".into());
            }
            check_split(left, n, Some(p.principal[0]))?;
        }
        Rule::Promotion => {
            if !matches!(pf, Some(Formula::OfCourse(_))) {
                return Err("principal formula is not !-prefixed".into());
            }
            if let Some((_, f)) =
                conc.iter().enumerate().find(|(i, f)| *i != p.principal[0] && !f.is_why_not())
            {
                return Err(format!("promotion context formula {f} is not ?-prefixed"));
            }
        }
        _ => {}
    }
    for idx in 0..p.premises.len() {
        let Some((actives, ctx)) = premise_shape(p, idx) else {
            return Err(format!("principal formula does not match rule {}", p.rule.name()));
        };
        let mut expected: Vec<Formula> = actives;
        expected.extend(ctx.iter().map(|&i| conc[i].clone()));
        let expected = Sequent::new(expected);
        let actual = &p.premises[idx].conclusion;
        if &expected != actual {
            return Err(format!(
                "premise {idx} concludes {actual} but rule {} requires {expected}",
                p.rule.name()
            ));
        }
    }
    Ok(())
}

fn check_split(left: &[usize], n: usize, principal: Option<usize>) -> Result<(), String> {
    let mut seen = vec![false; n];
    for &i in left {
        if i >= n {
            return Err(format!("split position {i} out of range"));
        }
        if Some(i) == principal {
            return Err("split includes the principal formula".into());
        }
        if seen[i] {
            return Err(format!("split position {i} repeated"));
        }
        seen[i] = true;
    }
    Ok(())
}

pub fn conclusion(p: &Proof) -> &Sequent {
    &p.conclusion
}

pub fn count_cuts(p: &Proof) -> usize {
    p.count_cuts()
}
