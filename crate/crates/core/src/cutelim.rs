//! Stepwise cut elimination for full linear logic.
//!
//! The redex is always the first cut met in a post-order walk (left premise
//! before right), so both of its premises are cut-free. Rules are tried in
//! this order: axiom cut, key case (both cut occurrences principal),
//! commutation into the left premise, commutation into the right premise.
//! A promotion premise only absorbs the cut when the other side's context is
//! entirely `?`-formulas, which covers the box/box case.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::labeled::{LNode, LRule, Label, Labeled};
use crate::proof::{NodePath, Proof};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    AxiomCut,
    TensorPar,
    PlusWith,
    OneBot,
    DerProm,
    WeakProm,
    ContrProm,
    PromProm,
    Commutative,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::AxiomCut => "axiom-cut",
            StepKind::TensorPar => "tensor-par",
            StepKind::PlusWith => "plus-with",
            StepKind::OneBot => "one-bot",
            StepKind::DerProm => "dereliction-promotion",
            StepKind::WeakProm => "weakening-promotion",
            StepKind::ContrProm => "contraction-promotion",
            StepKind::PromProm => "promotion-promotion",
            StepKind::Commutative => "commutative",
        }
    }

    /// Logical (non-commutative) steps.
    pub fn is_key(self) -> bool {
        !matches!(self, StepKind::Commutative | StepKind::PromProm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub path: NodePath,
    pub kind: StepKind,
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "path={} kind={}", self.path, self.kind.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizationStats {
    pub steps: usize,
    /// Subproofs copied by contraction/promotion and additive commutations.
    pub duplications: usize,
    pub final_cut_count: usize,
}

#[derive(Debug, Clone, Error)]
#[error("fuel exhausted after {} steps ({} cuts left)", stats.steps, stats.final_cut_count)]
pub struct FuelExhausted {
    pub partial: Proof,
    pub stats: NormalizationStats,
}

/// Path of the leftmost-innermost cut.
pub fn find_redex(node: &LNode) -> Option<Vec<usize>> {
    fn go(n: &LNode, path: &mut Vec<usize>) -> bool {
        for (i, q) in n.premises.iter().enumerate() {
            path.push(i);
            if go(q, path) {
                return true;
            }
            path.pop();
        }
        matches!(n.rule, LRule::Cut { .. })
    }
    let mut path = Vec::new();
    go(node, &mut path).then_some(path)
}

fn mk_cut(left: LNode, a: Label, right: LNode, b: Label) -> LNode {
    let mut conc = left.conc_without(a);
    conc.extend(right.conc_without(b));
    LNode { conc, rule: LRule::Cut { a, b }, premises: vec![left, right] }
}

fn all_why_not(conc: &[(Label, Formula)], except: Label) -> bool {
    conc.iter().all(|(l, f)| *l == except || f.is_why_not())
}

/// Rewrites the cut at `path`. Returns `None` when that node is not a cut
/// or no rule applies.
pub fn reduce_at(proof: &mut Labeled, path: &[usize]) -> Option<(StepKind, usize)> {
    let node = proof.root.node(path)?.clone();
    let (new, kind, dups) = reduce_cut(proof, node)?;
    *proof.root.node_mut(path)? = new;
    Some((kind, dups))
}

fn reduce_cut(sup: &mut Labeled, c: LNode) -> Option<(LNode, StepKind, usize)> {
    let LRule::Cut { a, b } = c.rule else { return None };
    let order = c.labels();
    let mut prem = c.premises.into_iter();
    let (p1, p2) = (prem.next()?, prem.next()?);
    let (mut out, kind, dups) = rewrite(sup, p1, a, p2, b, &c.conc)?;
    out.reorder(&order);
    Some((out, kind, dups))
}

fn rewrite(
    sup: &mut Labeled,
    p1: LNode,
    a: Label,
    p2: LNode,
    b: Label,
    conc: &[(Label, Formula)],
) -> Option<(LNode, StepKind, usize)> {
    // axiom cuts
    if p1.rule == LRule::Axiom {
        let other = p1.labels().into_iter().find(|&l| l != a)?;
        return Some((p2.rename(b, other), StepKind::AxiomCut, 0));
    }
    if p2.rule == LRule::Axiom {
        let other = p2.labels().into_iter().find(|&l| l != b)?;
        return Some((p1.rename(a, other), StepKind::AxiomCut, 0));
    }
    let pr1 = p1.rule.principal() == Some(a);
    let pr2 = p2.rule.principal() == Some(b);
    if pr1 && pr2 {
        if let Some(r) = key_case(sup, p1.clone(), a, p2.clone(), b) {
            return Some(r);
        }
        if let Some(r) = key_case(sup, p2, b, p1, a) {
            return Some(r);
        }
        return None;
    }
    let prom_ok1 = !matches!(p1.rule, LRule::Prom { .. }) || all_why_not(&p2.conc, b);
    if !pr1 && prom_ok1 {
        let kind = if matches!(p1.rule, LRule::Prom { .. }) && matches!(p2.rule, LRule::Prom { .. }) {
            StepKind::PromProm
        } else {
            StepKind::Commutative
        };
        let (n, d) = commute(sup, p1, a, p2, b, conc, true)?;
        return Some((n, kind, d));
    }
    let prom_ok2 = !matches!(p2.rule, LRule::Prom { .. }) || all_why_not(&p1.conc, a);
    if !pr2 && prom_ok2 {
        let kind = if matches!(p1.rule, LRule::Prom { .. }) && matches!(p2.rule, LRule::Prom { .. }) {
            StepKind::PromProm
        } else {
            StepKind::Commutative
        };
        let (n, d) = commute(sup, p2, b, p1, a, conc, false)?;
        return Some((n, kind, d));
    }
    None
}

// Cut built from the "host" side `h` (holding label `x`) and `g` (holding `y`),
// keeping the original left/right orientation.
fn orient(h: LNode, x: Label, g: LNode, y: Label, host_left: bool) -> LNode {
    if host_left {
        mk_cut(h, x, g, y)
    } else {
        mk_cut(g, y, h, x)
    }
}

// Pushes the cut into the premise(s) of `host`, whose last rule does not
// act on the cut occurrence `x`.
fn commute(
    sup: &mut Labeled,
    host: LNode,
    x: Label,
    guest: LNode,
    y: Label,
    conc: &[(Label, Formula)],
    host_left: bool,
) -> Option<(LNode, usize)> {
    let rule = host.rule.clone();
    match rule {
        LRule::Top(_) => Some((LNode { conc: conc.to_vec(), rule, premises: vec![] }, 0)),
        LRule::With { .. } => {
            let mut prem = host.premises.into_iter();
            let (s1, s2) = (prem.next()?, prem.next()?);
            let keep: HashMap<Label, Label> =
                guest.labels().into_iter().filter(|&l| l != y).map(|l| (l, l)).collect();
            let guest2 = sup.refresh(&guest, &keep);
            let y2 = guest2.conc[guest.position(y)?].0;
            let c1 = orient(s1, x, guest, y, host_left);
            let c2 = orient(s2, x, guest2, y2, host_left);
            Some((LNode { conc: conc.to_vec(), rule, premises: vec![c1, c2] }, 1))
        }
        LRule::Axiom | LRule::One(_) => None,
        _ => {
            let mut premises = host.premises;
            let i = premises.iter().position(|q| q.position(x).is_some())?;
            let s = premises[i].clone();
            premises[i] = orient(s, x, guest, y, host_left);
            Some((LNode { conc: conc.to_vec(), rule, premises }, 0))
        }
    }
}

// Both occurrences are principal; `p1` holds `a`, `p2` holds `b`. Tries the
// cases where `p1` carries the left-hand rule of each pair.
fn key_case(sup: &mut Labeled, p1: LNode, a: Label, p2: LNode, _b: Label) -> Option<(LNode, StepKind, usize)> {
    let r1 = p1.rule.clone();
    let r2 = p2.rule.clone();
    let mut q1 = p1.premises.into_iter();
    let mut q2 = p2.premises.into_iter();
    match (r1, r2) {
        (LRule::Tensor { a: x, b: y, .. }, LRule::Par { a: u, b: v, .. }) => {
            let (s1, s2) = (q1.next()?, q1.next()?);
            let rho = q2.next()?;
            let inner = mk_cut(s2, y, rho, v);
            Some((mk_cut(s1, x, inner, u), StepKind::TensorPar, 0))
        }
        (LRule::With { a: x, .. }, LRule::PlusL { a: u, .. }) => {
            let s1 = q1.next()?;
            Some((mk_cut(s1, x, q2.next()?, u), StepKind::PlusWith, 0))
        }
        (LRule::With { a: _, b: y, .. }, LRule::PlusR { a: u, .. }) => {
            let s2 = q1.nth(1)?;
            Some((mk_cut(s2, y, q2.next()?, u), StepKind::PlusWith, 0))
        }
        (LRule::One(_), LRule::Bot(_)) => Some((q2.next()?, StepKind::OneBot, 0)),
        (LRule::Prom { a: x, .. }, LRule::Der { a: u, .. }) => {
            Some((mk_cut(q1.next()?, x, q2.next()?, u), StepKind::DerProm, 0))
        }
        (LRule::Prom { .. }, LRule::Weak(_)) => {
            let mut cur = q2.next()?;
            for (l, f) in p1_context(&p1.conc, a) {
                let mut conc = cur.conc.clone();
                conc.push((l, f));
                cur = LNode { conc, rule: LRule::Weak(l), premises: vec![cur] };
            }
            Some((cur, StepKind::WeakProm, 0))
        }
        (LRule::Prom { .. }, LRule::Contr { a: u, b: v, .. }) => {
            let box_node = LNode { conc: p1.conc.clone(), rule: p1.rule.clone(), premises: q1.collect() };
            let rho = q2.next()?;
            let ctx = p1_context(&p1.conc, a);
            let copy = |sup: &mut Labeled| {
                let n = sup.refresh(&box_node, &HashMap::new());
                let pa = n.conc[box_node.position(a).unwrap()].0;
                let map: Vec<Label> = ctx.iter().map(|(l, _)| n.conc[box_node.position(*l).unwrap()].0).collect();
                (n, pa, map)
            };
            let (c1, a1, m1) = copy(sup);
            let (c2, a2, m2) = copy(sup);
            let inner = mk_cut(c2, a2, rho, v);
            let mut cur = mk_cut(c1, a1, inner, u);
            for (k, (l, f)) in ctx.iter().enumerate() {
                let mut conc: Vec<(Label, Formula)> =
                    cur.conc.iter().filter(|(x, _)| *x != m1[k] && *x != m2[k]).cloned().collect();
                conc.push((*l, f.clone()));
                cur = LNode { conc, rule: LRule::Contr { p: *l, a: m1[k], b: m2[k] }, premises: vec![cur] };
            }
            Some((cur, StepKind::ContrProm, 1))
        }
        _ => None,
    }
}

fn p1_context(conc: &[(Label, Formula)], a: Label) -> Vec<(Label, Formula)> {
    conc.iter().filter(|(l, _)| *l != a).cloned().collect()
}

/// One leftmost-innermost step on a labeled proof.
pub fn step_labeled(proof: &mut Labeled) -> Option<(ReductionStep, usize)> {
    let path = find_redex(&proof.root)?;
    let (kind, dups) = reduce_at(proof, &path)?;
    Some((ReductionStep { path: NodePath(path), kind }, dups))
}

/// One step on a positional proof; `None` when the proof is cut-free.
pub fn reduce_step(p: &Proof) -> Option<(Proof, ReductionStep)> {
    let mut l = Labeled::from_proof(p).ok()?;
    let (step, _) = step_labeled(&mut l)?;
    Some((l.to_proof(), step))
}

/// Runs steps until cut-free or `fuel` steps were taken, calling `observe`
/// after each one.
pub fn normalize_labeled(
    proof: &mut Labeled,
    fuel: usize,
    mut observe: impl FnMut(&ReductionStep, &Labeled),
) -> Result<NormalizationStats, NormalizationStats> {
    let mut stats = NormalizationStats::default();
    loop {
        if proof.root.count_cuts() == 0 {
            return Ok(stats);
        }
        if stats.steps >= fuel {
            stats.final_cut_count = proof.root.count_cuts();
            return Err(stats);
        }
        match step_labeled(proof) {
            Some((step, dups)) => {
                stats.steps += 1;
                stats.duplications += dups;
                observe(&step, proof);
            }
            None => {
                // a cut no rule handles; only reachable on ill-formed input
                stats.final_cut_count = proof.root.count_cuts();
                return Err(stats);
            }
        }
    }
}

pub fn normalize(p: &Proof, fuel: usize) -> Result<(Proof, NormalizationStats), FuelExhausted> {
    normalize_traced(p, fuel, |_| {})
}

pub fn normalize_traced(
    p: &Proof,
    fuel: usize,
    mut trace: impl FnMut(&ReductionStep),
) -> Result<(Proof, NormalizationStats), FuelExhausted> {
    let mut l = match Labeled::from_proof(p) {
        Ok(l) => l,
        Err(_) => {
            let stats = NormalizationStats { final_cut_count: p.count_cuts(), ..Default::default() };
            return Err(FuelExhausted { partial: p.clone(), stats });
        }
    };
    match normalize_labeled(&mut l, fuel, |s, _| trace(s)) {
        Ok(stats) => Ok((l.to_proof(), stats)),
        Err(stats) => Err(FuelExhausted { partial: l.to_proof(), stats }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;
    use crate::syntax::{atom, dual_atom, Formula};

    #[test]
    fn axiom_cut_vanishes() {
        let ax = Proof::axiom(atom("a")).unwrap();
        let pi = Proof::tensor(
            Proof::axiom(atom("a")).unwrap(),
            Proof::axiom(atom("b")).unwrap(),
            atom("a"),
            atom("b"),
        )
        .unwrap();
        let c = Proof::cut(ax, pi.clone(), atom("a")).unwrap();
        let (q, step) = reduce_step(&c).unwrap();
        assert_eq!(step.kind, StepKind::AxiomCut);
        assert!(check_proof(&q).ok());
        assert_eq!(q, pi);
    }

    #[test]
    fn normal_proof_is_fixpoint() {
        let ax = Proof::axiom(atom("a")).unwrap();
        assert!(reduce_step(&ax).is_none());
        let (q, stats) = normalize(&ax, 10).unwrap();
        assert_eq!(q, ax);
        assert_eq!(stats.steps, 0);
    }

    #[test]
    fn contraction_promotion_duplicates() {
        // box |- ?b^, !b against a contraction on ?b^
        let wb = Formula::why_not(dual_atom("b"));
        let box_ = Proof::promotion(Proof::dereliction(Proof::axiom(atom("b")).unwrap(), dual_atom("b")).unwrap(), atom("b"))
            .unwrap();
        // right side: |- ?b^, b * b  from two derelictions
        let t = Proof::tensor(
            Proof::dereliction(Proof::axiom(atom("b")).unwrap(), dual_atom("b")).unwrap(),
            Proof::dereliction(Proof::axiom(atom("b")).unwrap(), dual_atom("b")).unwrap(),
            atom("b"),
            atom("b"),
        )
        .unwrap();
        let right = Proof::contraction(t, wb.clone()).unwrap();
        let c = Proof::cut(box_, right, Formula::of_course(atom("b"))).unwrap();
        assert!(check_proof(&c).ok());
        let (q, step) = reduce_step(&c).unwrap();
        assert_eq!(step.kind, StepKind::ContrProm);
        assert!(check_proof(&q).ok(), "{}", check_proof(&q));
        assert_eq!(q.count_cuts(), 2);
        let (n, stats) = normalize(&c, 1000).unwrap();
        assert!(n.is_cut_free());
        assert_eq!(n.conclusion, c.conclusion);
        assert!(check_proof(&n).ok());
        assert_eq!(stats.duplications, 1);
    }
}
