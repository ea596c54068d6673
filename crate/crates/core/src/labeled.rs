//! Proofs whose formula occurrences carry identities.
//!
//! Positional proofs address occurrences by index in a sorted sequent, which
//! is ambiguous when a formula occurs several times. Here every occurrence
//! has a [`Label`]; a context occurrence keeps its label from conclusion to
//! premise. Conversions in both directions follow the layout convention of
//! [`crate::proof::premise_layout`], so they are mutually inverse up to
//! renaming of labels.

use std::collections::HashMap;

use crate::proof::{premise_layout, Origin, Proof, Rule};
use crate::syntax::{Formula, Sequent};

pub type Label = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LRule {
    /// Conclusion holds exactly the two dual occurrences.
    Axiom,
    One(Label),
    Top(Label),
    Bot(Label),
    Weak(Label),
    Par { p: Label, a: Label, b: Label },
    /// `a` is active in the left premise, `b` in the right one.
    With { p: Label, a: Label, b: Label },
    PlusL { p: Label, a: Label },
    PlusR { p: Label, a: Label },
    Tensor { p: Label, a: Label, b: Label },
    /// `a` (the cut formula) lives in the left premise, `b` (its dual) in the right.
    Cut { a: Label, b: Label },
    Der { p: Label, a: Label },
    Prom { p: Label, a: Label },
    Contr { p: Label, a: Label, b: Label },
}

impl LRule {
    pub fn principal(&self) -> Option<Label> {
        match *self {
            LRule::Axiom | LRule::Cut { .. } => None,
            LRule::One(p) | LRule::Top(p) | LRule::Bot(p) | LRule::Weak(p) => Some(p),
            LRule::Par { p, .. }
            | LRule::With { p, .. }
            | LRule::PlusL { p, .. }
            | LRule::PlusR { p, .. }
            | LRule::Tensor { p, .. }
            | LRule::Der { p, .. }
            | LRule::Prom { p, .. }
            | LRule::Contr { p, .. } => Some(p),
        }
    }

    /// Labels introduced in premise `idx`, in the rule's fixed order.
    pub fn actives(&self, idx: usize) -> Vec<Label> {
        match *self {
            LRule::Par { a, b, .. } | LRule::Contr { a, b, .. } => vec![a, b],
            LRule::With { a, b, .. } | LRule::Tensor { a, b, .. } | LRule::Cut { a, b } => {
                vec![if idx == 0 { a } else { b }]
            }
            LRule::PlusL { a, .. } | LRule::PlusR { a, .. } | LRule::Der { a, .. } | LRule::Prom { a, .. } => {
                vec![a]
            }
            _ => vec![],
        }
    }

    fn map_labels(&self, f: &mut impl FnMut(Label) -> Label) -> LRule {
        match *self {
            LRule::Axiom => LRule::Axiom,
            LRule::One(p) => LRule::One(f(p)),
            LRule::Top(p) => LRule::Top(f(p)),
            LRule::Bot(p) => LRule::Bot(f(p)),
            LRule::Weak(p) => LRule::Weak(f(p)),
            LRule::Par { p, a, b } => LRule::Par { p: f(p), a: f(a), b: f(b) },
            LRule::With { p, a, b } => LRule::With { p: f(p), a: f(a), b: f(b) },
            LRule::PlusL { p, a } => LRule::PlusL { p: f(p), a: f(a) },
            LRule::PlusR { p, a } => LRule::PlusR { p: f(p), a: f(a) },
            LRule::Tensor { p, a, b } => LRule::Tensor { p: f(p), a: f(a), b: f(b) },
            LRule::Cut { a, b } => LRule::Cut { a: f(a), b: f(b) },
            LRule::Der { p, a } => LRule::Der { p: f(p), a: f(a) },
            LRule::Prom { p, a } => LRule::Prom { p: f(p), a: f(a) },
            LRule::Contr { p, a, b } => LRule::Contr { p: f(p), a: f(a), b: f(b) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LNode {
    pub conc: Vec<(Label, Formula)>,
    pub rule: LRule,
    pub premises: Vec<LNode>,
}

impl LNode {
    pub fn formula(&self, l: Label) -> Option<&Formula> {
        self.conc.iter().find(|(x, _)| *x == l).map(|(_, f)| f)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.conc.iter().map(|(l, _)| *l).collect()
    }

    pub fn position(&self, l: Label) -> Option<usize> {
        self.conc.iter().position(|(x, _)| *x == l)
    }

    /// Conclusion without the occurrence `l`.
    pub fn conc_without(&self, l: Label) -> Vec<(Label, Formula)> {
        self.conc.iter().filter(|(x, _)| *x != l).cloned().collect()
    }

    pub fn count_cuts(&self) -> usize {
        usize::from(matches!(self.rule, LRule::Cut { .. }))
            + self.premises.iter().map(LNode::count_cuts).sum::<usize>()
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(LNode::node_count).sum::<usize>()
    }

    pub fn node(&self, path: &[usize]) -> Option<&LNode> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get(i)?;
        }
        Some(cur)
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut LNode> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get_mut(i)?;
        }
        Some(cur)
    }

    /// Replaces every label through `f`, in the whole subtree.
    pub fn map_labels(&self, f: &mut impl FnMut(Label) -> Label) -> LNode {
        LNode {
            conc: self.conc.iter().map(|(l, g)| (f(*l), g.clone())).collect(),
            rule: self.rule.map_labels(f),
            premises: self.premises.iter().map(|p| p.map_labels(f)).collect(),
        }
    }

    pub fn rename(&self, from: Label, to: Label) -> LNode {
        self.map_labels(&mut |l| if l == from { to } else { l })
    }

    /// Reorders the conclusion to follow `order` (same label set).
    pub fn reorder(&mut self, order: &[Label]) {
        let mut conc = Vec::with_capacity(self.conc.len());
        for &l in order {
            let i = self.position(l).expect("label present");
            conc.push(self.conc[i].clone());
        }
        debug_assert_eq!(conc.len(), self.conc.len());
        self.conc = conc;
    }

    pub fn sequent(&self) -> Sequent {
        Sequent::new(self.conc.iter().map(|(_, f)| f.clone()).collect())
    }
}

/// A labeled proof together with its label supply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled {
    pub root: LNode,
    pub next: Label,
}

impl Labeled {
    pub fn fresh(&mut self) -> Label {
        let l = self.next;
        self.next += 1;
        l
    }

    /// Copy of `node` where every label not in `keep` is replaced by a fresh one.
    pub fn refresh(&mut self, node: &LNode, keep: &HashMap<Label, Label>) -> LNode {
        let mut map = keep.clone();
        let next = &mut self.next;
        node.map_labels(&mut |l| {
            *map.entry(l).or_insert_with(|| {
                let n = *next;
                *next += 1;
                n
            })
        })
    }

    /// Labels the occurrences of a checked proof. Root occurrences get
    /// labels `0..n` in conclusion order.
    pub fn from_proof(p: &Proof) -> Result<Labeled, String> {
        let n = p.conclusion.len() as Label;
        let mut next = n;
        let labels: Vec<Label> = (0..n).collect();
        let root = label_rec(p, &labels, &mut next, &mut Vec::new())?;
        Ok(Labeled { root, next })
    }

    pub fn to_proof(&self) -> Proof {
        let mut order: Vec<(Label, &Formula)> = self.root.conc.iter().map(|(l, f)| (*l, f)).collect();
        order.sort_by(|x, y| x.1.cmp(y.1));
        let order: Vec<Label> = order.into_iter().map(|(l, _)| l).collect();
        unlabel(&self.root, &order)
    }
}

fn label_rec(p: &Proof, labels: &[Label], next: &mut Label, path: &mut Vec<usize>) -> Result<LNode, String> {
    let conc: Vec<(Label, Formula)> =
        labels.iter().copied().zip(p.conclusion.formulas().iter().cloned()).collect();
    let mut fresh = || {
        let l = *next;
        *next += 1;
        l
    };
    let pr = |k: usize| p.principal.get(k).map(|&i| labels[i]).ok_or_else(|| "missing principal".to_string());
    let rule = match &p.rule {
        Rule::Axiom => LRule::Axiom,
        Rule::One => LRule::One(pr(0)?),
        Rule::Top => LRule::Top(pr(0)?),
        Rule::Bot => LRule::Bot(pr(0)?),
        Rule::Weakening => LRule::Weak(pr(0)?),
        Rule::Par => LRule::Par { p: pr(0)?, a: fresh(), b: fresh() },
        Rule::With => LRule::With { p: pr(0)?, a: fresh(), b: fresh() },
        Rule::PlusL => LRule::PlusL { p: pr(0)?, a: fresh() },
        Rule::PlusR => LRule::PlusR { p: pr(0)?, a: fresh() },
        Rule::Tensor { .. } => LRule::Tensor { p: pr(0)?, a: fresh(), b: fresh() },
        Rule::Cut { .. } => LRule::Cut { a: fresh(), b: fresh() },
        Rule::Dereliction => LRule::Der { p: pr(0)?, a: fresh() },
        Rule::Promotion => LRule::Prom { p: pr(0)?, a: fresh() },
        Rule::Contraction => LRule::Contr { p: pr(0)?, a: fresh(), b: fresh() },
    };
    let mut premises = Vec::with_capacity(p.premises.len());
    for (idx, q) in p.premises.iter().enumerate() {
        let layout = premise_layout(p, idx).ok_or_else(|| {
            format!("premise {idx} at {} does not match its rule", crate::proof::NodePath(path.clone()))
        })?;
        let actives = rule.actives(idx);
        let sub: Vec<Label> = layout
            .iter()
            .map(|o| match *o {
                Origin::Active(k) => actives[k],
                Origin::Context(c) => labels[c],
            })
            .collect();
        path.push(idx);
        premises.push(label_rec(q, &sub, next, path)?);
        path.pop();
    }
    Ok(LNode { conc, rule, premises })
}

// `order` lists the node's labels sorted by formula; ties are resolved by
// the order given, which premises must realize.
fn unlabel(node: &LNode, order: &[Label]) -> Proof {
    let pos: HashMap<Label, usize> = order.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let formulas: Vec<Formula> = order.iter().map(|l| node.formula(*l).expect("label").clone()).collect();
    let conclusion = Sequent::new(formulas);
    let premise_order = |idx: usize| -> Vec<Label> {
        let q = &node.premises[idx];
        let actives = node.rule.actives(idx);
        let mut keyed: Vec<(&Formula, usize, usize, Label)> = q
            .conc
            .iter()
            .map(|(l, f)| match actives.iter().position(|a| a == l) {
                Some(k) => (f, 0, k, *l),
                None => (f, 1, pos[l], *l),
            })
            .collect();
        keyed.sort();
        keyed.into_iter().map(|k| k.3).collect()
    };
    let premises: Vec<Proof> = (0..node.premises.len()).map(|i| unlabel(&node.premises[i], &premise_order(i))).collect();
    let split = |idx: usize| -> Vec<usize> {
        let actives = node.rule.actives(idx);
        let mut v: Vec<usize> =
            node.premises[idx].labels().iter().filter(|l| !actives.contains(l)).map(|l| pos[l]).collect();
        v.sort_unstable();
        v
    };
    let (rule, principal) = match &node.rule {
        LRule::Axiom => (Rule::Axiom, vec![pos[&node.conc[0].0], pos[&node.conc[1].0]]),
        LRule::Cut { a, .. } => {
            let formula = node.premises[0].formula(*a).expect("cut label").clone();
            (Rule::Cut { formula, left: split(0) }, vec![])
        }
        LRule::Tensor { p, .. } => (Rule::Tensor { left: split(0) }, vec![pos[p]]),
        other => {
            let p = other.principal().expect("principal");
            let rule = match other {
                LRule::One(_) => Rule::One,
                LRule::Top(_) => Rule::Top,
                LRule::Bot(_) => Rule::Bot,
                LRule::Weak(_) => Rule::Weakening,
                LRule::Par { .. } => Rule::Par,
                LRule::With { .. } => Rule::With,
                LRule::PlusL { .. } => Rule::PlusL,
                LRule::PlusR { .. } => Rule::PlusR,
                LRule::Der { .. } => Rule::Dereliction,
                LRule::Prom { .. } => Rule::Promotion,
                LRule::Contr { .. } => Rule::Contraction,
                _ => unreachable!(),
            };
            (rule, vec![pos[&p]])
        }
    };
    Proof { conclusion, rule, principal, premises }
}
