//! Decision procedure for MALL provability and a strategy-free oracle.
//!
//! The prover decomposes `⅋`, `&` and `⊥` eagerly (and closes on `⊤`)
//! before trying the irreversible rules: atomic axiom, `1`, `⊕` left then
//! right, and `⊗` over every split of the context. The oracle tries every
//! rule instance at every position without any strategy.
//!
//! Both keep a cache of sub-sequent results across calls; a query's own
//! result is never stored, so an exhaustive sweep only retains the smaller
//! sequents it passes through.

use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::intern::{replace, splits, Id, InternError, Node, Universe};
use crate::proof::{check_proof, KernelError, Proof};
use crate::syntax::{Formula, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_visited_sequents: u64,
    pub time_budget: Duration,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_visited_sequents: 5_000_000, time_budget: Duration::from_secs(10) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveOutcome {
    Proof(Proof),
    NotProvable,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MallError {
    #[error(transparent)]
    Fragment(#[from] InternError),
    #[error("sequent of total size {size} exceeds the oracle bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("proof reconstruction failed: {0}")]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget;

const DEFAULT_CACHE_CAP: usize = 8_000_000;

/// Proof search over one [`Universe`]. Results cached for sub-sequents are
/// reused by later calls.
pub struct Prover {
    cache: FxHashMap<u128, bool>,
    cache_cap: usize,
    limits: SearchLimits,
    visited: u64,
    deadline: Option<Instant>,
}

impl Prover {
    pub fn new(limits: SearchLimits) -> Prover {
        Prover { cache: FxHashMap::default(), cache_cap: DEFAULT_CACHE_CAP, limits, visited: 0, deadline: None }
    }

    pub fn with_cache_cap(mut self, cap: usize) -> Prover {
        self.cache_cap = cap;
        self
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Sequents visited by the last query.
    pub fn visited(&self) -> u64 {
        self.visited
    }

    fn start(&mut self) {
        self.visited = 0;
        self.deadline = Instant::now().checked_add(self.limits.time_budget);
    }

    /// Decides a sequent given as ids sorted ascending.
    pub fn decide(&mut self, u: &Universe, seq: &[Id]) -> Result<bool, Budget> {
        self.start();
        self.search(u, seq, true)
    }

    fn search(&mut self, u: &Universe, seq: &[Id], root: bool) -> Result<bool, Budget> {
        let key = u.key(seq);
        if let Some(k) = key {
            if let Some(&r) = self.cache.get(&k) {
                return Ok(r);
            }
        }
        self.visited += 1;
        if self.visited > self.limits.max_visited_sequents {
            return Err(Budget);
        }
        if self.visited.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Budget);
                }
            }
        }
        let r = self.step(u, seq)?;
        if let Some(k) = key {
            if !root && self.cache.len() < self.cache_cap {
                self.cache.insert(k, r);
            }
        }
        Ok(r)
    }

    fn step(&mut self, u: &Universe, seq: &[Id]) -> Result<bool, Budget> {
        match choose(u, seq) {
            Choice::Closed(r) => Ok(r),
            Choice::Reversible(i) => match u.node(seq[i]) {
                Node::Bot => self.search(u, &replace(seq, i, &[]), false),
                Node::Par(a, b) => self.search(u, &replace(seq, i, &[a, b]), false),
                Node::With(a, b) => {
                    Ok(self.search(u, &replace(seq, i, &[a]), false)?
                        && self.search(u, &replace(seq, i, &[b]), false)?)
                }
                _ => unreachable!(),
            },
            Choice::Positive => {
                for i in 0..seq.len() {
                    if i > 0 && seq[i] == seq[i - 1] {
                        continue;
                    }
                    match u.node(seq[i]) {
                        Node::Plus(a, b) => {
                            if self.search(u, &replace(seq, i, &[a]), false)?
                                || self.search(u, &replace(seq, i, &[b]), false)?
                            {
                                return Ok(true);
                            }
                        }
                        Node::Tensor(a, b) => {
                            let ctx = replace(seq, i, &[]);
                            for (l, r) in splits(&ctx) {
                                let mut left = l;
                                left.push(a);
                                left.sort_unstable();
                                let mut right = r;
                                right.push(b);
                                right.sort_unstable();
                                if self.search(u, &left, false)? && self.search(u, &right, false)? {
                                    return Ok(true);
                                }
                            }
                        }
                        _ => {}
                    }
                }
                Ok(false)
            }
        }
    }

    /// Searches for a proof of `s`.
    pub fn prove(&mut self, u: &mut Universe, s: &Sequent) -> Result<ProveOutcome, MallError> {
        let mut seq = Vec::with_capacity(s.len());
        for f in s.formulas() {
            seq.push(u.intern(f)?);
        }
        seq.sort_unstable();
        match self.decide(u, &seq) {
            Err(Budget) => Ok(ProveOutcome::BudgetExceeded),
            Ok(false) => Ok(ProveOutcome::NotProvable),
            Ok(true) => match self.build(u, s.formulas()) {
                Ok(p) => Ok(ProveOutcome::Proof(p)),
                Err(BuildError::Budget) => Ok(ProveOutcome::BudgetExceeded),
                Err(BuildError::Kernel(e)) => Err(e.into()),
            },
        }
    }

    fn provable(&mut self, u: &mut Universe, fs: &[Formula]) -> Result<bool, BuildError> {
        let mut seq: Vec<Id> = fs.iter().map(|f| u.intern(f).expect("fragment checked")).collect();
        seq.sort_unstable();
        self.start();
        self.search(u, &seq, false).map_err(|_| BuildError::Budget)
    }

    // Follows the search strategy on formulas in canonical order.
    fn build(&mut self, u: &mut Universe, fs: &[Formula]) -> Result<Proof, BuildError> {
        let fs = Sequent::new(fs.to_vec()).into_formulas();
        let without = |i: usize, extra: &[Formula]| -> Vec<Formula> {
            let mut v: Vec<Formula> = fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
            v.extend(extra.iter().cloned());
            v
        };
        if let Some(i) = fs.iter().position(|f| *f == Formula::Top) {
            return Ok(Proof::top(without(i, &[])));
        }
        if let Some(i) = fs.iter().position(|f| matches!(f, Formula::Par(..) | Formula::With(..) | Formula::Bot)) {
            return match &fs[i] {
                Formula::Bot => Ok(Proof::bot(self.build(u, &without(i, &[]))?)),
                Formula::Par(a, b) => {
                    let prem = self.build(u, &without(i, &[(**a).clone(), (**b).clone()]))?;
                    Ok(Proof::par(prem, (**a).clone(), (**b).clone())?)
                }
                Formula::With(a, b) => {
                    let l = self.build(u, &without(i, &[(**a).clone()]))?;
                    let r = self.build(u, &without(i, &[(**b).clone()]))?;
                    Ok(Proof::with(l, r, (**a).clone(), (**b).clone())?)
                }
                _ => unreachable!(),
            };
        }
        if fs.len() == 2 {
            if let (Formula::Atom(x), Formula::DualAtom(y)) = (&fs[0], &fs[1]) {
                if x == y {
                    return Ok(Proof::axiom(fs[0].clone())?);
                }
            }
        }
        if fs.len() == 1 && fs[0] == Formula::One {
            return Ok(Proof::one());
        }
        for i in 0..fs.len() {
            if i > 0 && fs[i] == fs[i - 1] {
                continue;
            }
            match &fs[i] {
                Formula::Plus(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    let left = without(i, std::slice::from_ref(&a));
                    if self.provable(u, &left)? {
                        return Ok(Proof::plus_l(self.build(u, &left)?, a, b)?);
                    }
                    let right = without(i, std::slice::from_ref(&b));
                    if self.provable(u, &right)? {
                        return Ok(Proof::plus_r(self.build(u, &right)?, a, b)?);
                    }
                }
                Formula::Tensor(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    let ctx = without(i, &[]);
                    for (l, r) in formula_splits(&ctx) {
                        let mut left = l;
                        left.push(a.clone());
                        let mut right = r;
                        right.push(b.clone());
                        if self.provable(u, &left)? && self.provable(u, &right)? {
                            let pl = self.build(u, &left)?;
                            let pr = self.build(u, &right)?;
                            return Ok(Proof::tensor(pl, pr, a, b)?);
                        }
                    }
                }
                _ => {}
            }
        }
        Err(BuildError::Kernel(KernelError::Build { rule: "search", msg: "no rule applies".into() }))
    }
}

enum BuildError {
    Budget,
    Kernel(KernelError),
}

impl From<KernelError> for BuildError {
    fn from(e: KernelError) -> Self {
        BuildError::Kernel(e)
    }
}

enum Choice {
    Closed(bool),
    Reversible(usize),
    Positive,
}

fn choose(u: &Universe, seq: &[Id]) -> Choice {
    let mut neg = None;
    for (i, &f) in seq.iter().enumerate() {
        match u.node(f) {
            Node::Top => return Choice::Closed(true),
            Node::Par(..) | Node::With(..) | Node::Bot if neg.is_none() => neg = Some(i),
            _ => {}
        }
    }
    if let Some(i) = neg {
        return Choice::Reversible(i);
    }
    if u.is_axiom(seq) || (seq.len() == 1 && u.node(seq[0]) == Node::One) {
        return Choice::Closed(true);
    }
    Choice::Positive
}

// Splits of a canonically sorted formula list, as multisets, in a fixed order.
fn formula_splits(ctx: &[Formula]) -> Vec<(Vec<Formula>, Vec<Formula>)> {
    let mut ids: Vec<Id> = Vec::with_capacity(ctx.len());
    for (i, f) in ctx.iter().enumerate() {
        let first = ctx.iter().position(|g| g == f).unwrap_or(i);
        ids.push(first as Id);
    }
    splits(&ids)
        .into_iter()
        .map(|(l, r)| {
            (l.iter().map(|&i| ctx[i as usize].clone()).collect(), r.iter().map(|&i| ctx[i as usize].clone()).collect())
        })
        .collect()
}

/// Decides `s` with a fresh prover and returns a checked proof when one exists.
pub fn prove_mall(s: &Sequent, lim: SearchLimits) -> Result<ProveOutcome, MallError> {
    let mut u = Universe::new();
    Prover::new(lim).prove(&mut u, s)
}

// ---------------------------------------------------------------------------
// Oracle

pub const ORACLE_SIZE_BOUND: usize = 12;

/// Strategy-free provability: a sequent is provable when some instance of
/// some rule, at any position, concludes it from provable premises.
#[derive(Default)]
pub struct Oracle {
    cache: FxHashMap<u128, bool>,
    cache_cap: usize,
}

impl Oracle {
    pub fn new() -> Oracle {
        Oracle { cache: FxHashMap::default(), cache_cap: DEFAULT_CACHE_CAP }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    /// Decides an id-sorted sequent within the size bound.
    pub fn decide(&mut self, u: &Universe, seq: &[Id]) -> Result<bool, MallError> {
        let size = u.total_size(seq) as usize;
        if size > ORACLE_SIZE_BOUND {
            return Err(MallError::TooLarge { size, bound: ORACLE_SIZE_BOUND });
        }
        Ok(self.holds(u, seq, true))
    }

    fn holds(&mut self, u: &Universe, seq: &[Id], root: bool) -> bool {
        let key = u.key(seq);
        if let Some(k) = key {
            if let Some(&r) = self.cache.get(&k) {
                return r;
            }
        }
        let r = self.instances(u, seq).into_iter().any(|prems| prems.iter().all(|p| self.holds(u, p, false)));
        if let Some(k) = key {
            if !root && self.cache.len() < self.cache_cap {
                self.cache.insert(k, r);
            }
        }
        r
    }

    // Premise lists of every rule instance concluding `seq`; leaves have none.
    fn instances(&self, u: &Universe, seq: &[Id]) -> Vec<Vec<Vec<Id>>> {
        let mut out = Vec::new();
        if u.is_axiom(seq) {
            out.push(vec![]);
        }
        for i in 0..seq.len() {
            match u.node(seq[i]) {
                Node::One if seq.len() == 1 => out.push(vec![]),
                Node::Top => out.push(vec![]),
                Node::Bot => out.push(vec![replace(seq, i, &[])]),
                Node::Par(a, b) => out.push(vec![replace(seq, i, &[a, b])]),
                Node::With(a, b) => out.push(vec![replace(seq, i, &[a]), replace(seq, i, &[b])]),
                Node::Plus(a, b) => {
                    out.push(vec![replace(seq, i, &[a])]);
                    out.push(vec![replace(seq, i, &[b])]);
                }
                Node::Tensor(a, b) => {
                    for (mut l, mut r) in splits(&replace(seq, i, &[])) {
                        l.push(a);
                        l.sort_unstable();
                        r.push(b);
                        r.sort_unstable();
                        out.push(vec![l, r]);
                    }
                }
                _ => {}
            }
        }
        out
    }

    /// Some cut-free proof of the sequent, if any.
    pub fn witness(&mut self, u: &Universe, seq: &[Id]) -> Option<Proof> {
        let mut inst = self.instances(u, seq);
        let pick = inst.iter().position(|prems| prems.iter().all(|p| self.holds(u, p, false)))?;
        let prems = inst.swap_remove(pick);
        let mut subs = Vec::new();
        for p in &prems {
            subs.push(self.witness(u, p)?);
        }
        rebuild(u, seq, &prems, subs)
    }

    /// Decides `s` and, when provable, confirms that a witness proof checks.
    pub fn provable(&mut self, u: &mut Universe, s: &Sequent) -> Result<bool, MallError> {
        if s.total_size() > ORACLE_SIZE_BOUND {
            return Err(MallError::TooLarge { size: s.total_size(), bound: ORACLE_SIZE_BOUND });
        }
        let mut seq = Vec::new();
        for f in s.formulas() {
            seq.push(u.intern(f)?);
        }
        seq.sort_unstable();
        if !self.decide(u, &seq)? {
            return Ok(false);
        }
        Ok(self.witness(u, &seq).is_some_and(|p| p.conclusion == *s && check_proof(&p).ok()))
    }
}

// Recovers the rule from the conclusion and premise lists.
fn rebuild(u: &Universe, seq: &[Id], prems: &[Vec<Id>], subs: Vec<Proof>) -> Option<Proof> {
    let f = |id: Id| u.to_formula(id);
    if prems.is_empty() {
        if u.is_axiom(seq) {
            let pos = if matches!(u.node(seq[0]), Node::Lit { neg: false, .. }) { seq[0] } else { seq[1] };
            return Proof::axiom(f(pos)).ok();
        }
        if seq.len() == 1 && u.node(seq[0]) == Node::One {
            return Some(Proof::one());
        }
        let i = seq.iter().position(|&x| u.node(x) == Node::Top)?;
        return Some(Proof::top(replace(seq, i, &[]).into_iter().map(f).collect()));
    }
    // the principal is the formula of `seq` missing from the first premise
    for i in 0..seq.len() {
        let mut subs = subs.clone();
        let rest = replace(seq, i, &[]);
        let built = match u.node(seq[i]) {
            Node::Bot if prems[0] == rest => Some(Proof::bot(subs.remove(0))),
            Node::Par(a, b) if prems.len() == 1 && prems[0] == replace(seq, i, &[a, b]) => {
                Proof::par(subs.remove(0), f(a), f(b)).ok()
            }
            Node::With(a, b)
                if prems.len() == 2 && prems[0] == replace(seq, i, &[a]) && prems[1] == replace(seq, i, &[b]) =>
            {
                let (l, r) = (subs.remove(0), subs.remove(0));
                Proof::with(l, r, f(a), f(b)).ok()
            }
            Node::Plus(a, b) if prems.len() == 1 => {
                if prems[0] == replace(seq, i, &[a]) {
                    Proof::plus_l(subs.remove(0), f(a), f(b)).ok()
                } else if prems[0] == replace(seq, i, &[b]) {
                    Proof::plus_r(subs.remove(0), f(a), f(b)).ok()
                } else {
                    None
                }
            }
            Node::Tensor(a, b) if prems.len() == 2 => {
                let mut both = prems[0].clone();
                both.extend_from_slice(&prems[1]);
                both.sort_unstable();
                if both == replace(seq, i, &[a, b]) && prems[0].contains(&a) && prems[1].contains(&b) {
                    let (l, r) = (subs.remove(0), subs.remove(0));
                    Proof::tensor(l, r, f(a), f(b)).ok()
                } else {
                    None
                }
            }
            _ => None,
        };
        if built.is_some() {
            return built;
        }
    }
    None
}

/// Strategy-free check with a fresh oracle. Errors beyond the size bound.
pub fn oracle_provable(s: &Sequent) -> Result<bool, MallError> {
    let mut u = Universe::new();
    Oracle::new().provable(&mut u, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn prove(s: &str) -> ProveOutcome {
        prove_mall(&parse_sequent(s).unwrap(), SearchLimits::default()).unwrap()
    }

    #[test]
    fn excluded_middle_shapes() {
        assert!(matches!(prove("|- a @ a^"), ProveOutcome::Proof(_)));
        assert_eq!(prove("|- a + a^"), ProveOutcome::NotProvable);
        assert_eq!(prove("|- a * a^"), ProveOutcome::NotProvable);
    }

    #[test]
    fn distributivity_is_found_and_checks() {
        match prove("|- (a*(b+c))^, (a*b)+(a*c)") {
            ProveOutcome::Proof(p) => {
                assert!(check_proof(&p).ok());
                assert_eq!(p.conclusion, parse_sequent("|- (a*(b+c))^, (a*b)+(a*c)").unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponentials_rejected() {
        assert!(prove_mall(&parse_sequent("|- !a").unwrap(), SearchLimits::default()).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert!(oracle_provable(&parse_sequent("|- a, a^").unwrap()).unwrap());
        assert!(!oracle_provable(&parse_sequent("|- a").unwrap()).unwrap());
        assert!(oracle_provable(&parse_sequent("|- 1").unwrap()).unwrap());
        assert!(oracle_provable(&parse_sequent("|- top, a, b").unwrap()).unwrap());
        assert!(oracle_provable(&parse_sequent("|- (a*(b+c))^, (a*b)+(a*c)").unwrap()).unwrap());
        let big = parse_sequent("|- (a*b*a*b*a*b)^, a*b*a*b*a*b").unwrap();
        assert!(matches!(oracle_provable(&big), Err(MallError::TooLarge { .. })));
    }

    #[test]
    fn budget_is_reported() {
        let lim = SearchLimits { max_visited_sequents: 2, time_budget: Duration::from_secs(5) };
        let s = parse_sequent("|- (a*(b+c))^, (a*b)+(a*c)").unwrap();
        assert_eq!(prove_mall(&s, lim).unwrap(), ProveOutcome::BudgetExceeded);
    }
}
