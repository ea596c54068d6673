use std::collections::HashMap;

use super::{coherent_in, mask_items, AtomEnv, CohError, CoherenceSpace, Token};
use crate::syntax::{atom, Formula};

/// Trace entries `(x, e')`: a clique of the domain as a mask and a
/// codomain token index. Kept sorted.
pub type Trace = Vec<(u64, usize)>;

/// A monotone map `D(E) → D(E')` given by its value on every clique.
/// Both webs have at most 64 tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    dom: CoherenceSpace,
    cod: CoherenceSpace,
    points: Vec<u64>,
    values: Vec<u64>,
    index: HashMap<u64, usize>,
}

fn subset(x: u64, y: u64) -> bool {
    x & !y == 0
}

impl FunctionTable {
    /// Checks that every value is a clique and that the map is monotone.
    pub fn new(dom: &CoherenceSpace, cod: &CoherenceSpace, f: impl Fn(u64) -> u64) -> Result<FunctionTable, CohError> {
        let points = dom.clique_masks();
        let values: Vec<u64> = points.iter().map(|&x| f(x)).collect();
        FunctionTable::from_values(dom, cod, values)
    }

    /// Values listed in the order of [`CoherenceSpace::clique_masks`].
    pub fn from_values(dom: &CoherenceSpace, cod: &CoherenceSpace, values: Vec<u64>) -> Result<FunctionTable, CohError> {
        let points = dom.clique_masks();
        assert_eq!(points.len(), values.len(), "one value per clique");
        for &v in &values {
            if !cod.is_clique_mask(v) {
                return Err(CohError::NotAClique(cod.mask_token(v).to_string()));
            }
        }
        let index = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let t = FunctionTable { dom: dom.clone(), cod: cod.clone(), points, values, index };
        for (i, &x) in t.points.iter().enumerate() {
            for (j, &y) in t.points.iter().enumerate() {
                if subset(x, y) && !subset(t.values[i], t.values[j]) {
                    return Err(CohError::NotMonotone(format!(
                        "{} ⊆ {} but f({}) ⊄ f({})",
                        dom.mask_token(x),
                        dom.mask_token(y),
                        dom.mask_token(x),
                        dom.mask_token(y)
                    )));
                }
            }
        }
        Ok(t)
    }

    pub fn identity(e: &CoherenceSpace) -> FunctionTable {
        FunctionTable::new(e, e, |x| x).expect("identity")
    }

    pub fn constant(dom: &CoherenceSpace, cod: &CoherenceSpace, y: u64) -> Result<FunctionTable, CohError> {
        FunctionTable::new(dom, cod, |_| y)
    }

    pub fn domain(&self) -> &CoherenceSpace {
        &self.dom
    }

    pub fn codomain(&self) -> &CoherenceSpace {
        &self.cod
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.values[self.index[&x]]
    }

    fn compatible(&self, x: u64, y: u64) -> bool {
        self.dom.is_clique_mask(x | y)
    }

    /// A compatible pair whose intersection is not preserved.
    pub fn stability_violation(&self) -> Option<(u64, u64)> {
        for &x in &self.points {
            for &y in &self.points {
                if self.compatible(x, y) && self.apply(x & y) != self.apply(x) & self.apply(y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_stable(&self) -> bool {
        self.stability_violation().is_none()
    }

    /// Stable, preserves compatible binary unions, and sends `∅` to `∅`.
    pub fn is_linear(&self) -> bool {
        if !self.is_stable() || self.apply(0) != 0 {
            return false;
        }
        self.points.iter().all(|&x| {
            self.points
                .iter()
                .all(|&y| !self.compatible(x, y) || self.apply(x | y) == self.apply(x) | self.apply(y))
        })
    }

    /// Minimal points: `(x, e')` with `e' ∈ f(x)` and `e' ∉ f(y)` for `y ⊊ x`.
    pub fn trace(&self) -> Result<Trace, CohError> {
        if let Some((x, y)) = self.stability_violation() {
            return Err(CohError::NotStable { x: self.dom.mask_token(x).to_string(), y: self.dom.mask_token(y).to_string() });
        }
        let mut out = Vec::new();
        for &x in &self.points {
            for e in mask_items(self.apply(x)) {
                let minimal = self.points.iter().all(|&y| !(subset(y, x) && y != x) || self.apply(y) >> e & 1 == 0);
                if minimal {
                    out.push((x, e));
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `fun(φ)(z) = {e' | ∃x ⊆ z, (x, e') ∈ φ}`; `φ` must be a clique of `!E ⊸ E'`.
    pub fn fun(dom: &CoherenceSpace, cod: &CoherenceSpace, phi: &Trace) -> Result<FunctionTable, CohError> {
        let toks = trace_tokens(dom, cod, phi);
        let (env, f) = lolli_env(dom, cod);
        for (i, t) in toks.iter().enumerate() {
            for u in &toks[i + 1..] {
                if !coherent_in(&env, &f, t, u)? {
                    return Err(CohError::NotAClique(format!("{t} and {u} are incoherent in !E -o E'")));
                }
            }
        }
        FunctionTable::new(dom, cod, |z| phi.iter().filter(|(x, _)| subset(*x, z)).fold(0, |m, &(_, e)| m | 1 << e))
    }

    /// Berry order: pointwise inclusion and `f(x) = g(x) ∩ f(y)` for `x ⊆ y`.
    pub fn stable_le(&self, g: &FunctionTable) -> bool {
        self.points.iter().all(|&x| {
            subset(self.apply(x), g.apply(x))
                && self.points.iter().all(|&y| !subset(x, y) || self.apply(x) == g.apply(x) & self.apply(y))
        })
    }
}

/// Trace entries as tokens `({x}, e')` of `!E ⊸ E'`.
pub fn trace_tokens(dom: &CoherenceSpace, cod: &CoherenceSpace, t: &Trace) -> Vec<Token> {
    t.iter().map(|&(x, e)| Token::pair(dom.mask_token(x), cod.token(e).clone())).collect()
}

/// Environment and formula whose space is `!E ⊸ E'`, i.e. `?E^ ⅋ E'`.
pub fn lolli_env(dom: &CoherenceSpace, cod: &CoherenceSpace) -> (AtomEnv, Formula) {
    let env = AtomEnv::new().with("d", dom.clone()).with("c", cod.clone());
    let f = Formula::par(Formula::why_not(Formula::DualAtom("d".into())), atom("c"));
    (env, f)
}

/// Every stable function between two small spaces.
pub fn enumerate_stable(dom: &CoherenceSpace, cod: &CoherenceSpace) -> Vec<FunctionTable> {
    let points = dom.clique_masks();
    let outs = cod.clique_masks();
    let mut out = Vec::new();
    let mut choice = vec![0usize; points.len()];
    loop {
        let values: Vec<u64> = choice.iter().map(|&i| outs[i]).collect();
        if let Ok(t) = FunctionTable::from_values(dom, cod, values) {
            if t.is_stable() {
                out.push(t);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < outs.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_empty_has_empty_trace() {
        let e = CoherenceSpace::codiscrete(2);
        let f = FunctionTable::constant(&e, &e, 0).unwrap();
        assert!(f.trace().unwrap().is_empty());
    }

    #[test]
    fn identity_trace_on_singleton() {
        let e = CoherenceSpace::codiscrete(1);
        let id = FunctionTable::identity(&e);
        assert_eq!(id.trace().unwrap(), vec![(1, 0)]);
        assert!(id.is_stable() && id.is_linear());
    }

    #[test]
    fn nonempty_indicator_is_not_stable() {
        // on a two-token codiscrete space, {e0} and {e1} are compatible
        // with empty intersection while both values are {*}
        let e = CoherenceSpace::codiscrete(2);
        let one = CoherenceSpace::one();
        let f = FunctionTable::new(&e, &one, |x| u64::from(x != 0)).unwrap();
        assert!(!f.is_stable());
        let (x, y) = f.stability_violation().unwrap();
        assert_eq!(x & y, 0);
    }

    #[test]
    fn constant_star_is_stable_not_linear() {
        let e = CoherenceSpace::codiscrete(2);
        let one = CoherenceSpace::one();
        let f = FunctionTable::constant(&e, &one, 1).unwrap();
        assert!(f.is_stable());
        assert!(!f.is_linear());
        assert_eq!(f.trace().unwrap(), vec![(0, 0)]);
    }

    #[test]
    fn parallel_or_is_not_stable() {
        // bool = two incoherent tokens t, f; por on bool & bool
        let b = CoherenceSpace::from_pairs(&["t", "f"], &[]).unwrap();
        let env = AtomEnv::new().with("b", b.clone());
        let bb = crate::coherence::build_space(&env, &Formula::with(atom("b"), atom("b"))).unwrap();
        let ix = |t: Token| bb.index_of(&t).unwrap();
        let (lt, lf) = (ix(Token::inl(Token::base("t"))), ix(Token::inl(Token::base("f"))));
        let (rt, rf) = (ix(Token::inr(Token::base("t"))), ix(Token::inr(Token::base("f"))));
        let has = |x: u64, i: usize| x >> i & 1 == 1;
        let f = FunctionTable::new(&bb, &b, |x| {
            if has(x, lt) || has(x, rt) {
                0b01
            } else if has(x, lf) && has(x, rf) {
                0b10
            } else {
                0
            }
        })
        .unwrap();
        let (x, y) = f.stability_violation().unwrap();
        assert_ne!(f.apply(x & y), f.apply(x) & f.apply(y));
    }

    #[test]
    fn roundtrip_small() {
        for dom in CoherenceSpace::all_up_to(2) {
            for cod in CoherenceSpace::all_up_to(2) {
                for f in enumerate_stable(&dom, &cod) {
                    let t = f.trace().unwrap();
                    assert_eq!(FunctionTable::fun(&dom, &cod, &t).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn non_monotone_rejected() {
        let e = CoherenceSpace::codiscrete(1);
        assert!(FunctionTable::new(&e, &e, |x| 1 - x).is_err());
    }
}
