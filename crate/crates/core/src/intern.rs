//! Hash-consed exponential-free formulas for fast proof search.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::syntax::Formula;

pub type Id = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Lit { atom: u32, neg: bool },
    One,
    Bot,
    Zero,
    Top,
    Tensor(Id, Id),
    Par(Id, Id),
    With(Id, Id),
    Plus(Id, Id),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InternError {
    #[error("exponential formula {0} is outside the multiplicative-additive fragment")]
    Exponential(String),
    #[error("formula {0} is not in negation normal form")]
    NotNnf(String),
}

const SYM_BITS: u32 = 5;
const SEP: u128 = 31;
// end marker 0, connectives and units 1..=8, literals from 9 up to 30
const MAX_KEY_ATOMS: u32 = 11;

#[derive(Clone, Debug, Default)]
pub struct Universe {
    nodes: Vec<Node>,
    sizes: Vec<u32>,
    codes: Vec<Option<(u128, u32)>>,
    index: FxHashMap<Node, Id>,
    atoms: Vec<String>,
    atom_index: FxHashMap<String, u32>,
}

impl Universe {
    pub fn new() -> Universe {
        Universe::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: Id) -> Node {
        self.nodes[id as usize]
    }

    pub fn size(&self, id: Id) -> u32 {
        self.sizes[id as usize]
    }

    pub fn atom_name(&self, atom: u32) -> &str {
        &self.atoms[atom as usize]
    }

    pub fn atom(&mut self, name: &str) -> u32 {
        if let Some(&i) = self.atom_index.get(name) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.atoms.push(name.to_string());
        self.atom_index.insert(name.to_string(), i);
        i
    }

    pub fn mk(&mut self, node: Node) -> Id {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as Id;
        let (size, code) = match node {
            Node::Lit { atom, neg } => {
                let code = (atom < MAX_KEY_ATOMS).then(|| (9 + 2 * atom as u128 + neg as u128, 1));
                (1, code)
            }
            Node::One => (1, Some((1, 1))),
            Node::Bot => (1, Some((2, 1))),
            Node::Zero => (1, Some((3, 1))),
            Node::Top => (1, Some((4, 1))),
            Node::Tensor(a, b) | Node::Par(a, b) | Node::With(a, b) | Node::Plus(a, b) => {
                let tag: u128 = match node {
                    Node::Tensor(..) => 5,
                    Node::Par(..) => 6,
                    Node::With(..) => 7,
                    _ => 8,
                };
                let size = 1 + self.size(a) + self.size(b);
                let code = match (self.codes[a as usize], self.codes[b as usize]) {
                    (Some((ca, la)), Some((cb, lb))) if 1 + la + lb <= 128 / SYM_BITS => {
                        Some((tag | (ca << SYM_BITS) | (cb << (SYM_BITS * (1 + la))), 1 + la + lb))
                    }
                    _ => None,
                };
                (size, code)
            }
        };
        self.nodes.push(node);
        self.sizes.push(size);
        self.codes.push(code);
        self.index.insert(node, id);
        id
    }

    pub fn lit(&mut self, name: &str, neg: bool) -> Id {
        let atom = self.atom(name);
        self.mk(Node::Lit { atom, neg })
    }

    pub fn intern(&mut self, f: &Formula) -> Result<Id, InternError> {
        Ok(match f {
            Formula::Atom(a) => self.lit(a, false),
            Formula::DualAtom(a) => self.lit(a, true),
            Formula::One => self.mk(Node::One),
            Formula::Bot => self.mk(Node::Bot),
            Formula::Zero => self.mk(Node::Zero),
            Formula::Top => self.mk(Node::Top),
            Formula::Tensor(a, b) => {
                let (a, b) = (self.intern(a)?, self.intern(b)?);
                self.mk(Node::Tensor(a, b))
            }
            Formula::Par(a, b) => {
                let (a, b) = (self.intern(a)?, self.intern(b)?);
                self.mk(Node::Par(a, b))
            }
            Formula::With(a, b) => {
                let (a, b) = (self.intern(a)?, self.intern(b)?);
                self.mk(Node::With(a, b))
            }
            Formula::Plus(a, b) => {
                let (a, b) = (self.intern(a)?, self.intern(b)?);
                self.mk(Node::Plus(a, b))
            }
            Formula::OfCourse(_) | Formula::WhyNot(_) => return Err(InternError::Exponential(f.to_string())),
            Formula::Dual(_) => return Err(InternError::NotNnf(f.to_string())),
        })
    }

    pub fn to_formula(&self, id: Id) -> Formula {
        match self.node(id) {
            Node::Lit { atom, neg: false } => Formula::Atom(self.atoms[atom as usize].clone()),
            Node::Lit { atom, neg: true } => Formula::DualAtom(self.atoms[atom as usize].clone()),
            Node::One => Formula::One,
            Node::Bot => Formula::Bot,
            Node::Zero => Formula::Zero,
            Node::Top => Formula::Top,
            Node::Tensor(a, b) => Formula::tensor(self.to_formula(a), self.to_formula(b)),
            Node::Par(a, b) => Formula::par(self.to_formula(a), self.to_formula(b)),
            Node::With(a, b) => Formula::with(self.to_formula(a), self.to_formula(b)),
            Node::Plus(a, b) => Formula::plus(self.to_formula(a), self.to_formula(b)),
        }
    }

    /// Packed key of an id-sorted sequent, when it fits in 128 bits.
    pub fn key(&self, seq: &[Id]) -> Option<u128> {
        let mut key: u128 = 0;
        let mut used: u32 = 0;
        for (i, &id) in seq.iter().enumerate() {
            let (code, len) = self.codes[id as usize]?;
            let extra = u32::from(i > 0);
            if (used + len + extra) * SYM_BITS > 128 {
                return None;
            }
            if i > 0 {
                key |= SEP << (used * SYM_BITS);
                used += 1;
            }
            key |= code << (used * SYM_BITS);
            used += len;
        }
        // distinguishes the empty sequent from nothing at all
        if used * SYM_BITS < 128 {
            key |= SEP << (used * SYM_BITS);
        }
        Some(key)
    }

    pub fn total_size(&self, seq: &[Id]) -> u32 {
        seq.iter().map(|&i| self.size(i)).sum()
    }

    pub fn is_axiom(&self, seq: &[Id]) -> bool {
        if seq.len() != 2 {
            return false;
        }
        match (self.node(seq[0]), self.node(seq[1])) {
            (Node::Lit { atom: x, neg: n1 }, Node::Lit { atom: y, neg: n2 }) => x == y && n1 != n2,
            _ => false,
        }
    }
}

/// `seq` without position `i`, plus `extra`, sorted.
pub fn replace(seq: &[Id], i: usize, extra: &[Id]) -> Vec<Id> {
    let mut v = Vec::with_capacity(seq.len() + extra.len());
    v.extend_from_slice(&seq[..i]);
    v.extend_from_slice(&seq[i + 1..]);
    v.extend_from_slice(extra);
    v.sort_unstable();
    v
}

/// Every split of the multiset `ctx` (sorted) into two sub-multisets, each
/// returned once. The left part grows with the enumeration index.
pub fn splits(ctx: &[Id]) -> Vec<(Vec<Id>, Vec<Id>)> {
    // group equal ids
    let mut groups: Vec<(Id, usize)> = Vec::new();
    for &x in ctx {
        match groups.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for (k, &(x, n)) in groups.iter().enumerate() {
            l.extend(std::iter::repeat_n(x, counts[k]));
            r.extend(std::iter::repeat_n(x, n - counts[k]));
        }
        out.push((l, r));
        // odometer increment
        let mut k = 0;
        loop {
            if k == groups.len() {
                return out;
            }
            if counts[k] < groups[k].1 {
                counts[k] += 1;
                break;
            }
            counts[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_nnf;

    #[test]
    fn hash_consing_shares_nodes() {
        let mut u = Universe::new();
        let a = u.intern(&parse_nnf("a * b").unwrap()).unwrap();
        let b = u.intern(&parse_nnf("a * b").unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(u.size(a), 3);
        assert_eq!(u.to_formula(a), parse_nnf("a * b").unwrap());
    }

    #[test]
    fn keys_are_injective_on_small_sequents() {
        let mut u = Universe::new();
        let fs = ["a", "a^", "b", "a * b", "a @ b", "1", "bot"];
        let ids: Vec<Id> = fs.iter().map(|s| u.intern(&parse_nnf(s).unwrap()).unwrap()).collect();
        let mut keys = std::collections::HashSet::new();
        for i in 0..ids.len() {
            for j in i..ids.len() {
                let mut s = vec![ids[i], ids[j]];
                s.sort();
                assert!(keys.insert(u.key(&s).unwrap()));
            }
            assert!(keys.insert(u.key(&[ids[i]]).unwrap()));
        }
        assert!(keys.insert(u.key(&[]).unwrap()));
    }

    #[test]
    fn splits_count_multisets() {
        assert_eq!(splits(&[]).len(), 1);
        assert_eq!(splits(&[1, 2]).len(), 4);
        assert_eq!(splits(&[1, 1]).len(), 3);
        assert_eq!(splits(&[1, 1, 2]).len(), 6);
    }

    #[test]
    fn exponentials_rejected() {
        let mut u = Universe::new();
        assert!(u.intern(&parse_nnf("!a").unwrap()).is_err());
    }
}
