use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;

use super::CohError;
use crate::syntax::Formula;

/// Structured web element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Base(String),
    Star,
    /// `e.1`
    Inl(Box<Token>),
    /// `e.2`
    Inr(Box<Token>),
    Pair(Box<Token>, Box<Token>),
    /// A finite clique used as a token; kept sorted and duplicate-free.
    Set(Vec<Token>),
}

impl Token {
    pub fn base(name: &str) -> Token {
        Token::Base(name.to_string())
    }

    pub fn pair(a: Token, b: Token) -> Token {
        Token::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(a: Token) -> Token {
        Token::Inl(Box::new(a))
    }

    pub fn inr(a: Token) -> Token {
        Token::Inr(Box::new(a))
    }

    pub fn set(mut items: Vec<Token>) -> Token {
        items.sort();
        items.dedup();
        Token::Set(items)
    }

    pub fn empty_set() -> Token {
        Token::Set(Vec::new())
    }

    pub fn as_set(&self) -> Option<&[Token]> {
        match self {
            Token::Set(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Token, &Token)> {
        match self {
            Token::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Union of two set tokens.
    pub fn union(&self, other: &Token) -> Option<Token> {
        let (a, b) = (self.as_set()?, other.as_set()?);
        Some(Token::set(a.iter().chain(b).cloned().collect()))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Base(s) => write!(f, "{s}"),
            Token::Star => write!(f, "*"),
            Token::Inl(t) => write!(f, "{t}.1"),
            Token::Inr(t) => write!(f, "{t}.2"),
            Token::Pair(a, b) => write!(f, "({a},{b})"),
            Token::Set(v) => {
                write!(f, "{{")?;
                for (i, t) in v.iter().enumerate() {
                    write!(f, "{}{t}", if i == 0 { "" } else { " " })?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// A finite web with a reflexive symmetric coherence, stored as bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceSpace {
    web: Vec<Token>,
    index: HashMap<Token, usize>,
    rows: Vec<Vec<u64>>,
}

impl CoherenceSpace {
    /// Builds a space from a coherence predicate, which is closed under
    /// reflexivity but must already be symmetric.
    pub fn from_fn(web: Vec<Token>, mut coh: impl FnMut(usize, usize) -> bool) -> Result<CoherenceSpace, CohError> {
        let n = web.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; n];
        for i in 0..n {
            rows[i][i / 64] |= 1 << (i % 64);
            for j in i + 1..n {
                let (a, b) = (coh(i, j), coh(j, i));
                if a != b {
                    return Err(CohError::NotSymmetric(web[i].to_string(), web[j].to_string()));
                }
                if a {
                    rows[i][j / 64] |= 1 << (j % 64);
                    rows[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut index = HashMap::with_capacity(n);
        for (i, t) in web.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(CohError::DuplicateToken(t.to_string()));
            }
        }
        Ok(CoherenceSpace { web, index, rows })
    }

    /// Validates an explicit matrix (must be reflexive and symmetric).
    pub fn from_matrix(web: Vec<Token>, m: &[Vec<bool>]) -> Result<CoherenceSpace, CohError> {
        if m.len() != web.len() || m.iter().any(|r| r.len() != web.len()) {
            return Err(CohError::Shape);
        }
        for (i, row) in m.iter().enumerate() {
            if !row[i] {
                return Err(CohError::NotReflexive(web[i].to_string()));
            }
        }
        CoherenceSpace::from_fn(web, |i, j| m[i][j])
    }

    /// Tokens named `names`, coherent on the listed pairs (and reflexively).
    pub fn from_pairs(names: &[&str], pairs: &[(&str, &str)]) -> Result<CoherenceSpace, CohError> {
        let web: Vec<Token> = names.iter().map(|n| Token::base(n)).collect();
        let pos = |s: &str| names.iter().position(|n| *n == s).ok_or_else(|| CohError::UnknownToken(s.to_string()));
        let mut m = vec![vec![false; names.len()]; names.len()];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let (i, j) = (pos(a)?, pos(b)?);
            m[i][j] = true;
            m[j][i] = true;
        }
        CoherenceSpace::from_matrix(web, &m)
    }

    pub fn discrete(n: usize) -> CoherenceSpace {
        let web = (0..n).map(|i| Token::Base(format!("e{i}"))).collect();
        CoherenceSpace::from_fn(web, |i, j| i == j).expect("discrete")
    }

    pub fn codiscrete(n: usize) -> CoherenceSpace {
        let web = (0..n).map(|i| Token::Base(format!("e{i}"))).collect();
        CoherenceSpace::from_fn(web, |_, _| true).expect("codiscrete")
    }

    /// Natural numbers below `k`, coherent only with themselves.
    pub fn nat(k: usize) -> CoherenceSpace {
        let web = (0..k).map(|i| Token::Base(i.to_string())).collect();
        CoherenceSpace::from_fn(web, |i, j| i == j).expect("nat")
    }

    pub fn one() -> CoherenceSpace {
        CoherenceSpace::from_fn(vec![Token::Star], |_, _| true).expect("unit")
    }

    pub fn empty() -> CoherenceSpace {
        CoherenceSpace::from_fn(Vec::new(), |_, _| true).expect("empty")
    }

    /// Every space with tokens `e0..e{n-1}`, one per symmetric relation.
    pub fn all_with_size(n: usize) -> Vec<CoherenceSpace> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let web: Vec<Token> = (0..n).map(|i| Token::Base(format!("e{i}"))).collect();
        (0..1u64 << pairs.len())
            .map(|bits| {
                CoherenceSpace::from_fn(web.clone(), |i, j| {
                    if i == j {
                        return true;
                    }
                    let (a, b) = (i.min(j), i.max(j));
                    let k = pairs.iter().position(|&p| p == (a, b)).unwrap();
                    bits >> k & 1 == 1
                })
                .expect("symmetric by construction")
            })
            .collect()
    }

    /// Every space with at most `n` tokens.
    pub fn all_up_to(n: usize) -> Vec<CoherenceSpace> {
        (0..=n).flat_map(CoherenceSpace::all_with_size).collect()
    }

    pub fn random<R: Rng>(rng: &mut R, min: usize, max: usize) -> CoherenceSpace {
        let n = rng.gen_range(min..=max);
        let web: Vec<Token> = (0..n).map(|i| Token::Base(format!("e{i}"))).collect();
        let mut m = vec![vec![true; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = rng.gen_bool(0.5);
                m[i][j] = c;
                m[j][i] = c;
            }
        }
        CoherenceSpace::from_matrix(web, &m).expect("random space")
    }

    pub fn len(&self) -> usize {
        self.web.len()
    }

    pub fn is_empty(&self) -> bool {
        self.web.is_empty()
    }

    pub fn web(&self) -> &[Token] {
        &self.web
    }

    pub fn token(&self, i: usize) -> &Token {
        &self.web[i]
    }

    pub fn index_of(&self, t: &Token) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// `e ¨ e'` (reflexive).
    #[inline]
    pub fn coherent(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    /// `e ≍ e'`: not coherent, or equal.
    pub fn incoherent(&self, i: usize, j: usize) -> bool {
        i == j || !self.coherent(i, j)
    }

    /// `e ⌢ e'`
    pub fn strictly_coherent(&self, i: usize, j: usize) -> bool {
        !self.incoherent(i, j)
    }

    /// `e ⌣ e'`
    pub fn strictly_incoherent(&self, i: usize, j: usize) -> bool {
        !self.coherent(i, j)
    }

    pub fn coherent_tokens(&self, a: &Token, b: &Token) -> Option<bool> {
        Some(self.coherent(self.index_of(a)?, self.index_of(b)?))
    }

    /// Same web, incoherence as coherence.
    pub fn dual(&self) -> CoherenceSpace {
        CoherenceSpace::from_fn(self.web.clone(), |i, j| self.incoherent(i, j)).expect("dual")
    }

    pub fn is_clique(&self, xs: &[usize]) -> bool {
        xs.iter().enumerate().all(|(k, &i)| xs[k + 1..].iter().all(|&j| self.coherent(i, j)))
    }

    pub fn is_clique_mask(&self, x: u64) -> bool {
        let v: Vec<usize> = mask_items(x).collect();
        self.is_clique(&v)
    }

    /// All cliques as sorted index lists, smallest first within each
    /// branch (the empty clique comes first).
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.cliques_into(usize::MAX, &mut out);
        out
    }

    /// All cliques with at most `max_card` tokens.
    pub fn cliques_bounded(&self, max_card: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.cliques_into(max_card, &mut out);
        out
    }

    fn cliques_into(&self, max_card: usize, out: &mut Vec<Vec<usize>>) {
        fn go(s: &CoherenceSpace, start: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            if cur.len() == max {
                return;
            }
            for i in start..s.len() {
                if cur.iter().all(|&j| s.coherent(i, j)) {
                    cur.push(i);
                    go(s, i + 1, cur, max, out);
                    cur.pop();
                }
            }
        }
        go(self, 0, &mut Vec::new(), max_card, out);
    }

    /// Number of cliques, giving up once `cap` is exceeded.
    pub fn count_cliques(&self, cap: u64) -> Option<u64> {
        self.count_cliques_bounded(usize::MAX, cap)
    }

    /// Number of cliques with at most `max_card` tokens, or `None` past `cap`.
    pub fn count_cliques_bounded(&self, max_card: usize, cap: u64) -> Option<u64> {
        fn go(s: &CoherenceSpace, start: usize, cur: &mut Vec<usize>, max: usize, n: &mut u64, cap: u64) -> bool {
            *n += 1;
            if *n > cap {
                return false;
            }
            if cur.len() == max {
                return true;
            }
            for i in start..s.len() {
                if cur.iter().all(|&j| s.coherent(i, j)) {
                    cur.push(i);
                    let ok = go(s, i + 1, cur, max, n, cap);
                    cur.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        let mut n = 0;
        go(self, 0, &mut Vec::new(), max_card, &mut n, cap).then_some(n)
    }

    /// Cliques as token sets; fails when the web exceeds `bound`.
    pub fn enum_cliques(&self, bound: usize) -> Result<Vec<Vec<Token>>, CohError> {
        if self.len() > bound {
            return Err(CohError::TooLarge { size: self.len(), bound });
        }
        Ok(self.cliques().into_iter().map(|c| self.tokens_of(&c)).collect())
    }

    pub fn tokens_of(&self, xs: &[usize]) -> Vec<Token> {
        xs.iter().map(|&i| self.web[i].clone()).collect()
    }

    /// Clique masks (webs of at most 64 tokens).
    pub fn clique_masks(&self) -> Vec<u64> {
        assert!(self.len() <= 64, "mask view needs at most 64 tokens");
        self.cliques().iter().map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect()
    }

    pub fn mask_token(&self, x: u64) -> Token {
        Token::set(mask_items(x).map(|i| self.web[i].clone()).collect())
    }
}

pub fn mask_items(x: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| x >> i & 1 == 1)
}

/// Interpretations of the atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomEnv {
    pub spaces: BTreeMap<String, CoherenceSpace>,
}

impl AtomEnv {
    pub fn new() -> AtomEnv {
        AtomEnv::default()
    }

    pub fn with(mut self, atom: &str, space: CoherenceSpace) -> AtomEnv {
        self.spaces.insert(atom.to_string(), space);
        self
    }

    pub fn get(&self, atom: &str) -> Result<&CoherenceSpace, CohError> {
        self.spaces.get(atom).ok_or_else(|| CohError::UnboundAtom(atom.to_string()))
    }

    /// Random webs of `min..=max` tokens for each atom of `f`.
    pub fn random_for<R: Rng>(rng: &mut R, formulas: &[&Formula], min: usize, max: usize) -> AtomEnv {
        let mut names = Vec::new();
        for f in formulas {
            f.atoms(&mut names);
        }
        names.sort();
        names.dedup();
        let mut env = AtomEnv::new();
        for n in names {
            let s = CoherenceSpace::random(rng, min, max);
            env.spaces.insert(n, s);
        }
        env
    }

    /// Line format: `space <atom>: t1 t2 ...` then `coh <atom>: t1 t2` per
    /// coherent pair. `#` starts a comment.
    pub fn parse(text: &str) -> Result<AtomEnv, CohError> {
        let mut tokens: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut pairs: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| CohError::Parse { line: i + 1, msg: msg.to_string() };
            let (head, rest) = line.split_once(':').ok_or_else(|| err("expected `key atom: values`"))?;
            let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            match head.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["space", a] => {
                    if tokens.insert(a.to_string(), words).is_some() {
                        return Err(err("atom declared twice"));
                    }
                }
                ["coh", a] => {
                    if words.len() != 2 {
                        return Err(err("a coherent pair needs two tokens"));
                    }
                    pairs.entry(a.to_string()).or_default().push((words[0].clone(), words[1].clone()));
                }
                _ => return Err(err("unknown key")),
            }
        }
        let mut env = AtomEnv::new();
        for (a, ts) in &tokens {
            let names: Vec<&str> = ts.iter().map(String::as_str).collect();
            let ps: Vec<(&str, &str)> =
                pairs.get(a).map(|v| v.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect()).unwrap_or_default();
            env.spaces.insert(a.clone(), CoherenceSpace::from_pairs(&names, &ps)?);
        }
        if let Some(a) = pairs.keys().find(|a| !tokens.contains_key(*a)) {
            return Err(CohError::UnboundAtom(a.clone()));
        }
        Ok(env)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (a, s) in &self.spaces {
            let names: Vec<String> = s.web().iter().map(Token::to_string).collect();
            out.push_str(&format!("space {a}: {}\n", names.join(" ")));
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    if s.coherent(i, j) {
                        out.push_str(&format!("coh {a}: {} {}\n", names[i], names[j]));
                    }
                }
            }
        }
        out
    }
}
