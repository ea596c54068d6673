//! Finite phase spaces: fact algebra, formula interpretation and validity.
//!
//! Subsets of the monoid are bitmasks, so monoids have at most 64 elements.
//! Small monoids (up to 8 elements) get precomputed orthogonal and product
//! tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::intern::{Node, Universe};
use crate::syntax::{Formula, Sequent};

pub type Set = u64;

pub const MAX_ELEMENTS: usize = 64;
const TABLE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhaseError {
    #[error("invalid monoid: {0}")]
    Monoid(String),
    #[error("atom {0} has no interpretation")]
    MissingAtom(String),
    #[error("{what} is not a fact")]
    NotAFact { what: String },
    #[error("exponentials need a family of closed facts")]
    NoClosedFacts,
    #[error("no closed fact contains {0}")]
    NoClosedSuperset(String),
    #[error("formula {0} is not in negation normal form")]
    NotNnf(String),
    #[error("model file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseMonoid {
    names: Vec<String>,
    mul: Vec<u8>,
    unit: usize,
}

impl PhaseMonoid {
    /// Validates closure, unit, commutativity and associativity.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>, unit: usize) -> Result<PhaseMonoid, PhaseError> {
        let n = names.len();
        if n == 0 || n > MAX_ELEMENTS {
            return Err(PhaseError::Monoid(format!("{n} elements (need 1..={MAX_ELEMENTS})")));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(PhaseError::Monoid("table is not square over the elements".into()));
        }
        if unit >= n {
            return Err(PhaseError::Monoid("unit out of range".into()));
        }
        let mut mul = Vec::with_capacity(n * n);
        for row in &table {
            for &x in row {
                if x >= n {
                    return Err(PhaseError::Monoid(format!("product {x} out of range")));
                }
                mul.push(x as u8);
            }
        }
        let m = PhaseMonoid { names, mul, unit };
        for a in 0..n {
            if m.mul(unit, a) != a {
                return Err(PhaseError::Monoid(format!("{} is not neutral for {}", m.names[unit], m.names[a])));
            }
            for b in 0..n {
                if m.mul(a, b) != m.mul(b, a) {
                    return Err(PhaseError::Monoid(format!("not commutative at {}, {}", m.names[a], m.names[b])));
                }
                for c in 0..n {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(PhaseError::Monoid(format!(
                            "not associative at {}, {}, {}",
                            m.names[a], m.names[b], m.names[c]
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.names.len() + b] as usize
    }

    /// `(Z/kZ, +)`.
    pub fn cyclic(k: usize) -> PhaseMonoid {
        let names = (0..k).map(|i| format!("z{i}")).collect();
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        PhaseMonoid::new(names, table, 0).expect("cyclic group")
    }

    /// `{0..=k}` under addition capped at `k`.
    pub fn truncated(k: usize) -> PhaseMonoid {
        let names = (0..=k).map(|i| format!("t{i}")).collect();
        let table = (0..=k).map(|a| (0..=k).map(|b| (a + b).min(k)).collect()).collect();
        PhaseMonoid::new(names, table, 0).expect("truncated addition")
    }

    /// `{0..=k}` under `max`.
    pub fn max_semilattice(k: usize) -> PhaseMonoid {
        let names = (0..=k).map(|i| format!("m{i}")).collect();
        let table = (0..=k).map(|a| (0..=k).map(|b| a.max(b)).collect()).collect();
        PhaseMonoid::new(names, table, 0).expect("semilattice")
    }

    pub fn product(&self, other: &PhaseMonoid) -> PhaseMonoid {
        let (n, m) = (self.len(), other.len());
        let names = (0..n * m).map(|i| format!("{}.{}", self.names[i / m], other.names[i % m])).collect();
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        PhaseMonoid::new(names, table, self.unit * m + other.unit).expect("product monoid")
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug)]
struct Tables {
    orth: Vec<Set>,
    prod: Vec<Set>,
}

#[derive(Clone, Debug)]
pub struct PhaseModel {
    monoid: PhaseMonoid,
    bot: Set,
    atoms: BTreeMap<String, Set>,
    closed: Option<Vec<Set>>,
    tables: Option<Tables>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TopolinearReport {
    /// (axiom number, description)
    pub violations: Vec<(u8, String)>,
}

impl TopolinearReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, axiom: u8) -> bool {
        self.violations.iter().any(|(a, _)| *a == axiom)
    }
}

impl PhaseModel {
    /// Atom interpretations and closed facts must be facts.
    pub fn new(
        monoid: PhaseMonoid,
        bot: Set,
        atoms: BTreeMap<String, Set>,
        closed: Option<Vec<Set>>,
    ) -> Result<PhaseModel, PhaseError> {
        let full = full_set(monoid.len());
        if bot & !full != 0 {
            return Err(PhaseError::Monoid("antiphases outside the monoid".into()));
        }
        let mut m = PhaseModel { monoid, bot, atoms: BTreeMap::new(), closed: None, tables: None };
        if m.monoid.len() <= TABLE_LIMIT {
            m.tables = Some(m.build_tables());
        }
        for (name, &f) in &atoms {
            if !m.is_fact(f) {
                return Err(PhaseError::NotAFact { what: format!("interpretation of {name}") });
            }
        }
        if let Some(cs) = &closed {
            for (i, &f) in cs.iter().enumerate() {
                if !m.is_fact(f) {
                    return Err(PhaseError::NotAFact { what: format!("closed fact #{i}") });
                }
            }
        }
        m.atoms = atoms;
        m.closed = closed;
        Ok(m)
    }

    fn build_tables(&self) -> Tables {
        let n = self.monoid.len();
        let count = 1usize << n;
        let orth = (0..count).map(|x| self.orth_raw(x as Set)).collect();
        let mut prod = vec![0; count * count];
        for x in 0..count {
            for y in 0..count {
                prod[x * count + y] = self.product_raw(x as Set, y as Set);
            }
        }
        Tables { orth, prod }
    }

    pub fn monoid(&self) -> &PhaseMonoid {
        &self.monoid
    }

    pub fn bot(&self) -> Set {
        self.bot
    }

    pub fn atoms(&self) -> &BTreeMap<String, Set> {
        &self.atoms
    }

    pub fn closed(&self) -> Option<&[Set]> {
        self.closed.as_deref()
    }

    pub fn full(&self) -> Set {
        full_set(self.monoid.len())
    }

    pub fn unit_set(&self) -> Set {
        1 << self.monoid.unit()
    }

    fn orth_raw(&self, x: Set) -> Set {
        let n = self.monoid.len();
        let mut out = 0;
        for q in 0..n {
            if elements(x).all(|p| self.bot >> self.monoid.mul(p, q) & 1 == 1) {
                out |= 1 << q;
            }
        }
        out
    }

    fn product_raw(&self, x: Set, y: Set) -> Set {
        let mut out = 0;
        for p in elements(x) {
            for q in elements(y) {
                out |= 1 << self.monoid.mul(p, q);
            }
        }
        out
    }

    /// `X⊥ = {q | ∀p ∈ X, pq ∈ ⊥}`.
    #[inline]
    pub fn orth(&self, x: Set) -> Set {
        match &self.tables {
            Some(t) => t.orth[x as usize],
            None => self.orth_raw(x),
        }
    }

    /// `XY = {pq | p ∈ X, q ∈ Y}`.
    #[inline]
    pub fn product(&self, x: Set, y: Set) -> Set {
        match &self.tables {
            Some(t) => t.prod[((x as usize) << self.monoid.len()) | y as usize],
            None => self.product_raw(x, y),
        }
    }

    pub fn biorth(&self, x: Set) -> Set {
        self.orth(self.orth(x))
    }

    pub fn is_fact(&self, x: Set) -> bool {
        self.biorth(x) == x
    }

    pub fn tensor(&self, f: Set, g: Set) -> Set {
        self.biorth(self.product(f, g))
    }

    pub fn par(&self, f: Set, g: Set) -> Set {
        self.orth(self.product(self.orth(f), self.orth(g)))
    }

    pub fn plus(&self, f: Set, g: Set) -> Set {
        self.biorth(f | g)
    }

    pub fn one(&self) -> Set {
        self.orth(self.bot)
    }

    pub fn zero(&self) -> Set {
        self.orth(self.full())
    }

    /// Every fact of the space (all orthogonals).
    pub fn all_facts(&self) -> Vec<Set> {
        let n = self.monoid.len();
        assert!(n <= 16, "fact enumeration limited to 16 elements");
        let mut v: Vec<Set> = (0..1u64 << n).map(|x| self.orth(x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Smallest closed fact containing `f`.
    pub fn why_not(&self, f: Set) -> Result<Set, PhaseError> {
        let cs = self.closed.as_ref().ok_or(PhaseError::NoClosedFacts)?;
        let mut acc: Option<Set> = None;
        for &c in cs {
            if f & !c == 0 {
                acc = Some(acc.map_or(c, |a| a & c));
            }
        }
        acc.ok_or_else(|| PhaseError::NoClosedSuperset(self.show(f)))
    }

    pub fn of_course(&self, f: Set) -> Result<Set, PhaseError> {
        Ok(self.orth(self.why_not(self.orth(f))?))
    }

    pub fn atom(&self, name: &str) -> Result<Set, PhaseError> {
        self.atoms.get(name).copied().ok_or_else(|| PhaseError::MissingAtom(name.to_string()))
    }

    pub fn interp(&self, f: &Formula) -> Result<Set, PhaseError> {
        Ok(match f {
            Formula::Atom(a) => self.atom(a)?,
            Formula::DualAtom(a) => self.orth(self.atom(a)?),
            Formula::Dual(_) => return Err(PhaseError::NotNnf(f.to_string())),
            Formula::Tensor(a, b) => self.tensor(self.interp(a)?, self.interp(b)?),
            Formula::Par(a, b) => self.par(self.interp(a)?, self.interp(b)?),
            Formula::With(a, b) => self.interp(a)? & self.interp(b)?,
            Formula::Plus(a, b) => self.plus(self.interp(a)?, self.interp(b)?),
            Formula::OfCourse(a) => self.of_course(self.interp(a)?)?,
            Formula::WhyNot(a) => self.why_not(self.interp(a)?)?,
            Formula::One => self.one(),
            Formula::Bot => self.bot,
            Formula::Zero => self.zero(),
            Formula::Top => self.full(),
        })
    }

    /// `1 ∈ A1 ⅋ ... ⅋ An`; the empty sequent is valid iff `1 ∈ ⊥`.
    pub fn is_valid(&self, s: &Sequent) -> Result<bool, PhaseError> {
        let mut acc = self.bot;
        for f in s.formulas() {
            acc = self.par(acc, self.interp(f)?);
        }
        Ok(acc & self.unit_set() != 0)
    }

    /// Facts of all interned formulas, indexed by id. Children are interned
    /// before parents, so one pass in id order suffices.
    pub fn interp_universe(&self, u: &Universe) -> Result<Vec<Set>, PhaseError> {
        let mut out: Vec<Set> = Vec::with_capacity(u.len());
        for id in 0..u.len() as u32 {
            let v = match u.node(id) {
                Node::Lit { atom, neg } => {
                    let f = self.atom(u.atom_name(atom))?;
                    if neg {
                        self.orth(f)
                    } else {
                        f
                    }
                }
                Node::One => self.one(),
                Node::Bot => self.bot,
                Node::Zero => self.zero(),
                Node::Top => self.full(),
                Node::Tensor(a, b) => self.tensor(out[a as usize], out[b as usize]),
                Node::Par(a, b) => self.par(out[a as usize], out[b as usize]),
                Node::With(a, b) => out[a as usize] & out[b as usize],
                Node::Plus(a, b) => self.plus(out[a as usize], out[b as usize]),
            };
            out.push(v);
        }
        Ok(out)
    }

    /// Validity of an interned sequent given [`PhaseModel::interp_universe`].
    pub fn is_valid_ids(&self, facts: &[Set], seq: &[u32]) -> bool {
        let mut acc = self.bot;
        for &id in seq {
            acc = self.par(acc, facts[id as usize]);
        }
        acc & self.unit_set() != 0
    }

    /// Checks the four topolinear axioms on the closed facts. Axiom (1) is
    /// checked on nonempty intersections, axiom (4) as `F ⅋ F = F`.
    pub fn check_topolinear(&self) -> TopolinearReport {
        let mut r = TopolinearReport::default();
        let Some(cs) = &self.closed else {
            r.violations.push((1, "no closed facts given".into()));
            return r;
        };
        let has = |x: Set| cs.contains(&x);
        for (i, &f) in cs.iter().enumerate() {
            for &g in &cs[i..] {
                if !has(f & g) {
                    r.violations.push((1, format!("{} ∩ {} is not closed", self.show(f), self.show(g))));
                }
            }
        }
        if !has(self.bot) {
            r.violations.push((2, "⊥ is not closed".into()));
        }
        for (i, &f) in cs.iter().enumerate() {
            for &g in &cs[i..] {
                let p = self.par(f, g);
                if !has(p) {
                    r.violations.push((2, format!("{} ⅋ {} is not closed", self.show(f), self.show(g))));
                }
            }
        }
        for &f in cs {
            if self.bot & !f != 0 {
                r.violations.push((3, format!("⊥ is not included in {}", self.show(f))));
            }
            if self.par(f, f) != f {
                r.violations.push((4, format!("{0} ⅋ {0} differs from {0}", self.show(f))));
            }
        }
        r
    }

    /// Renders a subset as `{x y}`.
    pub fn show(&self, x: Set) -> String {
        let items: Vec<&str> = elements(x).map(|i| self.monoid.names[i].as_str()).collect();
        format!("{{{}}}", items.join(" "))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.monoid;
        let _ = writeln!(out, "elements: {}", m.names.join(" "));
        let _ = writeln!(out, "unit: {}", m.names[m.unit]);
        for a in 0..m.len() {
            let row: Vec<&str> = (0..m.len()).map(|b| m.names[m.mul(a, b)].as_str()).collect();
            let _ = writeln!(out, "row {}: {}", m.names[a], row.join(" "));
        }
        let _ = writeln!(out, "bot: {}", self.names_of(self.bot));
        for (name, &f) in &self.atoms {
            let _ = writeln!(out, "atom {name}: {}", self.names_of(f));
        }
        if let Some(cs) = &self.closed {
            for &c in cs {
                let _ = writeln!(out, "closed: {}", self.names_of(c));
            }
        }
        out
    }

    fn names_of(&self, x: Set) -> String {
        elements(x).map(|i| self.monoid.names[i].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Parses the line-oriented model format written by [`PhaseModel::to_text`].
    pub fn parse(text: &str) -> Result<PhaseModel, PhaseError> {
        let mut names: Option<Vec<String>> = None;
        let mut unit: Option<(usize, String)> = None;
        let mut rows: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
        let mut bot: Option<(usize, Vec<String>)> = None;
        let mut atoms: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut closed: Vec<(usize, Vec<String>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| PhaseError::Parse { line: line_no, msg: msg.to_string() };
            let (head, rest) = line.split_once(':').ok_or_else(|| err("expected `key: values`"))?;
            let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            let head: Vec<&str> = head.split_whitespace().collect();
            match head.as_slice() {
                ["elements"] => names = Some(words),
                ["unit"] => unit = Some((line_no, words.first().cloned().ok_or_else(|| err("missing unit"))?)),
                ["row", e] => {
                    rows.insert(e.to_string(), (line_no, words));
                }
                ["bot"] => bot = Some((line_no, words)),
                ["atom", a] => atoms.push((line_no, a.to_string(), words)),
                ["closed"] => closed.push((line_no, words)),
                _ => return Err(err("unknown key")),
            }
        }
        let names = names.ok_or(PhaseError::Parse { line: 0, msg: "missing `elements:`".into() })?;
        let lookup = |line: usize, w: &str| -> Result<usize, PhaseError> {
            names.iter().position(|n| n == w).ok_or_else(|| PhaseError::Parse { line, msg: format!("unknown element {w}") })
        };
        let set_of = |line: usize, ws: &[String]| -> Result<Set, PhaseError> {
            ws.iter().try_fold(0, |acc, w| Ok(acc | 1 << lookup(line, w)?))
        };
        let (uline, uname) = unit.ok_or(PhaseError::Parse { line: 0, msg: "missing `unit:`".into() })?;
        let unit = lookup(uline, &uname)?;
        let mut table = Vec::with_capacity(names.len());
        for n in &names {
            let (line, ws) = rows.get(n).ok_or(PhaseError::Parse { line: 0, msg: format!("missing row for {n}") })?;
            if ws.len() != names.len() {
                return Err(PhaseError::Parse { line: *line, msg: "row length differs from element count".into() });
            }
            table.push(ws.iter().map(|w| lookup(*line, w)).collect::<Result<Vec<_>, _>>()?);
        }
        let monoid = PhaseMonoid::new(names.clone(), table, unit)?;
        let bot = match &bot {
            Some((line, ws)) => set_of(*line, ws)?,
            None => return Err(PhaseError::Parse { line: 0, msg: "missing `bot:`".into() }),
        };
        let mut amap = BTreeMap::new();
        for (line, a, ws) in &atoms {
            amap.insert(a.clone(), set_of(*line, ws)?);
        }
        let closed = if closed.is_empty() {
            None
        } else {
            Some(closed.iter().map(|(l, ws)| set_of(*l, ws)).collect::<Result<Vec<_>, _>>()?)
        };
        PhaseModel::new(monoid, bot, amap, closed)
    }
}

pub fn full_set(n: usize) -> Set {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn elements(x: Set) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| x >> i & 1 == 1)
}

/// Random commutative monoid with at most `max_elems` elements, drawn from
/// cyclic groups, capped additions, max-semilattices and their products.
pub fn random_monoid<R: Rng>(rng: &mut R, max_elems: usize) -> PhaseMonoid {
    let max_elems = max_elems.max(1);
    let base = |rng: &mut R, cap: usize| -> PhaseMonoid {
        let k = rng.gen_range(1..=cap.max(1));
        match rng.gen_range(0..3) {
            0 => PhaseMonoid::cyclic(k),
            1 => PhaseMonoid::truncated(k - 1),
            _ => PhaseMonoid::max_semilattice(k - 1),
        }
    };
    if max_elems >= 4 && rng.gen_bool(0.3) {
        let a = base(rng, max_elems / 2);
        let b = base(rng, max_elems / a.len());
        return a.product(&b);
    }
    base(rng, max_elems)
}

/// Random model over `atoms`. When `exponentials` is set, a closed-fact
/// family passing [`PhaseModel::check_topolinear`] is attached if one is found.
pub fn random_model<R: Rng>(rng: &mut R, max_elems: usize, atoms: &[&str], exponentials: bool) -> PhaseModel {
    let monoid = random_monoid(rng, max_elems);
    let n = monoid.len();
    let full = full_set(n);
    let bot = rng.gen::<u64>() & full;
    let mut model = PhaseModel::new(monoid, bot, BTreeMap::new(), None).expect("no atoms yet");
    let mut amap = BTreeMap::new();
    for a in atoms {
        let x = rng.gen::<u64>() & full;
        amap.insert(a.to_string(), model.orth(x));
    }
    model.atoms = amap;
    if exponentials {
        model.closed = random_closed_family(&model, rng);
    }
    model
}

// Idempotent facts above ⊥, closed under ∩ and ⅋, keeping only families
// that satisfy every axiom.
fn random_closed_family<R: Rng>(m: &PhaseModel, rng: &mut R) -> Option<Vec<Set>> {
    let mut candidates: Vec<Set> =
        m.all_facts().into_iter().filter(|&f| m.bot & !f == 0 && m.par(f, f) == f && f != m.bot).collect();
    candidates.shuffle(rng);
    let mut family = vec![m.bot];
    let try_close = |fam: &[Set]| -> Option<Vec<Set>> {
        let mut v = fam.to_vec();
        loop {
            let mut added = false;
            let snapshot = v.clone();
            for (i, &f) in snapshot.iter().enumerate() {
                for &g in &snapshot[i..] {
                    for h in [f & g, m.par(f, g)] {
                        if !v.contains(&h) {
                            v.push(h);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        v.sort_unstable();
        let test = PhaseModel { closed: Some(v.clone()), ..m.clone() };
        test.check_topolinear().ok().then_some(v)
    };
    let mut current = try_close(&family)?;
    let take = rng.gen_range(0..=candidates.len().min(3));
    for &c in candidates.iter().take(take) {
        family.push(c);
        match try_close(&family) {
            Some(v) => current = v,
            None => {
                family.pop();
            }
        }
    }
    // add the whole space when it keeps the axioms, so `?` is total
    family.push(m.full());
    if let Some(v) = try_close(&family) {
        current = v;
    }
    Some(current)
}

impl PhaseModel {
    /// Same model with a different closed-fact family.
    pub fn with_closed(&self, closed: Option<Vec<Set>>) -> Result<PhaseModel, PhaseError> {
        PhaseModel::new(self.monoid.clone(), self.bot, self.atoms.clone(), closed)
    }

    /// Same model with another atom interpretation.
    pub fn with_atom(&self, name: &str, fact: Set) -> Result<PhaseModel, PhaseError> {
        let mut atoms = self.atoms.clone();
        atoms.insert(name.to_string(), fact);
        PhaseModel::new(self.monoid.clone(), self.bot, atoms, self.closed.clone())
    }

    /// Index of a named element.
    pub fn element(&self, name: &str) -> Option<usize> {
        self.monoid.index(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_nnf, parse_sequent};

    fn trivial() -> PhaseModel {
        let m = PhaseMonoid::cyclic(1);
        let mut atoms = BTreeMap::new();
        atoms.insert("a".to_string(), 1);
        PhaseModel::new(m, 1, atoms, None).unwrap()
    }

    #[test]
    fn orth_examples() {
        let m = PhaseModel::new(PhaseMonoid::cyclic(3), 0b010, BTreeMap::new(), None).unwrap();
        assert_eq!(m.orth(0), m.full());
        assert_eq!(m.orth(m.unit_set()), m.bot());
        for x in 0..8 {
            assert_eq!(m.orth(m.orth(m.orth(x))), m.orth(x));
        }
    }

    #[test]
    fn units_and_with() {
        let m = PhaseModel::new(PhaseMonoid::cyclic(2), 0b01, BTreeMap::new(), None).unwrap();
        assert_eq!(m.interp(&Formula::Bot).unwrap(), m.bot());
        assert_eq!(m.interp(&Formula::Top).unwrap(), m.full());
        let m = m.with_atom("a", m.orth(0b01)).unwrap().with_atom("b", m.full()).unwrap();
        let w = m.interp(&parse_nnf("a & b").unwrap()).unwrap();
        assert_eq!(w, m.atom("a").unwrap() & m.atom("b").unwrap());
    }

    #[test]
    fn bot_invalid_when_unit_not_antiphase() {
        let m = PhaseModel::new(PhaseMonoid::cyclic(2), 0b10, BTreeMap::new(), None).unwrap();
        assert!(!m.is_valid(&parse_sequent("|- bot").unwrap()).unwrap());
    }

    #[test]
    fn degenerate_topolinear() {
        let m = trivial();
        let facts = m.all_facts();
        let m = m.with_closed(Some(facts)).unwrap();
        assert!(m.check_topolinear().ok(), "{:?}", m.check_topolinear());
    }

    #[test]
    fn missing_bot_fails_axiom_two() {
        let m = PhaseModel::new(PhaseMonoid::cyclic(2), 0b01, BTreeMap::new(), None).unwrap();
        let m = m.with_closed(Some(vec![m.full()])).unwrap();
        assert!(m.check_topolinear().fails(2));
    }

    #[test]
    fn text_roundtrip() {
        let m = PhaseModel::new(PhaseMonoid::truncated(2), 0b100, BTreeMap::new(), None).unwrap();
        let m = m.with_atom("a", m.orth(0b010)).unwrap();
        let m = m.with_closed(Some(vec![m.bot()])).unwrap();
        let back = PhaseModel::parse(&m.to_text()).unwrap();
        assert_eq!(back.to_text(), m.to_text());
    }

    #[test]
    fn bad_tables_rejected() {
        let names = vec!["e".to_string(), "x".to_string()];
        assert!(PhaseMonoid::new(names.clone(), vec![vec![0, 1], vec![0, 0]], 0).is_err());
        assert!(PhaseMonoid::new(names, vec![vec![0, 1], vec![1, 1]], 0).is_ok());
    }
}
