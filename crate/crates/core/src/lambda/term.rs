use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;

use super::LambdaError;

/// Untyped λ-terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

pub fn var(x: &str) -> Term {
    Term::Var(x.to_string())
}

pub fn lam(x: &str, body: Term) -> Term {
    Term::Abs(x.to_string(), Box::new(body))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

impl Term {
    /// Parses and renames binders apart from each other and from the free
    /// variables.
    pub fn parse(text: &str) -> Result<Term, LambdaError> {
        let raw = Parser::new(text).parse_all()?;
        Ok(raw.uniquify(&BTreeSet::new()))
    }

    /// Renames every binder so that no two binders share a name and no
    /// binder reuses a free variable or a name in `avoid`.
    pub fn uniquify(&self, avoid: &BTreeSet<String>) -> Term {
        let mut used: BTreeSet<String> = avoid.clone();
        used.extend(self.free_vars());
        let mut env = Vec::new();
        self.rename_rec(&mut used, &mut env)
    }

    fn rename_rec(&self, used: &mut BTreeSet<String>, env: &mut Vec<(String, String)>) -> Term {
        match self {
            Term::Var(x) => {
                let y = env.iter().rev().find(|(from, _)| from == x).map_or(x, |(_, to)| to);
                Term::Var(y.clone())
            }
            Term::Abs(x, body) => {
                let fresh = fresh_name(x, used);
                used.insert(fresh.clone());
                env.push((x.clone(), fresh.clone()));
                let b = body.rename_rec(used, env);
                env.pop();
                Term::Abs(fresh, Box::new(b))
            }
            Term::App(f, a) => Term::App(Box::new(f.rename_rec(used, env)), Box::new(a.rename_rec(used, env))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_rec(&mut Vec::new(), &mut out);
        out
    }

    fn free_rec(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, b) => {
                bound.push(x.clone());
                b.free_rec(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.free_rec(bound, out);
                a.free_rec(bound, out);
            }
        }
    }

    /// Node count: variables 1, abstraction and application 1 plus children.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go(s: &Term, t: &Term, env: &mut Vec<(String, String)>) -> bool {
            match (s, t) {
                (Term::Var(x), Term::Var(y)) => {
                    let bx = env.iter().rposition(|(a, _)| a == x);
                    let by = env.iter().rposition(|(_, b)| b == y);
                    match (bx, by) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Abs(x, b), Term::Abs(y, c)) => {
                    env.push((x.clone(), y.clone()));
                    let r = go(b, c, env);
                    env.pop();
                    r
                }
                (Term::App(f, a), Term::App(g, b)) => go(f, g, env) && go(a, b, env),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    let stem = base.split('_').next().unwrap_or(base);
    (1..).map(|k| format!("{stem}_{k}")).find(|n| !used.contains(n)).expect("unbounded supply")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Abs(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(g, a) => {
                match **g {
                    Term::Abs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    Term::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

/// Affine in the inductive sense: the two sides of every application have
/// disjoint free variables and every binder is used at most once.
pub fn is_affine(t: &Term) -> bool {
    fn go(t: &Term) -> Option<HashMap<String, usize>> {
        match t {
            Term::Var(x) => Some(HashMap::from([(x.clone(), 1)])),
            Term::Abs(x, b) => {
                let mut fv = go(b)?;
                fv.remove(x);
                Some(fv)
            }
            Term::App(f, a) => {
                let mut l = go(f)?;
                let r = go(a)?;
                for (k, n) in r {
                    if l.insert(k, n).is_some() {
                        return None;
                    }
                }
                Some(l)
            }
        }
    }
    go(t).is_some()
}

// ---------------------------------------------------------------------------
// Reduction

/// `t[n/x]`, renaming binders of `t` that would capture a free variable of `n`.
pub fn substitute(t: &Term, x: &str, n: &Term) -> Term {
    let fv = n.free_vars();
    subst_rec(t, x, n, &fv)
}

fn subst_rec(t: &Term, x: &str, n: &Term, fv: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y) if y == x => n.clone(),
        Term::Var(_) => t.clone(),
        Term::Abs(y, _) if y == x => t.clone(),
        Term::Abs(y, b) if fv.contains(y) => {
            let mut used = fv.clone();
            used.extend(b.free_vars());
            used.insert(x.to_string());
            let z = fresh_name(y, &used);
            let b = subst_rec(b, y, &Term::Var(z.clone()), &BTreeSet::from([z.clone()]));
            Term::Abs(z, Box::new(subst_rec(&b, x, n, fv)))
        }
        Term::Abs(y, b) => Term::Abs(y.clone(), Box::new(subst_rec(b, x, n, fv))),
        Term::App(f, a) => Term::App(Box::new(subst_rec(f, x, n, fv)), Box::new(subst_rec(a, x, n, fv))),
    }
}

/// One leftmost-outermost β-step, or `None` at a normal form.
pub fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => None,
        Term::Abs(x, b) => beta_step(b).map(|b| Term::Abs(x.clone(), Box::new(b))),
        Term::App(f, a) => {
            if let Term::Abs(x, b) = &**f {
                return Some(substitute(b, x, a));
            }
            if let Some(g) = beta_step(f) {
                return Some(Term::App(Box::new(g), a.clone()));
            }
            beta_step(a).map(|b| Term::App(f.clone(), Box::new(b)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaResult {
    pub term: Term,
    pub steps: usize,
    /// False when fuel ran out before a normal form was reached.
    pub normal: bool,
}

pub fn beta_normalize(t: &Term, fuel: usize) -> BetaResult {
    let mut cur = t.clone();
    let mut steps = 0;
    while steps < fuel {
        match beta_step(&cur) {
            Some(next) => {
                cur = next;
                steps += 1;
            }
            None => return BetaResult { term: cur, steps, normal: true },
        }
    }
    let normal = beta_step(&cur).is_none();
    BetaResult { term: cur, steps, normal }
}

/// `λf.λx.f (f (... x))` with `n` applications.
pub fn church(n: usize) -> Term {
    let mut body = var("x");
    for _ in 0..n {
        body = app(var("f"), body);
    }
    lam("f", lam("x", body))
}

/// Inverse of [`church`] up to renaming.
pub fn church_value(t: &Term) -> Option<usize> {
    let Term::Abs(f, b) = t else { return None };
    let Term::Abs(x, inner) = &**b else { return None };
    let mut body: &Term = inner;
    if f == x {
        return None;
    }
    let mut n = 0;
    loop {
        match body {
            Term::Var(y) if y == x => return Some(n),
            Term::App(g, a) if matches!(&**g, Term::Var(h) if h == f) => {
                n += 1;
                body = a;
            }
            _ => return None,
        }
    }
}

// ---------------------------------------------------------------------------
// Generators

/// A random affine term of size at most `max_size` (at least 1). Function
/// positions are often abstractions, so most terms contain redexes.
pub fn random_affine_term<R: Rng>(rng: &mut R, max_size: usize) -> Term {
    let mut counter = 0;
    let mut avail = Vec::new();
    gen_affine(rng, max_size.max(1), &mut avail, &mut counter)
}

fn gen_affine<R: Rng>(rng: &mut R, budget: usize, avail: &mut Vec<String>, counter: &mut usize) -> Term {
    let mut fresh = |prefix: &str| {
        *counter += 1;
        format!("{prefix}{counter}")
    };
    if budget <= 2 || rng.gen_bool(0.15) {
        if !avail.is_empty() && rng.gen_bool(0.8) {
            let i = rng.gen_range(0..avail.len());
            return Term::Var(avail.swap_remove(i));
        }
        return Term::Var(fresh("z"));
    }
    if rng.gen_bool(0.35) {
        let x = fresh("v");
        avail.push(x.clone());
        let body = gen_affine(rng, budget - 1, avail, counter);
        avail.retain(|y| *y != x);
        return Term::Abs(x, Box::new(body));
    }
    let left_budget = rng.gen_range(1..=budget - 2);
    let right_budget = budget - 1 - left_budget;
    let (mut l_avail, mut r_avail): (Vec<String>, Vec<String>) = avail.drain(..).partition(|_| rng.gen_bool(0.5));
    let f = if left_budget >= 2 && rng.gen_bool(0.6) {
        let x = fresh("v");
        l_avail.push(x.clone());
        let body = gen_affine(rng, left_budget - 1, &mut l_avail, counter);
        l_avail.retain(|y| *y != x);
        Term::Abs(x, Box::new(body))
    } else {
        gen_affine(rng, left_budget, &mut l_avail, counter)
    };
    let a = gen_affine(rng, right_budget, &mut r_avail, counter);
    avail.extend(l_avail);
    avail.extend(r_avail);
    Term::App(Box::new(f), Box::new(a))
}

/// Every closed term of size at most `max_size`, binders named `x0, x1, ...`
/// by depth.
pub fn closed_terms(max_size: usize) -> Vec<Term> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(terms_of_size(n, 0));
    }
    out
}

fn terms_of_size(n: usize, depth: usize) -> Vec<Term> {
    let mut out = Vec::new();
    if n == 1 {
        out.extend((0..depth).map(|i| Term::Var(format!("x{i}"))));
        return out;
    }
    let x = format!("x{depth}");
    for b in terms_of_size(n - 1, depth + 1) {
        out.push(Term::Abs(x.clone(), Box::new(b)));
    }
    for k in 1..n - 1 {
        let fs = terms_of_size(k, depth);
        if fs.is_empty() {
            continue;
        }
        let args = terms_of_size(n - 1 - k, depth);
        for f in &fs {
            for a in &args {
                out.push(app(f.clone(), a.clone()));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.char_indices().collect(), pos: 0, _src: src }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LambdaError> {
        let at = self.chars.get(self.pos).map_or_else(|| self._src.len(), |c| c.0);
        Err(LambdaError::Parse { pos: at, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            let ok = if self.pos == start { c.is_alphabetic() || c == '_' } else { c.is_alphanumeric() || c == '_' || c == '\'' };
            if !ok {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    fn parse_all(mut self) -> Result<Term, LambdaError> {
        let t = self.term()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(t)
    }

    fn term(&mut self) -> Result<Term, LambdaError> {
        if matches!(self.peek(), Some('\\' | 'λ')) {
            return self.abstraction();
        }
        let mut t = match self.atom()? {
            Some(t) => t,
            None => return self.err("expected a term"),
        };
        loop {
            if matches!(self.peek(), Some('\\' | 'λ')) {
                let a = self.abstraction()?;
                return Ok(app(t, a));
            }
            match self.atom()? {
                Some(a) => t = app(t, a),
                None => return Ok(t),
            }
        }
    }

    fn abstraction(&mut self) -> Result<Term, LambdaError> {
        self.pos += 1;
        let mut names = Vec::new();
        while let Some(x) = self.ident() {
            names.push(x);
        }
        if names.is_empty() {
            return self.err("expected a bound variable");
        }
        if self.peek() != Some('.') {
            return self.err("expected '.'");
        }
        self.pos += 1;
        let mut body = self.term()?;
        for x in names.into_iter().rev() {
            body = Term::Abs(x, Box::new(body));
        }
        Ok(body)
    }

    fn atom(&mut self) -> Result<Option<Term>, LambdaError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(Some(t))
            }
            _ => Ok(self.ident().map(Term::Var)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn t(s: &str) -> Term {
        Term::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(t("\\x. x"), lam("x", var("x")));
        assert_eq!(t("f x y"), app(app(var("f"), var("x")), var("y")));
        assert_eq!(t("\\f x. f x"), lam("f", lam("x", app(var("f"), var("x")))));
        assert_eq!(t("f \\x. x"), app(var("f"), lam("x", var("x"))));
        for s in ["(\\x. x) y", "\\f. \\x. f (f x)", "x (\\y. y) z"] {
            assert_eq!(t(&t(s).to_string()), t(s), "{s}");
        }
        assert!(Term::parse("\\. x").is_err());
        assert!(Term::parse("(x").is_err());
    }

    #[test]
    fn binders_made_unique() {
        let u = t("(\\x. x) (\\x. x) x");
        let Term::App(l, _) = &u else { panic!() };
        let Term::App(a, b) = &**l else { panic!() };
        let (Term::Abs(x1, _), Term::Abs(x2, _)) = (&**a, &**b) else { panic!() };
        assert_ne!(x1, x2);
        assert!(x1 != "x" && x2 != "x");
    }

    #[test]
    fn affine_examples() {
        assert!(is_affine(&t("\\x. x")));
        assert!(!is_affine(&t("\\x. x x")));
        assert!(is_affine(&t("\\f. \\x. f x")));
        assert!(is_affine(&t("\\x. y")));
        assert!(!is_affine(&t("y y")));
    }

    #[test]
    fn beta_examples() {
        let r = beta_normalize(&t("(\\x. x) y"), 10);
        assert_eq!((r.term, r.steps, r.normal), (var("y"), 1, true));
        let nf = t("\\f. \\x. f x");
        let r = beta_normalize(&nf, 10);
        assert_eq!((r.term, r.steps), (nf, 0));
        let omega = t("(\\x. x x) (\\x. x x)");
        let r = beta_normalize(&omega, 5);
        assert!(!r.normal);
        assert_eq!(r.steps, 5);
    }

    #[test]
    fn substitution_avoids_capture() {
        let r = beta_normalize(&t("(\\x. \\y. x) y"), 10).term;
        let Term::Abs(b, body) = &r else { panic!() };
        assert_ne!(b, "y");
        assert_eq!(**body, var("y"));
    }

    #[test]
    fn church_two_two() {
        let r = beta_normalize(&app(church(2), church(2)), 100);
        assert!(r.normal);
        assert_eq!(church_value(&r.term), Some(4));
        assert!(r.term.alpha_eq(&church(4)));
    }

    #[test]
    fn generator_is_affine_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let m = random_affine_term(&mut rng, 30);
            assert!(m.size() <= 30);
            assert!(is_affine(&m), "{m}");
        }
    }

    #[test]
    fn closed_terms_are_closed_and_distinct() {
        let all = closed_terms(7);
        let set: BTreeSet<&Term> = all.iter().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(|m| m.is_closed() && m.size() <= 7));
        assert!(all.contains(&lam("x0", var("x0"))));
    }
}
