use std::collections::BTreeSet;
use std::fmt;

use super::term::Term;
use super::LambdaError;

/// Simple types over named atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    TAtom(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

/// Atom used for type variables left unconstrained by a term.
pub const GROUND_ATOM: &str = "o";

pub fn tatom(name: &str) -> SimpleType {
    SimpleType::TAtom(name.to_string())
}

pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
    SimpleType::Arrow(Box::new(a), Box::new(b))
}

impl SimpleType {
    /// `a -> b -> c` with `->` right-associative.
    pub fn parse(text: &str) -> Result<SimpleType, LambdaError> {
        let toks = lex_type(text)?;
        let mut pos = 0;
        let t = parse_arrow(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(LambdaError::Parse { pos, msg: format!("unexpected '{}' in type", toks[pos]) });
        }
        Ok(t)
    }

    pub fn size(&self) -> usize {
        match self {
            SimpleType::TAtom(_) => 1,
            SimpleType::Arrow(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::TAtom(a) => write!(f, "{a}"),
            SimpleType::Arrow(a, b) => match **a {
                SimpleType::Arrow(..) => write!(f, "({a}) -> {b}"),
                SimpleType::TAtom(_) => write!(f, "{a} -> {b}"),
            },
        }
    }
}

fn lex_type(text: &str) -> Result<Vec<String>, LambdaError> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' || c == ')' {
            out.push(c.to_string());
            i += 1;
        } else if c == '-' && cs.get(i + 1) == Some(&'>') {
            out.push("->".into());
            i += 2;
        } else if c == '→' {
            out.push("->".into());
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(cs[start..i].iter().collect());
        } else {
            return Err(LambdaError::Parse { pos: i, msg: format!("unexpected '{c}' in type") });
        }
    }
    Ok(out)
}

fn parse_arrow(toks: &[String], pos: &mut usize) -> Result<SimpleType, LambdaError> {
    let a = parse_atom(toks, pos)?;
    if toks.get(*pos).map(String::as_str) == Some("->") {
        *pos += 1;
        let b = parse_arrow(toks, pos)?;
        return Ok(arrow(a, b));
    }
    Ok(a)
}

fn parse_atom(toks: &[String], pos: &mut usize) -> Result<SimpleType, LambdaError> {
    let Some(t) = toks.get(*pos) else {
        return Err(LambdaError::Parse { pos: *pos, msg: "type ended early".into() });
    };
    *pos += 1;
    match t.as_str() {
        "(" => {
            let inner = parse_arrow(toks, pos)?;
            if toks.get(*pos).map(String::as_str) != Some(")") {
                return Err(LambdaError::Parse { pos: *pos, msg: "expected ')' in type".into() });
            }
            *pos += 1;
            Ok(inner)
        }
        ")" | "->" => Err(LambdaError::Parse { pos: *pos - 1, msg: format!("unexpected '{t}' in type") }),
        name => Ok(tatom(name)),
    }
}

// ---------------------------------------------------------------------------
// Derivations

/// `context ⊢ term : ty`. Each node is an instance of the variable,
/// abstraction or application rule, read off the shape of `term`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypingDerivation {
    /// Ordered; names are pairwise distinct.
    pub context: Vec<(String, SimpleType)>,
    pub term: Term,
    pub ty: SimpleType,
    pub premises: Vec<TypingDerivation>,
}

impl TypingDerivation {
    pub fn lookup(&self, x: &str) -> Option<&SimpleType> {
        self.context.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    /// Checks every node against its rule.
    pub fn validate(&self) -> Result<(), String> {
        let names: BTreeSet<&String> = self.context.iter().map(|(x, _)| x).collect();
        if names.len() != self.context.len() {
            return Err(format!("repeated name in context at {}", self.term));
        }
        match (&self.term, self.premises.as_slice()) {
            (Term::Var(x), []) => match self.lookup(x) {
                Some(t) if *t == self.ty => Ok(()),
                _ => Err(format!("variable {x} does not have type {}", self.ty)),
            },
            (Term::Abs(x, body), [p]) => {
                let SimpleType::Arrow(a, b) = &self.ty else {
                    return Err(format!("abstraction {} at non-arrow type", self.term));
                };
                let mut ctx = self.context.clone();
                ctx.push((x.clone(), (**a).clone()));
                if p.context != ctx || p.term != **body || p.ty != **b {
                    return Err(format!("bad abstraction premise at {}", self.term));
                }
                p.validate()
            }
            (Term::App(f, a), [pf, pa]) => {
                let SimpleType::Arrow(dom, cod) = &pf.ty else {
                    return Err(format!("function {f} at non-arrow type"));
                };
                if pf.context != self.context || pa.context != self.context {
                    return Err(format!("contexts differ at {}", self.term));
                }
                if pf.term != **f || pa.term != **a || **cod != self.ty || pa.ty != **dom {
                    return Err(format!("bad application premises at {}", self.term));
                }
                pf.validate()?;
                pa.validate()
            }
            _ => Err(format!("wrong number of premises at {}", self.term)),
        }
    }
}

// ---------------------------------------------------------------------------
// Checking with unification

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Atom(String),
    Arrow(Box<Ty>, Box<Ty>),
    Meta(usize),
}

fn embed(t: &SimpleType) -> Ty {
    match t {
        SimpleType::TAtom(a) => Ty::Atom(a.clone()),
        SimpleType::Arrow(a, b) => Ty::Arrow(Box::new(embed(a)), Box::new(embed(b))),
    }
}

#[derive(Default)]
struct Solver {
    metas: Vec<Option<Ty>>,
}

impl Solver {
    fn fresh(&mut self) -> Ty {
        self.metas.push(None);
        Ty::Meta(self.metas.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(m) => match &self.metas[*m] {
                Some(u) => self.resolve(u),
                None => t.clone(),
            },
            Ty::Arrow(a, b) => Ty::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Ty::Atom(_) => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(k) => k == m,
            Ty::Arrow(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            Ty::Atom(_) => false,
        }
    }

    fn unify(&mut self, s: &Ty, t: &Ty) -> bool {
        match (self.resolve(s), self.resolve(t)) {
            (Ty::Meta(a), Ty::Meta(b)) if a == b => true,
            (Ty::Meta(a), u) | (u, Ty::Meta(a)) => {
                if self.occurs(a, &u) {
                    return false;
                }
                self.metas[a] = Some(u);
                true
            }
            (Ty::Atom(a), Ty::Atom(b)) => a == b,
            (Ty::Arrow(a1, b1), Ty::Arrow(a2, b2)) => self.unify(&a1, &a2) && self.unify(&b1, &b2),
            _ => false,
        }
    }

    fn ground(&self, t: &Ty) -> SimpleType {
        match self.resolve(t) {
            Ty::Atom(a) => SimpleType::TAtom(a),
            Ty::Arrow(a, b) => arrow(self.ground(&a), self.ground(&b)),
            Ty::Meta(_) => tatom(GROUND_ATOM),
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Atom(a) => a,
            Ty::Meta(m) => format!("?{m}"),
            Ty::Arrow(a, b) => {
                let l = self.show(&a);
                let l = if matches!(self.resolve(&a), Ty::Arrow(..)) { format!("({l})") } else { l };
                format!("{l} -> {}", self.show(&b))
            }
        }
    }
}

struct Pre {
    context: Vec<(String, Ty)>,
    term: Term,
    ty: Ty,
    premises: Vec<Pre>,
}

fn check(s: &mut Solver, ctx: &mut Vec<(String, Ty)>, t: &Term, want: Ty) -> Result<Pre, LambdaError> {
    let here = ctx.clone();
    let premises = match t {
        Term::Var(x) => {
            let Some((_, have)) = ctx.iter().rev().find(|(y, _)| y == x).cloned() else {
                return Err(LambdaError::Unbound(x.clone()));
            };
            if !s.unify(&have, &want) {
                return Err(mismatch(s, t, &want, &have));
            }
            vec![]
        }
        Term::Abs(x, body) => {
            let (a, b) = (s.fresh(), s.fresh());
            let shape = Ty::Arrow(Box::new(a.clone()), Box::new(b.clone()));
            if !s.unify(&want, &shape) {
                return Err(mismatch(s, t, &want, &shape));
            }
            ctx.push((x.clone(), a));
            let p = check(s, ctx, body, b);
            ctx.pop();
            vec![p?]
        }
        Term::App(f, a) => {
            let dom = s.fresh();
            let pf = check(s, ctx, f, Ty::Arrow(Box::new(dom.clone()), Box::new(want.clone())))?;
            let pa = check(s, ctx, a, dom)?;
            vec![pf, pa]
        }
    };
    Ok(Pre { context: here, term: t.clone(), ty: want, premises })
}

fn mismatch(s: &Solver, t: &Term, want: &Ty, have: &Ty) -> LambdaError {
    LambdaError::Type {
        subterm: t.to_string(),
        msg: format!("expected {} but found {}", s.show(want), s.show(have)),
    }
}

fn finish(s: &Solver, p: Pre) -> TypingDerivation {
    TypingDerivation {
        context: p.context.iter().map(|(x, t)| (x.clone(), s.ground(t))).collect(),
        term: p.term,
        ty: s.ground(&p.ty),
        premises: p.premises.into_iter().map(|q| finish(s, q)).collect(),
    }
}

/// Builds the derivation of `ctx ⊢ t : ty`. Binders are first renamed apart
/// from `ctx`; type variables left open by `t` become [`GROUND_ATOM`].
pub fn typecheck(ctx: &[(String, SimpleType)], t: &Term, ty: &SimpleType) -> Result<TypingDerivation, LambdaError> {
    let mut s = Solver::default();
    let want = embed(ty);
    derive(&mut s, ctx, t, want)
}

/// Like [`typecheck`] with the type left to inference.
pub fn infer(ctx: &[(String, SimpleType)], t: &Term) -> Result<TypingDerivation, LambdaError> {
    let mut s = Solver::default();
    let want = s.fresh();
    derive(&mut s, ctx, t, want)
}

fn derive(s: &mut Solver, ctx: &[(String, SimpleType)], t: &Term, want: Ty) -> Result<TypingDerivation, LambdaError> {
    let names: BTreeSet<String> = ctx.iter().map(|(x, _)| x.clone()).collect();
    if names.len() != ctx.len() {
        return Err(LambdaError::Context("repeated variable".into()));
    }
    let t = t.uniquify(&names);
    let mut env: Vec<(String, Ty)> = ctx.iter().map(|(x, a)| (x.clone(), embed(a))).collect();
    let pre = check(s, &mut env, &t, want)?;
    Ok(finish(s, pre))
}
