use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::{coherent_in, web_of, AtomEnv, CohError, Token};
use crate::labeled::{LNode, LRule, Label, Labeled};
use crate::proof::Proof;
use crate::syntax::Formula;

// Rows assign a token to every conclusion occurrence, in `labels` order.
struct Rel {
    labels: Vec<Label>,
    rows: BTreeSet<Vec<Token>>,
}

impl Rel {
    fn col(&self, l: Label) -> Result<usize, CohError> {
        self.labels.iter().position(|&x| x == l).ok_or_else(|| CohError::Proof(format!("label {l} missing in premise")))
    }
}

/// Interprets proofs as cliques of the `⅋` of their conclusion, with a web
/// cache shared across calls.
pub struct Interpreter<'e> {
    env: &'e AtomEnv,
    webs: HashMap<Formula, Rc<Vec<Token>>>,
}

impl<'e> Interpreter<'e> {
    pub fn new(env: &'e AtomEnv) -> Interpreter<'e> {
        Interpreter { env, webs: HashMap::new() }
    }

    fn web(&mut self, f: &Formula) -> Result<Rc<Vec<Token>>, CohError> {
        if let Some(w) = self.webs.get(f) {
            return Ok(w.clone());
        }
        let w = Rc::new(web_of(self.env, f)?);
        self.webs.insert(f.clone(), w.clone());
        Ok(w)
    }

    /// Tokens of the left-nested `⅋` of the conclusion; root occurrences are
    /// taken in label order. The empty conclusion yields tokens of `⊥`.
    pub fn labeled(&mut self, p: &Labeled) -> Result<BTreeSet<Token>, CohError> {
        let rel = self.node(&p.root)?;
        let mut order: Vec<usize> = (0..rel.labels.len()).collect();
        order.sort_by_key(|&i| rel.labels[i]);
        Ok(rel
            .rows
            .iter()
            .map(|row| {
                let mut it = order.iter().map(|&i| row[i].clone());
                match it.next() {
                    None => Token::Star,
                    Some(first) => it.fold(first, Token::pair),
                }
            })
            .collect())
    }

    pub fn proof(&mut self, p: &Proof) -> Result<BTreeSet<Token>, CohError> {
        let l = Labeled::from_proof(p).map_err(CohError::Proof)?;
        self.labeled(&l)
    }

    fn formula(n: &LNode, l: Label) -> Result<&Formula, CohError> {
        n.formula(l).ok_or_else(|| CohError::Proof(format!("label {l} missing")))
    }

    // Unary rule: every premise row yields at most one row, with the
    // principal token computed by `f` and context tokens copied.
    fn unary(
        &mut self,
        n: &LNode,
        p: Label,
        mut f: impl FnMut(&mut Self, &Rel, &[Token]) -> Result<Option<Token>, CohError>,
    ) -> Result<Rel, CohError> {
        let prem = self.premise(n, 0)?;
        let labels: Vec<Label> = n.conc.iter().map(|(l, _)| *l).collect();
        let cols: Vec<Option<usize>> =
            labels.iter().map(|&l| if l == p { Ok(None) } else { prem.col(l).map(Some) }).collect::<Result<_, _>>()?;
        let mut rows = BTreeSet::new();
        for r in &prem.rows {
            if let Some(v) = f(self, &prem, r)? {
                rows.insert(cols.iter().map(|c| c.map_or_else(|| v.clone(), |i| r[i].clone())).collect());
            }
        }
        Ok(Rel { labels, rows })
    }

    fn premise(&mut self, n: &LNode, i: usize) -> Result<Rel, CohError> {
        let q = n.premises.get(i).ok_or_else(|| CohError::Proof("missing premise".into()))?;
        self.node(q)
    }

    fn node(&mut self, n: &LNode) -> Result<Rel, CohError> {
        let labels: Vec<Label> = n.conc.iter().map(|(l, _)| *l).collect();
        match n.rule {
            LRule::Axiom => {
                let f = &n.conc.first().ok_or_else(|| CohError::Proof("empty axiom".into()))?.1;
                let web = self.web(f)?;
                let rows = web.iter().map(|t| vec![t.clone(), t.clone()]).collect();
                Ok(Rel { labels, rows })
            }
            LRule::One(_) => Ok(Rel { labels, rows: [vec![Token::Star]].into_iter().collect() }),
            LRule::Top(_) => Ok(Rel { labels, rows: BTreeSet::new() }),
            LRule::Bot(p) => self.unary(n, p, |_, _, _| Ok(Some(Token::Star))),
            LRule::Weak(p) => self.unary(n, p, |_, _, _| Ok(Some(Token::empty_set()))),
            LRule::Par { p, a, b } => self.unary(n, p, |_, prem, r| {
                Ok(Some(Token::pair(r[prem.col(a)?].clone(), r[prem.col(b)?].clone())))
            }),
            LRule::PlusL { p, a } => self.unary(n, p, |_, prem, r| Ok(Some(Token::inl(r[prem.col(a)?].clone())))),
            LRule::PlusR { p, a } => self.unary(n, p, |_, prem, r| Ok(Some(Token::inr(r[prem.col(a)?].clone())))),
            LRule::Der { p, a } => {
                self.unary(n, p, |_, prem, r| Ok(Some(Token::set(vec![r[prem.col(a)?].clone()]))))
            }
            LRule::Contr { p, a, b } => {
                let inner = match Self::formula(n, p)? {
                    Formula::WhyNot(x) => (**x).clone(),
                    other => return Err(CohError::Proof(format!("contraction on {other}"))),
                };
                let env = self.env;
                self.unary(n, p, move |_, prem, r| {
                    let u = r[prem.col(a)?].union(&r[prem.col(b)?]).ok_or_else(|| {
                        CohError::Proof("contraction on tokens that are not sets".into())
                    })?;
                    Ok(anticlique(env, &inner, &u)?.then_some(u))
                })
            }
            LRule::With { p, a, b } => {
                let (left, right) = (self.premise(n, 0)?, self.premise(n, 1)?);
                let mut rows = BTreeSet::new();
                for (prem, act, inj) in [(&left, a, Token::inl as fn(Token) -> Token), (&right, b, Token::inr)] {
                    let cols: Vec<usize> = labels
                        .iter()
                        .map(|&l| prem.col(if l == p { act } else { l }))
                        .collect::<Result<_, _>>()?;
                    for r in &prem.rows {
                        rows.insert(
                            labels
                                .iter()
                                .zip(&cols)
                                .map(|(&l, &i)| if l == p { inj(r[i].clone()) } else { r[i].clone() })
                                .collect(),
                        );
                    }
                }
                Ok(Rel { labels, rows })
            }
            LRule::Tensor { p, a, b } => {
                let (left, right) = (self.premise(n, 0)?, self.premise(n, 1)?);
                let (ca, cb) = (left.col(a)?, right.col(b)?);
                let src: Vec<(bool, usize)> = labels
                    .iter()
                    .filter(|&&l| l != p)
                    .map(|&l| match left.col(l) {
                        Ok(i) => Ok((true, i)),
                        Err(_) => right.col(l).map(|i| (false, i)),
                    })
                    .collect::<Result<_, _>>()?;
                let mut rows = BTreeSet::new();
                for lr in &left.rows {
                    for rr in &right.rows {
                        let mut it = src.iter();
                        let row = labels
                            .iter()
                            .map(|&l| {
                                if l == p {
                                    Token::pair(lr[ca].clone(), rr[cb].clone())
                                } else {
                                    let &(from_left, i) = it.next().expect("context column");
                                    if from_left {
                                        lr[i].clone()
                                    } else {
                                        rr[i].clone()
                                    }
                                }
                            })
                            .collect();
                        rows.insert(row);
                    }
                }
                Ok(Rel { labels, rows })
            }
            LRule::Cut { a, b } => {
                let (left, right) = (self.premise(n, 0)?, self.premise(n, 1)?);
                let (ca, cb) = (left.col(a)?, right.col(b)?);
                let mut by_cut: HashMap<&Token, Vec<&Vec<Token>>> = HashMap::new();
                for rr in &right.rows {
                    by_cut.entry(&rr[cb]).or_default().push(rr);
                }
                let src: Vec<(bool, usize)> = labels
                    .iter()
                    .map(|&l| match left.col(l) {
                        Ok(i) => Ok((true, i)),
                        Err(_) => right.col(l).map(|i| (false, i)),
                    })
                    .collect::<Result<_, _>>()?;
                let mut rows = BTreeSet::new();
                for lr in &left.rows {
                    for rr in by_cut.get(&lr[ca]).into_iter().flatten() {
                        rows.insert(
                            src.iter().map(|&(l, i)| if l { lr[i].clone() } else { rr[i].clone() }).collect(),
                        );
                    }
                }
                Ok(Rel { labels, rows })
            }
            LRule::Prom { p, a } => self.promotion(n, p, a),
        }
    }

    // For every clique x of A made of A-components of premise rows, and
    // every choice of one row per element of x, the context components are
    // merged by union; the row survives when every union is a token.
    fn promotion(&mut self, n: &LNode, p: Label, a: Label) -> Result<Rel, CohError> {
        let labels: Vec<Label> = n.conc.iter().map(|(l, _)| *l).collect();
        let prem = self.premise(n, 0)?;
        let ca = prem.col(a)?;
        let body = match Self::formula(n, p)? {
            Formula::OfCourse(x) => (**x).clone(),
            other => return Err(CohError::Proof(format!("promotion on {other}"))),
        };
        let ctx: Vec<(usize, Formula)> = labels
            .iter()
            .filter(|&&l| l != p)
            .map(|&l| {
                let inner = match Self::formula(n, l)? {
                    Formula::WhyNot(x) => (**x).clone(),
                    other => return Err(CohError::Proof(format!("promotion context holds {other}"))),
                };
                Ok((prem.col(l)?, inner))
            })
            .collect::<Result<_, CohError>>()?;
        let mut by_tok: Vec<(Token, Vec<&Vec<Token>>)> = Vec::new();
        for r in &prem.rows {
            match by_tok.iter_mut().find(|(t, _)| *t == r[ca]) {
                Some((_, v)) => v.push(r),
                None => by_tok.push((r[ca].clone(), vec![r])),
            }
        }
        let toks: Vec<Token> = by_tok.iter().map(|(t, _)| t.clone()).collect();
        let mut coh = vec![vec![true; toks.len()]; toks.len()];
        for i in 0..toks.len() {
            for j in i + 1..toks.len() {
                let c = coherent_in(self.env, &body, &toks[i], &toks[j])?;
                coh[i][j] = c;
                coh[j][i] = c;
            }
        }
        let mut rows = BTreeSet::new();
        let mut clique = Vec::new();
        let mut st = PromState { env: self.env, by_tok: &by_tok, ctx: &ctx, labels: &labels, p, rows: &mut rows };
        st.cliques(&coh, 0, &mut clique)?;
        Ok(Rel { labels, rows })
    }
}

struct PromState<'a, 'e> {
    env: &'e AtomEnv,
    by_tok: &'a [(Token, Vec<&'a Vec<Token>>)],
    ctx: &'a [(usize, Formula)],
    labels: &'a [Label],
    p: Label,
    rows: &'a mut BTreeSet<Vec<Token>>,
}

impl PromState<'_, '_> {
    fn cliques(&mut self, coh: &[Vec<bool>], start: usize, cur: &mut Vec<usize>) -> Result<(), CohError> {
        self.choices(cur, 0, &mut vec![Vec::new(); self.ctx.len()])?;
        for i in start..coh.len() {
            if cur.iter().all(|&j| coh[i][j]) {
                cur.push(i);
                self.cliques(coh, i + 1, cur)?;
                cur.pop();
            }
        }
        Ok(())
    }

    fn choices(&mut self, x: &[usize], k: usize, acc: &mut Vec<Vec<Token>>) -> Result<(), CohError> {
        if k == x.len() {
            let mut ctx_tokens = Vec::with_capacity(self.ctx.len());
            for ((_, inner), parts) in self.ctx.iter().zip(acc.iter()) {
                let u = Token::set(parts.clone());
                if !anticlique(self.env, inner, &u)? {
                    return Ok(());
                }
                ctx_tokens.push(u);
            }
            let bang = Token::set(x.iter().map(|&i| self.by_tok[i].0.clone()).collect());
            let mut it = ctx_tokens.into_iter();
            let row = self.labels.iter().map(|&l| if l == self.p { bang.clone() } else { it.next().unwrap() }).collect();
            self.rows.insert(row);
            return Ok(());
        }
        for r in &self.by_tok[x[k]].1 {
            let mark: Vec<usize> = acc.iter().map(Vec::len).collect();
            for (slot, (col, _)) in acc.iter_mut().zip(self.ctx) {
                let items = r[*col].as_set().ok_or_else(|| CohError::Proof("?-token is not a set".into()))?;
                slot.extend(items.iter().cloned());
            }
            self.choices(x, k + 1, acc)?;
            for (slot, m) in acc.iter_mut().zip(mark) {
                slot.truncate(m);
            }
        }
        Ok(())
    }
}

// A set token of `?inner`: pairwise incoherent in `inner`.
fn anticlique(env: &AtomEnv, inner: &Formula, u: &Token) -> Result<bool, CohError> {
    let items = u.as_set().ok_or_else(|| CohError::Proof("?-token is not a set".into()))?;
    for (i, x) in items.iter().enumerate() {
        for y in &items[i + 1..] {
            if coherent_in(env, inner, x, y)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn interpret_proof(p: &Proof, env: &AtomEnv) -> Result<BTreeSet<Token>, CohError> {
    Interpreter::new(env).proof(p)
}

pub fn interpret_labeled(p: &Labeled, env: &AtomEnv) -> Result<BTreeSet<Token>, CohError> {
    Interpreter::new(env).labeled(p)
}
