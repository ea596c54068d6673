use std::collections::BTreeSet;

use super::{build_space, coherent_in, is_clique_in, web_of, AtomEnv, CohError, CoherenceSpace, Token};
use crate::syntax::{atom, Formula};

type Pre<'a> = Box<dyn Fn(&Token) -> Result<BTreeSet<Token>, CohError> + 'a>;

/// A linear map between the spaces of two formulas, given by the preimage
/// of each target token under its trace.
pub struct LinearMap<'a> {
    pub src: Formula,
    pub tgt: Formula,
    env: &'a AtomEnv,
    pre: Pre<'a>,
}

fn one_set(t: Token) -> BTreeSet<Token> {
    [t].into_iter().collect()
}

fn bang(f: &Formula) -> Formula {
    Formula::of_course(f.clone())
}

impl<'a> LinearMap<'a> {
    pub fn new(
        env: &'a AtomEnv,
        src: Formula,
        tgt: Formula,
        pre: impl Fn(&Token) -> Result<BTreeSet<Token>, CohError> + 'a,
    ) -> LinearMap<'a> {
        LinearMap { src, tgt, env, pre: Box::new(pre) }
    }

    pub fn preimage(&self, t: &Token) -> Result<BTreeSet<Token>, CohError> {
        (self.pre)(t)
    }

    pub fn identity(env: &'a AtomEnv, f: Formula) -> LinearMap<'a> {
        LinearMap::new(env, f.clone(), f, |t| Ok(one_set(t.clone())))
    }

    /// `ε : !A → A`, trace `{({e}, e)}`.
    pub fn epsilon(env: &'a AtomEnv, a: &Formula) -> LinearMap<'a> {
        LinearMap::new(env, bang(a), a.clone(), |e| Ok(one_set(Token::set(vec![e.clone()]))))
    }

    /// `δ : !A → !!A`, trace `{(∪Y, Y)}`.
    pub fn delta(env: &'a AtomEnv, a: &Formula) -> LinearMap<'a> {
        LinearMap::new(env, bang(a), bang(&bang(a)), |y| {
            let parts = y.as_set().ok_or_else(|| CohError::UnknownToken(y.to_string()))?;
            let mut all = Vec::new();
            for p in parts {
                all.extend(p.as_set().ok_or_else(|| CohError::UnknownToken(p.to_string()))?.iter().cloned());
            }
            Ok(one_set(Token::set(all)))
        })
    }

    /// `g ∘ f`
    pub fn then(self, g: LinearMap<'a>) -> LinearMap<'a> {
        let (env, src, tgt) = (self.env, self.src.clone(), g.tgt.clone());
        LinearMap::new(env, src, tgt, move |c| {
            let mut out = BTreeSet::new();
            for b in g.preimage(c)? {
                out.extend(self.preimage(&b)?);
            }
            Ok(out)
        })
    }

    pub fn tensor(self, g: LinearMap<'a>) -> LinearMap<'a> {
        let env = self.env;
        let src = Formula::tensor(self.src.clone(), g.src.clone());
        let tgt = Formula::tensor(self.tgt.clone(), g.tgt.clone());
        LinearMap::new(env, src, tgt, move |t| {
            let (c, d) = t.as_pair().ok_or_else(|| CohError::UnknownToken(t.to_string()))?;
            let (pc, pd) = (self.preimage(c)?, g.preimage(d)?);
            Ok(pc.iter().flat_map(|a| pd.iter().map(move |b| Token::pair(a.clone(), b.clone()))).collect())
        })
    }

    /// `!f : !A → !B`: `({a1..ak}, {b1..bk})` with each `(ai, bi)` in the
    /// trace of `f`, the `ai` forming a clique of `A`.
    pub fn bang(self) -> LinearMap<'a> {
        let env = self.env;
        let (src, tgt) = (bang(&self.src), bang(&self.tgt));
        let inner_src = self.src.clone();
        LinearMap::new(env, src, tgt, move |t| {
            let items = t.as_set().ok_or_else(|| CohError::UnknownToken(t.to_string()))?;
            let pres: Vec<Vec<Token>> =
                items.iter().map(|b| self.preimage(b).map(|s| s.into_iter().collect())).collect::<Result<_, _>>()?;
            let mut out = BTreeSet::new();
            let mut pick = Vec::with_capacity(pres.len());
            choose(&pres, &mut pick, &mut |chosen| {
                if is_clique_in(env, &inner_src, chosen)? {
                    out.insert(Token::set(chosen.to_vec()));
                }
                Ok(())
            })?;
            Ok(out)
        })
    }

    /// The induced function on a clique: `{t | preimage(t) meets x}`.
    pub fn apply(&self, x: &BTreeSet<Token>, targets: &[Token]) -> Result<BTreeSet<Token>, CohError> {
        let mut out = BTreeSet::new();
        for t in targets {
            if self.preimage(t)?.iter().any(|s| x.contains(s)) {
                out.insert(t.clone());
            }
        }
        Ok(out)
    }

    /// First target token on which the two traces differ.
    pub fn differs_on<'t>(
        &self,
        other: &LinearMap<'_>,
        targets: impl IntoIterator<Item = &'t Token>,
    ) -> Result<Option<Token>, CohError> {
        for t in targets {
            if self.preimage(t)? != other.preimage(t)? {
                return Ok(Some(t.clone()));
            }
        }
        Ok(None)
    }
}

fn choose(
    pres: &[Vec<Token>],
    pick: &mut Vec<Token>,
    f: &mut dyn FnMut(&[Token]) -> Result<(), CohError>,
) -> Result<(), CohError> {
    if pick.len() == pres.len() {
        return f(pick);
    }
    for s in &pres[pick.len()] {
        pick.push(s.clone());
        choose(pres, pick, f)?;
        pick.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    /// Equations compared, counted per target token.
    pub checked: u64,
    pub violations: Vec<String>,
    /// False when some target web had to be cut at a token cardinality.
    pub exhaustive: bool,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn compare(&mut self, name: &str, l: &LinearMap<'_>, r: &LinearMap<'_>, targets: &[Token]) -> Result<(), CohError> {
        self.checked += targets.len() as u64;
        if let Some(t) = l.differs_on(r, targets)? {
            self.violations.push(format!("{name}: sides differ on target {t}"));
        }
        Ok(())
    }
}

/// The three comonad equations for `(!, ε, δ)` on the space `e`, plus
/// agreement of `ε` and `δ` with their direct descriptions
/// `ε(X) = {e | {e} ∈ X}` and `δ(X) = {Y | ∪Y ∈ X}`.
///
/// Coassociativity ranges over the tokens of `!!!E`. When that web has
/// more than `token_budget` tokens, only its tokens of the largest
/// cardinality that fits the budget are compared.
pub fn check_comonad_laws(e: &CoherenceSpace, token_budget: u64) -> Result<LawReport, CohError> {
    let env = AtomEnv::new().with("e", e.clone());
    let a = atom("e");
    let mut rep = LawReport { exhaustive: true, ..Default::default() };
    let web_bang = web_of(&env, &bang(&a))?;
    let web_bang2 = web_of(&env, &bang(&bang(&a)))?;

    // ε_{!A} ∘ δ_A = id
    let lhs = LinearMap::delta(&env, &a).then(LinearMap::epsilon(&env, &bang(&a)));
    rep.compare("eps_!A . delta_A = id", &lhs, &LinearMap::identity(&env, bang(&a)), &web_bang)?;

    // !ε_A ∘ δ_A = id
    let lhs = LinearMap::delta(&env, &a).then(LinearMap::epsilon(&env, &a).bang());
    rep.compare("!eps_A . delta_A = id", &lhs, &LinearMap::identity(&env, bang(&a)), &web_bang)?;

    // δ_{!A} ∘ δ_A = !δ_A ∘ δ_A
    let bang2 = build_space(&env, &bang(&bang(&a)))?;
    let targets: Vec<Token> = match bang2.count_cliques(token_budget) {
        Some(_) => bang2.cliques().iter().map(|c| Token::set(bang2.tokens_of(c))).collect(),
        None => {
            let mut k = 0;
            while k < bang2.len() && bang2.count_cliques_bounded(k + 1, token_budget).is_some() {
                k += 1;
            }
            rep.exhaustive = false;
            rep.notes.push(format!(
                "coassociativity on a web of {} tokens for !E: tokens of !!!E with at most {k} elements",
                bang2.len()
            ));
            bang2.cliques_bounded(k).iter().map(|c| Token::set(bang2.tokens_of(c))).collect()
        }
    };
    let lhs = LinearMap::delta(&env, &a).then(LinearMap::delta(&env, &bang(&a)));
    let rhs = LinearMap::delta(&env, &a).then(LinearMap::delta(&env, &a).bang());
    rep.compare("delta_!A . delta_A = !delta_A . delta_A", &lhs, &rhs, &targets)?;

    // the maps agree with their direct descriptions
    let eps = LinearMap::epsilon(&env, &a);
    let delta = LinearMap::delta(&env, &a);
    let bang_space = build_space(&env, &bang(&a))?;
    let web_a = web_of(&env, &a)?;
    for c in bang_space.cliques() {
        let x: BTreeSet<Token> = bang_space.tokens_of(&c).into_iter().collect();
        let direct_eps: BTreeSet<Token> =
            web_a.iter().filter(|t| x.contains(&Token::set(vec![(*t).clone()]))).cloned().collect();
        let direct_delta: BTreeSet<Token> = web_bang2
            .iter()
            .filter(|y| {
                let all: Vec<Token> = y.as_set().unwrap().iter().flat_map(|p| p.as_set().unwrap().to_vec()).collect();
                x.contains(&Token::set(all))
            })
            .cloned()
            .collect();
        rep.checked += 2;
        if eps.apply(&x, &web_a)? != direct_eps {
            rep.violations.push(format!("epsilon differs from its description at {}", Token::set(c_tokens(&x))));
        }
        if delta.apply(&x, &web_bang2)? != direct_delta {
            rep.violations.push(format!("delta differs from its description at {}", Token::set(c_tokens(&x))));
        }
    }
    Ok(rep)
}

fn c_tokens(x: &BTreeSet<Token>) -> Vec<Token> {
    x.iter().cloned().collect()
}

/// `n^{-1} : !(A & B) → !A ⊗ !B`, splitting a clique by injection.
fn n_inverse<'a>(env: &'a AtomEnv, a: &Formula, b: &Formula) -> LinearMap<'a> {
    let src = bang(&Formula::with(a.clone(), b.clone()));
    let tgt = Formula::tensor(bang(a), bang(b));
    LinearMap::new(env, src, tgt, |t| {
        let (x, y) = t.as_pair().ok_or_else(|| CohError::UnknownToken(t.to_string()))?;
        let mut all: Vec<Token> = x.as_set().unwrap_or(&[]).iter().cloned().map(Token::inl).collect();
        all.extend(y.as_set().unwrap_or(&[]).iter().cloned().map(Token::inr));
        Ok(one_set(Token::set(all)))
    })
}

/// Comonoid structure on `!E`: `e = p⁻¹ ∘ !(⊤) ∘ δ` and
/// `d = n⁻¹ ∘ !⟨ε, ε⟩ ∘ δ`, checked against the four equations
/// (both units, associativity, commutativity) and against the direct
/// descriptions `e = {(∅, *)}`, `d = {(x ∪ y, (x, y))}`.
pub fn check_comonoid_laws(e: &CoherenceSpace) -> Result<LawReport, CohError> {
    let env = AtomEnv::new().with("e", e.clone());
    let a = atom("e");
    let ba = bang(&a);
    let mut rep = LawReport { exhaustive: true, ..Default::default() };

    let eraser = || -> LinearMap<'_> {
        // ⊤ : !A → ⊤ has the empty trace; !⊤ has the single token ∅
        let top = LinearMap::new(&env, ba.clone(), Formula::Top, |_| Ok(BTreeSet::new()));
        let p_inv = LinearMap::new(&env, bang(&Formula::Top), Formula::One, |_| Ok(one_set(Token::empty_set())));
        LinearMap::delta(&env, &a).then(top.bang()).then(p_inv)
    };
    let dup = || -> LinearMap<'_> {
        let pair_eps = LinearMap::new(&env, ba.clone(), Formula::with(a.clone(), a.clone()), |t| match t {
            Token::Inl(x) | Token::Inr(x) => Ok(one_set(Token::set(vec![(**x).clone()]))),
            _ => Err(CohError::UnknownToken(t.to_string())),
        });
        LinearMap::delta(&env, &a).then(pair_eps.bang()).then(n_inverse(&env, &a, &a))
    };
    let id = || LinearMap::identity(&env, ba.clone());

    let web_ba = web_of(&env, &ba)?;
    let pair_f = Formula::tensor(ba.clone(), ba.clone());
    let web_pair = web_of(&env, &pair_f)?;
    let triple_f = Formula::tensor(pair_f.clone(), ba.clone());
    let web_triple = web_of(&env, &triple_f)?;

    // direct descriptions
    let direct_e = LinearMap::new(&env, ba.clone(), Formula::One, |_| Ok(one_set(Token::empty_set())));
    rep.compare("e = {(0, *)}", &eraser(), &direct_e, &[Token::Star])?;
    let direct_d = LinearMap::new(&env, ba.clone(), pair_f.clone(), |t| {
        let (x, y) = t.as_pair().unwrap();
        let u = x.union(y).unwrap();
        let ok = is_clique_in(&env, &a, u.as_set().unwrap())?;
        Ok(if ok { one_set(u) } else { BTreeSet::new() })
    });
    rep.compare("d = {(x u y, (x, y))}", &dup(), &direct_d, &web_pair)?;

    // ι_l ∘ (e ⊗ id) ∘ d = id
    let iota_l = LinearMap::new(&env, Formula::tensor(Formula::One, ba.clone()), ba.clone(), |y| {
        Ok(one_set(Token::pair(Token::Star, y.clone())))
    });
    let lhs = dup().then(eraser().tensor(id())).then(iota_l);
    rep.compare("iota_l . (e x id) . d = id", &lhs, &id(), &web_ba)?;

    // ι_r ∘ (id ⊗ e) ∘ d = id
    let iota_r = LinearMap::new(&env, Formula::tensor(ba.clone(), Formula::One), ba.clone(), |y| {
        Ok(one_set(Token::pair(y.clone(), Token::Star)))
    });
    let lhs = dup().then(id().tensor(eraser())).then(iota_r);
    rep.compare("iota_r . (id x e) . d = id", &lhs, &id(), &web_ba)?;

    // α ∘ (id ⊗ d) ∘ d = (d ⊗ id) ∘ d
    let alpha = LinearMap::new(&env, Formula::tensor(ba.clone(), pair_f.clone()), triple_f.clone(), |t| {
        let (xy, z) = t.as_pair().unwrap();
        let (x, y) = xy.as_pair().unwrap();
        Ok(one_set(Token::pair(x.clone(), Token::pair(y.clone(), z.clone()))))
    });
    let lhs = dup().then(id().tensor(dup())).then(alpha);
    let rhs = dup().then(dup().tensor(id()));
    rep.compare("alpha . (id x d) . d = (d x id) . d", &lhs, &rhs, &web_triple)?;

    // γ ∘ d = d
    let gamma = LinearMap::new(&env, pair_f.clone(), pair_f.clone(), |t| {
        let (x, y) = t.as_pair().unwrap();
        Ok(one_set(Token::pair(y.clone(), x.clone())))
    });
    let lhs = dup().then(gamma);
    rep.compare("gamma . d = d", &lhs, &dup(), &web_pair)?;
    Ok(rep)
}

/// Checks that `z ↦ (z|1, z|2)` is a bijection from the web of `!(a & b)`
/// onto the web of `!a ⊗ !b` that preserves and reflects coherence.
/// Returns the common web size.
pub fn bang_with_bijection(a: &CoherenceSpace, b: &CoherenceSpace) -> Result<usize, String> {
    let env = AtomEnv::new().with("a", a.clone()).with("b", b.clone());
    let (fa, fb) = (atom("a"), atom("b"));
    let left_f = bang(&Formula::with(fa.clone(), fb.clone()));
    let right_f = Formula::tensor(bang(&fa), bang(&fb));
    let left = build_space(&env, &left_f).map_err(|e| e.to_string())?;
    let right = build_space(&env, &right_f).map_err(|e| e.to_string())?;
    let split = |z: &Token| -> Token {
        let items = z.as_set().expect("set token");
        let l = items.iter().filter_map(|t| if let Token::Inl(x) = t { Some((**x).clone()) } else { None }).collect();
        let r = items.iter().filter_map(|t| if let Token::Inr(x) = t { Some((**x).clone()) } else { None }).collect();
        Token::pair(Token::set(l), Token::set(r))
    };
    let image: Vec<usize> = left
        .web()
        .iter()
        .map(|z| right.index_of(&split(z)).ok_or_else(|| format!("{} maps outside the web of !a * !b", z)))
        .collect::<Result<_, _>>()?;
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() || image.len() != right.len() {
        return Err(format!("not a bijection: {} tokens onto {} of {}", left.len(), distinct.len(), right.len()));
    }
    for i in 0..left.len() {
        for j in 0..left.len() {
            if left.coherent(i, j) != right.coherent(image[i], image[j]) {
                return Err(format!("coherence differs on {} and {}", left.token(i), left.token(j)));
            }
        }
    }
    Ok(left.len())
}

/// Compares four descriptions of coherence in `E ⊸ E'` on every pair of
/// tokens: the incoherence clause, the two alternative characterizations,
/// and the space of `E^ ⅋ E'`. Returns the disagreeing pairs.
pub fn lolli_characterizations_agree(e: &CoherenceSpace, f: &CoherenceSpace) -> Result<Vec<String>, CohError> {
    let env = AtomEnv::new().with("x", e.clone()).with("y", f.clone());
    let lolli = Formula::par(Formula::DualAtom("x".into()), atom("y"));
    let mut bad = Vec::new();
    let ne = e.len();
    let nf = f.len();
    for e1 in 0..ne {
        for f1 in 0..nf {
            for e2 in 0..ne {
                for f2 in 0..nf {
                    let same = e1 == e2 && f1 == f2;
                    let incoh = e.coherent(e1, e2) && f.incoherent(f1, f2);
                    let by_incoh = !incoh || same;
                    let alt1 = !e.coherent(e1, e2) || (f.coherent(f1, f2) && (e1 == e2 || f1 != f2));
                    let alt2 = (!e.coherent(e1, e2) || f.coherent(f1, f2))
                        && (!f.incoherent(f1, f2) || e.incoherent(e1, e2));
                    let t = Token::pair(e.token(e1).clone(), f.token(f1).clone());
                    let u = Token::pair(e.token(e2).clone(), f.token(f2).clone());
                    let structural = coherent_in(&env, &lolli, &t, &u)?;
                    if by_incoh != alt1 || by_incoh != alt2 || by_incoh != structural {
                        bad.push(format!("{t} vs {u}"));
                    }
                }
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comonad_on_singleton() {
        let r = check_comonad_laws(&CoherenceSpace::codiscrete(1), 1 << 20).unwrap();
        assert!(r.ok() && r.exhaustive, "{r:?}");
    }

    #[test]
    fn comonad_up_to_two() {
        for e in CoherenceSpace::all_up_to(2) {
            let r = check_comonad_laws(&e, 1 << 17).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn comonoid_up_to_two() {
        for e in CoherenceSpace::all_up_to(2) {
            let r = check_comonoid_laws(&e).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn broken_delta_is_caught() {
        let e = CoherenceSpace::codiscrete(1);
        let env = AtomEnv::new().with("e", e);
        let a = atom("e");
        let wrong = LinearMap::new(&env, bang(&a), bang(&bang(&a)), |_| Ok(BTreeSet::new()));
        let lhs = wrong.then(LinearMap::epsilon(&env, &bang(&a)));
        let web = web_of(&env, &bang(&a)).unwrap();
        assert!(lhs.differs_on(&LinearMap::identity(&env, bang(&a)), &web).unwrap().is_some());
    }

    #[test]
    fn bijection_small() {
        for a in CoherenceSpace::all_up_to(2) {
            for b in CoherenceSpace::all_up_to(2) {
                bang_with_bijection(&a, &b).unwrap();
            }
        }
    }

    #[test]
    fn lolli_agreement_small() {
        for e in CoherenceSpace::all_up_to(2) {
            for f in CoherenceSpace::all_up_to(2) {
                assert!(lolli_characterizations_agree(&e, &f).unwrap().is_empty());
            }
        }
    }
}
