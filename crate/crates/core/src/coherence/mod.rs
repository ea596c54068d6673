//! Finite coherence spaces: constructions for every connective, cliques,
//! the interpretation of proofs, stable functions and the exponential
//! comonad.

mod interp;
mod laws;
mod space;
mod stable;

use thiserror::Error;

use crate::syntax::Formula;

pub use interp::{interpret_labeled, interpret_proof, Interpreter};
pub use laws::{
    bang_with_bijection, check_comonad_laws, check_comonoid_laws, lolli_characterizations_agree, LawReport, LinearMap,
};
pub use space::{mask_items, AtomEnv, CoherenceSpace, Token};
pub use stable::{enumerate_stable, FunctionTable, Trace};

pub const DEFAULT_CLIQUE_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohError {
    #[error("atom {0} has no coherence space")]
    UnboundAtom(String),
    #[error("formula {0} is not in negation normal form")]
    NotNnf(String),
    #[error("coherence is not symmetric on {0}, {1}")]
    NotSymmetric(String, String),
    #[error("coherence is not reflexive on {0}")]
    NotReflexive(String),
    #[error("token {0} appears twice in the web")]
    DuplicateToken(String),
    #[error("unknown token {0}")]
    UnknownToken(String),
    #[error("coherence matrix does not match the web")]
    Shape,
    #[error("web has {size} tokens, bound is {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("token {token} does not belong to the space of {formula}")]
    IllTyped { token: String, formula: String },
    #[error("function is not monotone: {0}")]
    NotMonotone(String),
    #[error("function is not stable: x = {x}, y = {y} are compatible but f(x ∩ y) differs from f(x) ∩ f(y)")]
    NotStable { x: String, y: String },
    #[error("not a clique: {0}")]
    NotAClique(String),
    #[error("proof is malformed: {0}")]
    Proof(String),
    #[error("environment file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn ill_typed(t: &Token, f: &Formula) -> CohError {
    CohError::IllTyped { token: t.to_string(), formula: f.to_string() }
}

/// Coherence of two tokens in the space of `f`, computed from the shape of
/// `f` without building the web.
pub fn coherent_in(env: &AtomEnv, f: &Formula, t: &Token, u: &Token) -> Result<bool, CohError> {
    if t == u {
        return Ok(true);
    }
    let incoh = |g: &Formula, x: &Token, y: &Token| -> Result<bool, CohError> {
        Ok(x == y || !coherent_in(env, g, x, y)?)
    };
    Ok(match f {
        Formula::Atom(a) | Formula::DualAtom(a) => {
            let s = env.get(a)?;
            let c = s.coherent_tokens(t, u).ok_or_else(|| ill_typed(t, f))?;
            if matches!(f, Formula::Atom(_)) {
                c
            } else {
                !c
            }
        }
        Formula::One | Formula::Bot | Formula::Zero | Formula::Top => return Err(ill_typed(t, f)),
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            let ((t1, t2), (u1, u2)) =
                (t.as_pair().ok_or_else(|| ill_typed(t, f))?, u.as_pair().ok_or_else(|| ill_typed(u, f))?);
            if matches!(f, Formula::Tensor(..)) {
                coherent_in(env, a, t1, u1)? && coherent_in(env, b, t2, u2)?
            } else {
                !(incoh(a, t1, u1)? && incoh(b, t2, u2)?)
            }
        }
        Formula::With(a, b) | Formula::Plus(a, b) => match (t, u) {
            (Token::Inl(x), Token::Inl(y)) => coherent_in(env, a, x, y)?,
            (Token::Inr(x), Token::Inr(y)) => coherent_in(env, b, x, y)?,
            (Token::Inl(_), Token::Inr(_)) | (Token::Inr(_), Token::Inl(_)) => matches!(f, Formula::With(..)),
            _ => return Err(ill_typed(t, f)),
        },
        Formula::OfCourse(a) => {
            let (xs, ys) = (t.as_set().ok_or_else(|| ill_typed(t, f))?, u.as_set().ok_or_else(|| ill_typed(u, f))?);
            for x in xs {
                for y in ys {
                    if !coherent_in(env, a, x, y)? {
                        return Ok(false);
                    }
                }
            }
            true
        }
        Formula::WhyNot(a) => {
            // dual of !(a^): incoherent there, i.e. the union is not an anticlique
            let (xs, ys) = (t.as_set().ok_or_else(|| ill_typed(t, f))?, u.as_set().ok_or_else(|| ill_typed(u, f))?);
            for x in xs {
                for y in ys {
                    if x != y && coherent_in(env, a, x, y)? {
                        return Ok(true);
                    }
                }
            }
            false
        }
        Formula::Dual(_) => return Err(CohError::NotNnf(f.to_string())),
    })
}

/// Whether `tokens` is pairwise coherent in the space of `f`.
pub fn is_clique_in(env: &AtomEnv, f: &Formula, tokens: &[Token]) -> Result<bool, CohError> {
    for (i, t) in tokens.iter().enumerate() {
        for u in &tokens[i + 1..] {
            if !coherent_in(env, f, t, u)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The web of `f`, sorted.
pub fn web_of(env: &AtomEnv, f: &Formula) -> Result<Vec<Token>, CohError> {
    let mut w = match f {
        Formula::Atom(a) | Formula::DualAtom(a) => env.get(a)?.web().to_vec(),
        Formula::One | Formula::Bot => vec![Token::Star],
        Formula::Zero | Formula::Top => Vec::new(),
        Formula::Tensor(a, b) | Formula::Par(a, b) => {
            let (wa, wb) = (web_of(env, a)?, web_of(env, b)?);
            let mut v = Vec::with_capacity(wa.len() * wb.len());
            for x in &wa {
                for y in &wb {
                    v.push(Token::pair(x.clone(), y.clone()));
                }
            }
            v
        }
        Formula::With(a, b) | Formula::Plus(a, b) => {
            let mut v: Vec<Token> = web_of(env, a)?.into_iter().map(Token::inl).collect();
            v.extend(web_of(env, b)?.into_iter().map(Token::inr));
            v
        }
        Formula::OfCourse(a) | Formula::WhyNot(a) => {
            let inner = build_space(env, a)?;
            let inner = if matches!(f, Formula::WhyNot(_)) { inner.dual() } else { inner };
            inner.cliques().iter().map(|c| Token::set(inner.tokens_of(c))).collect()
        }
        Formula::Dual(_) => return Err(CohError::NotNnf(f.to_string())),
    };
    w.sort();
    Ok(w)
}

/// Materializes the space of an NNF formula.
pub fn build_space(env: &AtomEnv, f: &Formula) -> Result<CoherenceSpace, CohError> {
    let web = web_of(env, f)?;
    let mut err = None;
    let s = CoherenceSpace::from_fn(web.clone(), |i, j| match coherent_in(env, f, &web[i], &web[j]) {
        Ok(c) => c,
        Err(e) => {
            err.get_or_insert(e);
            false
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_nnf;

    fn env_ab(a: CoherenceSpace, b: CoherenceSpace) -> AtomEnv {
        AtomEnv::new().with("a", a).with("b", b)
    }

    #[test]
    fn clique_counts() {
        assert_eq!(CoherenceSpace::discrete(3).enum_cliques(12).unwrap().len(), 4);
        assert_eq!(CoherenceSpace::codiscrete(3).enum_cliques(12).unwrap().len(), 8);
        let nat = CoherenceSpace::nat(2).enum_cliques(12).unwrap();
        assert_eq!(nat, vec![vec![], vec![Token::base("0")], vec![Token::base("1")]]);
        assert!(CoherenceSpace::codiscrete(13).enum_cliques(12).is_err());
    }

    #[test]
    fn relations_interdefinable() {
        for s in CoherenceSpace::all_up_to(3) {
            for i in 0..s.len() {
                for j in 0..s.len() {
                    assert_eq!(s.strictly_coherent(i, j), !s.incoherent(i, j));
                    assert_eq!(s.coherent(i, j), !s.incoherent(i, j) || i == j);
                    assert_eq!(s.coherent(i, j), s.coherent(j, i));
                }
            }
        }
    }

    #[test]
    fn cardinalities() {
        for a in CoherenceSpace::all_up_to(3) {
            for b in CoherenceSpace::all_up_to(2) {
                let env = env_ab(a.clone(), b.clone());
                let t = build_space(&env, &parse_nnf("a * b").unwrap()).unwrap();
                let w = build_space(&env, &parse_nnf("a & b").unwrap()).unwrap();
                assert_eq!(t.len(), a.len() * b.len());
                assert_eq!(w.len(), a.len() + b.len());
                // D(a & b) is in bijection with D(a) x D(b)
                assert_eq!(w.cliques().len(), a.cliques().len() * b.cliques().len());
            }
        }
    }

    #[test]
    fn with_cliques_are_pairs() {
        let a = CoherenceSpace::from_pairs(&["x", "y", "z"], &[("x", "y")]).unwrap();
        let b = CoherenceSpace::nat(2);
        let env = env_ab(a.clone(), b.clone());
        let w = build_space(&env, &parse_nnf("a & b").unwrap()).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for c in w.cliques() {
            let toks = w.tokens_of(&c);
            let left: Vec<Token> =
                toks.iter().filter_map(|t| if let Token::Inl(x) = t { Some((**x).clone()) } else { None }).collect();
            let right: Vec<Token> =
                toks.iter().filter_map(|t| if let Token::Inr(x) = t { Some((**x).clone()) } else { None }).collect();
            assert!(is_clique_in(&env, &Formula::Atom("a".into()), &left).unwrap());
            assert!(is_clique_in(&env, &Formula::Atom("b".into()), &right).unwrap());
            assert!(seen.insert((left, right)));
        }
        assert_eq!(seen.len(), a.cliques().len() * b.cliques().len());
    }

    #[test]
    fn dual_is_involutive_and_par_matches_de_morgan() {
        for a in CoherenceSpace::all_up_to(3) {
            assert_eq!(a.dual().dual(), a);
            let env = env_ab(a.clone(), CoherenceSpace::discrete(2));
            let par = build_space(&env, &parse_nnf("a @ b").unwrap()).unwrap();
            let tensor_dual = build_space(&env, &parse_nnf("a^ * b^").unwrap()).unwrap().dual();
            assert_eq!(par, tensor_dual);
            let plus = build_space(&env, &parse_nnf("a + b").unwrap()).unwrap();
            assert_eq!(plus, build_space(&env, &parse_nnf("a^ & b^").unwrap()).unwrap().dual());
            let wn = build_space(&env, &parse_nnf("?a").unwrap()).unwrap();
            assert_eq!(wn, build_space(&env, &parse_nnf("!a^").unwrap()).unwrap().dual());
        }
    }

    #[test]
    fn units() {
        let env = AtomEnv::new();
        for (f, n) in [("1", 1), ("bot", 1), ("0", 0), ("top", 0)] {
            let s = build_space(&env, &parse_nnf(f).unwrap()).unwrap();
            assert_eq!(s.len(), n);
            assert_eq!(s.cliques().len(), n + 1);
        }
    }

    #[test]
    fn unbound_atom() {
        assert!(matches!(build_space(&AtomEnv::new(), &parse_nnf("a").unwrap()), Err(CohError::UnboundAtom(_))));
    }

    #[test]
    fn env_roundtrip() {
        let env = AtomEnv::new()
            .with("a", CoherenceSpace::from_pairs(&["x", "y", "z"], &[("x", "z")]).unwrap())
            .with("b", CoherenceSpace::nat(2));
        assert_eq!(AtomEnv::parse(&env.to_text()).unwrap(), env);
    }
}
