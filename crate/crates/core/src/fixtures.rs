//! Hand-built derivations of standard linear logic facts, used as a
//! regression corpus.

use crate::proof::{KernelError, Proof};
use crate::syntax::{atom, dual_atom, parse_sequent, Formula, Sequent};

/// Expected outcome of a corpus item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// The proof passes the checker.
    CheckOk,
    /// The prover finds a proof of the sequent.
    Provable,
    /// The prover finds no proof of the sequent.
    NotProvable,
    /// Cut elimination ends in a cut-free proof of the same sequent.
    CutfreeAfter,
    /// The conclusion is valid in every model of the phase battery.
    ValidAllModels,
    /// Coherence interpretation is unchanged by every reduction step.
    InvariantInterp,
}

impl Tag {
    pub const ALL: [Tag; 6] =
        [Tag::CheckOk, Tag::Provable, Tag::NotProvable, Tag::CutfreeAfter, Tag::ValidAllModels, Tag::InvariantInterp];

    pub fn name(self) -> &'static str {
        match self {
            Tag::CheckOk => "check-ok",
            Tag::Provable => "provable",
            Tag::NotProvable => "not-provable",
            Tag::CutfreeAfter => "cutfree-after",
            Tag::ValidAllModels => "valid-all-models",
            Tag::InvariantInterp => "invariant-interp",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.name() == s)
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub proof: Proof,
    pub tags: Vec<Tag>,
}

/// Sequents stored without proofs.
pub struct SequentFixture {
    pub name: &'static str,
    pub sequent: Sequent,
    pub tag: Tag,
}

fn ax(name: &str) -> Result<Proof, KernelError> {
    Proof::axiom(atom(name))
}

fn t(a: Formula, b: Formula) -> Formula {
    Formula::tensor(a, b)
}

fn p(a: Formula, b: Formula) -> Formula {
    Formula::par(a, b)
}

/// `|- a^ ⅋ (b^ & c^), (a ⊗ b) ⊕ (a ⊗ c)`: ⊗ distributes over ⊕.
pub fn distributivity() -> Result<Proof, KernelError> {
    let (a, b, c) = (atom("a"), atom("b"), atom("c"));
    let (ab, ac) = (t(a.clone(), b.clone()), t(a.clone(), c.clone()));
    let left = Proof::tensor(ax("a")?, ax("b")?, a.clone(), b.clone())?;
    let left = Proof::plus_l(left, ab.clone(), ac.clone())?;
    let right = Proof::tensor(ax("a")?, ax("c")?, a.clone(), c.clone())?;
    let right = Proof::plus_r(right, ab, ac)?;
    let w = Proof::with(left, right, dual_atom("b"), dual_atom("c"))?;
    Proof::par(w, dual_atom("a"), Formula::with(dual_atom("b"), dual_atom("c")))
}

/// `|- (a^ ⅋ b^) & (a^ ⅋ c^), a ⊗ (b ⊕ c)`, the converse.
pub fn distributivity_converse() -> Result<Proof, KernelError> {
    let (a, b, c) = (atom("a"), atom("b"), atom("c"));
    let bc = Formula::plus(b.clone(), c.clone());
    let branch = |x: &str, left: bool| -> Result<Proof, KernelError> {
        let inj = if left {
            Proof::plus_l(ax(x)?, b.clone(), c.clone())?
        } else {
            Proof::plus_r(ax(x)?, b.clone(), c.clone())?
        };
        let tn = Proof::tensor(ax("a")?, inj, a.clone(), bc.clone())?;
        Proof::par(tn, dual_atom("a"), dual_atom(x))
    };
    Proof::with(
        branch("b", true)?,
        branch("c", false)?,
        p(dual_atom("a"), dual_atom("b")),
        p(dual_atom("a"), dual_atom("c")),
    )
}

/// From a proof of `|- a^ ⊗ b^, a ⅋ b` recover `|- a^ ⊗ b^, a, b` by a cut
/// against `|- a^ ⊗ b^, a, b` built from axioms.
pub fn par_reversibility() -> Result<Proof, KernelError> {
    let (a, b) = (atom("a"), atom("b"));
    let (ad, bd) = (dual_atom("a"), dual_atom("b"));
    let premise = Proof::tensor(Proof::axiom(ad.clone())?, Proof::axiom(bd.clone())?, ad.clone(), bd.clone())?;
    let premise = Proof::par(premise, a.clone(), b.clone())?;
    let inverse = Proof::tensor(Proof::axiom(ad.clone())?, Proof::axiom(bd.clone())?, ad, bd)?;
    Proof::cut(premise, inverse, p(a, b))
}

/// From a proof of `|- a & b, a^ ⊕ b^` recover `|- a, a^ ⊕ b^` by a cut
/// against `|- a^ ⊕ b^, a`.
pub fn with_reversibility() -> Result<Proof, KernelError> {
    let (a, b) = (atom("a"), atom("b"));
    let (ad, bd) = (dual_atom("a"), dual_atom("b"));
    let l = Proof::plus_l(ax("a")?, ad.clone(), bd.clone())?;
    let r = Proof::plus_r(ax("b")?, ad.clone(), bd.clone())?;
    let premise = Proof::with(l, r, a.clone(), b)?;
    let inverse = Proof::plus_l(ax("a")?, ad, bd)?;
    Proof::cut(premise, inverse, Formula::with(a, atom("b")))
}

/// Digging as a derived rule: from `|- ??a, a^` get `|- ?a, a^` by a cut
/// against `|- !!a^, ?a`.
pub fn digging() -> Result<Proof, KernelError> {
    let a = atom("a");
    let wa = Formula::why_not(a.clone());
    let premise = Proof::dereliction(ax("a")?, a.clone())?;
    let premise = Proof::dereliction(premise, wa.clone())?;
    let inner = Proof::dereliction(ax("a")?, a)?;
    let inner = Proof::promotion(inner, dual_atom("a"))?;
    let inner = Proof::promotion(inner, Formula::of_course(dual_atom("a")))?;
    Proof::cut(premise, inner, Formula::why_not(wa))
}

/// `|- ?a^ ⅋ ?b^, !(a & b)`.
pub fn bang_with_to_tensor() -> Result<Proof, KernelError> {
    let (a, b) = (atom("a"), atom("b"));
    let (wa, wb) = (Formula::why_not(dual_atom("a")), Formula::why_not(dual_atom("b")));
    let l = Proof::dereliction(ax("a")?, dual_atom("a"))?;
    let l = Proof::weakening(l, wb.clone())?;
    let r = Proof::dereliction(ax("b")?, dual_atom("b"))?;
    let r = Proof::weakening(r, wa.clone())?;
    let w = Proof::with(l, r, a.clone(), b.clone())?;
    let pr = Proof::promotion(w, Formula::with(a, b))?;
    Proof::par(pr, wa, wb)
}

/// `|- ?(a^ ⊕ b^), !a ⊗ !b`, the converse.
pub fn tensor_to_bang_with() -> Result<Proof, KernelError> {
    let sum = Formula::plus(dual_atom("a"), dual_atom("b"));
    let side = |x: &str, left: bool| -> Result<Proof, KernelError> {
        let inj = if left {
            Proof::plus_l(ax(x)?, dual_atom("a"), dual_atom("b"))?
        } else {
            Proof::plus_r(ax(x)?, dual_atom("a"), dual_atom("b"))?
        };
        let d = Proof::dereliction(inj, sum.clone())?;
        Proof::promotion(d, atom(x))
    };
    let tn = Proof::tensor(
        side("a", true)?,
        side("b", false)?,
        Formula::of_course(atom("a")),
        Formula::of_course(atom("b")),
    )?;
    Proof::contraction(tn, Formula::why_not(sum))
}

/// Lafont's menu with each price standing for the choice it buys:
/// `|- ((q&s) ⊗ (c&f) ⊗ (b&t))^, (q&s) ⊗ (c&f) ⊗ (b & (p ⊕ t))`.
pub fn menu() -> Result<Proof, KernelError> {
    let d = dual_atom;
    let course = |x: &str, y: &str| -> Result<Proof, KernelError> {
        let l = Proof::plus_l(ax(x)?, d(x), d(y))?;
        let r = Proof::plus_r(ax(y)?, d(x), d(y))?;
        Proof::with(l, r, atom(x), atom(y))
    };
    let entree = course("q", "s")?;
    let dish = course("c", "f")?;
    let pt = Formula::plus(atom("p"), atom("t"));
    let banana = Proof::plus_l(ax("b")?, d("b"), d("t"))?;
    let surprise = Proof::plus_r(ax("t")?, atom("p"), atom("t"))?;
    let surprise = Proof::plus_r(surprise, d("b"), d("t"))?;
    let dessert = Proof::with(banana, surprise, atom("b"), pt.clone())?;
    let qs = Formula::with(atom("q"), atom("s"));
    let cf = Formula::with(atom("c"), atom("f"));
    let first = Proof::tensor(entree, dish, qs.clone(), cf.clone())?;
    let all = Proof::tensor(first, dessert, t(qs, cf), Formula::with(atom("b"), pt))?;
    // the price as one resource
    let price = |x: &str, y: &str| Formula::plus(d(x), d(y));
    let all = Proof::par(all, price("q", "s"), price("c", "f"))?;
    Proof::par(all, p(price("q", "s"), price("c", "f")), price("b", "t"))
}

/// Every proof fixture with its expected outcomes.
pub fn proof_fixtures() -> Vec<Fixture> {
    use Tag::*;
    let mk = |name, summary, proof: Result<Proof, KernelError>, tags: &[Tag]| Fixture {
        name,
        summary,
        proof: proof.unwrap_or_else(|e| panic!("fixture {name}: {e}")),
        tags: tags.to_vec(),
    };
    vec![
        mk("distributivity", "tensor distributes over plus", distributivity(), &[CheckOk, Provable, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("distributivity_converse", "and back", distributivity_converse(), &[CheckOk, Provable, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("par_reversibility", "par rule inverted by a cut", par_reversibility(), &[CheckOk, Provable, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("with_reversibility", "with rule inverted by a cut", with_reversibility(), &[CheckOk, Provable, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("digging", "digging derived with one cut", digging(), &[CheckOk, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("bang_with_to_tensor", "!(a&b) from ?a^ par ?b^", bang_with_to_tensor(), &[CheckOk, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("tensor_to_bang_with", "!a * !b from ?(a^ + b^)", tensor_to_bang_with(), &[CheckOk, CutfreeAfter, ValidAllModels, InvariantInterp]),
        mk("menu", "three courses for one price", menu(), &[CheckOk, Provable, CutfreeAfter, ValidAllModels, InvariantInterp]),
    ]
}

/// Sequents whose provability is part of the corpus.
pub fn sequent_fixtures() -> Vec<SequentFixture> {
    let mk = |name, text: &str, tag| SequentFixture { name, sequent: parse_sequent(text).expect("fixture sequent"), tag };
    vec![
        mk("par_excluded_middle", "|- a @ a^", Tag::Provable),
        mk("plus_excluded_middle", "|- a + a^", Tag::NotProvable),
        mk("tensor_not_par", "|- a^ @ b^, a * b", Tag::Provable),
        mk("no_contraction", "|- a^, a^, a * a * a", Tag::NotProvable),
        mk("no_weakening", "|- a^, b^, a", Tag::NotProvable),
        mk("top_absorbs", "|- top, a, b^", Tag::Provable),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;

    #[test]
    fn all_fixtures_check() {
        for f in proof_fixtures() {
            let r = check_proof(&f.proof);
            assert!(r.ok(), "{}: {r}", f.name);
        }
    }

    #[test]
    fn declared_conclusions() {
        let conc = |name: &str| proof_fixtures().into_iter().find(|f| f.name == name).unwrap().proof.conclusion().clone();
        let s = |t: &str| parse_sequent(t).unwrap();
        assert_eq!(conc("distributivity"), s("|- (a * (b + c))^, (a * b) + (a * c)"));
        assert_eq!(conc("distributivity_converse"), s("|- ((a * b) + (a * c))^, a * (b + c)"));
        assert_eq!(conc("par_reversibility"), s("|- a^ * b^, a, b"));
        assert_eq!(conc("with_reversibility"), s("|- a, a^ + b^"));
        assert_eq!(conc("digging"), s("|- ?a, a^"));
        assert_eq!(conc("bang_with_to_tensor"), s("|- ?a^ @ ?b^, !(a & b)"));
        assert_eq!(conc("tensor_to_bang_with"), s("|- (!a * !b), (!(a & b))^"));
        assert_eq!(conc("menu"), s("|- ((q & s) * (c & f) * (b & t))^, (q & s) * (c & f) * (b & (p + t))"));
        assert_eq!(proof_fixtures().iter().find(|f| f.name == "digging").unwrap().proof.count_cuts(), 1);
    }

    #[test]
    fn tag_names_roundtrip() {
        for t in Tag::ALL {
            assert_eq!(Tag::parse(t.name()), Some(t));
        }
    }
}
