use super::term::Term;
use super::types::{SimpleType, TypingDerivation};
use super::LambdaError;
use crate::labeled::{LNode, LRule, Label, Labeled};
use crate::proof::Proof;
use crate::syntax::{atom, neg, Formula, Sequent};

/// `a* = a` and `(B -> C)* = ?(B*)^ ⅋ C*`, kept in negation normal form.
pub fn star_type(t: &SimpleType) -> Formula {
    match t {
        SimpleType::TAtom(a) => atom(a),
        SimpleType::Arrow(b, c) => Formula::par(Formula::why_not(neg(&star_type(b))), star_type(c)),
    }
}

/// `?(A*)^`, the shape of a hypothesis `x : A`.
pub fn hypothesis(t: &SimpleType) -> Formula {
    Formula::why_not(neg(&star_type(t)))
}

/// The sequent `|- ?(Γ*)^, A*` a derivation of `Γ ⊢ M : A` translates to.
pub fn expected_conclusion(context: &[(String, SimpleType)], ty: &SimpleType) -> Sequent {
    let mut fs: Vec<Formula> = context.iter().map(|(_, a)| hypothesis(a)).collect();
    fs.push(star_type(ty));
    Sequent::new(fs)
}

/// Translates a typing derivation rule by rule. Variables become an axiom
/// followed by weakenings and a dereliction, abstractions a `⅋`, and
/// applications a promotion, a tensor with an axiom, a cut and contractions.
///
/// Hypotheses of equal type give equal formulas, so the proof is built with
/// labeled occurrences; the returned positional proof realizes them.
pub fn translate(d: &TypingDerivation) -> Result<Proof, LambdaError> {
    Ok(translate_labeled(d)?.to_proof())
}

/// Like [`translate`]. Root labels are `0..n` for the context in order,
/// then `n` for the type.
pub fn translate_labeled(d: &TypingDerivation) -> Result<Labeled, LambdaError> {
    let n = d.context.len() as Label;
    let hyps: Vec<Label> = (0..n).collect();
    let mut next = n + 1;
    let root = build(d, &hyps, n, &mut next)?;
    Ok(Labeled { root, next })
}

fn build(d: &TypingDerivation, hyps: &[Label], out: Label, next: &mut Label) -> Result<LNode, LambdaError> {
    let mut fresh = || {
        *next += 1;
        *next - 1
    };
    let gamma: Vec<(Label, Formula)> =
        hyps.iter().zip(&d.context).map(|(&l, (_, a))| (l, hypothesis(a))).collect();
    match (&d.term, d.premises.as_slice()) {
        (Term::Var(x), []) => {
            let a = star_type(&d.ty);
            let k = d
                .context
                .iter()
                .position(|(y, _)| y == x)
                .ok_or_else(|| LambdaError::Translate(format!("{x} not in context")))?;
            let dual = fresh();
            let mut node = LNode { conc: vec![(out, a.clone()), (dual, neg(&a))], rule: LRule::Axiom, premises: vec![] };
            for (i, (l, f)) in gamma.iter().enumerate() {
                if i != k {
                    let mut conc = node.conc.clone();
                    conc.push((*l, f.clone()));
                    node = LNode { conc, rule: LRule::Weak(*l), premises: vec![node] };
                }
            }
            let mut conc = node.conc_without(dual);
            conc.push(gamma[k].clone());
            Ok(LNode { conc, rule: LRule::Der { p: hyps[k], a: dual }, premises: vec![node] })
        }
        (Term::Abs(..), [body]) => {
            let SimpleType::Arrow(a, b) = &d.ty else {
                return Err(LambdaError::Translate(format!("abstraction at type {}", d.ty)));
            };
            let (xl, bl) = (fresh(), fresh());
            let mut inner = hyps.to_vec();
            inner.push(xl);
            let prem = build(body, &inner, bl, next)?;
            let mut conc = gamma;
            conc.push((out, Formula::par(hypothesis(a), star_type(b))));
            Ok(LNode { conc, rule: LRule::Par { p: out, a: xl, b: bl }, premises: vec![prem] })
        }
        (Term::App(..), [pf, pa]) => {
            let b = star_type(&d.ty);
            let a = star_type(&pa.ty);
            let left: Vec<Label> = hyps.iter().map(|_| fresh()).collect();
            let right: Vec<Label> = hyps.iter().map(|_| fresh()).collect();
            let (m_out, n_out, bang, nb, t) = (fresh(), fresh(), fresh(), fresh(), fresh());
            let m = build(pf, &left, m_out, next)?;
            let arg = build(pa, &right, n_out, next)?;
            let mut prom_conc = arg.conc_without(n_out);
            prom_conc.push((bang, Formula::of_course(a.clone())));
            let prom = LNode { conc: prom_conc, rule: LRule::Prom { p: bang, a: n_out }, premises: vec![arg] };
            let ax = LNode { conc: vec![(out, b.clone()), (nb, neg(&b))], rule: LRule::Axiom, premises: vec![] };
            let mut t_conc = prom.conc_without(bang);
            t_conc.push((t, Formula::tensor(Formula::of_course(a), neg(&b))));
            t_conc.push((out, b.clone()));
            let tensor = LNode { conc: t_conc, rule: LRule::Tensor { p: t, a: bang, b: nb }, premises: vec![prom, ax] };
            let mut cut_conc = m.conc_without(m_out);
            cut_conc.extend(tensor.conc_without(t));
            let mut node = LNode { conc: cut_conc, rule: LRule::Cut { a: m_out, b: t }, premises: vec![m, tensor] };
            for (i, (l, f)) in gamma.iter().enumerate() {
                let mut conc: Vec<(Label, Formula)> =
                    node.conc.iter().filter(|(x, _)| *x != left[i] && *x != right[i]).cloned().collect();
                conc.push((*l, f.clone()));
                node = LNode { conc, rule: LRule::Contr { p: *l, a: left[i], b: right[i] }, premises: vec![node] };
            }
            Ok(node)
        }
        _ => Err(LambdaError::Translate(format!("malformed derivation at {}", d.term))),
    }
}
