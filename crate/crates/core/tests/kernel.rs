use llwb::cutelim::{normalize, normalize_labeled, normalize_traced};
use llwb::fixtures::proof_fixtures;
use llwb::gen::{random_cut_composed, random_mall_sequent};
use llwb::labeled::Labeled;
use llwb::lambda::{infer, is_affine, random_affine_term, translate, Term};
use llwb::mall::{prove_mall, ProveOutcome, SearchLimits};
use llwb::proof::{check_proof, Proof, Rule};
use llwb::syntax::{atom, Formula};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prover_output(seed: u64) -> Option<Proof> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_mall_sequent(&mut rng, &["a", "b"], 1, 10);
    match prove_mall(&s, SearchLimits::default()).unwrap() {
        ProveOutcome::Proof(p) => Some(p),
        _ => None,
    }
}

fn cut_composed(seed: u64) -> Proof {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cuts = rng.gen_range(1..=3);
    random_cut_composed(&mut rng, &["a", "b"], 7, 9, cuts, 500).expect("a composable pair")
}

// Replaces one formula of one node's conclusion by a fresh atom.
fn corrupt(p: &Proof, pick: u64) -> Option<Proof> {
    let paths = p.paths();
    let path = &paths[(pick % paths.len() as u64) as usize];
    let mut q = p.clone();
    let node = q.node_mut(path)?;
    let fs = node.conclusion.formulas().to_vec();
    if fs.is_empty() {
        return None;
    }
    // a root `top` rule accepts any context, so only its principal formula is fair game
    let k = if path.0.is_empty() { *node.principal.first()? } else { (pick >> 32) as usize % fs.len() };
    let mut rest = fs;
    rest.remove(k);
    rest.push(atom("zz"));
    node.conclusion = llwb::syntax::Sequent::new(rest);
    Some(q)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn prover_proofs_check_and_shrink(seed in any::<u64>()) {
        if let Some(p) = prover_output(seed) {
            prop_assert!(check_proof(&p).ok());
            // along every branch the total size of the sequent strictly decreases
            for path in p.paths() {
                let n = p.node(&path).unwrap();
                for q in &n.premises {
                    prop_assert!(q.conclusion().total_size() < n.conclusion().total_size());
                }
            }
        }
    }

    #[test]
    fn single_corruption_is_caught(seed in any::<u64>(), pick in any::<u64>()) {
        let p = cut_composed(seed);
        if let Some(q) = corrupt(&p, pick) {
            prop_assert!(!check_proof(&q).ok());
        }
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        let p = cut_composed(seed);
        let mut cur = p.clone();
        let mut fuel = 10_000;
        while let Some((next, step)) = llwb::cutelim::reduce_step(&cur) {
            let r = check_proof(&next);
            prop_assert!(r.ok(), "after {}: {}", step, r);
            prop_assert_eq!(next.conclusion(), p.conclusion());
            cur = next;
            fuel -= 1;
            prop_assert!(fuel > 0);
        }
        prop_assert!(cur.is_cut_free());
    }

    #[test]
    fn key_steps_shrink_mall_proofs(seed in any::<u64>()) {
        let p = cut_composed(seed);
        let mut l = Labeled::from_proof(&p).unwrap();
        let mut before = l.root.node_count();
        let mut bad = None;
        normalize_labeled(&mut l, 100_000, |step, now| {
            let after = now.root.node_count();
            if step.kind.is_key() && after >= before && bad.is_none() {
                bad = Some(format!("{step}: {before} -> {after} nodes"));
            }
            before = after;
        })
        .unwrap();
        prop_assert!(bad.is_none(), "{:?}", bad);
    }

    #[test]
    fn affine_translations_take_linearly_many_logical_steps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_affine_term(&mut rng, 50);
        if let Ok(d) = infer(&[], &t) {
            let p = translate(&d).unwrap();
            let mut key = 0;
            let (q, _) = normalize_traced(&p, 100_000, |s| key += usize::from(s.kind.is_key())).unwrap();
            prop_assert!(key <= p.node_count(), "{} logical steps for {} nodes: {}", key, p.node_count(), t);
            prop_assert!(q.is_cut_free() && check_proof(&q).ok());
        }
    }
}

// Counting every rewrite, commutations included, the bound fails: the
// translation contracts the whole context at each application and weakens
// it at each variable, even for affine terms, and cuts must be commuted past
// those structural rules one at a time.
#[test]
fn commutations_break_the_total_step_bound() {
    let t = Term::parse("(\\v1. \\v2. \\v3. (\\v4. \\v5. (\\v6. \\v7. \\v8. \\v9. v7 v6) (v5 v4)) (\\v10. v1 v10)) (\\v11. v11)").unwrap();
    assert!(is_affine(&t));
    let p = translate(&infer(&[], &t).unwrap()).unwrap();
    let (mut key, mut commuting) = (0, 0);
    let (_, stats) = normalize_traced(&p, 100_000, |s| {
        if s.kind.is_key() {
            key += 1
        } else {
            commuting += 1
        }
    })
    .unwrap();
    assert_eq!((p.node_count(), stats.steps, key, commuting), (105, 561, 48, 513));
}

#[test]
fn fixtures_check_and_normalize() {
    for f in proof_fixtures() {
        let r = check_proof(&f.proof);
        assert!(r.ok(), "{}: {r}", f.name);
        let (q, _) = normalize(&f.proof, 100_000).unwrap();
        assert!(q.is_cut_free() && check_proof(&q).ok(), "{}", f.name);
        assert_eq!(q.conclusion(), f.proof.conclusion());
    }
}

#[test]
fn corrupted_fixture_reports_a_path() {
    let p = proof_fixtures().into_iter().find(|f| f.name == "digging").unwrap().proof;
    let mut q = p.clone();
    let path = q.paths().into_iter().find(|x| matches!(q.node(x).unwrap().rule, Rule::Axiom)).unwrap();
    q.node_mut(&path).unwrap().conclusion = llwb::syntax::Sequent::new(vec![atom("a"), Formula::DualAtom("b".into())]);
    let r = check_proof(&q);
    assert!(!r.ok());
    assert!(r.to_string().contains(&path.to_string()), "{r}");
}
