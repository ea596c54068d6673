use llwb::fixtures::proof_fixtures;
use llwb::gen::random_mall_sequent;
use llwb::mall::{prove_mall, ProveOutcome, SearchLimits};
use llwb::phase::{full_set, random_model, PhaseModel};
use llwb::syntax::Formula;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(seed: u64, expo: bool) -> (PhaseModel, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_model(&mut rng, 6, &["a", "b"], expo);
    (m, rng)
}

fn subset(x: u64, y: u64) -> bool {
    x & !y == 0
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn orthogonal_laws(seed in any::<u64>()) {
        let (m, mut rng) = model(seed, false);
        let full = full_set(m.monoid().len());
        let (x, y) = (rng.gen::<u64>() & full, rng.gen::<u64>() & full);
        prop_assert!(subset(x, m.biorth(x)));
        prop_assert_eq!(m.orth(m.biorth(x)), m.orth(x));
        let (small, big) = (x & y, x | y);
        prop_assert!(subset(m.orth(big), m.orth(small)));
        prop_assert!(subset(m.product(m.biorth(x), m.biorth(y)), m.biorth(m.product(x, y))));
    }

    #[test]
    fn par_distributes_over_with(seed in any::<u64>()) {
        let (m, mut rng) = model(seed, false);
        let full = full_set(m.monoid().len());
        let mut fact = || m.biorth(rng.gen::<u64>() & full);
        let (f, g, h) = (fact(), fact(), fact());
        prop_assert!(m.is_fact(f) && m.is_fact(g & h));
        prop_assert_eq!(m.par(f, g & h), m.par(f, g) & m.par(f, h));
    }

    #[test]
    fn prover_output_is_valid(seed in any::<u64>()) {
        let (m, mut rng) = model(seed, false);
        let s = random_mall_sequent(&mut rng, &["a", "b"], 1, 9);
        if let Ok(ProveOutcome::Proof(_)) = prove_mall(&s, SearchLimits::default()) {
            prop_assert!(m.is_valid(&s).unwrap(), "{} fails in\n{}", s, m.to_text());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn topolinear_models_validate_exponential_fixtures(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_model(&mut rng, 6, &["a", "b", "c", "f", "p", "q", "s", "t"], true);
        if m.closed().is_none() {
            return Ok(());
        }
        prop_assert!(m.check_topolinear().ok());
        for f in proof_fixtures() {
            // `?` is partial when no closed fact contains the argument
            if let Ok(v) = m.is_valid(f.proof.conclusion()) {
                prop_assert!(v, "{} fails in\n{}", f.name, m.to_text());
            }
        }
        // weakening: ⊥ ⊆ ?A whenever ?A is defined
        for x in m.all_facts() {
            if let Ok(w) = m.why_not(x) {
                prop_assert!(subset(m.bot(), w) && subset(x, w));
            }
        }
    }
}

#[test]
fn generator_finds_topolinear_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let with = (0..200).filter(|_| random_model(&mut rng, 6, &["a"], true).closed().is_some()).count();
    assert!(with > 150, "{with}");
}

#[test]
fn exponential_fixtures_are_mostly_defined() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let expo: Vec<_> = proof_fixtures().into_iter().filter(|f| !f.proof.conclusion().is_exponential_free()).collect();
    let (mut defined, mut total) = (0, 0);
    for _ in 0..200 {
        let m = random_model(&mut rng, 6, &["a", "b"], true);
        for f in &expo {
            total += 1;
            if let Ok(v) = m.is_valid(f.proof.conclusion()) {
                assert!(v, "{}", f.name);
                defined += 1;
            }
        }
    }
    assert!(defined * 2 > total, "{defined} of {total}");
    let q = Formula::why_not(Formula::Atom("a".into()));
    assert!(random_model(&mut rng, 1, &["a"], true).interp(&q).is_ok());
}
