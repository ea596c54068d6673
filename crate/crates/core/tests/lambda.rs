use llwb::coherence::{interpret_proof, AtomEnv, CoherenceSpace};
use llwb::cutelim::normalize;
use llwb::lambda::*;
use llwb::proof::check_proof;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn affine_reduction_shrinks(seed in any::<u64>(), max in 1usize..=50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_affine_term(&mut rng, max);
        prop_assert!(is_affine(&m));
        let start = m.size();
        let mut cur = m;
        let mut steps = 0;
        while let Some(next) = beta_step(&cur) {
            prop_assert!(next.size() < cur.size(), "{} -> {}", cur, next);
            prop_assert!(is_affine(&next));
            cur = next;
            steps += 1;
        }
        prop_assert!(steps <= start);
        let r = beta_normalize(&random_affine_term(&mut ChaCha8Rng::seed_from_u64(seed), max), start + 1);
        prop_assert!(r.normal);
        prop_assert_eq!(r.steps, steps);
    }

    #[test]
    fn translation_is_a_proof(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_affine_term(&mut rng, 20);
        let ctx: Vec<(String, SimpleType)> = m.free_vars().into_iter().map(|x| (x, tatom("a"))).collect();
        if let Ok(d) = infer(&ctx, &m) {
            d.validate().unwrap();
            let p = translate(&d).unwrap();
            let report = check_proof(&p);
            prop_assert!(report.ok(), "{}", report);
            prop_assert_eq!(p.conclusion(), &expected_conclusion(&d.context, &d.ty));
        }
    }
}

#[test]
fn church_power() {
    // m n reduces to n^m
    for (m, n) in [(2, 2), (2, 3), (3, 2), (1, 4)] {
        let r = beta_normalize(&app(church(m), church(n)), 10_000);
        assert!(r.normal);
        assert_eq!(church_value(&r.term), Some(n.pow(m as u32)), "{m} {n}");
    }
}

#[test]
fn one_step_preserves_translated_conclusion() {
    let envs: Vec<AtomEnv> = [CoherenceSpace::codiscrete(1), CoherenceSpace::discrete(2)]
        .into_iter()
        .map(|e| AtomEnv::new().with(GROUND_ATOM, e))
        .collect();
    let mut redexes = 0;
    for m in closed_terms(10) {
        let Some(n) = beta_step(&m) else { continue };
        let Ok(dm) = infer(&[], &m) else { continue };
        redexes += 1;
        let dn = typecheck(&[], &n, &dm.ty).unwrap_or_else(|e| panic!("{m} -> {n}: {e}"));
        let (pm, _) = normalize(&translate(&dm).unwrap(), 1_000_000).unwrap();
        let (pn, _) = normalize(&translate(&dn).unwrap(), 1_000_000).unwrap();
        assert!(pm.is_cut_free() && pn.is_cut_free());
        assert!(check_proof(&pm).ok() && check_proof(&pn).ok());
        assert_eq!(pm.conclusion(), pn.conclusion(), "{m}");
        // the two-token space is only tried on small types; larger ones blow up
        for env in envs.iter().take(if dm.ty.size() <= 9 { 2 } else { 1 }) {
            let im = interpret_proof(&pm, env).unwrap();
            assert_eq!(im, interpret_proof(&pn, env).unwrap(), "{m}");
        }
    }
    println!("{redexes} typable redexes checked");
    assert!(redexes > 100, "{redexes}");
}
