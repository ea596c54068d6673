use llwb::proof::check_proof;
use llwb::tcm::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn accepting_runs_give_proofs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_machine(&mut rng, 4, 5);
        let id = random_id(&mut rng, &m, 3);
        if let SimOutcome::Accepted(tr) = m.simulate(&id, 12) {
            m.validate_trace(&tr).unwrap();
            for &t in &id {
                let p = m.synthesize_proof(&tr, t).unwrap();
                let r = check_proof(&p);
                prop_assert!(r.ok(), "{}", r);
                prop_assert_eq!(p.conclusion(), &m.full_sequent(t));
            }
        }
    }

    #[test]
    fn simulated_traces_validate(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_machine(&mut rng, 4, 5);
        let id = random_id(&mut rng, &m, 3);
        if let SimOutcome::Accepted(tr) = m.simulate(&id, 12) {
            prop_assert!(m.validate_trace(&tr).is_ok());
            prop_assert_eq!(&tr.ids[0], &id);
            prop_assert!(tr.steps.len() <= 12);
        }
    }
}

#[test]
fn enough_random_machines_accept() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut tries, mut found) = (0, 0);
    while found < 50 && tries < 100_000 {
        tries += 1;
        let m = random_machine(&mut rng, 4, 5);
        let id = random_id(&mut rng, &m, 3);
        if let SimOutcome::Accepted(tr) = m.simulate(&id, 12) {
            if !tr.steps.is_empty() {
                found += 1;
            }
        }
    }
    println!("{found} accepting machines in {tries} tries");
    assert_eq!(found, 50);
}

#[test]
fn forged_trace_rejected() {
    let m = example_chain();
    let t = m.triplet("qi", 0, 0).unwrap();
    let SimOutcome::Accepted(mut tr) = m.simulate(&[t], 12) else { panic!() };
    tr.steps[1].triplet.m = 0;
    assert!(m.validate_trace(&tr).is_err());
    assert!(m.synthesize_proof(&tr, t).is_err());
}

// Shortest accepting length by plain iterative deepening, no memo, no pruning.
fn naive_shortest(m: &Machine, id: &[Triplet], bound: usize) -> Option<usize> {
    fn go(m: &Machine, id: &mut Vec<Triplet>, left: usize) -> bool {
        if m.accepting(id) {
            return true;
        }
        if left == 0 {
            return false;
        }
        for pos in 0..id.len() {
            let t = id[pos];
            for ins in &m.instrs {
                if let Some(out) = ins.apply(t) {
                    let mut next = id.clone();
                    next.swap_remove(pos);
                    next.extend(out);
                    if go(m, &mut next, left - 1) {
                        return true;
                    }
                }
            }
        }
        false
    }
    (0..=bound).find(|&d| go(m, &mut id.to_vec(), d))
}

#[test]
fn pruned_search_matches_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut accepted = 0;
    for _ in 0..3000 {
        let m = random_machine(&mut rng, 3, 4);
        let id = random_id(&mut rng, &m, 2);
        let fast = match m.simulate(&id, 6) {
            SimOutcome::Accepted(tr) => Some(tr.steps.len()),
            SimOutcome::NoAccept { .. } => None,
        };
        accepted += usize::from(fast.is_some());
        assert_eq!(fast, naive_shortest(&m, &id, 6), "{m}");
    }
    assert!(accepted > 50, "{accepted}");
}
