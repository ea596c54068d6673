//! Acceptance run: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use llwb::coherence::{
    bang_with_bijection, build_space, check_comonad_laws, check_comonoid_laws, enumerate_stable, interpret_proof,
    AtomEnv, CoherenceSpace, FunctionTable, Trace,
};
use llwb::cutelim::normalize_labeled;
use llwb::fixtures::proof_fixtures;
use llwb::gen::{for_each_sequent, mall_formulas_by_size, random_cut_composed, random_mall_formula, random_mall_sequent};
use llwb::intern::Universe;
use llwb::labeled::Labeled;
use llwb::lambda::{beta_step, is_affine, random_affine_term, Term};
use llwb::mall::{oracle_provable, prove_mall, Oracle, ProveOutcome, Prover, SearchLimits};
use llwb::phase::{random_model, PhaseModel};
use llwb::proof::{check_proof, parse_proof, write_proof, Proof};
use llwb::syntax::{neg, nnf, parse_sequent, Formula, Sequent};
use llwb::tcm::{example_chain, example_fork, random_id, random_machine, Machine, SimOutcome, Triplet};

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn run<T>(id: u8, name: &str, failed: &mut Vec<u8>, f: impl FnOnce() -> (Verdict, T)) -> Option<T> {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let (v, out) = match res {
        Ok((v, out)) => (v, Some(out)),
        Err(e) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (verdict(false, format!("panicked: {}", msg.unwrap_or_default())), None)
        }
    };
    let tag = if v.ok { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id:>2} {name}: {} ({secs:.2}s)", v.detail);
    if !v.ok {
        failed.push(id);
    }
    out
}

fn seq(text: &str) -> Sequent {
    let s = parse_sequent(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    Sequent::new(s.formulas().iter().map(nnf).collect())
}

fn fixture(name: &str) -> Proof {
    proof_fixtures().into_iter().find(|f| f.name == name).unwrap_or_else(|| panic!("no fixture {name}")).proof
}

// ---------------------------------------------------------------- 1

const DISPLAYED: [(&str, &str); 5] = [
    ("distributivity", "|- (a*(b+c))^, (a*b)+(a*c)"),
    ("par_reversibility", "|- a^*b^, a, b"),
    ("with_reversibility", "|- a, a^+b^"),
    ("digging", "|- ?a, a^"),
    ("bang_with_to_tensor", "|- ?a^ @ ?b^, !(a&b)"),
];

fn fixture_fidelity() -> (Verdict, ()) {
    let start = Instant::now();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/proofs");
    let mut bad = Vec::new();
    for (name, conclusion) in DISPLAYED {
        let p = fixture(name);
        let text = write_proof(&p);
        let reparsed = parse_proof(&text).map_err(|e| e.to_string());
        let shipped = std::fs::read_to_string(dir.join(format!("{name}.llp")))
            .map_err(|e| e.to_string())
            .and_then(|t| parse_proof(&t).map_err(|e| e.to_string()));
        for (what, q) in [("encoded", reparsed), ("shipped", shipped)] {
            match q {
                Err(e) => bad.push(format!("{name} {what}: {e}")),
                Ok(q) => {
                    let r = check_proof(&q);
                    if !r.ok() {
                        bad.push(format!("{name} {what}: {r}"));
                    } else if q != p {
                        bad.push(format!("{name} {what}: differs from the builder"));
                    } else if q.conclusion() != &seq(conclusion) {
                        bad.push(format!("{name} {what}: concludes {}", q.conclusion()));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && elapsed < Duration::from_secs(1);
    let detail = if bad.is_empty() {
        format!("{} derivations encoded, reparsed and checked in {:.0} ms (limit 1 s)", DISPLAYED.len(), elapsed.as_secs_f64() * 1e3)
    } else {
        bad.join("; ")
    };
    (verdict(ok, detail), ())
}

// ---------------------------------------------------------------- 2

/// Provable sequents of the exhaustive sweep, stored flat.
struct Sweep {
    universe: Universe,
    ids: Vec<u32>,
    ends: Vec<usize>,
}

impl Sweep {
    fn iter(&self) -> impl Iterator<Item = &[u32]> {
        let starts = std::iter::once(0).chain(self.ends.iter().copied());
        starts.zip(self.ends.iter().copied()).map(|(a, b)| &self.ids[a..b])
    }
}

// Number of multisets of total size ≤ max over `counts[s]` formulas of
// size s, by the product of (1 - x^s)^-counts[s].
fn multiset_count(counts: &[u128], max: usize) -> u128 {
    let mut poly = vec![0u128; max + 1];
    poly[0] = 1;
    for (s, &c) in counts.iter().enumerate().skip(1) {
        for _ in 0..c {
            for k in s..=max {
                poly[k] += poly[k - s];
            }
        }
    }
    poly.iter().sum()
}

// MALL formulas over two atoms by node count: 4 literals and 4 units,
// then four binary connectives.
fn formula_counts(max: usize) -> Vec<u128> {
    let mut c = vec![0u128; max + 1];
    c[1] = 8;
    for s in 2..=max {
        c[s] = (1..s - 1).map(|l| 4 * c[l] * c[s - 1 - l]).sum();
    }
    c
}

fn prover_oracle() -> (Verdict, Sweep) {
    let start = Instant::now();
    let mut universe = Universe::new();
    let by_size = mall_formulas_by_size(&mut universe, &["a", "b"], 8);
    let limits = SearchLimits { max_visited_sequents: u64::MAX, time_budget: Duration::from_secs(3600) };
    let mut prover = Prover::new(limits);
    let mut oracle = Oracle::new();
    let (mut total, mut mismatches, mut disagreements) = (0u128, 0, Vec::new());
    let (mut ids, mut ends) = (Vec::new(), Vec::new());
    for_each_sequent(&by_size, 8, |s| {
        total += 1;
        let p = prover.decide(&universe, s).ok();
        let o = oracle.decide(&universe, s).ok();
        if p.is_none() || p != o {
            mismatches += 1;
            if disagreements.len() < 5 {
                let shown: Vec<String> = s.iter().map(|&i| universe.to_formula(i).to_string()).collect();
                disagreements.push(format!("|- {}: prover {p:?} oracle {o:?}", shown.join(", ")));
            }
            return;
        }
        if p == Some(true) {
            ids.extend_from_slice(s);
            ends.push(ids.len());
        }
    });
    let expected = multiset_count(&formula_counts(8), 8);
    let sweep_time = start.elapsed();

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut random_bad = 0;
    let mut random_provable = 0;
    let samples = 500;
    for _ in 0..samples {
        let s = random_mall_sequent(&mut rng, &["a", "b"], 1, 12);
        let o = oracle_provable(&s).expect("within the oracle bound");
        match prove_mall(&s, SearchLimits::default()) {
            Ok(ProveOutcome::Proof(p)) if o && check_proof(&p).ok() && p.conclusion() == &s => random_provable += 1,
            Ok(ProveOutcome::NotProvable) if !o => {}
            other => {
                random_bad += 1;
                mismatches += 1;
                if disagreements.len() < 5 {
                    disagreements.push(format!("{s}: prover {other:?} oracle {o}"));
                }
            }
        }
    }
    let lem = matches!(prove_mall(&seq("|- a @ a^"), SearchLimits::default()), Ok(ProveOutcome::Proof(_)));
    let plus = matches!(prove_mall(&seq("|- a + a^"), SearchLimits::default()), Ok(ProveOutcome::NotProvable));
    let elapsed = start.elapsed();
    let ok = mismatches == 0
        && random_bad == 0
        && total == expected
        && lem
        && plus
        && elapsed < Duration::from_secs(300);
    let detail = format!(
        "{total} exhaustive sequents (expected {expected}), {} provable, in {:.1}s; {samples} random at size <= 12, {random_provable} provable; |- a @ a^ provable: {lem}; |- a + a^ unprovable: {plus}; {mismatches} disagreements{}",
        ends.len(),
        sweep_time.as_secs_f64(),
        if disagreements.is_empty() { String::new() } else { format!(": {}", disagreements.join("; ")) }
    );
    (verdict(ok, detail), Sweep { universe, ids, ends })
}

// ---------------------------------------------------------------- 4

fn term_nodes(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::Abs(_, b) => 1 + term_nodes(b),
        Term::App(f, a) => 1 + term_nodes(f) + term_nodes(a),
    }
}

fn affine_steps() -> (Verdict, ()) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut bad, mut steps_total, mut max_size, mut with_redex) = (Vec::new(), 0, 0, 0);
    for i in 0..100 {
        let t = random_affine_term(&mut rng, 50);
        let size = term_nodes(&t);
        max_size = max_size.max(size);
        if size > 50 || !is_affine(&t) {
            bad.push(format!("term {i} is not an affine term of size <= 50: {t}"));
            continue;
        }
        let (mut cur, mut steps) = (t.clone(), 0);
        while let Some(next) = beta_step(&cur) {
            steps += 1;
            if term_nodes(&next) >= term_nodes(&cur) {
                bad.push(format!("size did not shrink: {cur} -> {next}"));
                break;
            }
            if steps > size {
                bad.push(format!("{steps} steps exceed size {size} for {t}"));
                break;
            }
            cur = next;
        }
        with_redex += usize::from(steps > 0);
        steps_total += steps;
    }
    let detail = format!(
        "100 terms (max size {max_size}, {with_redex} with a redex), {steps_total} steps in total, {} violations",
        bad.len()
    );
    (verdict(bad.is_empty(), detail), ())
}

// ---------------------------------------------------------------- 5

// Phase operations computed from the multiplication table alone.
struct Naive<'m> {
    m: &'m PhaseModel,
    n: usize,
}

impl<'m> Naive<'m> {
    fn new(m: &'m PhaseModel) -> Self {
        Naive { m, n: m.monoid().len() }
    }

    fn mul(&self, p: usize, q: usize) -> usize {
        self.m.monoid().mul(p, q)
    }

    fn orth(&self, x: u64) -> u64 {
        (0..self.n)
            .filter(|&q| (0..self.n).all(|p| x >> p & 1 == 0 || self.m.bot() >> self.mul(p, q) & 1 == 1))
            .fold(0, |acc, q| acc | 1 << q)
    }

    fn prod(&self, x: u64, y: u64) -> u64 {
        let mut out = 0;
        for p in (0..self.n).filter(|&p| x >> p & 1 == 1) {
            for q in (0..self.n).filter(|&q| y >> q & 1 == 1) {
                out |= 1 << self.mul(p, q);
            }
        }
        out
    }

    fn biorth(&self, x: u64) -> u64 {
        self.orth(self.orth(x))
    }

    fn interp(&self, f: &Formula) -> u64 {
        let full = (1u64 << self.n) - 1;
        match f {
            Formula::Atom(a) => self.m.atoms()[a.as_str()],
            Formula::DualAtom(a) => self.orth(self.m.atoms()[a.as_str()]),
            Formula::One => self.biorth(1 << self.m.monoid().unit()),
            Formula::Bot => self.m.bot(),
            Formula::Top => full,
            Formula::Zero => self.biorth(0),
            Formula::Tensor(a, b) => self.biorth(self.prod(self.interp(a), self.interp(b))),
            Formula::Par(a, b) => self.orth(self.prod(self.orth(self.interp(a)), self.orth(self.interp(b)))),
            Formula::With(a, b) => self.interp(a) & self.interp(b),
            Formula::Plus(a, b) => self.biorth(self.interp(a) | self.interp(b)),
            other => panic!("not a MALL formula: {other}"),
        }
    }
}

fn phase_soundness(sweep: &Sweep) -> (Verdict, ()) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let models = 100;
    let (mut checks, mut invalid, mut counter) = (0u64, 0u64, Vec::new());
    let mut max_elems = 0;
    for _ in 0..models {
        let m = random_model(&mut rng, 6, &["a", "b"], false);
        max_elems = max_elems.max(m.monoid().len());
        let facts = m.interp_universe(&sweep.universe).expect("atoms a, b are interpreted");
        for s in sweep.iter() {
            checks += 1;
            if m.is_valid_ids(&facts, s) {
                continue;
            }
            invalid += 1;
            if counter.len() < 3 {
                let shown: Vec<String> = s.iter().map(|&i| sweep.universe.to_formula(i).to_string()).collect();
                counter.push(format!("|- {} in\n{}", shown.join(", "), m.to_text()));
            }
        }
    }

    // ⊢ A, B valid iff A⊥ ⊆ B
    let draws = 1000;
    let (mut lemma_equiv, mut valid_pairs) = (0, 0);
    for _ in 0..draws {
        let m = random_model(&mut rng, 6, &["a", "b"], false);
        let nv = Naive::new(&m);
        let (sa, sb) = (2 * rng.gen_range(0..4) + 1, 2 * rng.gen_range(0..4) + 1);
        let a = random_mall_formula(&mut rng, &["a", "b"], sa);
        let b = random_mall_formula(&mut rng, &["a", "b"], sb);
        let valid = m.is_valid(&Sequent::new(vec![a.clone(), b.clone()])).expect("MALL");
        let included = nv.interp(&neg(&a)) & !nv.interp(&b) == 0;
        valid_pairs += usize::from(valid);
        if valid != included {
            lemma_equiv += 1;
        }
    }

    // X⊥⊥ Y⊥⊥ ⊆ (XY)⊥⊥
    let mut lemma_incl = 0;
    for _ in 0..draws {
        let m = random_model(&mut rng, 6, &[], false);
        let nv = Naive::new(&m);
        let full = (1u64 << nv.n) - 1;
        let (x, y) = (rng.gen::<u64>() & full, rng.gen::<u64>() & full);
        let lhs = nv.prod(nv.biorth(x), nv.biorth(y));
        if lhs & !nv.biorth(nv.prod(x, y)) != 0 || m.orth(x) != nv.orth(x) {
            lemma_incl += 1;
        }
    }

    let ok = invalid == 0 && lemma_equiv == 0 && lemma_incl == 0 && max_elems <= 6;
    let mut detail = format!(
        "{models} models (|P| <= {max_elems}) x {} provable sequents = {checks} checks, {invalid} counterexamples; {draws} draws of |- A, B vs A^ <= B ({valid_pairs} valid), {lemma_equiv} mismatches; {draws} draws of X^^Y^^ <= (XY)^^, {lemma_incl} violations",
        sweep.ends.len(),
    );
    if !counter.is_empty() {
        detail.push_str(&format!("\n{}", counter.join("\n")));
    }
    (verdict(ok, detail), ())
}

// ---------------------------------------------------------------- 3

const FUEL: usize = 100_000;

fn cut_corpus() -> Vec<(String, Proof)> {
    let mut out: Vec<(String, Proof)> = proof_fixtures().into_iter().map(|f| (f.name.to_string(), f.proof)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut k = 0;
    while k < 200 {
        if let Some(p) = random_cut_composed(&mut rng, &["a", "b"], 7, 9, 1 + k % 3, 200) {
            out.push((format!("random #{k}"), p));
            k += 1;
        }
    }
    out
}

fn cut_elimination(corpus: &[(String, Proof)]) -> (Verdict, ()) {
    let (mut bad, mut steps, mut max_steps, mut intermediate) = (Vec::new(), 0, 0, 0);
    for (name, p) in corpus {
        if !check_proof(p).ok() {
            bad.push(format!("{name}: input does not check"));
            continue;
        }
        let goal = p.conclusion().clone();
        let mut l = Labeled::from_proof(p).expect("checked proofs label");
        let mut first_bad: Option<String> = None;
        let res = normalize_labeled(&mut l, FUEL, |step, now| {
            intermediate += 1;
            if first_bad.is_some() {
                return;
            }
            let q = now.to_proof();
            let r = check_proof(&q);
            if !r.ok() {
                first_bad = Some(format!("{name}: after {step}: {r}"));
            } else if q.conclusion() != &goal {
                first_bad = Some(format!("{name}: after {step}: conclusion became {}", q.conclusion()));
            }
        });
        match (first_bad, res) {
            (Some(b), _) => bad.push(b),
            (None, Err(st)) => bad.push(format!("{name}: not normal after {} steps", st.steps)),
            (None, Ok(st)) => {
                let q = l.to_proof();
                if !q.is_cut_free() || q.conclusion() != &goal || !check_proof(&q).ok() {
                    bad.push(format!("{name}: bad normal form"));
                }
                steps += st.steps;
                max_steps = max_steps.max(st.steps);
            }
        }
    }
    let detail = format!(
        "{} proofs ({} fixtures + 200 cut-composed), {steps} steps (max {max_steps}, fuel {FUEL}), {intermediate} intermediate proofs checked, {} violations{}",
        corpus.len(),
        corpus.len() - 200,
        bad.len(),
        if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")) }
    );
    (verdict(bad.is_empty(), detail), ())
}

// ---------------------------------------------------------------- 6

fn coherence_invariance(corpus: &[(String, Proof)]) -> (Verdict, ()) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let envs_per_proof = 3;
    let (mut compared, mut bad) = (0u64, Vec::new());
    for (name, p) in corpus {
        // cut formulas may mention atoms the conclusion does not
        let nodes: Vec<&Proof> = p.paths().iter().map(|q| p.node(q).expect("own path")).collect();
        let formulas: Vec<&Formula> = nodes.iter().flat_map(|n| n.conclusion().formulas()).collect();
        for _ in 0..envs_per_proof {
            let env = AtomEnv::random_for(&mut rng, &formulas, 0, 3);
            let before = match interpret_proof(p, &env) {
                Ok(v) => v,
                Err(e) => {
                    bad.push(format!("{name}: {e}"));
                    continue;
                }
            };
            let mut l = Labeled::from_proof(p).expect("checked proofs label");
            let mut first_bad = None;
            let _ = normalize_labeled(&mut l, FUEL, |step, now| {
                if first_bad.is_some() {
                    return;
                }
                compared += 1;
                match interpret_proof(&now.to_proof(), &env) {
                    Ok(v) if v == before => {}
                    Ok(v) => first_bad = Some(format!("{name}: after {step}: {} tokens became {}", before.len(), v.len())),
                    Err(e) => first_bad = Some(format!("{name}: after {step}: {e}")),
                }
            });
            bad.extend(first_bad);
        }
    }
    let detail = format!(
        "{} proofs x {envs_per_proof} atom envs (webs of 0..=3 tokens), {compared} reduction steps compared, {} violations{}",
        corpus.len(),
        bad.len(),
        if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")) }
    );
    (verdict(bad.is_empty(), detail), ())
}

// ---------------------------------------------------------------- 7

// Cliques of !E -o E' read back as traces.
fn lolli_traces(dom: &CoherenceSpace, cod: &CoherenceSpace) -> Vec<Trace> {
    let env = AtomEnv::new().with("d", dom.clone()).with("c", cod.clone());
    let f = Formula::par(Formula::why_not(Formula::DualAtom("d".into())), Formula::Atom("c".into()));
    let space = build_space(&env, &f).expect("lolli space");
    space
        .cliques()
        .into_iter()
        .map(|c| {
            let mut t: Trace = space
                .tokens_of(&c)
                .iter()
                .map(|tok| {
                    let (x, e) = tok.as_pair().expect("pair token");
                    let mask = x.as_set().expect("set token").iter().fold(0u64, |m, u| m | 1 << dom.index_of(u).unwrap());
                    (mask, cod.index_of(e).unwrap())
                })
                .collect();
            t.sort_unstable();
            t
        })
        .collect()
}

fn subset_trace(a: &Trace, b: &Trace) -> bool {
    a.iter().all(|p| b.contains(p))
}

fn trace_fun() -> (Verdict, ()) {
    let spaces = CoherenceSpace::all_up_to(2);
    let (mut pairs, mut functions, mut order_pairs, mut bad) = (0, 0, 0u64, Vec::new());
    for dom in &spaces {
        for cod in &spaces {
            pairs += 1;
            let fs = enumerate_stable(dom, cod);
            functions += fs.len();
            let traces: Vec<Trace> = fs.iter().map(|f| f.trace().expect("stable")).collect();
            for (f, t) in fs.iter().zip(&traces) {
                if FunctionTable::fun(dom, cod, t).ok().as_ref() != Some(f) {
                    bad.push(format!("fun(trace f) != f on {} -> {} tokens", dom.len(), cod.len()));
                }
            }
            let cliques = lolli_traces(dom, cod);
            if cliques.len() != fs.len() {
                bad.push(format!("{} stable functions but {} cliques of !E -o E'", fs.len(), cliques.len()));
            }
            for phi in &cliques {
                match FunctionTable::fun(dom, cod, phi).and_then(|g| g.trace()) {
                    Ok(t) if &t == phi => {}
                    _ => bad.push(format!("trace(fun phi) != phi for {phi:?}")),
                }
            }
            for (f, tf) in fs.iter().zip(&traces) {
                for (g, tg) in fs.iter().zip(&traces) {
                    order_pairs += 1;
                    if f.stable_le(g) != subset_trace(tf, tg) {
                        bad.push(format!("stable order and trace inclusion differ for {tf:?} and {tg:?}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{pairs} space pairs (webs <= 2), {functions} stable functions, {order_pairs} order pairs, {} violations{}",
        bad.len(),
        if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")) }
    );
    (verdict(bad.is_empty(), detail), ())
}

// ---------------------------------------------------------------- 8

fn laws() -> (Verdict, ()) {
    let spaces = CoherenceSpace::all_up_to(3);
    let (mut checked, mut violations, mut bounded) = (0u64, Vec::new(), Vec::new());
    for (i, e) in spaces.iter().enumerate() {
        let monad = check_comonad_laws(e, 1 << 22).expect("comonad check");
        let monoid = check_comonoid_laws(e).expect("comonoid check");
        checked += monad.checked + monoid.checked;
        for r in [&monad, &monoid] {
            violations.extend(r.violations.iter().map(|v| format!("space {i}: {v}")));
            if !r.exhaustive {
                bounded.extend(r.notes.iter().map(|n| format!("space {i} ({} tokens): {n}", e.len())));
            }
        }
    }
    let ok = violations.is_empty() && bounded.is_empty();
    let mut detail = format!("{} spaces (webs <= 3), {checked} target tokens compared, {} violations", spaces.len(), violations.len());
    if !violations.is_empty() {
        detail.push_str(&format!(": {}", violations.iter().take(3).cloned().collect::<Vec<_>>().join("; ")));
    }
    if !bounded.is_empty() {
        detail.push_str(&format!("; NOT exhaustive: {}", bounded.join("; ")));
    }
    (verdict(ok, detail), ())
}

// ---------------------------------------------------------------- 9

fn tcm_proofs(m: &Machine, id: &[Triplet], bad: &mut Vec<String>) -> Option<usize> {
    let SimOutcome::Accepted(tr) = m.simulate(id, 12) else { return None };
    for &t in id {
        match m.synthesize_proof(&tr, t) {
            Ok(p) => {
                let r = check_proof(&p);
                if !r.ok() {
                    bad.push(format!("{m}: {r}"));
                } else if p.conclusion() != &m.full_sequent(t) {
                    bad.push(format!("{m}: wrong conclusion {}", p.conclusion()));
                }
            }
            Err(e) => bad.push(format!("{m}: {e}")),
        }
    }
    Some(tr.steps.len())
}

fn tcm_forward() -> (Verdict, ()) {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut shipped = 0;
    for m in [example_chain(), example_fork()] {
        let t = m.triplet("qi", 0, 0).expect("initial state");
        if tcm_proofs(&m, &[t], &mut bad).is_some() {
            shipped += 1;
        } else {
            bad.push(format!("shipped machine does not accept:\n{m}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut accepted, mut draws, mut triplets) = (0, 0, 0);
    while accepted < 50 {
        draws += 1;
        let m = random_machine(&mut rng, 4, 5);
        let id = random_id(&mut rng, &m, 3);
        if let Some(len) = tcm_proofs(&m, &id, &mut bad) {
            if len > 0 {
                accepted += 1;
                triplets += id.len();
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = bad.is_empty() && shipped == 2 && elapsed < Duration::from_secs(60);
    let detail = format!(
        "{shipped} shipped machines, {accepted} random accepting machines ({draws} draws, {triplets} initial triplets), {} failures{}",
        bad.len(),
        if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")) }
    );
    (verdict(ok, detail), ())
}

// ---------------------------------------------------------------- 10

fn count_cliques(e: &CoherenceSpace) -> usize {
    (0u64..1 << e.len())
        .filter(|&x| (0..e.len()).all(|i| (0..e.len()).all(|j| x >> i & 1 == 0 || x >> j & 1 == 0 || e.coherent(i, j))))
        .count()
}

fn exponential_iso() -> (Verdict, ()) {
    let spaces = CoherenceSpace::all_up_to(3);
    let mut bad = Vec::new();
    let mut pairs = 0;
    for a in &spaces {
        for b in &spaces {
            pairs += 1;
            // the web of !(a & b) is the finite cliques of a & b, i.e. pairs of cliques
            let expected = count_cliques(a) * count_cliques(b);
            match bang_with_bijection(a, b) {
                Ok(n) if n == expected => {}
                Ok(n) => bad.push(format!("{n} tokens, expected {expected}")),
                Err(e) => bad.push(e),
            }
        }
    }
    for (name, conclusion) in [("bang_with_to_tensor", "|- ?a^ @ ?b^, !(a&b)"), ("tensor_to_bang_with", "|- !a*!b, ?(a^+b^)")] {
        let p = fixture(name);
        if !check_proof(&p).ok() || p.conclusion() != &seq(conclusion) {
            bad.push(format!("{name} does not prove {conclusion}"));
        }
    }
    let detail = format!(
        "{pairs} atom web pairs (<= 3 tokens) give bijections; both directions checked; {} failures{}",
        bad.len(),
        if bad.is_empty() { String::new() } else { format!(": {}", bad.iter().take(3).cloned().collect::<Vec<_>>().join("; ")) }
    );
    (verdict(bad.is_empty(), detail), ())
}

fn main() -> ExitCode {
    let mut failed = Vec::new();
    run(1, "fixture fidelity", &mut failed, fixture_fidelity);
    let sweep = run(2, "prover/oracle agreement", &mut failed, prover_oracle);
    let corpus = cut_corpus();
    run(3, "cut elimination", &mut failed, || cut_elimination(&corpus));
    run(4, "affine reduction", &mut failed, affine_steps);
    match &sweep {
        Some(s) => {
            run(5, "phase soundness", &mut failed, || phase_soundness(s));
        }
        None => {
            println!("FAIL criterion  5 phase soundness: no corpus from criterion 2");
            failed.push(5);
        }
    }
    drop(sweep);
    run(6, "coherence invariance", &mut failed, || coherence_invariance(&corpus));
    run(7, "trace/fun isomorphism", &mut failed, trace_fun);
    run(8, "comonad and comonoid laws", &mut failed, laws);
    run(9, "counter machine proofs", &mut failed, tcm_forward);
    run(10, "!(a&b) and !a*!b", &mut failed, exponential_iso);
    println!("{}/10 criteria passed", 10 - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
