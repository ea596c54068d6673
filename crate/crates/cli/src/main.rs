use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use llwb::coherence::{
    check_comonad_laws, check_comonoid_laws, enumerate_stable, interpret_proof, is_clique_in, AtomEnv,
    CoherenceSpace, FunctionTable,
};
use llwb::corpus::{run_corpus, CorpusOptions, Manifest};
use llwb::cutelim::normalize_traced;
use llwb::lambda::{beta_normalize, church_value, infer, translate, typecheck, SimpleType, Term, TypingDerivation};
use llwb::mall::{prove_mall, ProveOutcome, SearchLimits};
use llwb::phase::PhaseModel;
use llwb::proof::{check_proof, parse_proof, pretty, write_proof, Proof};
use llwb::syntax::{is_multiplicative, neg, nnf, parse_formula, parse_sequent, polarity, size, Sequent};
use llwb::tcm::{Machine, SimOutcome};

mod out;

use out::{budget, input, Fail, Out, Status};

#[derive(Parser)]
#[command(name = "llwb", version, about = "Linear logic workbench")]
struct Cli {
    /// Aligned human-readable output instead of key=value lines.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula and report its normal form, dual, size and polarity.
    Formula { text: String },
    /// Check a proof file.
    Check { proof: PathBuf },
    /// Decide an exponential-free sequent.
    Prove {
        sequent: String,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the proof found here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Eliminate the cuts of a proof.
    Cutelim {
        proof: PathBuf,
        /// Print every reduction step.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        /// Write the normal form here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Simply typed λ-terms and their translation into proofs.
    Lam {
        #[command(subcommand)]
        cmd: LamCmd,
    },
    /// Two-counter machines and their encoding as sequents.
    Tcm {
        #[command(subcommand)]
        cmd: TcmCmd,
    },
    /// Phase models.
    Phase {
        #[command(subcommand)]
        cmd: PhaseCmd,
    },
    /// Coherence spaces.
    Coh {
        #[command(subcommand)]
        cmd: CohCmd,
    },
    /// Run every item of a corpus manifest against its tags.
    Corpus {
        manifest: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        fuel: usize,
        /// Phase models per valid-all-models item.
        #[arg(long, default_value_t = 40)]
        models: usize,
        /// Atom environments per invariant-interp item.
        #[arg(long, default_value_t = 3)]
        envs: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct LimitArgs {
    /// Sequents the prover may visit.
    #[arg(long, default_value_t = 5_000_000)]
    max_visited: u64,
    /// Prover time budget in milliseconds.
    #[arg(long, default_value_t = 10_000)]
    time_ms: u64,
}

impl LimitArgs {
    fn limits(self) -> SearchLimits {
        SearchLimits { max_visited_sequents: self.max_visited, time_budget: Duration::from_millis(self.time_ms) }
    }
}

#[derive(Subcommand)]
enum LamCmd {
    /// Check a closed term against a type, or infer one.
    Typecheck {
        term: String,
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Translate a typed closed term into a proof.
    Translate {
        term: String,
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// β-normalize a term.
    Norm {
        term: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
}

#[derive(Subcommand)]
enum TcmCmd {
    /// Search for an accepting run.
    Simulate {
        machine: PathBuf,
        /// Starting description, e.g. "(qi,1,0) (q1,0,2)". Defaults to (init,0,0).
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = 12)]
        bound: usize,
    },
    /// Print the theory and the sequent encoding a triplet.
    Encode {
        machine: PathBuf,
        /// A single triplet such as "(qi,0,0)". Defaults to (init,0,0).
        #[arg(long)]
        id: Option<String>,
    },
    /// Build and check a proof of the encoding from an accepting run.
    ProveAccepting {
        machine: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = 12)]
        bound: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PhaseCmd {
    /// Parse a model and check the topolinear axioms of its closed facts.
    CheckModel { model: PathBuf },
    /// Decide whether a sequent is valid in a model.
    Valid {
        sequent: String,
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Subcommand)]
enum CohCmd {
    /// Interpret a proof as a clique.
    Interpret {
        proof: PathBuf,
        #[arg(long)]
        atoms: PathBuf,
    },
    /// Check the comonad and comonoid laws on every space up to a web size.
    CheckLaws {
        #[arg(long, default_value_t = 2)]
        max_web: usize,
        /// Largest `!!!E` token count compared per space.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u64,
    },
    /// Check that trace and fun are inverse and order-preserving.
    TraceRoundtrip {
        #[arg(long, default_value_t = 2)]
        max_web: usize,
    },
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<Proof, Fail> {
    parse_proof(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_checked(path: &Path) -> Result<Proof, Fail> {
    let p = load_proof(path)?;
    let r = check_proof(&p);
    if r.ok() {
        Ok(p)
    } else {
        Err(input(format!("{}: {r}", path.display())))
    }
}

fn sequent(text: &str) -> Result<Sequent, Fail> {
    parse_sequent(text).map_err(input)
}

fn formula(o: &mut Out, text: &str) -> Result<Status, Fail> {
    let f = parse_formula(text).map_err(input)?;
    let n = nnf(&f);
    o.kv("formula", &f);
    o.kv("nnf", &n);
    o.kv("dual", neg(&n));
    o.kv("size", size(&n));
    o.kv("polarity", format!("{:?}", polarity(&n)).to_lowercase());
    let family = match is_multiplicative(&n) {
        Some(true) => "multiplicative",
        Some(false) => "additive",
        None => "none",
    };
    o.kv("family", family);
    o.kv("exponential_free", n.is_exponential_free());
    Ok(Status::Success)
}

fn check(o: &mut Out, path: &Path) -> Result<Status, Fail> {
    let p = load_proof(path)?;
    let r = check_proof(&p);
    o.kv("conclusion", p.conclusion());
    o.kv("nodes", p.node_count());
    o.kv("cuts", p.count_cuts());
    o.kv("ok", r.ok());
    for f in &r.failures {
        o.kv("failure", format!("{}: {}", f.path, f.message));
    }
    o.block("proof", pretty(&p));
    Ok(if r.ok() { Status::Success } else { Status::Negative })
}

fn prove(o: &mut Out, text: &str, limits: SearchLimits, emit: Option<&Path>) -> Result<Status, Fail> {
    let s = sequent(text)?;
    o.kv("sequent", &s);
    match prove_mall(&s, limits).map_err(input)? {
        ProveOutcome::Proof(p) => {
            o.kv("result", "provable");
            o.kv("nodes", p.node_count());
            if let Some(path) = emit {
                write(path, &write_proof(&p))?;
                o.kv("emitted", path.display());
            }
            o.block("proof", pretty(&p));
            Ok(Status::Success)
        }
        ProveOutcome::NotProvable => {
            o.kv("result", "not-provable");
            Ok(Status::Negative)
        }
        ProveOutcome::BudgetExceeded => {
            o.kv("result", "budget-exceeded");
            Ok(Status::Budget)
        }
    }
}

fn cutelim(o: &mut Out, path: &Path, trace: bool, fuel: usize, emit: Option<&Path>) -> Result<Status, Fail> {
    let p = load_checked(path)?;
    o.kv("conclusion", p.conclusion());
    o.kv("nodes_before", p.node_count());
    o.kv("cuts_before", p.count_cuts());
    let mut steps = Vec::new();
    let res = normalize_traced(&p, fuel, |s| {
        if trace {
            steps.push(s.to_string());
        }
    });
    for (i, s) in steps.iter().enumerate() {
        o.kv("step", format!("{} {s}", i + 1));
    }
    match res {
        Ok((q, stats)) => {
            o.kv("steps", stats.steps);
            o.kv("duplications", stats.duplications);
            o.kv("nodes_after", q.node_count());
            o.kv("cuts_after", q.count_cuts());
            let r = check_proof(&q);
            o.kv("checked", r.ok());
            if let Some(path) = emit {
                write(path, &write_proof(&q))?;
                o.kv("emitted", path.display());
            }
            o.block("normal form", pretty(&q));
            Ok(if r.ok() { Status::Success } else { Status::Negative })
        }
        Err(e) => {
            o.kv("steps", e.stats.steps);
            o.kv("cuts_after", e.stats.final_cut_count);
            o.kv("result", "fuel-exhausted");
            Ok(Status::Budget)
        }
    }
}

fn derivation(term: &str, ty: Option<&str>) -> Result<Result<TypingDerivation, String>, Fail> {
    let t = Term::parse(term).map_err(input)?;
    if !t.is_closed() {
        return Err(input(format!("free variables: {:?}", t.free_vars())));
    }
    let d = match ty {
        Some(ty) => typecheck(&[], &t, &SimpleType::parse(ty).map_err(input)?),
        None => infer(&[], &t),
    };
    Ok(d.map_err(|e| e.to_string()))
}

fn lam(o: &mut Out, cmd: &LamCmd) -> Result<Status, Fail> {
    match cmd {
        LamCmd::Typecheck { term, ty } => match derivation(term, ty.as_deref())? {
            Ok(d) => {
                o.kv("term", &d.term);
                o.kv("type", &d.ty);
                o.kv("typed", true);
                Ok(Status::Success)
            }
            Err(e) => {
                o.kv("typed", false);
                o.kv("error", e);
                Ok(Status::Negative)
            }
        },
        LamCmd::Translate { term, ty, emit } => {
            let d = match derivation(term, ty.as_deref())? {
                Ok(d) => d,
                Err(e) => {
                    o.kv("typed", false);
                    o.kv("error", e);
                    return Ok(Status::Negative);
                }
            };
            let p = translate(&d).map_err(input)?;
            let r = check_proof(&p);
            o.kv("type", &d.ty);
            o.kv("conclusion", p.conclusion());
            o.kv("nodes", p.node_count());
            o.kv("cuts", p.count_cuts());
            o.kv("checked", r.ok());
            if let Some(path) = emit {
                write(path, &write_proof(&p))?;
                o.kv("emitted", path.display());
            }
            o.block("proof", pretty(&p));
            Ok(if r.ok() { Status::Success } else { Status::Negative })
        }
        LamCmd::Norm { term, fuel } => {
            let t = Term::parse(term).map_err(input)?;
            let r = beta_normalize(&t, *fuel);
            o.kv("normal_form", &r.term);
            o.kv("steps", r.steps);
            o.kv("normal", r.normal);
            if let Some(n) = church_value(&r.term) {
                o.kv("church", n);
            }
            Ok(if r.normal { Status::Success } else { Status::Budget })
        }
    }
}

fn machine_and_id(path: &Path, id: Option<&str>) -> Result<(Machine, Vec<llwb::tcm::Triplet>), Fail> {
    let m = Machine::parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let id = match id {
        Some(text) => m.parse_id(text).map_err(input)?,
        None => vec![m.triplet(&m.states[m.init], 0, 0).map_err(input)?],
    };
    Ok((m, id))
}

fn tcm(o: &mut Out, cmd: &TcmCmd) -> Result<Status, Fail> {
    match cmd {
        TcmCmd::Simulate { machine, id, bound } => {
            let (m, id) = machine_and_id(machine, id.as_deref())?;
            o.kv("start", m.show_id(&id));
            match m.simulate(&id, *bound) {
                SimOutcome::Accepted(tr) => {
                    o.kv("result", "accepted");
                    o.kv("steps", tr.steps.len());
                    for (k, s) in tr.steps.iter().enumerate() {
                        let ins = m.show_instr(&m.instrs[s.instr]);
                        o.kv("step", format!("{} {} on {} gives {}", k + 1, ins, m.show_triplet(s.triplet), m.show_id(&tr.ids[k + 1])));
                    }
                    Ok(Status::Success)
                }
                SimOutcome::NoAccept { explored } => {
                    o.kv("result", "no-accept");
                    o.kv("explored", explored);
                    Ok(Status::Negative)
                }
            }
        }
        TcmCmd::Encode { machine, id } => {
            let (m, id) = machine_and_id(machine, id.as_deref())?;
            let [t] = id[..] else { return Err(input("encode takes a single triplet")) };
            let (goal, theory) = m.encode(t);
            for f in &theory {
                o.kv("theory", f);
            }
            o.kv("goal", &goal);
            o.kv("sequent", m.full_sequent(t));
            Ok(Status::Success)
        }
        TcmCmd::ProveAccepting { machine, id, bound, emit } => {
            let (m, id) = machine_and_id(machine, id.as_deref())?;
            let [t] = id[..] else { return Err(input("prove-accepting takes a single triplet")) };
            let SimOutcome::Accepted(tr) = m.simulate(&id, *bound) else {
                o.kv("result", "no-accept");
                return Ok(Status::Negative);
            };
            let p = m.synthesize_proof(&tr, t).map_err(input)?;
            let r = check_proof(&p);
            o.kv("run_steps", tr.steps.len());
            o.kv("conclusion", p.conclusion());
            o.kv("nodes", p.node_count());
            o.kv("checked", r.ok());
            if let Some(path) = emit {
                write(path, &write_proof(&p))?;
                o.kv("emitted", path.display());
            }
            o.block("proof", pretty(&p));
            Ok(if r.ok() { Status::Success } else { Status::Negative })
        }
    }
}

fn load_model(path: &Path) -> Result<PhaseModel, Fail> {
    PhaseModel::parse(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn phase(o: &mut Out, cmd: &PhaseCmd) -> Result<Status, Fail> {
    match cmd {
        PhaseCmd::CheckModel { model } => {
            let m = load_model(model)?;
            o.kv("elements", m.monoid().len());
            o.kv("bot", m.show(m.bot()));
            o.kv("facts", m.all_facts().len());
            match m.closed() {
                None => {
                    o.kv("closed", "none");
                    Ok(Status::Success)
                }
                Some(cs) => {
                    o.kv("closed", cs.len());
                    let r = m.check_topolinear();
                    o.kv("topolinear", r.ok());
                    for (ax, msg) in &r.violations {
                        o.kv("violation", format!("axiom {ax}: {msg}"));
                    }
                    Ok(if r.ok() { Status::Success } else { Status::Negative })
                }
            }
        }
        PhaseCmd::Valid { sequent: text, model } => {
            let s = sequent(text)?;
            let m = load_model(model)?;
            let valid = m.is_valid(&s).map_err(input)?;
            o.kv("sequent", &s);
            o.kv("value", m.show(m.interp(&s.par_fold()).map_err(input)?));
            o.kv("valid", valid);
            Ok(if valid { Status::Success } else { Status::Negative })
        }
    }
}

fn coh(o: &mut Out, cmd: &CohCmd) -> Result<Status, Fail> {
    match cmd {
        CohCmd::Interpret { proof, atoms } => {
            let p = load_checked(proof)?;
            let env = AtomEnv::parse(&read(atoms)?).map_err(|e| input(format!("{}: {e}", atoms.display())))?;
            let x = interpret_proof(&p, &env).map_err(input)?;
            let tokens: Vec<_> = x.into_iter().collect();
            let clique = is_clique_in(&env, &p.conclusion().par_fold(), &tokens).map_err(input)?;
            o.kv("conclusion", p.conclusion());
            o.kv("tokens", tokens.len());
            for t in &tokens {
                o.kv("token", t);
            }
            o.kv("clique", clique);
            Ok(if clique { Status::Success } else { Status::Negative })
        }
        CohCmd::CheckLaws { max_web, budget: b } => {
            if *max_web > 3 {
                return Err(budget(format!("webs above 3 tokens are out of reach (asked {max_web})")));
            }
            let spaces = CoherenceSpace::all_up_to(*max_web);
            let (mut checked, mut violations, mut bounded) = (0u64, 0usize, 0usize);
            for (i, e) in spaces.iter().enumerate() {
                let monad = check_comonad_laws(e, *b).map_err(input)?;
                let monoid = check_comonoid_laws(e).map_err(input)?;
                for r in [&monad, &monoid] {
                    checked += r.checked;
                    violations += r.violations.len();
                    for v in &r.violations {
                        o.kv("violation", format!("space {i}: {v}"));
                    }
                    if !r.exhaustive {
                        bounded += 1;
                        for n in &r.notes {
                            o.kv("bounded", format!("space {i} ({} tokens): {n}", e.len()));
                        }
                    }
                }
            }
            o.kv("spaces", spaces.len());
            o.kv("compared", checked);
            o.kv("violations", violations);
            o.kv("exhaustive", bounded == 0);
            Ok(if violations > 0 {
                Status::Negative
            } else if bounded > 0 {
                Status::Budget
            } else {
                Status::Success
            })
        }
        CohCmd::TraceRoundtrip { max_web } => {
            if *max_web > 2 {
                return Err(budget(format!("stable functions are enumerated only for webs up to 2 (asked {max_web})")));
            }
            let spaces = CoherenceSpace::all_up_to(*max_web);
            let (mut pairs, mut functions, mut bad) = (0usize, 0usize, 0usize);
            for dom in &spaces {
                for cod in &spaces {
                    pairs += 1;
                    let fs = enumerate_stable(dom, cod);
                    functions += fs.len();
                    let traces: Vec<_> = fs.iter().map(|f| f.trace().map_err(input)).collect::<Result<_, _>>()?;
                    for (f, t) in fs.iter().zip(&traces) {
                        let back = FunctionTable::fun(dom, cod, t).ok();
                        if back.as_ref() != Some(f) || back.and_then(|g| g.trace().ok()).as_ref() != Some(t) {
                            bad += 1;
                            o.kv("violation", format!("roundtrip fails for trace {t:?}"));
                        }
                    }
                    for (f, tf) in fs.iter().zip(&traces) {
                        for (g, tg) in fs.iter().zip(&traces) {
                            let incl = tf.iter().all(|x| tg.contains(x));
                            if f.stable_le(g) != incl {
                                bad += 1;
                                o.kv("violation", format!("stable order differs from inclusion for {tf:?}, {tg:?}"));
                            }
                        }
                    }
                }
            }
            o.kv("space_pairs", pairs);
            o.kv("stable_functions", functions);
            o.kv("violations", bad);
            Ok(if bad == 0 { Status::Success } else { Status::Negative })
        }
    }
}

fn corpus(o: &mut Out, manifest: &Path, opts: &CorpusOptions) -> Result<Status, Fail> {
    let m = Manifest::load(manifest).map_err(input)?;
    let r = run_corpus(&m, opts);
    for item in &r.items {
        let verdict = match &item.result {
            Ok(()) => "pass".to_string(),
            Err(e) => format!("FAIL {e}"),
        };
        o.kv("item", format!("{} {} {verdict}", item.path.display(), item.tag.name()));
    }
    o.kv("total", r.items.len());
    o.kv("passed", r.passed());
    o.kv("failed", r.items.len() - r.passed());
    Ok(if r.ok() { Status::Success } else { Status::Negative })
}

fn dispatch(o: &mut Out, cmd: &Cmd) -> Result<Status, Fail> {
    match cmd {
        Cmd::Formula { text } => formula(o, text),
        Cmd::Check { proof } => check(o, proof),
        Cmd::Prove { sequent, limits, emit } => prove(o, sequent, limits.limits(), emit.as_deref()),
        Cmd::Cutelim { proof, trace, fuel, emit } => cutelim(o, proof, *trace, *fuel, emit.as_deref()),
        Cmd::Lam { cmd } => lam(o, cmd),
        Cmd::Tcm { cmd } => tcm(o, cmd),
        Cmd::Phase { cmd } => phase(o, cmd),
        Cmd::Coh { cmd } => coh(o, cmd),
        Cmd::Corpus { manifest, fuel, models, envs, seed, limits } => {
            let opts = CorpusOptions { fuel: *fuel, models: *models, envs: *envs, seed: *seed, limits: limits.limits() };
            corpus(o, manifest, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Input.into() } else { Status::Success.into() };
        }
    };
    let mut o = Out::new(cli.pretty);
    let status = match dispatch(&mut o, &cli.cmd) {
        Ok(s) => s,
        Err(f) => {
            o.kv("error", &f.msg);
            eprintln!("error: {}", f.msg);
            f.status
        }
    };
    print!("{}", o.render());
    status.into()
}
