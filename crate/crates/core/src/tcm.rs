//! Two counter machines with fork, their encoding as linear logic
//! sequents, and proofs built from accepting runs.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::proof::{KernelError, Proof};
use crate::syntax::{atom, dual_atom, neg, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TcmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("invalid trace at step {step}: {msg}")]
    BadTrace { step: usize, msg: String },
    #[error("triplet {0} does not occur in the initial description")]
    NotInTrace(String),
    #[error("proof construction failed: {0}")]
    Kernel(#[from] KernelError),
}

pub type State = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instr {
    IncA(State, State),
    DecA(State, State),
    IncB(State, State),
    DecB(State, State),
    Fork(State, State, State),
}

impl Instr {
    pub fn source(&self) -> State {
        match *self {
            Instr::IncA(i, _) | Instr::DecA(i, _) | Instr::IncB(i, _) | Instr::DecB(i, _) | Instr::Fork(i, _, _) => i,
        }
    }

    /// Successor triplets of `t`, or `None` when the instruction does not apply.
    pub fn apply(&self, t: Triplet) -> Option<Vec<Triplet>> {
        if t.q != self.source() {
            return None;
        }
        let (m, n) = (t.m, t.n);
        Some(match *self {
            Instr::IncA(_, j) => vec![Triplet { q: j, m: m + 1, n }],
            Instr::DecA(_, j) if m > 0 => vec![Triplet { q: j, m: m - 1, n }],
            Instr::IncB(_, j) => vec![Triplet { q: j, m, n: n + 1 }],
            Instr::DecB(_, j) if n > 0 => vec![Triplet { q: j, m, n: n - 1 }],
            Instr::Fork(_, j, k) => vec![Triplet { q: j, m, n }, Triplet { q: k, m, n }],
            _ => return None,
        })
    }
}

/// A local description `(q, m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub q: State,
    pub m: u32,
    pub n: u32,
}

/// Instantaneous description: a multiset of triplets, kept sorted.
pub type Id = Vec<Triplet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    pub states: Vec<String>,
    pub init: State,
    pub fin: State,
    pub instrs: Vec<Instr>,
}

/// One transition: which instruction fired on which triplet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub instr: usize,
    pub triplet: Triplet,
}

/// `ids[k]` goes to `ids[k + 1]` by `steps[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub ids: Vec<Id>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimOutcome {
    Accepted(RunTrace),
    /// No accepting description within the bound.
    NoAccept { explored: usize },
}

fn canonical(mut id: Id) -> Id {
    id.sort_unstable();
    id
}

fn successor(id: &[Triplet], t: Triplet, out: &[Triplet]) -> Id {
    let mut next = id.to_vec();
    let pos = next.iter().position(|&u| u == t).expect("triplet present");
    next.remove(pos);
    next.extend_from_slice(out);
    canonical(next)
}

impl Machine {
    pub fn state(&self, name: &str) -> Result<State, TcmError> {
        self.states.iter().position(|s| s == name).ok_or_else(|| TcmError::UnknownState(name.into()))
    }

    pub fn triplet(&self, name: &str, m: u32, n: u32) -> Result<Triplet, TcmError> {
        Ok(Triplet { q: self.state(name)?, m, n })
    }

    pub fn accepting(&self, id: &[Triplet]) -> bool {
        id.iter().all(|t| *t == Triplet { q: self.fin, m: 0, n: 0 })
    }

    /// Breadth-first search over descriptions, at most `bound` transitions deep.
    pub fn simulate(&self, start: &[Triplet], bound: usize) -> SimOutcome {
        let start = canonical(start.to_vec());
        let mut parent: HashMap<Id, Option<(Id, Step)>> = HashMap::from([(start.clone(), None)]);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((id, depth)) = queue.pop_front() {
            if self.accepting(&id) {
                return SimOutcome::Accepted(self.unwind(&parent, id));
            }
            if depth == bound {
                continue;
            }
            let mut distinct = id.clone();
            distinct.dedup();
            for &t in &distinct {
                for (k, ins) in self.instrs.iter().enumerate() {
                    if let Some(out) = ins.apply(t) {
                        let next = successor(&id, t, &out);
                        if self.distance_bound(&next) > bound - depth - 1 {
                            continue;
                        }
                        if !parent.contains_key(&next) {
                            parent.insert(next.clone(), Some((id.clone(), Step { instr: k, triplet: t })));
                            queue.push_back((next, depth + 1));
                        }
                    }
                }
            }
        }
        SimOutcome::NoAccept { explored: parent.len() }
    }

    /// A lower bound on the transitions needed to accept: one per counter
    /// unit, plus one per empty non-final triplet. A single transition
    /// lowers it by at most one.
    pub fn distance_bound(&self, id: &[Triplet]) -> usize {
        id.iter()
            .map(|t| {
                let c = (t.m + t.n) as usize;
                c + usize::from(c == 0 && t.q != self.fin)
            })
            .sum()
    }

    fn unwind(&self, parent: &HashMap<Id, Option<(Id, Step)>>, end: Id) -> RunTrace {
        let mut ids = vec![end.clone()];
        let mut steps = Vec::new();
        let mut cur = end;
        while let Some(Some((prev, step))) = parent.get(&cur) {
            ids.push(prev.clone());
            steps.push(step.clone());
            cur = prev.clone();
        }
        ids.reverse();
        steps.reverse();
        RunTrace { ids, steps }
    }

    /// Checks every transition of `trace` and that it ends accepting.
    pub fn validate_trace(&self, trace: &RunTrace) -> Result<(), TcmError> {
        let bad = |step: usize, msg: String| Err(TcmError::BadTrace { step, msg });
        if trace.ids.len() != trace.steps.len() + 1 {
            return bad(0, "descriptions and steps do not line up".into());
        }
        for (k, step) in trace.steps.iter().enumerate() {
            let id = &trace.ids[k];
            let Some(ins) = self.instrs.get(step.instr) else {
                return bad(k, format!("no instruction {}", step.instr));
            };
            if !id.contains(&step.triplet) {
                return bad(k, format!("{} is not in the description", self.show_triplet(step.triplet)));
            }
            let Some(out) = ins.apply(step.triplet) else {
                return bad(k, format!("{} does not apply to {}", self.show_instr(ins), self.show_triplet(step.triplet)));
            };
            if canonical(trace.ids[k + 1].clone()) != successor(id, step.triplet, &out) {
                return bad(k, "next description does not follow".into());
            }
        }
        let last = trace.ids.last().expect("nonempty");
        if !self.accepting(last) {
            return bad(trace.steps.len(), "final description is not accepting".into());
        }
        Ok(())
    }

    // -----------------------------------------------------------------
    // Encoding

    /// Atom names for the two counters, fresh with respect to the states.
    pub fn counter_atoms(&self) -> (String, String) {
        let fresh = |base: &str| {
            std::iter::once(base.to_string())
                .chain((1..).map(|k| format!("{base}_{k}")))
                .find(|c| !self.states.contains(c))
                .expect("unbounded supply")
        };
        (fresh("a"), fresh("b"))
    }

    /// `?((·)^)` of the instruction read as a bilateral sequent, in NNF.
    pub fn encode_instr(&self, ins: &Instr) -> Formula {
        let (a, b) = self.counter_atoms();
        let q = |s: State| atom(&self.states[s]);
        let inner = match *ins {
            Instr::IncA(i, j) => Formula::par(neg(&q(i)), Formula::tensor(q(j), atom(&a))),
            Instr::DecA(i, j) => Formula::par(neg(&Formula::tensor(q(i), atom(&a))), q(j)),
            Instr::IncB(i, j) => Formula::par(neg(&q(i)), Formula::tensor(q(j), atom(&b))),
            Instr::DecB(i, j) => Formula::par(neg(&Formula::tensor(q(i), atom(&b))), q(j)),
            Instr::Fork(i, j, k) => Formula::par(neg(&q(i)), Formula::plus(q(j), q(k))),
        };
        Formula::why_not(neg(&inner))
    }

    pub fn theory(&self) -> Vec<Formula> {
        self.instrs.iter().map(|i| self.encode_instr(i)).collect()
    }

    /// `|- q^, (a^m)^, (b^n)^, q_F` and the theory it is read against.
    pub fn encode(&self, t: Triplet) -> (Sequent, Vec<Formula>) {
        let (a, b) = self.counter_atoms();
        let goal = vec![
            dual_atom(&self.states[t.q]),
            neg(&power(&a, t.m)),
            neg(&power(&b, t.n)),
            atom(&self.states[self.fin]),
        ];
        (Sequent::new(goal), self.theory())
    }

    /// The goal together with the theory, the sequent a proof concludes.
    pub fn full_sequent(&self, t: Triplet) -> Sequent {
        let (goal, theory) = self.encode(t);
        goal.with_added(&theory)
    }

    // -----------------------------------------------------------------
    // Proofs

    /// A proof of [`Machine::full_sequent`] for `t`, by induction on the
    /// accepting run. `t` must occur in the run's first description.
    pub fn synthesize_proof(&self, trace: &RunTrace, t: Triplet) -> Result<Proof, TcmError> {
        self.validate_trace(trace)?;
        if !trace.ids[0].contains(&t) {
            return Err(TcmError::NotInTrace(self.show_triplet(t)));
        }
        let flat = self.flat_proof(trace, 0, t)?;
        let (a, b) = self.counter_atoms();
        let p = pack(flat, &a, t.m)?;
        Ok(pack(p, &b, t.n)?)
    }

    // `|- Θ, q^, a^ (m times), b^ (n times), q_F` for the lineage of `t`
    // from step `k` on.
    fn flat_proof(&self, trace: &RunTrace, k: usize, t: Triplet) -> Result<Proof, TcmError> {
        let theory = self.theory();
        let (a, b) = self.counter_atoms();
        let qf = atom(&self.states[self.fin]);
        // the first later step that rewrites a copy of t
        let Some(k) = (k..trace.steps.len()).find(|&i| trace.steps[i].triplet == t) else {
            if t != (Triplet { q: self.fin, m: 0, n: 0 }) {
                return Err(TcmError::BadTrace { step: trace.steps.len(), msg: "lineage does not end in q_F".into() });
            }
            let ax = Proof::axiom(qf)?;
            return Ok(Proof::weaken_all(ax, &theory)?);
        };
        let ins = self.instrs[trace.steps[k].instr];
        let enc = self.encode_instr(&ins);
        let q = |s: State| atom(&self.states[s]);
        let qd = |s: State| dual_atom(&self.states[s]);
        let next = ins.apply(t).expect("validated");
        let p = match ins {
            Instr::IncA(i, j) | Instr::IncB(i, j) => {
                let c = if matches!(ins, Instr::IncA(..)) { &a } else { &b };
                // |- Θ, q_j^ ⅋ c^, rest
                let sub = self.flat_proof(trace, k + 1, next[0])?;
                let left = Proof::par(sub, qd(j), dual_atom(c))?;
                // |- ?(q_i ⊗ (q_j^ ⅋ c^)), q_i^, q_j ⊗ c
                let qc = Proof::tensor(Proof::axiom(q(j))?, Proof::axiom(atom(c))?, q(j), atom(c))?;
                let qc = Proof::par(qc, qd(j), dual_atom(c))?;
                let body = Formula::par(qd(j), dual_atom(c));
                let right = Proof::tensor(Proof::axiom(q(i))?, qc, q(i), body.clone())?;
                let right = Proof::dereliction(right, Formula::tensor(q(i), body))?;
                Proof::cut(right, left, Formula::tensor(q(j), atom(c)))?
            }
            Instr::DecA(i, j) | Instr::DecB(i, j) => {
                let c = if matches!(ins, Instr::DecA(..)) { &a } else { &b };
                let sub = self.flat_proof(trace, k + 1, next[0])?;
                // |- ?((q_i ⊗ c) ⊗ q_j^), q_i^, c^, q_j
                let ic = Proof::tensor(Proof::axiom(q(i))?, Proof::axiom(atom(c))?, q(i), atom(c))?;
                let ic_f = Formula::tensor(q(i), atom(c));
                let right = Proof::tensor(ic, Proof::axiom(q(j))?, ic_f.clone(), qd(j))?;
                let right = Proof::dereliction(right, Formula::tensor(ic_f, qd(j)))?;
                Proof::cut(right, sub, q(j))?
            }
            Instr::Fork(i, j, kk) => {
                let pj = self.flat_proof(trace, k + 1, next[0])?;
                let pk = self.flat_proof(trace, k + 1, next[1])?;
                let left = Proof::with(pj, pk, qd(j), qd(kk))?;
                // |- ?(q_i ⊗ (q_j^ & q_k^)), q_i^, q_j ⊕ q_k
                let l = Proof::plus_l(Proof::axiom(q(j))?, q(j), q(kk))?;
                let r = Proof::plus_r(Proof::axiom(q(kk))?, q(j), q(kk))?;
                let w = Proof::with(l, r, qd(j), qd(kk))?;
                let body = Formula::with(qd(j), qd(kk));
                let right = Proof::tensor(Proof::axiom(q(i))?, w, q(i), body.clone())?;
                let right = Proof::dereliction(right, Formula::tensor(q(i), body))?;
                Proof::cut(right, left, Formula::plus(q(j), q(kk)))?
            }
        };
        Ok(Proof::contraction(p, enc)?)
    }

    // -----------------------------------------------------------------
    // Text

    pub fn show_triplet(&self, t: Triplet) -> String {
        format!("({},{},{})", self.states[t.q], t.m, t.n)
    }

    pub fn show_instr(&self, i: &Instr) -> String {
        let s = |q: State| &self.states[q];
        match *i {
            Instr::IncA(a, b) => format!("{} +A {}", s(a), s(b)),
            Instr::DecA(a, b) => format!("{} -A {}", s(a), s(b)),
            Instr::IncB(a, b) => format!("{} +B {}", s(a), s(b)),
            Instr::DecB(a, b) => format!("{} -B {}", s(a), s(b)),
            Instr::Fork(a, b, c) => format!("{} fork {} {}", s(a), s(b), s(c)),
        }
    }

    pub fn show_id(&self, id: &[Triplet]) -> String {
        let parts: Vec<String> = id.iter().map(|&t| self.show_triplet(t)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Reads `states:`, `init:`, `final:` header lines followed by one
    /// instruction per line (`qi +A qj`, `qi fork qj qk`). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Machine, TcmError> {
        let mut states: Option<Vec<String>> = None;
        let (mut init, mut fin) = (None, None);
        let mut raw: Vec<(usize, Vec<String>)> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| TcmError::Parse { line: line_no, msg: msg.into() };
            if let Some(rest) = line.strip_prefix("states:") {
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let uniq: HashSet<&String> = names.iter().collect();
                if names.is_empty() || uniq.len() != names.len() {
                    return Err(err("states must be nonempty and distinct"));
                }
                if let Some(bad) = names.iter().find(|n| !crate::syntax::is_atom_name(n)) {
                    return Err(err(&format!("{bad} is not a valid atom name")));
                }
                states = Some(names);
            } else if let Some(rest) = line.strip_prefix("init:") {
                init = Some((line_no, rest.trim().to_string()));
            } else if let Some(rest) = line.strip_prefix("final:") {
                fin = Some((line_no, rest.trim().to_string()));
            } else {
                raw.push((line_no, line.split_whitespace().map(String::from).collect()));
            }
        }
        let states = states.ok_or(TcmError::Parse { line: 0, msg: "missing states: line".into() })?;
        let look = |line: usize, n: &str| {
            states.iter().position(|s| s == n).ok_or(TcmError::Parse { line, msg: format!("unknown state {n}") })
        };
        let (il, iname) = init.ok_or(TcmError::Parse { line: 0, msg: "missing init: line".into() })?;
        let (fl, fname) = fin.ok_or(TcmError::Parse { line: 0, msg: "missing final: line".into() })?;
        let init = look(il, &iname)?;
        let fin = look(fl, &fname)?;
        let mut instrs = Vec::new();
        for (line, w) in raw {
            let ins = match w.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
                [i, "+A", j] => Instr::IncA(look(line, i)?, look(line, j)?),
                [i, "-A", j] => Instr::DecA(look(line, i)?, look(line, j)?),
                [i, "+B", j] => Instr::IncB(look(line, i)?, look(line, j)?),
                [i, "-B", j] => Instr::DecB(look(line, i)?, look(line, j)?),
                [i, "fork", j, k] => Instr::Fork(look(line, i)?, look(line, j)?, look(line, k)?),
                _ => return Err(TcmError::Parse { line, msg: format!("bad instruction '{}'", w.join(" ")) }),
            };
            if !instrs.contains(&ins) {
                instrs.push(ins);
            }
        }
        Ok(Machine { states, init, fin, instrs })
    }

    /// Parses a description such as `(q0,1,0) (q1,0,0)`.
    pub fn parse_id(&self, text: &str) -> Result<Id, TcmError> {
        let err = |msg: String| TcmError::Parse { line: 1, msg };
        let mut out = Vec::new();
        for part in text.split(')').map(str::trim).filter(|p| !p.is_empty()) {
            let body = part.trim_start_matches([',', ' ']).trim();
            let body = body.strip_prefix('(').ok_or_else(|| err(format!("expected '(' in '{part}'")))?;
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            let [q, m, n] = fields.as_slice() else {
                return Err(err(format!("expected (q,m,n) but found '{body}'")));
            };
            let num = |s: &str| s.parse::<u32>().map_err(|e| err(format!("{s}: {e}")));
            out.push(self.triplet(q, num(m)?, num(n)?)?);
        }
        if out.is_empty() {
            return Err(err("empty description".into()));
        }
        Ok(canonical(out))
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "init: {}", self.states[self.init])?;
        writeln!(f, "final: {}", self.states[self.fin])?;
        for i in &self.instrs {
            writeln!(f, "{}", self.show_instr(i))?;
        }
        Ok(())
    }
}

/// `c^0 = 1`, `c^1 = c`, `c^(k+1) = c^k ⊗ c`.
pub fn power(c: &str, k: u32) -> Formula {
    match k {
        0 => Formula::One,
        _ => (1..k).fold(atom(c), |acc, _| Formula::tensor(acc, atom(c))),
    }
}

// From `k` loose occurrences of `c^` conclude `(c^k)^`.
fn pack(mut p: Proof, c: &str, k: u32) -> Result<Proof, KernelError> {
    if k == 0 {
        return Ok(Proof::bot(p));
    }
    let mut cur = dual_atom(c);
    for _ in 1..k {
        p = Proof::par(p, cur.clone(), dual_atom(c))?;
        cur = Formula::par(cur, dual_atom(c));
    }
    Ok(p)
}

/// The `+A`/`-A` chain: `q_I +A q_1`, `q_1 -A q_F`.
pub fn example_chain() -> Machine {
    Machine::parse("states: qi q1 qf\ninit: qi\nfinal: qf\nqi +A q1\nq1 -A qf\n").expect("valid machine")
}

/// A single fork into two copies of the final state.
pub fn example_fork() -> Machine {
    Machine::parse("states: qi qf\ninit: qi\nfinal: qf\nqi fork qf qf\n").expect("valid machine")
}

/// A random machine with `2..=max_states` states and `1..=max_instrs`
/// distinct instructions.
pub fn random_machine<R: Rng>(rng: &mut R, max_states: usize, max_instrs: usize) -> Machine {
    let ns = rng.gen_range(2..=max_states.max(2));
    let states: Vec<String> = (0..ns).map(|i| format!("q{i}")).collect();
    let mut instrs = Vec::new();
    for _ in 0..rng.gen_range(1..=max_instrs.max(1)) {
        let (i, j, k) = (rng.gen_range(0..ns), rng.gen_range(0..ns), rng.gen_range(0..ns));
        let ins = match rng.gen_range(0..5) {
            0 => Instr::IncA(i, j),
            1 => Instr::DecA(i, j),
            2 => Instr::IncB(i, j),
            3 => Instr::DecB(i, j),
            _ => Instr::Fork(i, j, k),
        };
        if !instrs.contains(&ins) {
            instrs.push(ins);
        }
    }
    Machine { states, init: 0, fin: ns - 1, instrs }
}

/// A random description of one or two triplets with counters `≤ max_counter`.
pub fn random_id<R: Rng>(rng: &mut R, m: &Machine, max_counter: u32) -> Id {
    let len = rng.gen_range(1..=2);
    let id = (0..len)
        .map(|_| Triplet {
            q: rng.gen_range(0..m.states.len()),
            m: rng.gen_range(0..=max_counter),
            n: rng.gen_range(0..=max_counter),
        })
        .collect();
    canonical(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;
    use crate::syntax::{parse_formula, parse_sequent};

    fn accepted(o: SimOutcome) -> RunTrace {
        match o {
            SimOutcome::Accepted(t) => t,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn chain_accepts_in_two() {
        let m = example_chain();
        let t0 = m.triplet("qi", 0, 0).unwrap();
        let tr = accepted(m.simulate(&[t0], 12));
        assert_eq!(tr.steps.len(), 2);
        assert_eq!(tr.ids.last().unwrap(), &vec![m.triplet("qf", 0, 0).unwrap()]);
        m.validate_trace(&tr).unwrap();
    }

    #[test]
    fn no_instructions_no_accept() {
        let m = Machine::parse("states: qi qf\ninit: qi\nfinal: qf\n").unwrap();
        let t0 = m.triplet("qi", 0, 0).unwrap();
        assert_eq!(m.simulate(&[t0], 12), SimOutcome::NoAccept { explored: 1 });
    }

    #[test]
    fn fork_doubles() {
        let m = example_fork();
        let tr = accepted(m.simulate(&[m.triplet("qi", 0, 0).unwrap()], 12));
        let f = m.triplet("qf", 0, 0).unwrap();
        assert_eq!(tr.ids.last().unwrap(), &vec![f, f]);
        assert_eq!(tr.steps.len(), 1);
    }

    #[test]
    fn decrement_on_zero_rejected() {
        let m = example_chain();
        let bad = RunTrace {
            ids: vec![vec![m.triplet("q1", 0, 0).unwrap()], vec![m.triplet("qf", 0, 0).unwrap()]],
            steps: vec![Step { instr: 1, triplet: m.triplet("q1", 0, 0).unwrap() }],
        };
        assert!(matches!(m.validate_trace(&bad), Err(TcmError::BadTrace { step: 0, .. })));
    }

    #[test]
    fn encodings_are_nnf_duals() {
        let m = example_chain();
        let enc = m.encode_instr(&m.instrs[0]);
        assert_eq!(enc, parse_formula("?(qi * (q1^ @ a^))").unwrap());
        let f = example_fork();
        assert_eq!(f.encode_instr(&f.instrs[0]), parse_formula("?(qi * (qf^ & qf^))").unwrap());
        let (goal, _) = m.encode(m.triplet("qi", 0, 0).unwrap());
        assert_eq!(goal, parse_sequent("|- qi^, bot, bot, qf").unwrap());
    }

    #[test]
    fn power_sizes() {
        for k in 1..8 {
            assert_eq!(crate::syntax::size(&power("a", k)), 2 * k as usize - 1);
        }
    }

    #[test]
    fn synthesized_proofs_check() {
        for m in [example_chain(), example_fork()] {
            let t0 = m.triplet("qi", 0, 0).unwrap();
            let tr = accepted(m.simulate(&[t0], 12));
            let p = m.synthesize_proof(&tr, t0).unwrap();
            let r = check_proof(&p);
            assert!(r.ok(), "{r}");
            assert_eq!(p.conclusion(), &m.full_sequent(t0));
        }
        let f = m_final_only();
        let t = f.triplet("qf", 0, 0).unwrap();
        let tr = accepted(f.simulate(&[t], 1));
        assert!(tr.steps.is_empty());
        assert!(check_proof(&f.synthesize_proof(&tr, t).unwrap()).ok());
    }

    fn m_final_only() -> Machine {
        Machine::parse("states: qf q\ninit: q\nfinal: qf\nq +A qf\n").unwrap()
    }

    #[test]
    fn counters_avoid_state_names() {
        let m = Machine::parse("states: a b c\ninit: a\nfinal: c\na +A c\n").unwrap();
        assert_eq!(m.counter_atoms(), ("a_1".to_string(), "b_1".to_string()));
    }

    #[test]
    fn parse_roundtrip() {
        let m = example_fork();
        assert_eq!(Machine::parse(&m.to_string()).unwrap(), m);
        let id = m.parse_id("(qi,1,2) (qf,0,0)").unwrap();
        assert_eq!(id.len(), 2);
        assert!(Machine::parse("states: q\ninit: q\nfinal: q\nq +C q\n").is_err());
    }
}
