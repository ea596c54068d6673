//! Manifest-driven regression runs over proof and sequent files.
//!
//! A manifest has one item per line: a path relative to the manifest
//! followed by one or more tags. `#` starts a comment.
//!
//! ```text
//! proofs/digging.llp   check-ok cutfree-after
//! sequents/lem.seq     provable
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coherence::{interpret_labeled, AtomEnv};
use crate::cutelim::normalize_labeled;
use crate::fixtures::{proof_fixtures, sequent_fixtures, Tag};
use crate::labeled::Labeled;
use crate::mall::{prove_mall, ProveOutcome, SearchLimits};
use crate::phase::random_model;
use crate::proof::{check_proof, parse_proof, write_proof, Proof};
use crate::syntax::{parse_sequent, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub tag: Tag,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub root: PathBuf,
    pub entries: Vec<CorpusEntry>,
}

impl Manifest {
    pub fn parse(text: &str, root: &Path) -> Result<Manifest, CorpusError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            let mut words = body.split_whitespace();
            let Some(path) = words.next() else { continue };
            let tags: Vec<&str> = words.collect();
            if tags.is_empty() {
                return Err(CorpusError::Manifest { line, msg: format!("{path} has no tag") });
            }
            for t in tags {
                let tag = Tag::parse(t).ok_or_else(|| CorpusError::Manifest { line, msg: format!("unknown tag {t}") })?;
                entries.push(CorpusEntry { path: PathBuf::from(path), tag, line });
            }
        }
        Ok(Manifest { root: root.to_path_buf(), entries })
    }

    pub fn load(path: &Path) -> Result<Manifest, CorpusError> {
        let text = read(path)?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&text, &root)
    }
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|e| CorpusError::Io { path: path.display().to_string(), msg: e.to_string() })
}

#[derive(Clone, Debug)]
pub struct CorpusOptions {
    /// Reduction steps allowed per normalization.
    pub fuel: usize,
    /// Phase models drawn for `valid-all-models`.
    pub models: usize,
    /// Atom environments drawn for `invariant-interp`.
    pub envs: usize,
    pub seed: u64,
    pub limits: SearchLimits,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions { fuel: 100_000, models: 40, envs: 3, seed: 7, limits: SearchLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemReport {
    pub path: PathBuf,
    pub tag: Tag,
    pub result: Result<(), String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub items: Vec<ItemReport>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.result.is_ok()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &ItemReport> {
        self.items.iter().filter(|i| i.result.is_err())
    }

    pub fn ok(&self) -> bool {
        self.items.iter().all(|i| i.result.is_ok())
    }
}

/// Parsed contents of a corpus file.
pub enum Item {
    Proof(Proof),
    Sequent(Sequent),
}

impl Item {
    pub fn sequent(&self) -> &Sequent {
        match self {
            Item::Proof(p) => p.conclusion(),
            Item::Sequent(s) => s,
        }
    }
}

/// `.llp` files hold proofs; anything else is read as a sequent.
pub fn load_item(path: &Path) -> Result<Item, String> {
    let text = read(path).map_err(|e| e.to_string())?;
    if path.extension().is_some_and(|e| e == "llp") {
        parse_proof(&text).map(Item::Proof).map_err(|e| e.to_string())
    } else {
        let line = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
        parse_sequent(line).map(Item::Sequent).map_err(|e| e.to_string())
    }
}

pub fn run_corpus(m: &Manifest, opts: &CorpusOptions) -> CorpusReport {
    let items = m
        .entries
        .par_iter()
        .map(|e| {
            let path = m.root.join(&e.path);
            let result = load_item(&path).and_then(|item| run_item(&item, e.tag, opts));
            ItemReport { path: e.path.clone(), tag: e.tag, result }
        })
        .collect();
    CorpusReport { items }
}

fn checked(item: &Item) -> Result<&Proof, String> {
    let Item::Proof(p) = item else { return Err("this tag needs a proof file".into()) };
    let r = check_proof(p);
    if r.ok() {
        Ok(p)
    } else {
        Err(r.to_string())
    }
}

pub fn run_item(item: &Item, tag: Tag, opts: &CorpusOptions) -> Result<(), String> {
    match tag {
        Tag::CheckOk => checked(item).map(|_| ()),
        Tag::Provable | Tag::NotProvable => {
            let want = tag == Tag::Provable;
            match prove_mall(item.sequent(), opts.limits).map_err(|e| e.to_string())? {
                ProveOutcome::Proof(_) if want => Ok(()),
                ProveOutcome::NotProvable if !want => Ok(()),
                ProveOutcome::BudgetExceeded => Err("search budget exceeded".into()),
                ProveOutcome::Proof(_) => Err("a proof was found".into()),
                ProveOutcome::NotProvable => Err("no proof was found".into()),
            }
        }
        Tag::CutfreeAfter => cutfree_after(checked(item)?, opts.fuel),
        Tag::ValidAllModels => valid_all_models(item.sequent(), opts),
        Tag::InvariantInterp => invariant_interp(checked(item)?, opts),
    }
}

fn cutfree_after(p: &Proof, fuel: usize) -> Result<(), String> {
    let mut l = Labeled::from_proof(p)?;
    let goal = p.conclusion().clone();
    let mut bad: Option<String> = None;
    let res = normalize_labeled(&mut l, fuel, |step, now| {
        if bad.is_some() {
            return;
        }
        let q = now.to_proof();
        let r = check_proof(&q);
        if !r.ok() {
            bad = Some(format!("after {:?}: {r}", step.kind));
        } else if q.conclusion() != &goal {
            bad = Some(format!("after {:?}: conclusion changed to {}", step.kind, q.conclusion()));
        }
    });
    if let Some(b) = bad {
        return Err(b);
    }
    match res {
        Ok(_) if l.to_proof().is_cut_free() => Ok(()),
        Ok(_) => Err("normal form still has cuts".into()),
        Err(stats) => Err(format!("fuel exhausted after {} steps", stats.steps)),
    }
}

fn valid_all_models(s: &Sequent, opts: &CorpusOptions) -> Result<(), String> {
    let mut names = Vec::new();
    for f in s.formulas() {
        f.atoms(&mut names);
    }
    names.sort();
    names.dedup();
    let atoms: Vec<&str> = names.iter().map(String::as_str).collect();
    let expo = !s.is_exponential_free();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut used = 0;
    let mut tries = 0;
    while used < opts.models {
        tries += 1;
        if tries > opts.models * 20 {
            return Err(format!("only {used} usable models in {tries} draws"));
        }
        let m = random_model(&mut rng, 6, &atoms, expo);
        match m.is_valid(s) {
            Ok(true) => used += 1,
            Ok(false) => return Err(format!("not valid in model:\n{}", m.to_text())),
            // a `?` with no closed superset has no value in this model
            Err(_) => continue,
        }
    }
    Ok(())
}

fn invariant_interp(p: &Proof, opts: &CorpusOptions) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    // cut formulas may mention atoms the conclusion does not
    let nodes: Vec<&Proof> = p.paths().iter().filter_map(|q| p.node(q)).collect();
    let formulas: Vec<_> = nodes.iter().flat_map(|n| n.conclusion().formulas()).collect();
    for _ in 0..opts.envs {
        let env = AtomEnv::random_for(&mut rng, &formulas, 1, 3);
        let mut l = Labeled::from_proof(p)?;
        let before = interpret_labeled(&l, &env).map_err(|e| e.to_string())?;
        let mut bad = None;
        let res = normalize_labeled(&mut l, opts.fuel, |step, now| {
            if bad.is_none() {
                match interpret_labeled(now, &env) {
                    Ok(v) if v == before => {}
                    Ok(_) => bad = Some(format!("interpretation changed after {:?}", step.kind)),
                    Err(e) => bad = Some(e.to_string()),
                }
            }
        });
        if let Some(b) = bad {
            return Err(format!("{b}\nwith atoms:\n{}", env.to_text()));
        }
        if let Err(stats) = res {
            return Err(format!("fuel exhausted after {} steps", stats.steps));
        }
    }
    Ok(())
}

/// Writes every built-in fixture under `dir` with a manifest listing them,
/// and returns the manifest path.
pub fn write_fixture_corpus(dir: &Path) -> Result<PathBuf, CorpusError> {
    let io = |p: &Path, e: std::io::Error| CorpusError::Io { path: p.display().to_string(), msg: e.to_string() };
    for sub in ["proofs", "sequents"] {
        let d = dir.join(sub);
        fs::create_dir_all(&d).map_err(|e| io(&d, e))?;
    }
    let mut manifest = String::from("# built-in fixtures\n");
    for f in proof_fixtures() {
        let rel = format!("proofs/{}.llp", f.name);
        let text = format!("; {}\n{}", f.summary, write_proof(&f.proof));
        let path = dir.join(&rel);
        fs::write(&path, text).map_err(|e| io(&path, e))?;
        let tags: Vec<&str> = f.tags.iter().map(|t| t.name()).collect();
        manifest.push_str(&format!("{rel} {}\n", tags.join(" ")));
    }
    for s in sequent_fixtures() {
        let rel = format!("sequents/{}.seq", s.name);
        let path = dir.join(&rel);
        fs::write(&path, format!("{}\n", s.sequent)).map_err(|e| io(&path, e))?;
        manifest.push_str(&format!("{rel} {}\n", s.tag.name()));
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest).map_err(|e| io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parsing() {
        let m = Manifest::parse("# c\n\na.llp check-ok cutfree-after\nb.seq provable # x\n", Path::new("r")).unwrap();
        assert_eq!(m.entries.len(), 3);
        assert_eq!(m.entries[2].tag, Tag::Provable);
        assert!(Manifest::parse("a.llp\n", Path::new("")).is_err());
        assert!(Manifest::parse("a.llp bogus\n", Path::new("")).is_err());
    }

    #[test]
    fn empty_manifest_passes() {
        let r = run_corpus(&Manifest::default(), &CorpusOptions::default());
        assert!(r.ok());
        assert_eq!(r.items.len(), 0);
    }
}
