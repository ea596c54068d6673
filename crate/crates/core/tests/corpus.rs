use std::fs;
use std::path::{Path, PathBuf};

use llwb::corpus::*;
use llwb::fixtures::Tag;

fn shipped() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn files(dir: &Path) -> Vec<(PathBuf, String)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_path_buf();
                out.push((rel, fs::read_to_string(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn shipped_fixtures_match_builders() {
    let tmp = tempfile::tempdir().unwrap();
    write_fixture_corpus(tmp.path()).unwrap();
    assert_eq!(files(tmp.path()), files(&shipped()), "run the corpus writer to refresh fixtures/");
}

#[test]
fn shipped_corpus_passes() {
    let m = Manifest::load(&shipped().join("manifest.txt")).unwrap();
    let r = run_corpus(&m, &CorpusOptions::default());
    for f in r.failures() {
        eprintln!("{} {}: {}", f.path.display(), f.tag.name(), f.result.as_ref().unwrap_err());
    }
    assert!(r.ok());
    assert_eq!(r.passed(), m.entries.len());
}

#[test]
fn wrong_tags_fail() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("lem.seq"), "|- a + a^\n").unwrap();
    fs::write(tmp.path().join("bad.llp"), "garbage\n").unwrap();
    let m = Manifest::parse("lem.seq provable valid-all-models\nbad.llp check-ok\nlem.seq check-ok\nmissing.seq provable\n", tmp.path()).unwrap();
    let r = run_corpus(&m, &CorpusOptions::default());
    assert_eq!(r.passed(), 0, "{:?}", r.items);
    assert_eq!(r.items[0].tag, Tag::Provable);
}
