//! Regenerates `fixtures/` from the built-in fixture builders.

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    match llwb::corpus::write_fixture_corpus(&dir) {
        Ok(p) => println!("wrote {}", p.display()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
