//! Runs a shipped manifest through the verification suite and prints the
//! markdown summary. Pass a manifest path to use another one.

use std::path::PathBuf;

use lawvar::cli::{verify, Manifest};

fn main() -> lawvar::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("manifests/collapse_suite.json")
        });
    let manifest = Manifest::load(&path)?;
    let tol = manifest.tolerances.clone().unwrap_or_default();
    let report = verify(
        &manifest,
        manifest.seed.unwrap_or(0),
        manifest.trials.unwrap_or(300),
        &tol,
    )?;
    print!("{}", report.to_markdown());
    println!("\nany failures: {}", report.has_failure());
    Ok(())
}
