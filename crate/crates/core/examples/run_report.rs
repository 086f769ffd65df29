//! End-to-end run on the synthetic corpus with the default configuration,
//! printed as a markdown report.
//!
//! cargo run --release --example run_report -- [--skip-classify]

use talentgraph::cli::{run_report, Config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let with_classify = !std::env::args().any(|a| a == "--skip-classify");
    let report = run_report(&Config::default(), None, with_classify)?;
    print!("{}", report.to_markdown());
    Ok(())
}
