//! Generates a small labeled corpus and prints one document per kind.
//!
//! cargo run --example synth_corpus -- [seed] [docs_per_category]

use talentgraph::corpus::{default_pools, synth_corpus, SynthParams};
use talentgraph::DocKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(42);
    let per_category = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let corpus = synth_corpus(&SynthParams::new(seed, per_category, default_pools(), 0.25))?;
    println!("{} documents (seed {seed})", corpus.len());
    for kind in [DocKind::Cv, DocKind::Jd] {
        let d = corpus.documents().iter().find(|d| d.kind == kind).expect("both kinds present");
        println!("\n[{}] {} label={:?}\n{}", d.id, kind, d.label, d.text);
    }
    Ok(())
}
