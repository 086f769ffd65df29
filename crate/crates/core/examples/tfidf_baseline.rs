//! TF-IDF features with an L1-regularized logistic regression on raw text.

use talentgraph::corpus::{default_pools, synth_corpus, JobArea, SynthParams};
use talentgraph::gnn::{tfidf_logreg_baseline, TfidfConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = synth_corpus(&SynthParams::new(5, 8, default_pools(), 0.25))?;
    let docs = corpus.documents();
    let texts: Vec<&str> = docs.iter().map(|d| d.text.as_str()).collect();
    let labels: Vec<usize> = docs
        .iter()
        .map(|d| JobArea::ALL.iter().position(|a| Some(*a) == d.label).expect("labeled"))
        .collect();
    // every fourth document held out
    let (test, train): (Vec<usize>, Vec<usize>) = (0..docs.len()).partition(|i| i % 4 == 0);
    let m = tfidf_logreg_baseline(&texts, &labels, &train, &test, &TfidfConfig::default())?;
    println!(
        "{} train / {} test: accuracy {:.3}, macro precision {:.3}, macro recall {:.3}",
        train.len(),
        test.len(),
        m.accuracy,
        m.precision,
        m.recall
    );
    Ok(())
}
