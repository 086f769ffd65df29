//! Trains GCN and GAT job-area classifiers on a synthetic graph and compares
//! them with the TF-IDF + logistic-regression baseline.
//!
//! cargo run --release --example classify_gnn

use std::collections::BTreeMap;

use talentgraph::cli::pipeline::synthetic_graph;
use talentgraph::embedding::HashProvider;
use talentgraph::gnn::{classify, table2_markdown, Arch, ClassifyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (corpus, _, mut g) = synthetic_graph(42, 10, 0.25)?;
    g.embed_nodes(&HashProvider::default())?;
    let texts: BTreeMap<String, String> = corpus.documents().iter().map(|d| (d.id.clone(), d.text.clone())).collect();

    let report = classify(&g, &[Arch::Gcn, Arch::Gat], Some(&texts), &ClassifyConfig::default())?;
    print!("{}", table2_markdown(&report.rows));
    println!("\nmajority-class test accuracy: {:.3}", report.majority_test_accuracy);
    for (arch, loss) in &report.final_loss {
        println!("{arch}: final loss {loss:.4}, train accuracy {:.3}", report.train_accuracy[arch]);
    }
    Ok(())
}
