//! Evaluates propagation against the direct and random baselines on a
//! synthetic corpus for every cutoff and both directions.
//!
//! cargo run --release --example recommendation_table -- [degree|pagerank]

use talentgraph::cli::pipeline::synthetic_graph;
use talentgraph::recommend::{recommendation_table, table1_markdown, Measure, TableConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let measure = match std::env::args().nth(1).as_deref() {
        Some("pagerank") => Measure::PageRank,
        _ => Measure::Degree,
    };
    let (_, _, g) = synthetic_graph(42, 10, 0.25)?;
    let cfg = TableConfig { measure, ..TableConfig::default() };
    let rows: Vec<_> = recommendation_table(&g, &cfg)?.into_iter().map(|e| e.row).collect();
    println!("{} documents, centrality {measure}\n", g.document_nodes(None).len());
    print!("{}", table1_markdown(&rows));
    Ok(())
}
