//! Hash embeddings for node labels: fixed dimension, unit norm, deterministic.

use talentgraph::embedding::{build_feature_matrix, hash_embed};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dim = 64;
    let a = hash_embed("Machine Learning", dim);
    let b = hash_embed("machine-learning", dim);
    let c = hash_embed("Bookkeeping", dim);
    println!("cos(ml, ml') = {:.3}", a.cosine(&b));
    println!("cos(ml, bookkeeping) = {:.3}", a.cosine(&c));

    let nodes: Vec<(String, String)> = ["python", "sql", "cv-1"]
        .iter()
        .map(|s| (s.to_string(), s.to_string()))
        .collect();
    let m = build_feature_matrix(&nodes, &talentgraph::embedding::HashProvider::new(dim))?;
    println!("feature matrix: {} x {}", m.rows(), m.dim());
    Ok(())
}
