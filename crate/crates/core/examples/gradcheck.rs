//! Compares analytic gradients with central finite differences on a random graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use talentgraph::gnn::{gradcheck, Arch, DenseMatrix, GnnModel, GraphData, ModelConfig};
use talentgraph::graph::AdjacencyMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10;
    let mut a = AdjacencyMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                a.set_edge(i, j);
            }
        }
    }
    let g = GraphData::from_adjacency(&a);
    let x = DenseMatrix::from_vec(n, 4, (0..n * 4).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    let labels: Vec<Option<usize>> = (0..n).map(|i| Some(i % 3)).collect();
    let mask: Vec<usize> = (0..n).collect();

    for arch in [Arch::Gcn, Arch::Gat] {
        let cfg = ModelConfig { arch, hidden_dim: 5, n_layers: 2, n_heads: 2, n_classes: 3 };
        let model = GnnModel::new(&cfg, 4, &mut rng)?;
        let r = gradcheck(&model, &g, &x, &labels, &mask, 1e-5)?;
        println!("{arch}: max relative error {:.2e} over {} coordinates ({} skipped at kinks)", r.max_rel_error, r.checked, r.skipped);
    }
    Ok(())
}
