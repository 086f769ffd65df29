//! Builds the knowledge graph for a synthetic corpus, prints its statistics
//! and writes GraphML and DOT exports to the temp directory.

use talentgraph::cli::pipeline::synthetic_graph;
use talentgraph::embedding::HashProvider;
use talentgraph::graph::{export_graph, import_graph, stats, GraphFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, _, mut g) = synthetic_graph(42, 4, 0.25)?;
    g.embed_nodes(&HashProvider::new(32))?;
    println!("{}", serde_json::to_string_pretty(&stats(&g))?);

    let dir = std::env::temp_dir();
    for (format, name) in [(GraphFormat::GraphMl, "talentgraph.graphml"), (GraphFormat::Dot, "talentgraph.dot")] {
        let bytes = export_graph(&g, format, None);
        let path = dir.join(name);
        std::fs::write(&path, &bytes)?;
        println!("wrote {} ({} bytes)", path.display(), bytes.len());
    }

    let (back, _) = import_graph(&export_graph(&g, GraphFormat::GraphMl, None), GraphFormat::GraphMl)?;
    println!("GraphML round trip preserves structure: {}", back.signature() == g.signature());
    Ok(())
}
