//! Ranks job descriptions for a sales CV by entity propagation over a small
//! hand-written corpus, next to the direct-overlap baseline.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use talentgraph::cli::pipeline::{build_graph, extract_corpus_gazetteer};
use talentgraph::corpus::{load_corpus, CorpusFormat};
use talentgraph::extraction::{Gazetteer, RefineConfig};
use talentgraph::recommend::{baseline_direct, candidate_entities, recommend, Measure, Query, DEFAULT_HOPS};
use talentgraph::DocKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let corpus = load_corpus(&fixtures.join("case_study.jsonl"), CorpusFormat::Jsonl)?;
    let gaz = Gazetteer::read_jsonl(BufReader::new(File::open(fixtures.join("case_study_gazetteer.jsonl"))?))?;
    let sets = extract_corpus_gazetteer(&corpus, &gaz, &RefineConfig::default());
    let g = build_graph(&corpus, &sets)?;

    let q = Query::from_document(&g, "cv-092", 5)?;
    let cv: Vec<&str> = q.entities.entities.iter().map(|e| e.canonical.as_str()).collect();
    println!("cv-092 entities: {}\n", cv.join(", "));

    for measure in [Measure::Degree, Measure::PageRank] {
        let r = recommend(&g, &q, DEFAULT_HOPS, measure)?;
        println!("propagation ({measure}):");
        for it in &r.items {
            let area = corpus.get(&it.doc_id).and_then(|d| d.label);
            println!("  {:<7} {:>7.3}  {:?}  via {:?}", it.doc_id, it.score, area, it.matched_entities);
        }
    }
    let direct = baseline_direct(&q, &candidate_entities(&g, DocKind::Jd))?;
    println!("direct overlap: {:?}", direct.doc_ids());
    Ok(())
}
