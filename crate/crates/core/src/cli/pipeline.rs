//! Library-level pipeline stages shared by the subcommands, examples and tests.

use crate::corpus::{default_pools, synth_corpus, Corpus, CorpusError, SynthParams};
use crate::extraction::{extract_gazetteer, refine, EntitySet, Gazetteer, RefineConfig};
use crate::graph::{GraphError, KnowledgeGraph};

/// Gazetteer extraction plus refinement for every document, in corpus order.
pub fn extract_corpus_gazetteer(corpus: &Corpus, gazetteer: &Gazetteer, refine_cfg: &RefineConfig) -> Vec<EntitySet> {
    corpus
        .documents()
        .iter()
        .map(|d| refine(&extract_gazetteer(d, gazetteer), refine_cfg))
        .collect()
}

/// Graph over a corpus and its entity sets (matched by position).
pub fn build_graph(corpus: &Corpus, sets: &[EntitySet]) -> Result<KnowledgeGraph, GraphError> {
    KnowledgeGraph::from_documents(corpus.documents().iter().zip(sets))
}

/// The bundled synthetic setup: default pools, gazetteer extraction,
/// default refinement.
pub fn synthetic_graph(
    seed: u64,
    docs_per_category: usize,
    overlap: f64,
) -> Result<(Corpus, Vec<EntitySet>, KnowledgeGraph), SyntheticError> {
    let pools = default_pools();
    let corpus = synth_corpus(&SynthParams::new(seed, docs_per_category, pools.clone(), overlap))?;
    let sets = extract_corpus_gazetteer(&corpus, &Gazetteer::from_pools(&pools), &RefineConfig::default());
    let g = build_graph(&corpus, &sets)?;
    Ok((corpus, sets, g))
}

#[derive(Debug, thiserror::Error)]
pub enum SyntheticError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
