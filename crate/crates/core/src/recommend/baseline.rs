use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{rank_order, Method, Query, RankedRecommendation, RecItem, RecommendError};
use crate::corpus::DocKind;
use crate::extraction::EntitySet;
use crate::graph::KnowledgeGraph;

/// Entity sets of every document of `kind` in the graph, keyed by doc id.
pub fn candidate_entities(g: &KnowledgeGraph, kind: DocKind) -> BTreeMap<String, EntitySet> {
    g.document_nodes(Some(kind))
        .into_iter()
        .map(|i| (g.node(i).label.clone(), g.entities_of(i)))
        .collect()
}

/// Ranks candidates by the number of query entities they share.
pub fn baseline_direct(
    q: &Query,
    candidates: &BTreeMap<String, EntitySet>,
) -> Result<RankedRecommendation, RecommendError> {
    if q.top_n == 0 {
        return Err(RecommendError::ZeroTopN);
    }
    let mut items = Vec::new();
    for (doc_id, set) in candidates {
        if q.query_id.as_deref() == Some(doc_id.as_str()) {
            continue;
        }
        let mut matched: Vec<String> = q
            .entities
            .entities
            .iter()
            .filter(|e| set.contains(&e.canonical, e.etype))
            .map(|e| e.canonical.clone())
            .collect();
        if matched.is_empty() {
            continue;
        }
        matched.sort();
        items.push(RecItem {
            doc_id: doc_id.clone(),
            score: matched.len() as f64,
            matched_entities: matched,
            via_entities: Vec::new(),
        });
    }
    items.sort_by(rank_order);
    items.truncate(q.top_n);
    Ok(RankedRecommendation {
        query_id: q.query_id.clone(),
        method: Method::Direct,
        top_n: q.top_n,
        items,
    })
}

/// Uniform sample of `n` ids without replacement. Scores count down from `n`.
pub fn baseline_random(doc_ids: &[String], n: usize, seed: u64) -> Result<RankedRecommendation, RecommendError> {
    if n == 0 {
        return Err(RecommendError::ZeroTopN);
    }
    if n > doc_ids.len() {
        return Err(RecommendError::TooMany {
            n,
            available: doc_ids.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids = doc_ids.to_vec();
    let (picked, _) = ids.partial_shuffle(&mut rng, n);
    let items = picked
        .iter()
        .enumerate()
        .map(|(rank, id)| RecItem {
            doc_id: id.clone(),
            score: (n - rank) as f64,
            matched_entities: Vec::new(),
            via_entities: Vec::new(),
        })
        .collect();
    Ok(RankedRecommendation {
        query_id: None,
        method: Method::Random,
        top_n: n,
        items,
    })
}
