use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    baseline_direct, baseline_random, candidate_entities, evaluate_recommendations, recommend, Measure, Query,
    RankedRecommendation, RecMetrics, RecommendError, Table1Row, DEFAULT_HOPS,
};
use crate::corpus::{DocKind, JobArea};
use crate::graph::KnowledgeGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TableConfig {
    pub k: usize,
    pub measure: Measure,
    pub top_ns: Vec<usize>,
    /// List length used for the D and R rows.
    pub baseline_n: usize,
    pub seed: u64,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            k: DEFAULT_HOPS,
            measure: Measure::Degree,
            top_ns: vec![2, 5, 10],
            baseline_n: 5,
            seed: 42,
        }
    }
}

/// One table row with the per-query results behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub row: Table1Row,
    pub metrics: RecMetrics,
    pub results: Vec<RankedRecommendation>,
}

/// Labels of every labeled document node, keyed by doc id.
pub fn graph_labels(g: &KnowledgeGraph) -> BTreeMap<String, JobArea> {
    g.document_nodes(None)
        .into_iter()
        .filter_map(|i| g.node(i).area.map(|a| (g.node(i).label.clone(), a)))
        .collect()
}

pub fn task_name(query_kind: DocKind) -> &'static str {
    match query_kind {
        DocKind::Cv => "Job Rec.",
        DocKind::Jd => "Employee Rec.",
    }
}

/// Every document of `query_kind` as a query against the opposite kind.
pub fn queries_for(g: &KnowledgeGraph, query_kind: DocKind, top_n: usize) -> Vec<Query> {
    g.document_nodes(Some(query_kind))
        .into_iter()
        .map(|i| Query::from_document(g, &g.node(i).label, top_n).expect("document in graph"))
        .collect()
}

fn with_n(qs: &[Query], n: usize) -> Vec<Query> {
    qs.iter().map(|q| Query { top_n: n, ..q.clone() }).collect()
}

/// Propagation at every configured N, then the direct and random baselines,
/// for job recommendation (CV queries) and employee recommendation (JD queries).
pub fn recommendation_table(g: &KnowledgeGraph, cfg: &TableConfig) -> Result<Vec<TableEntry>, RecommendError> {
    let labels = graph_labels(g);
    let tasks = [DocKind::Cv, DocKind::Jd];
    let queries: Vec<Vec<Query>> = tasks.iter().map(|&k| queries_for(g, k, 1)).collect();
    let mut out = Vec::new();
    let mut push = |n: String, kind: DocKind, results: Vec<RankedRecommendation>| -> Result<(), RecommendError> {
        let metrics = evaluate_recommendations(&results, &labels)?;
        out.push(TableEntry {
            row: Table1Row::new(n, task_name(kind), &metrics),
            metrics,
            results,
        });
        Ok(())
    };
    for &n in &cfg.top_ns {
        for (t, &kind) in tasks.iter().enumerate() {
            let results = with_n(&queries[t], n)
                .iter()
                .map(|q| recommend(g, q, cfg.k, cfg.measure))
                .collect::<Result<_, _>>()?;
            push(n.to_string(), kind, results)?;
        }
    }
    for (t, &kind) in tasks.iter().enumerate() {
        let candidates = candidate_entities(g, kind.opposite());
        let results = with_n(&queries[t], cfg.baseline_n)
            .iter()
            .map(|q| baseline_direct(q, &candidates))
            .collect::<Result<_, _>>()?;
        push("D".into(), kind, results)?;
    }
    for (t, &kind) in tasks.iter().enumerate() {
        let ids: Vec<String> = candidate_entities(g, kind.opposite()).into_keys().collect();
        let mut results = Vec::new();
        for (i, q) in queries[t].iter().enumerate() {
            let mut r = baseline_random(&ids, cfg.baseline_n.min(ids.len()), cfg.seed.wrapping_add(i as u64))?;
            r.query_id = q.query_id.clone();
            results.push(r);
        }
        push("R".into(), kind, results)?;
    }
    Ok(out)
}
