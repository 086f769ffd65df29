//! Information propagation over the knowledge graph: seed matching, k-hop
//! expansion and centrality ranking of target documents, with the direct and
//! random baselines and Table-style metrics.

mod baseline;
mod experiment;
mod metrics;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::DocKind;
use crate::extraction::EntitySet;
use crate::graph::{KnowledgeGraph, NodeKind};

pub use baseline::{baseline_direct, baseline_random, candidate_entities};
pub use experiment::{graph_labels, queries_for, recommendation_table, task_name, TableConfig, TableEntry};
pub use metrics::{
    evaluate_recommendations, reference_table1, table1_markdown, QueryMetrics, RecMetrics, Table1Row,
};

pub const DEFAULT_HOPS: usize = 3;
pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_MAX_ITER: usize = 100;
pub const PAGERANK_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("centrality of an empty subgraph")]
    EmptySubgraph,
    #[error("top-n must be at least 1")]
    ZeroTopN,
    #[error("asked for {n} random documents but only {available} are available")]
    TooMany { n: usize, available: usize },
    #[error("document {0:?} has no label")]
    MissingLabel(String),
    #[error("unknown document {0:?}")]
    UnknownDocument(String),
    #[error("unknown {what} {value:?}")]
    Unknown { what: &'static str, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    #[default]
    Degree,
    PageRank,
}

impl FromStr for Measure {
    type Err = RecommendError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "degree" => Ok(Measure::Degree),
            "pagerank" => Ok(Measure::PageRank),
            _ => Err(RecommendError::Unknown {
                what: "measure",
                value: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Degree => "degree",
            Measure::PageRank => "pagerank",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Propagation,
    Direct,
    Random,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Propagation => "propagation",
            Method::Direct => "direct",
            Method::Random => "random",
        })
    }
}

/// A recommendation request.
#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    /// Document the entities came from; never recommended back to itself.
    pub query_id: Option<String>,
    pub entities: EntitySet,
    pub target_kind: DocKind,
    pub top_n: usize,
}

impl Query {
    pub fn new(entities: EntitySet, target_kind: DocKind, top_n: usize) -> Self {
        Query {
            query_id: None,
            entities,
            target_kind,
            top_n,
        }
    }

    /// Query built from a document already in the graph, targeting the
    /// opposite document kind.
    pub fn from_document(g: &KnowledgeGraph, doc_id: &str, top_n: usize) -> Result<Self, RecommendError> {
        let i = g
            .document_index(doc_id)
            .ok_or_else(|| RecommendError::UnknownDocument(doc_id.to_string()))?;
        let kind = g.node_kind(i).doc_kind().expect("document node");
        Ok(Query {
            query_id: Some(doc_id.to_string()),
            entities: g.entities_of(i),
            target_kind: kind.opposite(),
            top_n,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecItem {
    pub doc_id: String,
    pub score: f64,
    /// Query entities directly attached to this document.
    pub matched_entities: Vec<String>,
    /// Non-seed entities linking this document into the subgraph.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub via_entities: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedRecommendation {
    pub query_id: Option<String>,
    pub method: Method,
    pub top_n: usize,
    pub items: Vec<RecItem>,
}

impl RankedRecommendation {
    pub fn empty(q: &Query, method: Method) -> Self {
        RankedRecommendation {
            query_id: q.query_id.clone(),
            method,
            top_n: q.top_n,
            items: Vec::new(),
        }
    }

    pub fn doc_ids(&self) -> Vec<&str> {
        self.items.iter().map(|i| i.doc_id.as_str()).collect()
    }
}

/// Entity nodes whose (canonical, type) appear in the query, ascending.
pub fn match_entities(g: &KnowledgeGraph, q: &Query) -> Vec<usize> {
    let seeds: BTreeSet<usize> = q
        .entities
        .entities
        .iter()
        .filter_map(|e| g.entity_index(&e.canonical, e.etype))
        .collect();
    seeds.into_iter().collect()
}

/// Induced subgraph of the nodes within `k` hops of a seed set.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    /// Graph indices, ascending.
    pub nodes: Vec<usize>,
    /// BFS distance of each node from the nearest seed.
    pub dist: Vec<usize>,
    /// Local adjacency lists, ascending local indices.
    pub adj: Vec<Vec<usize>>,
    local: HashMap<usize, usize>,
}

impl Subgraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn local(&self, global: usize) -> Option<usize> {
        self.local.get(&global).copied()
    }

    pub fn contains(&self, global: usize) -> bool {
        self.local.contains_key(&global)
    }

    pub fn degree(&self, local: usize) -> usize {
        self.adj[local].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn khop_subgraph(g: &KnowledgeGraph, seeds: &[usize], k: usize) -> Subgraph {
    let mut dist: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in seeds {
        if dist.insert(s, 0).is_none() {
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == k {
            continue;
        }
        for &v in g.neighbors(u) {
            if !dist.contains_key(&v) {
                dist.insert(v, du + 1);
                queue.push_back(v);
            }
        }
    }
    let mut nodes: Vec<usize> = dist.keys().copied().collect();
    nodes.sort_unstable();
    let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let adj = nodes
        .iter()
        .map(|&u| {
            let mut row: Vec<usize> = g.neighbors(u).iter().filter_map(|v| local.get(v).copied()).collect();
            row.sort_unstable();
            row
        })
        .collect();
    Subgraph {
        dist: nodes.iter().map(|n| dist[n]).collect(),
        nodes,
        adj,
        local,
    }
}

/// Centrality of every subgraph node, indexed by local position.
pub fn centrality(sub: &Subgraph, measure: Measure) -> Result<Vec<f64>, RecommendError> {
    if sub.is_empty() {
        return Err(RecommendError::EmptySubgraph);
    }
    Ok(match measure {
        Measure::Degree => (0..sub.len()).map(|i| sub.degree(i) as f64).collect(),
        Measure::PageRank => pagerank(&sub.adj),
    })
}

/// Power iteration with uniform teleport; dangling mass is spread uniformly.
fn pagerank(adj: &[Vec<usize>]) -> Vec<f64> {
    let n = adj.len();
    let nf = n as f64;
    let mut r = vec![1.0 / nf; n];
    for _ in 0..PAGERANK_MAX_ITER {
        let dangling: f64 = (0..n).filter(|&i| adj[i].is_empty()).map(|i| r[i]).sum();
        let base = (1.0 - PAGERANK_DAMPING) / nf + PAGERANK_DAMPING * dangling / nf;
        let mut next = vec![base; n];
        for (u, row) in adj.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let share = PAGERANK_DAMPING * r[u] / row.len() as f64;
            for &v in row {
                next[v] += share;
            }
        }
        let delta: f64 = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).sum();
        r = next;
        if delta < PAGERANK_TOL {
            break;
        }
    }
    r
}

/// Total order on results: score desc, direct matches desc, doc id asc.
pub(crate) fn rank_order(a: &RecItem, b: &RecItem) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(b.matched_entities.len().cmp(&a.matched_entities.len()))
        .then_with(|| a.doc_id.cmp(&b.doc_id))
}

/// Seeds from the query, `k`-hop subgraph, candidates of the target kind
/// ranked by centrality inside the subgraph.
pub fn recommend(g: &KnowledgeGraph, q: &Query, k: usize, measure: Measure) -> Result<RankedRecommendation, RecommendError> {
    if q.top_n == 0 {
        return Err(RecommendError::ZeroTopN);
    }
    let seeds = match_entities(g, q);
    if seeds.is_empty() {
        return Ok(RankedRecommendation::empty(q, Method::Propagation));
    }
    let sub = khop_subgraph(g, &seeds, k);
    let scores = centrality(&sub, measure)?;
    let seed_set: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut items = Vec::new();
    for (li, &gi) in sub.nodes.iter().enumerate() {
        let node = g.node(gi);
        if node.kind != NodeKind::Document(q.target_kind) {
            continue;
        }
        if q.query_id.as_deref() == Some(node.label.as_str()) {
            continue;
        }
        let mut matched = Vec::new();
        let mut via = Vec::new();
        for &lj in &sub.adj[li] {
            let gj = sub.nodes[lj];
            let label = g.node(gj).label.clone();
            if seed_set.contains(&gj) {
                matched.push(label);
            } else {
                via.push(label);
            }
        }
        matched.sort();
        via.sort();
        items.push(RecItem {
            doc_id: node.label.clone(),
            score: scores[li],
            matched_entities: matched,
            via_entities: via,
        });
    }
    items.sort_by(rank_order);
    items.truncate(q.top_n);
    Ok(RankedRecommendation {
        query_id: q.query_id.clone(),
        method: Method::Propagation,
        top_n: q.top_n,
        items,
    })
}
