use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::KnowledgeGraph;

/// Summary counts for a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub node_kinds: BTreeMap<String, usize>,
    pub edge_kinds: BTreeMap<String, usize>,
    /// degree -> number of nodes with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
    pub max_degree: usize,
    pub components: usize,
}

pub fn stats(g: &KnowledgeGraph) -> GraphStats {
    let mut node_kinds = BTreeMap::new();
    for n in g.nodes() {
        *node_kinds.entry(n.kind.to_string()).or_insert(0) += 1;
    }
    let mut edge_kinds = BTreeMap::new();
    for e in g.edges() {
        *edge_kinds.entry(e.kind.to_string()).or_insert(0) += 1;
    }
    let mut degree_histogram = BTreeMap::new();
    let mut max_degree = 0;
    for i in 0..g.node_count() {
        let d = g.degree(i);
        *degree_histogram.entry(d).or_insert(0) += 1;
        max_degree = max_degree.max(d);
    }
    GraphStats {
        nodes: g.node_count(),
        edges: g.edge_count(),
        node_kinds,
        edge_kinds,
        degree_histogram,
        max_degree,
        components: count_components(g),
    }
}

fn count_components(g: &KnowledgeGraph) -> usize {
    let mut seen = vec![false; g.node_count()];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..g.node_count() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DocKind, Document};
    use crate::extraction::{Entity, EntitySet, EntityType};

    fn add(g: &mut KnowledgeGraph, id: &str, terms: &[&str]) {
        let e = EntitySet::from_entities(id, terms.iter().map(|t| Entity::new(*t, EntityType::Skill)));
        g.add_document(&Document::new(id, DocKind::Cv, "t"), &e).unwrap();
    }

    #[test]
    fn star() {
        let mut g = KnowledgeGraph::new();
        add(&mut g, "a", &["p", "q", "r", "s"]);
        let s = stats(&g);
        assert_eq!((s.nodes, s.edges, s.max_degree, s.components), (5, 4, 4, 1));
        assert_eq!(s.degree_histogram[&1], 4);
        assert_eq!(s.node_kinds["entity:Skill"], 4);
        assert_eq!(s.edge_kinds["HasSkill"], 4);
    }

    #[test]
    fn disjoint_stars() {
        let mut g = KnowledgeGraph::new();
        add(&mut g, "a", &["p", "q"]);
        add(&mut g, "b", &["r", "s"]);
        assert_eq!(stats(&g).components, 2);
    }

    #[test]
    fn shared_entities() {
        let mut g = KnowledgeGraph::new();
        for id in ["a", "b", "c"] {
            add(&mut g, id, &["p", "q"]);
        }
        for t in ["p", "q"] {
            assert_eq!(g.degree(g.entity_index(t, EntityType::Skill).unwrap()), 3);
        }
        assert_eq!(stats(&g).degree_histogram[&3], 2);
    }

    #[test]
    fn empty() {
        let s = stats(&KnowledgeGraph::new());
        assert_eq!((s.nodes, s.edges, s.components), (0, 0, 0));
    }
}
