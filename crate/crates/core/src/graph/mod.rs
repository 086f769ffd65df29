//! The knowledge graph: document and entity nodes, typed edges, optional
//! node features, adjacency, and serialization.
//!
//! The graph is undirected and bipartite. Every edge joins a document node to
//! an entity node, and its kind is determined by the entity's type. Entity
//! nodes are shared across documents by `(canonical, etype)`.

mod export;
mod stats;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{DocKind, Document, JobArea};
use crate::embedding::{build_feature_matrix, EmbeddingError, EmbeddingProvider, FeatureMatrix};
use crate::extraction::{EntitySet, EntityType};

pub use export::{export_graph, import_graph, GraphFormat};
pub use stats::{stats, GraphStats};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("document {0:?} is already in the graph")]
    DuplicateDocument(String),
    #[error("duplicate node id {0:?}")]
    DuplicateNode(String),
    #[error("unknown node id {0:?}")]
    UnknownNode(String),
    #[error("invalid edge {0} -- {1}: {2}")]
    InvalidEdge(String, String, String),
    #[error("bad node kind {0:?}")]
    BadKind(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("feature matrix does not match graph nodes: {0}")]
    Features(String),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Node type: a document of some kind, or an entity of some type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Document(DocKind),
    Entity(EntityType),
}

impl NodeKind {
    pub fn is_document(self) -> bool {
        matches!(self, NodeKind::Document(_))
    }

    pub fn doc_kind(self) -> Option<DocKind> {
        match self {
            NodeKind::Document(k) => Some(k),
            NodeKind::Entity(_) => None,
        }
    }

    pub fn entity_type(self) -> Option<EntityType> {
        match self {
            NodeKind::Entity(t) => Some(t),
            NodeKind::Document(_) => None,
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Document(k) => write!(f, "document:{k}"),
            NodeKind::Entity(t) => write!(f, "entity:{t}"),
        }
    }
}

impl FromStr for NodeKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadKind(s.to_string());
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "document" => Ok(NodeKind::Document(tail.parse().map_err(|_| bad())?)),
            "entity" => Ok(NodeKind::Entity(tail.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

/// Edge type; a function of the entity endpoint's type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    HasSkill,
    HasEducation,
    HasQualification,
    HasExperience,
    HasOther,
}

impl EdgeKind {
    pub fn for_entity(t: EntityType) -> EdgeKind {
        match t {
            EntityType::Skill => EdgeKind::HasSkill,
            EntityType::Education => EdgeKind::HasEducation,
            EntityType::Qualification => EdgeKind::HasQualification,
            EntityType::Experience => EdgeKind::HasExperience,
            EntityType::Other => EdgeKind::HasOther,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::HasSkill => "HasSkill",
            EdgeKind::HasEducation => "HasEducation",
            EdgeKind::HasQualification => "HasQualification",
            EdgeKind::HasExperience => "HasExperience",
            EdgeKind::HasOther => "HasOther",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            EdgeKind::HasSkill,
            EdgeKind::HasEducation,
            EdgeKind::HasQualification,
            EdgeKind::HasExperience,
            EdgeKind::HasOther,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| GraphError::BadKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Unique node id: `doc:<doc id>` or `<type>:<canonical>`.
    pub id: String,
    /// Document id, or the entity's canonical form.
    pub label: String,
    pub kind: NodeKind,
    /// Job area of a document node, when known.
    pub area: Option<JobArea>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Index of the document endpoint.
    pub doc: usize,
    /// Index of the entity endpoint.
    pub entity: usize,
    pub kind: EdgeKind,
}

/// Node id for a document.
pub fn document_node_id(doc_id: &str) -> String {
    format!("doc:{doc_id}")
}

/// Node id for an entity.
pub fn entity_node_id(canonical: &str, etype: EntityType) -> String {
    format!("{}:{canonical}", etype.as_str().to_lowercase())
}

/// Undirected bipartite document/entity graph with optional features.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeGraph {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_set: HashSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    features: Option<FeatureMatrix>,
}

/// Dense 0/1 adjacency matrix indexed by node insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    data: Vec<u8>,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize) -> Self {
        AdjacencyMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set_edge(&mut self, i: usize, j: usize) {
        self.data[i * self.n + j] = 1;
        self.data[j * self.n + i] = 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn trace(&self) -> usize {
        (0..self.n).map(|i| self.get(i, i) as usize).sum()
    }

    /// Neighbor lists, ascending.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.get(i, j) == 1).collect())
            .collect()
    }
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from documents paired with their refined entities.
    pub fn from_documents<'a>(
        docs: impl IntoIterator<Item = (&'a Document, &'a EntitySet)>,
    ) -> Result<Self, GraphError> {
        let mut g = KnowledgeGraph::new();
        for (d, e) in docs {
            g.add_document(d, e)?;
        }
        Ok(g)
    }

    /// Adds a document node and links it to its entities, reusing entity
    /// nodes already present. Returns the document's node index.
    pub fn add_document(&mut self, doc: &Document, entities: &EntitySet) -> Result<usize, GraphError> {
        let doc_node_id = document_node_id(&doc.id);
        if self.index.contains_key(&doc_node_id) {
            return Err(GraphError::DuplicateDocument(doc.id.clone()));
        }
        let d = self.push_node(Node {
            id: doc_node_id,
            label: doc.id.clone(),
            kind: NodeKind::Document(doc.kind),
            area: doc.label,
        });
        for e in &entities.entities {
            let id = entity_node_id(&e.canonical, e.etype);
            let v = match self.index.get(&id) {
                Some(&v) => v,
                None => self.push_node(Node {
                    id,
                    label: e.canonical.clone(),
                    kind: NodeKind::Entity(e.etype),
                    area: None,
                }),
            };
            self.link(d, v, EdgeKind::for_entity(e.etype));
        }
        Ok(d)
    }

    fn push_node(&mut self, node: Node) -> usize {
        let i = self.nodes.len();
        self.index.insert(node.id.clone(), i);
        self.nodes.push(node);
        self.adj.push(Vec::new());
        i
    }

    fn link(&mut self, doc: usize, entity: usize, kind: EdgeKind) -> bool {
        if !self.edge_set.insert((doc, entity)) {
            return false;
        }
        self.edges.push(Edge { doc, entity, kind });
        self.adj[doc].push(entity);
        self.adj[entity].push(doc);
        true
    }

    /// Inserts a node verbatim; used when reading serialized graphs.
    pub(crate) fn insert_node(&mut self, node: Node) -> Result<usize, GraphError> {
        if self.index.contains_key(&node.id) {
            return Err(GraphError::DuplicateNode(node.id));
        }
        Ok(self.push_node(node))
    }

    /// Inserts an edge between two existing nodes after validating the schema.
    pub(crate) fn insert_edge(&mut self, a: &str, b: &str, kind: EdgeKind) -> Result<(), GraphError> {
        let ia = *self.index.get(a).ok_or_else(|| GraphError::UnknownNode(a.to_string()))?;
        let ib = *self.index.get(b).ok_or_else(|| GraphError::UnknownNode(b.to_string()))?;
        let invalid = |why: &str| GraphError::InvalidEdge(a.to_string(), b.to_string(), why.to_string());
        let (doc, ent) = match (self.nodes[ia].kind, self.nodes[ib].kind) {
            (NodeKind::Document(_), NodeKind::Entity(_)) => (ia, ib),
            (NodeKind::Entity(_), NodeKind::Document(_)) => (ib, ia),
            _ => return Err(invalid("edges must join a document and an entity")),
        };
        let etype = self.nodes[ent].kind.entity_type().expect("entity endpoint");
        if EdgeKind::for_entity(etype) != kind {
            return Err(invalid("edge kind does not match entity type"));
        }
        if !self.link(doc, ent, kind) {
            return Err(invalid("parallel edge"));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbor indices of node `i`, in edge insertion order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn index_of(&self, node_id: &str) -> Option<usize> {
        self.index.get(node_id).copied()
    }

    pub fn document_index(&self, doc_id: &str) -> Option<usize> {
        self.index_of(&document_node_id(doc_id))
    }

    pub fn entity_index(&self, canonical: &str, etype: EntityType) -> Option<usize> {
        self.index_of(&entity_node_id(canonical, etype))
    }

    /// Node type map φ.
    pub fn node_kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    /// Edge type map.
    pub fn edge_kind(&self, doc: usize, entity: usize) -> Option<EdgeKind> {
        if !self.edge_set.contains(&(doc, entity)) {
            return None;
        }
        self.nodes[entity].kind.entity_type().map(EdgeKind::for_entity)
    }

    /// Indices of document nodes, optionally restricted to one kind.
    pub fn document_nodes(&self, kind: Option<DocKind>) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| match self.nodes[i].kind {
                NodeKind::Document(k) => kind.is_none_or(|want| want == k),
                NodeKind::Entity(_) => false,
            })
            .collect()
    }

    /// The refined entity set attached to a document node.
    pub fn entities_of(&self, doc: usize) -> EntitySet {
        let entities = self.adj[doc].iter().filter_map(|&v| {
            let n = &self.nodes[v];
            n.kind
                .entity_type()
                .map(|t| crate::extraction::Entity {
                    surface: n.label.clone(),
                    canonical: n.label.clone(),
                    etype: t,
                })
        });
        EntitySet::from_entities(self.nodes[doc].label.clone(), entities)
    }

    /// Distinct node types present.
    pub fn node_types(&self) -> BTreeSet<NodeKind> {
        self.nodes.iter().map(|n| n.kind).collect()
    }

    /// Distinct edge types present.
    pub fn edge_types(&self) -> BTreeSet<EdgeKind> {
        self.edges.iter().map(|e| e.kind).collect()
    }

    /// Whether the node and edge type sets together hold more than two types.
    pub fn is_heterogeneous(&self) -> bool {
        self.node_types().len() + self.edge_types().len() > 2
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        let mut a = AdjacencyMatrix::zeros(self.nodes.len());
        for e in &self.edges {
            a.set_edge(e.doc, e.entity);
        }
        a
    }

    pub fn features(&self) -> Option<&FeatureMatrix> {
        self.features.as_ref()
    }

    /// Attaches features; row ids must equal node ids in order.
    pub fn set_features(&mut self, m: FeatureMatrix) -> Result<(), GraphError> {
        if m.rows() != self.nodes.len() {
            return Err(GraphError::Features(format!(
                "{} rows for {} nodes",
                m.rows(),
                self.nodes.len()
            )));
        }
        if let Some((i, _)) = m
            .node_ids()
            .iter()
            .zip(&self.nodes)
            .enumerate()
            .find(|(_, (id, n))| **id != n.id)
        {
            return Err(GraphError::Features(format!("row {i} is {:?}", m.node_ids()[i])));
        }
        self.features = Some(m);
        Ok(())
    }

    /// Embeds every node label with `provider` and attaches the result.
    pub fn embed_nodes(&mut self, provider: &dyn EmbeddingProvider) -> Result<(), GraphError> {
        let nodes: Vec<(String, String)> = self
            .nodes
            .iter()
            .map(|n| (n.id.clone(), n.label.clone()))
            .collect();
        let m = build_feature_matrix(&nodes, provider)?;
        self.set_features(m)
    }

    /// Order-independent description: sorted `(id, label, kind)` nodes and
    /// sorted `(doc id, entity id, kind)` edges. Two graphs with equal
    /// signatures are isomorphic with identical labels.
    pub fn signature(&self) -> (Vec<(String, String, NodeKind)>, Vec<(String, String, EdgeKind)>) {
        let mut nodes: Vec<_> = self
            .nodes
            .iter()
            .map(|n| (n.id.clone(), n.label.clone(), n.kind))
            .collect();
        nodes.sort();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| (self.nodes[e.doc].id.clone(), self.nodes[e.entity].id.clone(), e.kind))
            .collect();
        edges.sort();
        (nodes, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::Entity;

    fn doc(id: &str, kind: DocKind) -> Document {
        Document::new(id, kind, "text")
    }

    fn ents(id: &str, items: &[(&str, EntityType)]) -> EntitySet {
        EntitySet::from_entities(id, items.iter().map(|(s, t)| Entity::new(*s, *t)))
    }

    #[test]
    fn star_construction() {
        let mut g = KnowledgeGraph::new();
        let e = ents(
            "cv-1",
            &[
                ("python", EntityType::Skill),
                ("sql", EntityType::Skill),
                ("bsc", EntityType::Education),
                ("aws", EntityType::Qualification),
            ],
        );
        let d = g.add_document(&doc("cv-1", DocKind::Cv), &e).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        assert_eq!(g.degree(d), 4);
        assert_eq!(g.adjacency().row(d).iter().filter(|&&x| x == 1).count(), 4);
        assert_eq!(
            g.edge_kind(d, g.entity_index("bsc", EntityType::Education).unwrap()),
            Some(EdgeKind::HasEducation)
        );
        assert!(g.is_heterogeneous());
    }

    #[test]
    fn shared_entity_node() {
        let mut g = KnowledgeGraph::new();
        let py = [("python", EntityType::Skill)];
        g.add_document(&doc("a", DocKind::Cv), &ents("a", &py)).unwrap();
        g.add_document(&doc("b", DocKind::Cv), &ents("b", &py)).unwrap();
        let p = g.entity_index("python", EntityType::Skill).unwrap();
        assert_eq!(g.degree(p), 2);
        assert_eq!(g.node_count(), 3);
    }

    #[test]
    fn type_sensitive_identity() {
        let mut g = KnowledgeGraph::new();
        let e = ents("a", &[("python", EntityType::Skill), ("python", EntityType::Other)]);
        g.add_document(&doc("a", DocKind::Cv), &e).unwrap();
        assert_eq!(g.node_count(), 3);
    }

    #[test]
    fn isolated_document_and_duplicates() {
        let mut g = KnowledgeGraph::new();
        g.add_document(&doc("a", DocKind::Jd), &EntitySet::default()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
        assert!(matches!(
            g.add_document(&doc("a", DocKind::Jd), &EntitySet::default()),
            Err(GraphError::DuplicateDocument(_))
        ));
        // a raw duplicate in the input produces one edge
        let dup = EntitySet {
            doc_id: "b".into(),
            entities: vec![Entity::new("go", EntityType::Skill), Entity::new("go", EntityType::Skill)],
        };
        g.add_document(&doc("b", DocKind::Cv), &dup).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn adjacency_invariants() {
        let mut g = KnowledgeGraph::new();
        let e = ents("a", &[("x", EntityType::Skill), ("y", EntityType::Skill)]);
        g.add_document(&doc("a", DocKind::Cv), &e).unwrap();
        g.add_document(&doc("b", DocKind::Jd), &ents("b", &[("y", EntityType::Skill)])).unwrap();
        let a = g.adjacency();
        assert!(a.is_symmetric());
        assert_eq!(a.trace(), 0);
        for i in 0..g.node_count() {
            assert_eq!(a.row(i).iter().map(|&x| x as usize).sum::<usize>(), g.degree(i));
        }
    }

    #[test]
    fn insert_edge_validates_schema() {
        let mut g = KnowledgeGraph::new();
        g.add_document(&doc("a", DocKind::Cv), &ents("a", &[("x", EntityType::Skill)])).unwrap();
        g.add_document(&doc("b", DocKind::Cv), &EntitySet::default()).unwrap();
        assert!(g.insert_edge("doc:a", "doc:b", EdgeKind::HasSkill).is_err());
        assert!(g.insert_edge("doc:b", "skill:x", EdgeKind::HasOther).is_err());
        assert!(g.insert_edge("doc:a", "skill:x", EdgeKind::HasSkill).is_err());
        g.insert_edge("skill:x", "doc:b", EdgeKind::HasSkill).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn kind_strings_round_trip() {
        for k in [
            NodeKind::Document(DocKind::Cv),
            NodeKind::Document(DocKind::Jd),
            NodeKind::Entity(EntityType::Experience),
        ] {
            assert_eq!(k.to_string().parse::<NodeKind>().unwrap(), k);
        }
        assert!("entity:Nope".parse::<NodeKind>().is_err());
    }
}
