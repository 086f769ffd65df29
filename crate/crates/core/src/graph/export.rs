use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::escape::escape;
use quick_xml::events::Event;
use quick_xml::Reader;
use serde::{Deserialize, Serialize};

use super::{EdgeKind, GraphError, KnowledgeGraph, Node, NodeKind};
use crate::corpus::{DocKind, JobArea};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    Jsonl,
}

impl FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            "jsonl" => Ok(GraphFormat::Jsonl),
            _ => Err(GraphError::Parse(format!(
                "unknown graph format {s:?} (valid: graphml, dot, jsonl)"
            ))),
        }
    }
}

const CV_COLOR: &str = "green";
const JD_COLOR: &str = "red";
const ENTITY_COLOR: &str = "blue";

fn node_color(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Document(DocKind::Cv) => CV_COLOR,
        NodeKind::Document(DocKind::Jd) => JD_COLOR,
        NodeKind::Entity(_) => ENTITY_COLOR,
    }
}

/// Serializes the graph. `features` is an optional path to the feature
/// sidecar, recorded in GraphML and JSONL output.
pub fn export_graph(g: &KnowledgeGraph, format: GraphFormat, features: Option<&str>) -> Vec<u8> {
    match format {
        GraphFormat::GraphMl => to_graphml(g, features),
        GraphFormat::Dot => to_dot(g),
        GraphFormat::Jsonl => to_jsonl(g, features),
    }
    .into_bytes()
}

/// Reads GraphML or JSONL written by [`export_graph`]. Returns the graph and
/// the recorded feature sidecar path, if any. DOT is export-only.
pub fn import_graph(bytes: &[u8], format: GraphFormat) -> Result<(KnowledgeGraph, Option<String>), GraphError> {
    let text = std::str::from_utf8(bytes).map_err(|e| GraphError::Parse(e.to_string()))?;
    match format {
        GraphFormat::GraphMl => from_graphml(text),
        GraphFormat::Jsonl => from_jsonl(text),
        GraphFormat::Dot => Err(GraphError::Parse("DOT import is not supported".into())),
    }
}

fn to_graphml(g: &KnowledgeGraph, features: Option<&str>) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"features\" for=\"graph\" attr.name=\"features\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"area\" for=\"node\" attr.name=\"area\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"edge_kind\" for=\"edge\" attr.name=\"kind\" attr.type=\"string\"/>\n");
    s.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    if let Some(f) = features {
        let _ = writeln!(s, "    <data key=\"features\">{}</data>", escape(f));
    }
    for n in g.nodes() {
        let _ = write!(
            s,
            "    <node id=\"{}\"><data key=\"label\">{}</data><data key=\"kind\">{}</data>",
            escape(n.id.as_str()),
            escape(n.label.as_str()),
            n.kind
        );
        if let Some(a) = n.area {
            let _ = write!(s, "<data key=\"area\">{}</data>", escape(a.name()));
        }
        s.push_str("</node>\n");
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"edge_kind\">{}</data></edge>",
            escape(g.node(e.doc).id.as_str()),
            escape(g.node(e.entity).id.as_str()),
            e.kind
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

#[derive(Default)]
struct PendingNode {
    id: String,
    label: Option<String>,
    kind: Option<String>,
    area: Option<String>,
}

#[derive(Default)]
struct PendingEdge {
    source: String,
    target: String,
    kind: Option<String>,
}

enum Open {
    None,
    Node(PendingNode),
    Edge(PendingEdge),
}

fn xml_err(e: impl std::fmt::Display) -> GraphError {
    GraphError::Parse(format!("GraphML: {e}"))
}

fn attr(e: &quick_xml::events::BytesStart<'_>, name: &[u8]) -> Result<Option<String>, GraphError> {
    for a in e.attributes() {
        let a = a.map_err(xml_err)?;
        if a.key.as_ref() == name {
            return Ok(Some(a.unescape_value().map_err(xml_err)?.into_owned()));
        }
    }
    Ok(None)
}

fn finish_node(g: &mut KnowledgeGraph, p: PendingNode) -> Result<(), GraphError> {
    let kind: NodeKind = p
        .kind
        .ok_or_else(|| xml_err(format!("node {} has no kind", p.id)))?
        .parse()?;
    let area = match p.area {
        Some(a) => Some(a.parse::<JobArea>().map_err(xml_err)?),
        None => None,
    };
    g.insert_node(Node {
        label: p.label.unwrap_or_default(),
        id: p.id,
        kind,
        area,
    })?;
    Ok(())
}

fn from_graphml(text: &str) -> Result<(KnowledgeGraph, Option<String>), GraphError> {
    let mut reader = Reader::from_str(text);
    let mut g = KnowledgeGraph::new();
    let mut features = None;
    let mut open = Open::None;
    let mut data_key: Option<String> = None;
    let mut data_text = String::new();
    let mut edges = Vec::new();
    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Start(e) if e.name().as_ref() == b"node" => {
                open = Open::Node(PendingNode {
                    id: attr(&e, b"id")?.ok_or_else(|| xml_err("node without id"))?,
                    ..PendingNode::default()
                });
            }
            Event::Empty(e) if e.name().as_ref() == b"node" => {
                finish_node(
                    &mut g,
                    PendingNode {
                        id: attr(&e, b"id")?.ok_or_else(|| xml_err("node without id"))?,
                        ..PendingNode::default()
                    },
                )?;
            }
            Event::Start(e) if e.name().as_ref() == b"edge" => {
                open = Open::Edge(PendingEdge {
                    source: attr(&e, b"source")?.ok_or_else(|| xml_err("edge without source"))?,
                    target: attr(&e, b"target")?.ok_or_else(|| xml_err("edge without target"))?,
                    kind: None,
                });
            }
            Event::Start(e) if e.name().as_ref() == b"data" => {
                data_key = attr(&e, b"key")?;
                data_text.clear();
            }
            Event::Text(t) if data_key.is_some() => {
                data_text.push_str(&t.unescape().map_err(xml_err)?);
            }
            Event::End(e) if e.name().as_ref() == b"data" => {
                let key = data_key.take().unwrap_or_default();
                let value = std::mem::take(&mut data_text);
                match (&mut open, key.as_str()) {
                    (Open::Node(p), "label") => p.label = Some(value),
                    (Open::Node(p), "kind") => p.kind = Some(value),
                    (Open::Node(p), "area") => p.area = Some(value),
                    (Open::Edge(p), "edge_kind") => p.kind = Some(value),
                    (Open::None, "features") => features = Some(value),
                    _ => {}
                }
            }
            Event::End(e) if e.name().as_ref() == b"node" => {
                if let Open::Node(p) = std::mem::replace(&mut open, Open::None) {
                    finish_node(&mut g, p)?;
                }
            }
            Event::End(e) if e.name().as_ref() == b"edge" => {
                if let Open::Edge(p) = std::mem::replace(&mut open, Open::None) {
                    edges.push(p);
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    // edges may precede their nodes in hand-written files
    for p in edges {
        let kind: EdgeKind = p
            .kind
            .ok_or_else(|| xml_err(format!("edge {} -- {} has no kind", p.source, p.target)))?
            .parse()?;
        g.insert_edge(&p.source, &p.target, kind)?;
    }
    Ok((g, features))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn to_dot(g: &KnowledgeGraph) -> String {
    let mut s = String::from("graph kg {\n  node [style=filled, fontcolor=white];\n");
    for n in g.nodes() {
        let color = node_color(n.kind);
        let _ = writeln!(
            s,
            "  \"{}\" [label=\"{}\", kind=\"{}\", color=\"{color}\", fillcolor=\"{color}\"];",
            dot_escape(&n.id),
            dot_escape(&n.label),
            n.kind
        );
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "  \"{}\" -- \"{}\" [kind=\"{}\"];",
            dot_escape(&g.node(e.doc).id),
            dot_escape(&g.node(e.entity).id),
            e.kind
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum JsonLine {
    Graph {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        features: Option<String>,
    },
    Node {
        id: String,
        label: String,
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        area: Option<JobArea>,
    },
    Edge {
        source: String,
        target: String,
        kind: EdgeKind,
    },
}

fn to_jsonl(g: &KnowledgeGraph, features: Option<&str>) -> String {
    let mut lines = vec![JsonLine::Graph {
        features: features.map(str::to_string),
    }];
    lines.extend(g.nodes().iter().map(|n| JsonLine::Node {
        id: n.id.clone(),
        label: n.label.clone(),
        kind: n.kind.to_string(),
        area: n.area,
    }));
    lines.extend(g.edges().iter().map(|e| JsonLine::Edge {
        source: g.node(e.doc).id.clone(),
        target: g.node(e.entity).id.clone(),
        kind: e.kind,
    }));
    let mut s = String::new();
    for l in lines {
        s.push_str(&serde_json::to_string(&l).expect("line serializes"));
        s.push('\n');
    }
    s
}

fn from_jsonl(text: &str) -> Result<(KnowledgeGraph, Option<String>), GraphError> {
    let mut g = KnowledgeGraph::new();
    let mut features = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let l: JsonLine = serde_json::from_str(line)
            .map_err(|e| GraphError::Parse(format!("line {}: {e}", i + 1)))?;
        match l {
            JsonLine::Graph { features: f } => features = f,
            JsonLine::Node {
                id,
                label,
                kind,
                area,
            } => {
                g.insert_node(Node {
                    id,
                    label,
                    kind: kind.parse()?,
                    area,
                })?;
            }
            JsonLine::Edge {
                source,
                target,
                kind,
            } => edges.push((source, target, kind)),
        }
    }
    for (a, b, k) in edges {
        g.insert_edge(&a, &b, k)?;
    }
    Ok((g, features))
}
