use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::corpus::{DocKind, Document, JobArea};
use crate::embedding::{read_sidecar, write_sidecar};
use crate::extraction::{parse_llm_response, refine, Entity, EntitySet, RefineConfig};
use crate::graph::{export_graph, import_graph, GraphFormat, KnowledgeGraph};
use crate::recommend::Query;

/// One line of the entity store written by `ingest`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub doc_id: String,
    pub kind: DocKind,
    #[serde(default)]
    pub label: Option<JobArea>,
    pub entities: Vec<Entity>,
}

impl StoreRecord {
    pub fn new(doc: &Document, set: EntitySet) -> Self {
        StoreRecord {
            doc_id: doc.id.clone(),
            kind: doc.kind,
            label: doc.label,
            entities: set.entities,
        }
    }

    pub fn document(&self) -> Document {
        let mut d = Document::new(self.doc_id.clone(), self.kind, "");
        d.label = self.label;
        d
    }

    pub fn entity_set(&self) -> EntitySet {
        EntitySet {
            doc_id: self.doc_id.clone(),
            entities: self.entities.clone(),
        }
    }
}

/// Writes `bytes` next to `path` and renames it into place, so a failed run
/// never leaves a truncated file behind.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn to_jsonl<T: Serialize>(items: &[T]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).expect("record serializes"));
        s.push('\n');
    }
    s
}

fn read_lines<T, F>(path: &Path, mut parse: F) -> Result<Vec<T>, CliError>
where
    F: FnMut(&str) -> Result<T, String>,
{
    let f = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse(&line).map_err(|message| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        })?);
    }
    Ok(out)
}

pub fn write_entity_store(records: &[StoreRecord], path: &Path) -> Result<(), CliError> {
    write_atomic(path, to_jsonl(records).as_bytes())
}

pub fn read_entity_store(path: &Path) -> Result<Vec<StoreRecord>, CliError> {
    read_lines(path, |l| serde_json::from_str(l).map_err(|e| e.to_string()))
}

/// GraphML unless the extension says `.jsonl` or `.dot`.
pub(crate) fn format_for(path: &Path) -> GraphFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("jsonl") => GraphFormat::Jsonl,
        Some(e) if e.eq_ignore_ascii_case("dot") => GraphFormat::Dot,
        _ => GraphFormat::GraphMl,
    }
}

fn sidecar_base(graph_path: &Path) -> PathBuf {
    let name = graph_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    graph_path.with_file_name(format!("{name}.features"))
}

/// Writes the graph (format from the extension) and, when the graph has
/// features, a sidecar `<path>.features.{json,bin}` referenced from the graph
/// file by name. Returns the sidecar header path.
pub fn save_graph(g: &KnowledgeGraph, path: &Path) -> Result<Option<PathBuf>, CliError> {
    let header = match g.features() {
        Some(m) => Some(write_sidecar(m, &sidecar_base(path))?),
        None => None,
    };
    let reference = header
        .as_ref()
        .and_then(|h| h.file_name())
        .map(|n| n.to_string_lossy().into_owned());
    write_atomic(path, &export_graph(g, format_for(path), reference.as_deref()))?;
    Ok(header)
}

/// Reads a graph file and attaches its feature sidecar when one is recorded.
/// Relative sidecar references resolve against the graph file's directory.
pub fn load_graph(path: &Path) -> Result<(KnowledgeGraph, Option<PathBuf>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let (mut g, reference) = import_graph(&bytes, format_for(path))?;
    let sidecar = reference.map(|r| path.parent().unwrap_or(Path::new("")).join(r));
    if let Some(s) = &sidecar {
        g.set_features(read_sidecar(s)?)?;
    }
    Ok((g, sidecar))
}

/// One line of a query file: either a document already in the graph,
/// `{"doc_id": "cv-0001"}`, or inline entities grouped like an extraction
/// reply, `{"query_id": "q1", "target": "JD", "entities": {"Skills": ["excel"]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryLine {
    #[serde(default)]
    pub doc_id: Option<String>,
    #[serde(default)]
    pub query_id: Option<String>,
    #[serde(default)]
    pub target: Option<DocKind>,
    #[serde(default)]
    pub entities: Option<Value>,
}

impl QueryLine {
    pub fn to_query(&self, g: &KnowledgeGraph, top_n: usize, refine_cfg: &RefineConfig) -> Result<Query, CliError> {
        if let Some(id) = &self.doc_id {
            let mut q = Query::from_document(g, id, top_n)?;
            if let Some(t) = self.target {
                q.target_kind = t;
            }
            return Ok(q);
        }
        let Some(ents) = &self.entities else {
            return Err(CliError::Usage("query line needs doc_id or entities".into()));
        };
        let raw = parse_llm_response(&ents.to_string())?;
        let set = refine(&raw, refine_cfg);
        let mut q = Query::new(set, self.target.unwrap_or(DocKind::Jd), top_n);
        q.query_id = self.query_id.clone();
        Ok(q)
    }
}

pub fn read_queries(path: &Path) -> Result<Vec<QueryLine>, CliError> {
    read_lines(path, |l| serde_json::from_str(l).map_err(|e| e.to_string()))
}
