//! HR document corpora: loading, saving, PII scrubbing and synthesis.
//!
//! The canonical on-disk format is JSONL, one [`Document`] per line with the
//! fields `id`, `kind`, `text`, `label` and `meta`. CSV with the header
//! `id,kind,text,label` is accepted for ingestion.

mod area;
mod pii;
mod pools;
mod synth;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use area::JobArea;
pub use pii::{scrub_pii, PiiScrubber, REDACTED};
pub use pools::{default_pools, CategoryPool, EntityPools};
pub use synth::{synth_corpus, SynthParams};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("unknown document kind {0:?} (expected CV or JD)")]
    UnknownKind(String),
    #[error("unknown job area {0:?}")]
    UnknownLabel(String),
    #[error("document {0:?} has empty text")]
    EmptyText(String),
    #[error("category {area} pool has {len} terms, at least {min} required")]
    PoolTooSmall {
        area: JobArea,
        len: usize,
        min: usize,
    },
    #[error("missing pool for category {0}")]
    MissingPool(JobArea),
    #[error("cross-category overlap {0} outside [0, 1]")]
    OverlapOutOfRange(f64),
    #[error("docs_per_category must be at least 1")]
    NoDocuments,
}

/// Document kind: curriculum vitae or job description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocKind {
    Cv,
    Jd,
}

impl DocKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DocKind::Cv => "CV",
            DocKind::Jd => "JD",
        }
    }

    pub fn opposite(self) -> DocKind {
        match self {
            DocKind::Cv => DocKind::Jd,
            DocKind::Jd => DocKind::Cv,
        }
    }
}

impl fmt::Display for DocKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocKind {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CV" => Ok(DocKind::Cv),
            "JD" => Ok(DocKind::Jd),
            _ => Err(CorpusError::UnknownKind(s.to_string())),
        }
    }
}

impl Serialize for DocKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for DocKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One CV or job description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub kind: DocKind,
    pub text: String,
    #[serde(default)]
    pub label: Option<JobArea>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

impl Document {
    pub fn new(id: impl Into<String>, kind: DocKind, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            kind,
            text: text.into(),
            label: None,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_label(mut self, label: JobArea) -> Self {
        self.label = Some(label);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Loaded,
    Synthetic,
}

/// An ordered, id-unique list of documents.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    documents: Vec<Document>,
    pub provenance: Provenance,
    pub seed: Option<u64>,
}

impl Corpus {
    /// Builds a corpus, rejecting duplicate ids.
    pub fn new(documents: Vec<Document>, provenance: Provenance) -> Result<Self, CorpusError> {
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(CorpusError::DuplicateId(d.id.clone()));
            }
        }
        Ok(Corpus {
            documents,
            provenance,
            seed: None,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn into_documents(self) -> Vec<Document> {
        self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    /// True when every document carries a label.
    pub fn is_fully_labeled(&self) -> bool {
        self.documents.iter().all(|d| d.label.is_some())
    }

    /// Applies [`PiiScrubber::scrub`] to every document, returning the total
    /// number of redactions. Documents left empty are rejected.
    pub fn scrub(&mut self, scrubber: &PiiScrubber) -> Result<usize, CorpusError> {
        let mut total = 0;
        for d in &mut self.documents {
            let (clean, n) = scrubber.scrub(&d.text);
            if clean.trim().is_empty() {
                return Err(CorpusError::EmptyText(d.id.clone()));
            }
            d.text = clean;
            total += n;
        }
        Ok(total)
    }

    /// Canonical JSONL encoding, one document per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for d in &self.documents {
            out.push_str(&serde_json::to_string(d).expect("document serializes"));
            out.push('\n');
        }
        out
    }
}

/// Accepted input formats for [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guess from the file extension; anything but `.csv` is JSONL.
    pub fn from_path(path: &Path) -> CorpusFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let docs = match format {
        CorpusFormat::Jsonl => read_jsonl(path, BufReader::new(file))?,
        CorpusFormat::Csv => read_csv(path, file)?,
    };
    Corpus::new(docs, Provenance::Loaded)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_jsonl(path: &Path, reader: impl BufRead) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        docs.push(document_from_value(&value).map_err(|e| match e {
            CorpusError::Parse { message, .. } => parse_err(path, i + 1, message),
            other => other,
        })?);
    }
    Ok(docs)
}

// Field-by-field so unknown kinds and labels surface as their own error variants.
fn document_from_value(v: &serde_json::Value) -> Result<Document, CorpusError> {
    let field = |name: &str| -> Result<&str, CorpusError> {
        v.get(name)
            .and_then(|x| x.as_str())
            .ok_or_else(|| parse_err(Path::new(""), 0, format!("missing string field {name:?}")))
    };
    let id = field("id")?.to_string();
    let kind: DocKind = field("kind")?.parse()?;
    let text = field("text")?.to_string();
    let label = match v.get("label") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::String(s)) if s.trim().is_empty() => None,
        Some(serde_json::Value::String(s)) => Some(s.parse()?),
        Some(other) => return Err(parse_err(Path::new(""), 0, format!("bad label {other}"))),
    };
    let mut meta = BTreeMap::new();
    if let Some(m) = v.get("meta").and_then(|m| m.as_object()) {
        for (k, val) in m {
            let s = match val {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            meta.insert(k.clone(), s);
        }
    }
    Ok(Document {
        id,
        kind,
        text,
        label,
        meta,
    })
}

fn read_csv(path: &Path, file: File) -> Result<Vec<Document>, CorpusError> {
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let (id_col, kind_col, text_col) = match (col("id"), col("kind"), col("text")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(parse_err(path, 1, "header must contain id, kind, text")),
    };
    let label_col = col("label");
    let mut docs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, e.to_string()))?;
        let get = |c: usize| rec.get(c).unwrap_or("");
        let label = match label_col.map(get) {
            Some(s) if !s.trim().is_empty() => Some(s.parse()?),
            _ => None,
        };
        docs.push(Document {
            id: get(id_col).to_string(),
            kind: get(kind_col).parse()?,
            text: get(text_col).to_string(),
            label,
            meta: BTreeMap::new(),
        });
    }
    Ok(docs)
}

/// Writes the canonical JSONL encoding.
pub fn save_corpus(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    w.write_all(corpus.to_jsonl().as_bytes()).map_err(io_err)?;
    w.flush().map_err(io_err)
}
