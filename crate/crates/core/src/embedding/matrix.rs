use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{embed_text, EmbeddingError, EmbeddingProvider, FeatureVector};

/// Row-per-node feature matrix, rows in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    dim: usize,
    node_ids: Vec<String>,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(dim: usize) -> Self {
        FeatureMatrix {
            dim,
            node_ids: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn from_rows(dim: usize, rows: Vec<(String, FeatureVector)>) -> Result<Self, EmbeddingError> {
        let mut m = FeatureMatrix::new(dim);
        for (id, v) in rows {
            m.push(id, &v)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, node_id: String, v: &FeatureVector) -> Result<(), EmbeddingError> {
        if v.dim() != self.dim {
            return Err(EmbeddingError::DimensionMismatch {
                got: v.dim(),
                want: self.dim,
            });
        }
        self.node_ids.push(node_id);
        self.data.extend_from_slice(v.as_slice());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.node_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major values.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Embeds the text label of every node; row `i` belongs to `nodes[i]`.
///
/// `nodes` holds `(node_id, label)` pairs. Providers allowing concurrent
/// requests are called from up to `max_in_flight` threads.
pub fn build_feature_matrix(
    nodes: &[(String, String)],
    provider: &dyn EmbeddingProvider,
) -> Result<FeatureMatrix, EmbeddingError> {
    let embed_one = |i: usize| {
        let (id, label) = &nodes[i];
        embed_text(provider, label).map_err(|e| EmbeddingError::Node {
            node_id: id.clone(),
            source: Box::new(e),
        })
    };
    let workers = provider.max_in_flight().min(nodes.len()).max(1);
    let vectors: Vec<Result<FeatureVector, EmbeddingError>> = if workers == 1 {
        (0..nodes.len()).map(embed_one).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<FeatureVector, EmbeddingError>>>> =
            nodes.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= nodes.len() {
                        break;
                    }
                    let r = embed_one(i);
                    *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(r);
                });
            }
        });
        slots
            .into_iter()
            .map(|m| m.into_inner().unwrap_or_else(|e| e.into_inner()).expect("slot filled"))
            .collect()
    };
    let mut m = FeatureMatrix::new(provider.dim());
    for ((id, _), v) in nodes.iter().zip(vectors) {
        m.push(id.clone(), &v?)?;
    }
    Ok(m)
}

/// JSON header describing the binary feature file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SidecarHeader {
    pub dim: usize,
    pub count: usize,
    pub node_ids: Vec<String>,
    /// Always `"f64-le"`.
    pub dtype: String,
    /// Always `"row-major"`.
    pub layout: String,
    /// File name of the binary blob, relative to the header.
    pub data_file: String,
}

fn sidecar_paths(base: &Path) -> (PathBuf, PathBuf) {
    let name = base.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    (
        base.with_file_name(format!("{name}.json")),
        base.with_file_name(format!("{name}.bin")),
    )
}

/// Writes `<base>.json` (header) and `<base>.bin` (little-endian f64 rows).
pub fn write_sidecar(m: &FeatureMatrix, base: &Path) -> Result<PathBuf, EmbeddingError> {
    let (header_path, data_path) = sidecar_paths(base);
    let header = SidecarHeader {
        dim: m.dim,
        count: m.rows(),
        node_ids: m.node_ids.clone(),
        dtype: "f64-le".into(),
        layout: "row-major".into(),
        data_file: data_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    let bytes: Vec<u8> = m.data.iter().flat_map(|v| v.to_le_bytes()).collect();
    fs::write(&data_path, bytes)?;
    fs::write(
        &header_path,
        serde_json::to_string_pretty(&header).expect("header serializes"),
    )?;
    Ok(header_path)
}

/// Reads a sidecar written by [`write_sidecar`], given the header path or base.
pub fn read_sidecar(path: &Path) -> Result<FeatureMatrix, EmbeddingError> {
    let header_path = if path.extension().is_some_and(|e| e == "json") {
        path.to_path_buf()
    } else {
        sidecar_paths(path).0
    };
    let header: SidecarHeader = serde_json::from_slice(&fs::read(&header_path)?)
        .map_err(|e| EmbeddingError::Sidecar(e.to_string()))?;
    if header.dtype != "f64-le" || header.layout != "row-major" {
        return Err(EmbeddingError::Sidecar(format!(
            "unsupported encoding {} / {}",
            header.dtype, header.layout
        )));
    }
    if header.node_ids.len() != header.count {
        return Err(EmbeddingError::Sidecar("node id count mismatch".into()));
    }
    let bytes = fs::read(header_path.with_file_name(&header.data_file))?;
    if bytes.len() != header.count * header.dim * 8 {
        return Err(EmbeddingError::Sidecar(format!(
            "expected {} bytes, found {}",
            header.count * header.dim * 8,
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(FeatureMatrix {
        dim: header.dim,
        node_ids: header.node_ids,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::HashProvider;

    fn nodes(labels: &[&str]) -> Vec<(String, String)> {
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| (format!("n{i}"), l.to_string()))
            .collect()
    }

    #[test]
    fn shape_and_duplicates() {
        let p = HashProvider::default();
        let m = build_feature_matrix(&nodes(&["a", "python", "sql", "python", "chef"]), &p).unwrap();
        assert_eq!((m.rows(), m.dim()), (5, 256));
        assert_eq!(m.row(1), m.row(3));
        assert!(m.as_slice().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn empty_list() {
        let m = build_feature_matrix(&[], &HashProvider::default()).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn failing_node_is_named() {
        let err = build_feature_matrix(&nodes(&["ok", " "]), &HashProvider::default()).unwrap_err();
        assert!(matches!(err, EmbeddingError::Node { ref node_id, .. } if node_id == "n1"));
    }

    #[test]
    fn appending_keeps_earlier_rows() {
        let p = HashProvider::new(32);
        let a = build_feature_matrix(&nodes(&["x", "y"]), &p).unwrap();
        let b = build_feature_matrix(&nodes(&["x", "y", "z"]), &p).unwrap();
        assert_eq!(a.as_slice(), &b.as_slice()[..64]);
    }

    #[test]
    fn sidecar_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = build_feature_matrix(&nodes(&["a", "b", "c"]), &HashProvider::new(16)).unwrap();
        let base = dir.path().join("graph.features");
        let header = write_sidecar(&m, &base).unwrap();
        assert!(header.ends_with("graph.features.json"));
        assert_eq!(read_sidecar(&base).unwrap(), m);
        assert_eq!(read_sidecar(&header).unwrap(), m);
    }
}
