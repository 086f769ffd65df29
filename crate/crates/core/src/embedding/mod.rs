//! Node feature vectors.
//!
//! [`HashProvider`] is the deterministic offline provider (character 3-gram
//! feature hashing); [`RemoteProvider`] calls an HTTP embeddings endpoint.
//! Every provider returns unit-norm vectors of a fixed dimension.

mod hash;
mod matrix;
mod remote;

use thiserror::Error;

pub use hash::{hash_embed, HashProvider};
pub use matrix::{build_feature_matrix, read_sidecar, write_sidecar, FeatureMatrix, SidecarHeader};
pub use remote::{RemoteConfig, RemoteProvider};

/// Default feature dimension.
pub const FEATURE_DIM: usize = 256;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("embedding request failed: {0}")]
    Http(String),
    #[error("remote embedding has {got} dimensions, need at least {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("remote embedding is degenerate: {0}")]
    Degenerate(String),
    #[error("node {node_id}: {source}")]
    Node {
        node_id: String,
        #[source]
        source: Box<EmbeddingError>,
    },
    #[error("feature sidecar: {0}")]
    Sidecar(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// A unit-norm feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    /// Scales `values` to unit L2 norm. Returns `None` for a zero or non-finite input.
    pub fn normalized(mut values: Vec<f64>) -> Option<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        values.iter_mut().for_each(|v| *v /= norm);
        Some(FeatureVector(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &FeatureVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Cosine similarity; equal to the dot product for unit vectors.
    pub fn cosine(&self, other: &FeatureVector) -> f64 {
        self.dot(other)
    }
}

/// Source of node features.
pub trait EmbeddingProvider: Sync {
    fn dim(&self) -> usize;

    fn embed(&self, text: &str) -> Result<FeatureVector, EmbeddingError>;

    /// Concurrent requests allowed when embedding many texts.
    fn max_in_flight(&self) -> usize {
        1
    }
}

/// Embeds non-empty text with the given provider.
pub fn embed_text(provider: &dyn EmbeddingProvider, text: &str) -> Result<FeatureVector, EmbeddingError> {
    if text.trim().is_empty() {
        return Err(EmbeddingError::EmptyText);
    }
    provider.embed(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let v = FeatureVector::normalized(vec![3.0, 4.0]).unwrap();
        assert_eq!(v.as_slice(), [0.6, 0.8]);
        assert!(FeatureVector::normalized(vec![0.0, 0.0]).is_none());
        assert!(FeatureVector::normalized(vec![f64::NAN]).is_none());
    }

    #[test]
    fn embed_text_rejects_blank() {
        let p = HashProvider::new(16);
        assert!(matches!(embed_text(&p, "  "), Err(EmbeddingError::EmptyText)));
        let a = embed_text(&p, "python").unwrap();
        let b = embed_text(&p, "python").unwrap();
        assert_eq!(a, b);
        let norm = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-6);
    }
}
