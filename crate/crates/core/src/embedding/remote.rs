use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{EmbeddingError, EmbeddingProvider, FeatureVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RemoteConfig {
    pub endpoint: String,
    pub model: String,
    pub api_key_env: String,
    pub feature_dim: usize,
    pub timeout_secs: u64,
    pub max_in_flight: usize,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        RemoteConfig {
            endpoint: "http://localhost:8080/v1/embeddings".into(),
            model: "bert-base-uncased".into(),
            api_key_env: "EMBEDDING_API_KEY".into(),
            feature_dim: super::FEATURE_DIM,
            timeout_secs: 60,
            max_in_flight: 4,
        }
    }
}

/// Embeddings over HTTP: `POST {model, input}`, reading `data[0].embedding`
/// or a top-level `embedding` array.
///
/// Longer vectors are truncated to `feature_dim` and renormalized; shorter
/// ones are an error.
#[derive(Debug)]
pub struct RemoteProvider {
    cfg: RemoteConfig,
    key: Option<String>,
    agent: ureq::Agent,
}

impl RemoteProvider {
    pub fn new(cfg: RemoteConfig, api_key: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(cfg.timeout_secs.max(1))))
            .http_status_as_error(false)
            .build()
            .new_agent();
        RemoteProvider {
            cfg,
            key: api_key,
            agent,
        }
    }

    /// Reads the key from `cfg.api_key_env` when set; a missing key sends no
    /// Authorization header.
    pub fn from_env(cfg: RemoteConfig) -> Self {
        let key = std::env::var(&cfg.api_key_env).ok().filter(|k| !k.trim().is_empty());
        Self::new(cfg, key)
    }

    /// Truncates to `feature_dim` and renormalizes.
    pub fn project(&self, raw: Vec<f64>) -> Result<FeatureVector, EmbeddingError> {
        let want = self.cfg.feature_dim;
        if raw.len() < want {
            return Err(EmbeddingError::DimensionMismatch {
                got: raw.len(),
                want,
            });
        }
        let mut v = raw;
        v.truncate(want);
        FeatureVector::normalized(v)
            .ok_or_else(|| EmbeddingError::Degenerate("zero or non-finite vector".into()))
    }
}

fn embedding_array(v: &Value) -> Option<Vec<f64>> {
    let arr = v
        .pointer("/data/0/embedding")
        .or_else(|| v.get("embedding"))?
        .as_array()?;
    arr.iter().map(Value::as_f64).collect()
}

impl EmbeddingProvider for RemoteProvider {
    fn dim(&self) -> usize {
        self.cfg.feature_dim
    }

    fn max_in_flight(&self) -> usize {
        self.cfg.max_in_flight.max(1)
    }

    fn embed(&self, text: &str) -> Result<FeatureVector, EmbeddingError> {
        let mut req = self.agent.post(&self.cfg.endpoint);
        if let Some(k) = &self.key {
            req = req.header("Authorization", format!("Bearer {k}"));
        }
        let mut resp = req
            .send_json(json!({"model": self.cfg.model, "input": text}))
            .map_err(|e| EmbeddingError::Http(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| EmbeddingError::Http(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(EmbeddingError::Http(format!("HTTP {status}: {body}")));
        }
        let v: Value = serde_json::from_str(&body)
            .map_err(|e| EmbeddingError::Degenerate(format!("bad JSON: {e}")))?;
        let raw = embedding_array(&v)
            .ok_or_else(|| EmbeddingError::Degenerate("no embedding array in response".into()))?;
        self.project(raw)
    }
}
