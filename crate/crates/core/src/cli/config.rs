use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingProvider, HashProvider, RemoteConfig, RemoteProvider, FEATURE_DIM};
use crate::extraction::{LlmConfig, RefineConfig};
use crate::gnn::ClassifyConfig;
use crate::recommend::TableConfig;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExtractorKind {
    Llm,
    #[default]
    Gazetteer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    #[default]
    Hash,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingConfig {
    pub provider: ProviderKind,
    pub feature_dim: usize,
    /// Used when `provider` is `remote`; its own `feature_dim` is ignored.
    pub remote: RemoteConfig,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            provider: ProviderKind::Hash,
            feature_dim: FEATURE_DIM,
            remote: RemoteConfig::default(),
        }
    }
}

impl EmbeddingConfig {
    pub fn provider(&self) -> Box<dyn EmbeddingProvider> {
        match self.provider {
            ProviderKind::Hash => Box::new(HashProvider::new(self.feature_dim)),
            ProviderKind::Remote => Box::new(RemoteProvider::from_env(RemoteConfig {
                feature_dim: self.feature_dim,
                ..self.remote.clone()
            })),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub docs_per_category: usize,
    pub overlap: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            docs_per_category: 10,
            overlap: 0.25,
        }
    }
}

/// Everything a pipeline run depends on. Every field has a default, so an
/// empty JSON object is a valid config file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    pub extractor: ExtractorKind,
    /// Gazetteer JSONL of `{type, term}`; the bundled term pools when unset.
    pub gazetteer: Option<PathBuf>,
    /// Names redacted alongside emails and phone numbers.
    pub pii_names: Vec<String>,
    pub llm: LlmConfig,
    pub embedding: EmbeddingConfig,
    pub max_words: Option<usize>,
    pub recommend: TableConfig,
    pub classify: ClassifyConfig,
    pub synth: SynthConfig,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn load_or_default(path: Option<&Path>) -> Result<Self, CliError> {
        path.map_or_else(|| Ok(Config::default()), Config::load)
    }

    pub fn refine(&self) -> RefineConfig {
        let cfg = RefineConfig::default();
        match self.max_words {
            Some(w) => cfg.with_max_words(w),
            None => cfg,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_default() {
        let c: Config = serde_json::from_str("{}").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.extractor, ExtractorKind::Gazetteer);
        assert_eq!(c.refine().max_words, 3);
        assert_eq!(c.recommend.k, 3);
    }

    #[test]
    fn partial_override() {
        let c: Config =
            serde_json::from_str(r#"{"extractor":"llm","max_words":4,"recommend":{"measure":"pagerank"}}"#).unwrap();
        assert_eq!(c.extractor, ExtractorKind::Llm);
        assert_eq!(c.refine().max_words, 4);
        assert_eq!(c.recommend.measure, crate::recommend::Measure::PageRank);
        assert_eq!(c.recommend.top_ns, vec![2, 5, 10]);
    }

    #[test]
    fn round_trips() {
        let c = Config::default();
        let back: Config = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
