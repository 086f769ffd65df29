//! Job-area node classification: GCN and GAT written from scratch over dense
//! matrices, with hand-derived gradients, a finite-difference checker, and a
//! TF-IDF + L1 logistic regression baseline.

mod checkpoint;
mod experiment;
mod matrix;
mod model;
mod report;
mod tfidf;
mod train;

use thiserror::Error;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointHeader};
pub use experiment::{
    class_names, classify, majority_baseline, node_task, tfidf_on_task, train_arch, ClassifyConfig, ClassifyReport,
    NodeTask,
};
pub use matrix::DenseMatrix;
pub use model::{
    backward, cross_entropy, forward, gat_forward, gcn_forward, loss_and_grad, normalize_adjacency, Arch, Forward,
    GnnModel, GraphData, Layer, LayerCache, ModelConfig, LEAKY_SLOPE,
};
pub use report::{reference_table2, table2_csv, table2_markdown, Table2Row};
pub use tfidf::{tfidf_logreg_baseline, vocabulary_cap, L1LogReg, TfidfConfig, TfidfVectorizer};
pub use train::{
    evaluate_classifier, gradcheck, predict, stratified_split, train, train_model, ClsMetrics, EpochRecord, GradCheck,
    Optimizer, Split, SplitMetrics, TrainConfig, TrainOutcome,
};

#[derive(Debug, Error)]
pub enum GnnError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Config(String),
    #[error("non-finite loss {loss} at epoch {epoch} ({detail})")]
    NonFinite { epoch: usize, loss: f64, detail: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
