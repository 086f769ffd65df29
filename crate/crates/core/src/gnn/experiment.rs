use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::{Arch, GraphData, ModelConfig};
use super::report::Table2Row;
use super::tfidf::{tfidf_logreg_baseline, TfidfConfig};
use super::train::{stratified_split, train, ClsMetrics, Split, TrainConfig, TrainOutcome};
use super::{DenseMatrix, GnnError};
use crate::corpus::{DocKind, JobArea};
use crate::graph::KnowledgeGraph;

/// Node-classification inputs derived from a graph.
#[derive(Debug, Clone)]
pub struct NodeTask {
    pub graph: GraphData,
    pub features: DenseMatrix,
    /// Class index per node; set only for labeled documents of the task kind.
    pub labels: Vec<Option<usize>>,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyConfig {
    /// Document kind whose nodes are classified; `None` means every document.
    pub doc_kind: Option<DocKind>,
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub split_seed: u64,
    pub model: ModelConfig,
    pub train: TrainConfig,
    pub tfidf: TfidfConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            doc_kind: Some(DocKind::Cv),
            train_fraction: 0.6,
            val_fraction: 0.2,
            split_seed: 0,
            model: ModelConfig::default(),
            train: TrainConfig::default(),
            tfidf: TfidfConfig::default(),
        }
    }
}

/// Builds operators, the feature matrix and a stratified split. The graph
/// must carry node features.
pub fn node_task(g: &KnowledgeGraph, cfg: &ClassifyConfig) -> Result<NodeTask, GnnError> {
    let fm = g
        .features()
        .ok_or_else(|| GnnError::Config("graph has no node features".into()))?;
    let features = DenseMatrix::from_vec(fm.rows(), fm.dim(), fm.as_slice().to_vec())?;
    let mut labels = vec![None; g.node_count()];
    let mut items = Vec::new();
    for i in g.document_nodes(cfg.doc_kind) {
        if let Some(a) = g.node(i).area {
            labels[i] = Some(a.index());
            items.push((i, a.index()));
        }
    }
    let classes: std::collections::BTreeSet<usize> = items.iter().map(|&(_, c)| c).collect();
    if classes.len() < 2 {
        return Err(GnnError::Config(format!(
            "need labeled documents from at least 2 classes, found {}",
            classes.len()
        )));
    }
    let split = stratified_split(&items, cfg.train_fraction, cfg.val_fraction, cfg.split_seed);
    Ok(NodeTask {
        graph: GraphData::from_adjacency(&g.adjacency()),
        features,
        labels,
        split,
    })
}

pub fn train_arch(task: &NodeTask, arch: Arch, cfg: &ClassifyConfig) -> Result<TrainOutcome, GnnError> {
    let model_cfg = ModelConfig {
        arch,
        ..cfg.model.clone()
    };
    let train_cfg = TrainConfig {
        split: task.split.clone(),
        ..cfg.train.clone()
    };
    train(&task.graph, &task.features, &task.labels, &model_cfg, &train_cfg)
}

/// Accuracy of always predicting the most frequent training class, on `eval`.
pub fn majority_baseline(labels: &[Option<usize>], train: &[usize], eval: &[usize]) -> f64 {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in train {
        if let Some(c) = labels[i] {
            *counts.entry(c).or_default() += 1;
        }
    }
    let Some((&major, _)) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))) else {
        return 0.0;
    };
    let hits = eval.iter().filter(|&&i| labels[i] == Some(major)).count();
    hits as f64 / eval.len().max(1) as f64
}

/// TF-IDF baseline on the task's split. `texts` maps doc ids to raw text.
pub fn tfidf_on_task(
    g: &KnowledgeGraph,
    task: &NodeTask,
    texts: &BTreeMap<String, String>,
    cfg: &TfidfConfig,
) -> Result<ClsMetrics, GnnError> {
    let mut docs = Vec::new();
    let mut labels = Vec::new();
    let mut pos = BTreeMap::new();
    for &i in task.split.train.iter().chain(&task.split.test) {
        let id = &g.node(i).label;
        let text = texts
            .get(id)
            .ok_or_else(|| GnnError::Config(format!("no text for document {id:?}")))?;
        pos.insert(i, docs.len());
        docs.push(text.as_str());
        labels.push(task.labels[i].expect("split nodes are labeled"));
    }
    let train: Vec<usize> = task.split.train.iter().map(|i| pos[i]).collect();
    let test: Vec<usize> = task.split.test.iter().map(|i| pos[i]).collect();
    tfidf_logreg_baseline(&docs, &labels, &train, &test, cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub rows: Vec<Table2Row>,
    pub majority_test_accuracy: f64,
    pub train_accuracy: BTreeMap<String, f64>,
    pub final_loss: BTreeMap<String, f64>,
}

/// Trains each architecture (and the TF-IDF baseline when texts are given)
/// and collects one test-split row per model.
pub fn classify(
    g: &KnowledgeGraph,
    archs: &[Arch],
    texts: Option<&BTreeMap<String, String>>,
    cfg: &ClassifyConfig,
) -> Result<ClassifyReport, GnnError> {
    let task = node_task(g, cfg)?;
    if task.split.test.is_empty() {
        return Err(GnnError::Config("test split is empty".into()));
    }
    let mut report = ClassifyReport {
        rows: Vec::new(),
        majority_test_accuracy: majority_baseline(&task.labels, &task.split.train, &task.split.test),
        train_accuracy: BTreeMap::new(),
        final_loss: BTreeMap::new(),
    };
    if let Some(texts) = texts {
        let m = tfidf_on_task(g, &task, texts, &cfg.tfidf)?;
        report.rows.push(Table2Row::new("Tfidf+LogR.", &m));
    }
    for &arch in archs {
        let out = train_arch(&task, arch, cfg)?;
        let name = arch.to_string();
        report.rows.push(Table2Row::new(&name, &out.metrics.test.expect("nonempty test split")));
        report.train_accuracy.insert(name.clone(), out.metrics.train.accuracy);
        if let Some(l) = out.history.last() {
            report.final_loss.insert(name, l.loss);
        }
    }
    Ok(report)
}

/// Area names in class-index order.
pub fn class_names() -> Vec<&'static str> {
    JobArea::ALL.iter().map(|a| a.name()).collect()
}
