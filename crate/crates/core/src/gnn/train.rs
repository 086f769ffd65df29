use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{forward, loss_and_grad, GnnModel, GraphData, ModelConfig};
use super::{DenseMatrix, GnnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Gd,
    #[default]
    Adam,
}

impl FromStr for Optimizer {
    type Err = GnnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gd" | "sgd" => Ok(Optimizer::Gd),
            "adam" => Ok(Optimizer::Adam),
            _ => Err(GnnError::Config(format!("unknown optimizer {s:?} (valid: gd, adam)"))),
        }
    }
}

impl fmt::Display for Optimizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Optimizer::Gd => "gd",
            Optimizer::Adam => "adam",
        })
    }
}

/// Node indices of the train / validation / test sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    pub fn is_disjoint(&self) -> bool {
        let all: BTreeSet<usize> = self.train.iter().chain(&self.val).chain(&self.test).copied().collect();
        all.len() == self.train.len() + self.val.len() + self.test.len()
    }
}

/// Per class: shuffle with the seed, then take `round(n * train)` for
/// training, `round(n * val)` for validation and the rest for testing.
/// `items` pairs an index with its class.
pub fn stratified_split(items: &[(usize, usize)], train: f64, val: f64, seed: u64) -> Split {
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, c) in items {
        by_class.entry(c).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Split::default();
    for members in by_class.values_mut() {
        members.sort_unstable();
        members.shuffle(&mut rng);
        let n = members.len() as f64;
        let n_train = ((n * train).round() as usize).min(members.len());
        let n_val = ((n * val).round() as usize).min(members.len() - n_train);
        s.train.extend_from_slice(&members[..n_train]);
        s.val.extend_from_slice(&members[n_train..n_train + n_val]);
        s.test.extend_from_slice(&members[n_train + n_val..]);
    }
    s.train.sort_unstable();
    s.val.sort_unstable();
    s.test.sort_unstable();
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub dropout: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
    #[serde(skip)]
    pub split: Split,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 200,
            learning_rate: 0.01,
            weight_decay: 5e-4,
            dropout: 0.0,
            optimizer: Optimizer::Adam,
            seed: 0,
            split: Split::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClsMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub n: usize,
}

/// Accuracy plus precision and recall macro-averaged over the classes present
/// among the true labels under `mask`. A class never predicted has precision 0.
pub fn evaluate_classifier(preds: &[usize], labels: &[Option<usize>], mask: &[usize]) -> Result<ClsMetrics, GnnError> {
    if mask.is_empty() {
        return Err(GnnError::Config("empty evaluation mask".into()));
    }
    let mut correct = 0;
    let mut tp: BTreeMap<usize, usize> = BTreeMap::new();
    let mut predicted: BTreeMap<usize, usize> = BTreeMap::new();
    let mut actual: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in mask {
        let y = labels
            .get(i)
            .copied()
            .flatten()
            .ok_or_else(|| GnnError::Config(format!("node {i} in mask has no label")))?;
        let p = preds[i];
        *actual.entry(y).or_default() += 1;
        *predicted.entry(p).or_default() += 1;
        if p == y {
            correct += 1;
            *tp.entry(y).or_default() += 1;
        }
    }
    let classes = actual.len() as f64;
    let (mut prec, mut rec) = (0.0, 0.0);
    for (c, &n) in &actual {
        let t = tp.get(c).copied().unwrap_or(0) as f64;
        rec += t / n as f64;
        prec += match predicted.get(c) {
            Some(&p) => t / p as f64,
            None => 0.0,
        };
    }
    Ok(ClsMetrics {
        accuracy: correct as f64 / mask.len() as f64,
        precision: prec / classes,
        recall: rec / classes,
        n: mask.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    pub train_accuracy: f64,
    pub val_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitMetrics {
    pub train: ClsMetrics,
    pub val: Option<ClsMetrics>,
    pub test: Option<ClsMetrics>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: GnnModel,
    pub metrics: SplitMetrics,
    pub history: Vec<EpochRecord>,
}

impl TrainOutcome {
    pub fn losses(&self) -> Vec<f64> {
        self.history.iter().map(|r| r.loss).collect()
    }
}

fn accuracy(preds: &[usize], labels: &[Option<usize>], mask: &[usize]) -> f64 {
    let hits = mask.iter().filter(|&&i| labels[i] == Some(preds[i])).count();
    hits as f64 / mask.len().max(1) as f64
}

pub fn predict(model: &GnnModel, g: &GraphData, x: &DenseMatrix) -> Result<Vec<usize>, GnnError> {
    Ok(forward(model, g, x, None)?.logits().argmax_rows())
}

fn split_metrics(model: &GnnModel, g: &GraphData, x: &DenseMatrix, labels: &[Option<usize>], s: &Split) -> Result<SplitMetrics, GnnError> {
    let preds = predict(model, g, x)?;
    let opt = |m: &[usize]| {
        if m.is_empty() {
            Ok(None)
        } else {
            evaluate_classifier(&preds, labels, m).map(Some)
        }
    };
    Ok(SplitMetrics {
        train: evaluate_classifier(&preds, labels, &s.train)?,
        val: opt(&s.val)?,
        test: opt(&s.test)?,
    })
}

struct Adam {
    m: Vec<DenseMatrix>,
    v: Vec<DenseMatrix>,
    t: i32,
}

const ADAM_B1: f64 = 0.9;
const ADAM_B2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl Adam {
    fn step(&mut self, params: Vec<&mut DenseMatrix>, grads: &[DenseMatrix], lr: f64) {
        self.t += 1;
        let c1 = 1.0 - ADAM_B1.powi(self.t);
        let c2 = 1.0 - ADAM_B2.powi(self.t);
        for (k, p) in params.into_iter().enumerate() {
            let g = grads[k].as_slice();
            let m = self.m[k].as_mut_slice();
            let v = self.v[k].as_mut_slice();
            for (j, w) in p.as_mut_slice().iter_mut().enumerate() {
                m[j] = ADAM_B1 * m[j] + (1.0 - ADAM_B1) * g[j];
                v[j] = ADAM_B2 * v[j] + (1.0 - ADAM_B2) * g[j] * g[j];
                *w -= lr * (m[j] / c1) / ((v[j] / c2).sqrt() + ADAM_EPS);
            }
        }
    }
}

/// Initializes a model from `cfg.seed` and trains it on `cfg.split.train`.
pub fn train(
    g: &GraphData,
    x: &DenseMatrix,
    labels: &[Option<usize>],
    model_cfg: &ModelConfig,
    cfg: &TrainConfig,
) -> Result<TrainOutcome, GnnError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let model = GnnModel::new(model_cfg, x.cols(), &mut rng)?;
    train_model(g, x, labels, model, cfg, &mut rng)
}

/// Trains an existing model. Dropout draws from `rng`.
pub fn train_model(
    g: &GraphData,
    x: &DenseMatrix,
    labels: &[Option<usize>],
    mut model: GnnModel,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<TrainOutcome, GnnError> {
    let s = &cfg.split;
    if s.train.is_empty() {
        return Err(GnnError::Config("empty training split".into()));
    }
    if !s.is_disjoint() {
        return Err(GnnError::Config("train/val/test splits overlap".into()));
    }
    for &i in s.train.iter().chain(&s.val).chain(&s.test) {
        if labels.get(i).copied().flatten().is_none() {
            return Err(GnnError::Config(format!("node {i} in a split has no label")));
        }
    }
    if !(0.0..1.0).contains(&cfg.dropout) {
        return Err(GnnError::Config(format!("dropout {} outside [0, 1)", cfg.dropout)));
    }
    let mut adam = Adam {
        m: model.zeros_like(),
        v: model.zeros_like(),
        t: 0,
    };
    let mut history = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        let dropout = (cfg.dropout > 0.0).then_some((cfg.dropout, rng as &mut dyn rand::RngCore));
        let (loss, grads, f) = loss_and_grad(&model, g, x, labels, &s.train, cfg.weight_decay, dropout)?;
        if !loss.is_finite() || grads.iter().any(|gr| !gr.is_finite()) {
            return Err(GnnError::NonFinite {
                epoch,
                loss,
                detail: format!(
                    "lr {} weight decay {} optimizer {}",
                    cfg.learning_rate, cfg.weight_decay, cfg.optimizer
                ),
            });
        }
        let preds = f.logits().argmax_rows();
        let train_accuracy = accuracy(&preds, labels, &s.train);
        match cfg.optimizer {
            Optimizer::Gd => {
                for (p, gr) in model.params_mut().into_iter().zip(&grads) {
                    p.axpy(-cfg.learning_rate, gr)?;
                }
            }
            Optimizer::Adam => adam.step(model.params_mut(), &grads, cfg.learning_rate),
        }
        let val_accuracy = if s.val.is_empty() {
            None
        } else {
            Some(accuracy(&predict(&model, g, x)?, labels, &s.val))
        };
        history.push(EpochRecord {
            epoch,
            loss,
            train_accuracy,
            val_accuracy,
        });
    }
    let metrics = split_metrics(&model, g, x, labels, s)?;
    Ok(TrainOutcome {
        model,
        metrics,
        history,
    })
}

/// Largest relative error between analytic gradients and central finite
/// differences, `|a - n| / max(1e-8, |a| + |n|)`, over every parameter.
///
/// Coordinates whose ±eps perturbation flips the sign of any ReLU or
/// LeakyReLU input are skipped: the loss is not differentiable there.
pub fn gradcheck(
    model: &GnnModel,
    g: &GraphData,
    x: &DenseMatrix,
    labels: &[Option<usize>],
    mask: &[usize],
    eps: f64,
) -> Result<GradCheck, GnnError> {
    let (_, analytic, _) = loss_and_grad(model, g, x, labels, mask, 0.0, None)?;
    let eval = |m: &GnnModel| -> Result<(f64, Vec<bool>), GnnError> {
        let f = forward(m, g, x, None)?;
        let (loss, _) = super::model::cross_entropy(f.logits(), labels, mask)?;
        Ok((loss, f.activation_pattern()))
    };
    let mut probe = model.clone();
    let mut worst = 0.0f64;
    let (mut checked, mut skipped) = (0usize, 0usize);
    for (k, grad) in analytic.iter().enumerate() {
        for j in 0..grad.as_slice().len() {
            let orig = probe.params()[k].as_slice()[j];
            probe.params_mut()[k].as_mut_slice()[j] = orig + eps;
            let (lp, pp) = eval(&probe)?;
            probe.params_mut()[k].as_mut_slice()[j] = orig - eps;
            let (lm, pm) = eval(&probe)?;
            probe.params_mut()[k].as_mut_slice()[j] = orig;
            if pp != pm {
                skipped += 1;
                continue;
            }
            let num = (lp - lm) / (2.0 * eps);
            let a = grad.as_slice()[j];
            let rel = (a - num).abs() / (a.abs() + num.abs()).max(1e-8);
            worst = worst.max(rel);
            checked += 1;
        }
    }
    Ok(GradCheck {
        max_rel_error: worst,
        checked,
        skipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    pub max_rel_error: f64,
    pub checked: usize,
    pub skipped: usize,
}
