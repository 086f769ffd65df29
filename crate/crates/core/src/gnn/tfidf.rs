//! TF-IDF over word n-grams with one-vs-rest L1 logistic regression.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::train::{evaluate_classifier, ClsMetrics};
use super::GnnError;
use crate::text::{english_stopwords, tokenize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TfidfConfig {
    pub ngram_min: usize,
    pub ngram_max: usize,
    /// Explicit vocabulary size; `None` uses mean + 3 std of the number of
    /// distinct n-grams per training document.
    pub max_features: Option<usize>,
    /// Inverse regularization strength.
    pub c: f64,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        TfidfConfig {
            ngram_min: 1,
            ngram_max: 5,
            max_features: None,
            c: 1.0,
            max_iter: 1000,
            tol: 1e-6,
        }
    }
}

type SparseRow = Vec<(usize, f64)>;

/// Lowercased word tokens of two or more characters with stopwords removed.
fn words(text: &str) -> Vec<String> {
    let stop = english_stopwords();
    tokenize(text)
        .into_iter()
        .map(|t| t.lower)
        .filter(|w| w.chars().count() >= 2 && !stop.contains(w.as_str()))
        .collect()
}

fn ngrams(text: &str, lo: usize, hi: usize) -> Vec<String> {
    let w = words(text);
    let mut out = Vec::new();
    for n in lo..=hi {
        for win in w.windows(n) {
            out.push(win.join(" "));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct TfidfVectorizer {
    ngram_min: usize,
    ngram_max: usize,
    vocab: HashMap<String, usize>,
    idf: Vec<f64>,
}

impl TfidfVectorizer {
    pub fn fit(texts: &[&str], cfg: &TfidfConfig) -> Result<Self, GnnError> {
        if cfg.ngram_min == 0 || cfg.ngram_min > cfg.ngram_max {
            return Err(GnnError::Config("invalid n-gram range".into()));
        }
        let docs: Vec<Vec<String>> = texts.iter().map(|t| ngrams(t, cfg.ngram_min, cfg.ngram_max)).collect();
        let mut tf: HashMap<&str, usize> = HashMap::new();
        let mut df: HashMap<&str, usize> = HashMap::new();
        let mut distinct = Vec::with_capacity(docs.len());
        for d in &docs {
            let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
            for g in d {
                *tf.entry(g).or_default() += 1;
                seen.insert(g, ());
            }
            distinct.push(seen.len() as f64);
            for g in seen.into_keys() {
                *df.entry(g).or_default() += 1;
            }
        }
        let cap = cfg.max_features.unwrap_or_else(|| vocabulary_cap(&distinct));
        let mut terms: Vec<(&str, usize)> = tf.into_iter().collect();
        terms.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        terms.truncate(cap);
        terms.sort_by(|a, b| a.0.cmp(b.0));
        let n = docs.len() as f64;
        let idf = terms
            .iter()
            .map(|(t, _)| ((1.0 + n) / (1.0 + df[t] as f64)).ln() + 1.0)
            .collect();
        let vocab = terms.iter().enumerate().map(|(i, (t, _))| (t.to_string(), i)).collect();
        Ok(TfidfVectorizer {
            ngram_min: cfg.ngram_min,
            ngram_max: cfg.ngram_max,
            vocab,
            idf,
        })
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocab.len()
    }

    /// L2-normalized TF-IDF row, ascending feature index.
    pub fn transform(&self, text: &str) -> SparseRow {
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for g in ngrams(text, self.ngram_min, self.ngram_max) {
            if let Some(&i) = self.vocab.get(&g) {
                *counts.entry(i).or_default() += 1.0;
            }
        }
        let mut row: SparseRow = counts.into_iter().map(|(i, c)| (i, c * self.idf[i])).collect();
        let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in &mut row {
                *v /= norm;
            }
        }
        row
    }
}

/// `round(mean + 3 * std)` of per-document distinct n-gram counts, at least 1.
pub fn vocabulary_cap(distinct_counts: &[f64]) -> usize {
    if distinct_counts.is_empty() {
        return 1;
    }
    let n = distinct_counts.len() as f64;
    let mean = distinct_counts.iter().sum::<f64>() / n;
    let var = distinct_counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
    ((mean + 3.0 * var.sqrt()).round() as usize).max(1)
}

/// One-vs-rest logistic regression with an L1 penalty on the weights,
/// minimizing `mean log-loss + ‖w‖₁ / (C n)` by proximal gradient (FISTA).
#[derive(Debug, Clone)]
pub struct L1LogReg {
    pub classes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn sparse_dot(row: &SparseRow, w: &[f64]) -> f64 {
    row.iter().map(|&(i, v)| v * w[i]).sum()
}

impl L1LogReg {
    pub fn fit(rows: &[SparseRow], labels: &[usize], dim: usize, cfg: &TfidfConfig) -> Result<Self, GnnError> {
        let mut classes: Vec<usize> = labels.to_vec();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(GnnError::Config("need at least two classes in the training split".into()));
        }
        let n = rows.len() as f64;
        let lambda = 1.0 / (cfg.c * n);
        // Lipschitz bound of the mean log-loss for unit rows plus intercept
        let max_sq = rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v * v).sum::<f64>())
            .fold(0.0, f64::max);
        let step = 1.0 / (0.25 * (max_sq + 1.0));
        let mut weights = Vec::new();
        let mut intercepts = Vec::new();
        for &c in &classes {
            let y: Vec<f64> = labels.iter().map(|&l| f64::from(u8::from(l == c))).collect();
            let (w, b) = fista(rows, &y, dim, lambda, step, cfg);
            weights.push(w);
            intercepts.push(b);
        }
        Ok(L1LogReg {
            classes,
            weights,
            intercepts,
        })
    }

    pub fn decision(&self, row: &SparseRow) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.intercepts)
            .map(|(w, b)| sparse_dot(row, w) + b)
            .collect()
    }

    pub fn predict(&self, row: &SparseRow) -> usize {
        let d = self.decision(row);
        let mut best = 0;
        for (k, v) in d.iter().enumerate() {
            if *v > d[best] {
                best = k;
            }
        }
        self.classes[best]
    }
}

fn fista(rows: &[SparseRow], y: &[f64], dim: usize, lambda: f64, step: f64, cfg: &TfidfConfig) -> (Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let (mut zw, mut zb) = (w.clone(), b);
    let mut t = 1.0f64;
    let mut gw = vec![0.0; dim];
    for _ in 0..cfg.max_iter {
        gw.iter_mut().for_each(|g| *g = 0.0);
        let mut gb = 0.0;
        for (r, &yi) in rows.iter().zip(y) {
            let err = (sigmoid(sparse_dot(r, &zw) + zb) - yi) / n;
            for &(i, v) in r {
                gw[i] += err * v;
            }
            gb += err;
        }
        let thresh = step * lambda;
        let mut change = 0.0f64;
        let next_w: Vec<f64> = zw
            .iter()
            .zip(&gw)
            .map(|(z, g)| {
                let u = z - step * g;
                u.signum() * (u.abs() - thresh).max(0.0)
            })
            .collect();
        let next_b = zb - step * gb;
        for (a, c) in next_w.iter().zip(&w) {
            change = change.max((a - c).abs());
        }
        change = change.max((next_b - b).abs());
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let mom = (t - 1.0) / t_next;
        for i in 0..dim {
            zw[i] = next_w[i] + mom * (next_w[i] - w[i]);
        }
        zb = next_b + mom * (next_b - b);
        w = next_w;
        b = next_b;
        t = t_next;
        if change < cfg.tol {
            break;
        }
    }
    (w, b)
}

/// Fits on `train` and reports metrics on `eval` (indices into `texts`).
pub fn tfidf_logreg_baseline(
    texts: &[&str],
    labels: &[usize],
    train: &[usize],
    eval: &[usize],
    cfg: &TfidfConfig,
) -> Result<ClsMetrics, GnnError> {
    if train.is_empty() || eval.is_empty() {
        return Err(GnnError::Config("empty split".into()));
    }
    let train_texts: Vec<&str> = train.iter().map(|&i| texts[i]).collect();
    let vec = TfidfVectorizer::fit(&train_texts, cfg)?;
    let rows: Vec<SparseRow> = train_texts.iter().map(|t| vec.transform(t)).collect();
    let y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
    let model = L1LogReg::fit(&rows, &y, vec.vocabulary_size(), cfg)?;
    let mut preds = vec![usize::MAX; texts.len()];
    for &i in eval {
        preds[i] = model.predict(&vec.transform(texts[i]));
    }
    let all: Vec<Option<usize>> = labels.iter().copied().map(Some).collect();
    evaluate_classifier(&preds, &all, eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ngrams_skip_stopwords() {
        assert_eq!(ngrams("The cat and a dog", 1, 2), ["cat", "dog", "cat dog"]);
    }

    #[test]
    fn cap_rule() {
        assert_eq!(vocabulary_cap(&[10.0, 10.0]), 10);
        // mean 2, std 1
        assert_eq!(vocabulary_cap(&[1.0, 3.0]), 5);
    }

    #[test]
    fn idf_and_normalization() {
        let cfg = TfidfConfig {
            ngram_max: 1,
            max_features: Some(100),
            ..TfidfConfig::default()
        };
        let v = TfidfVectorizer::fit(&["apple banana", "apple cherry"], &cfg).unwrap();
        let row = v.transform("apple banana");
        assert_eq!(row.len(), 2);
        let norm: f64 = row.iter().map(|(_, x)| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        // apple df 2 -> idf 1; banana df 1 -> idf ln(3/2) + 1
        let ratio = row[1].1 / row[0].1;
        assert!((ratio - ((1.5f64).ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn separable_by_unique_token() {
        let texts: Vec<String> = (0..20)
            .map(|i| if i % 2 == 0 { format!("report {i} zebra") } else { format!("report {i} walrus") })
            .collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let labels: Vec<usize> = (0..20).map(|i| i % 2).collect();
        let train: Vec<usize> = (0..14).collect();
        let eval: Vec<usize> = (14..20).collect();
        let m = tfidf_logreg_baseline(&refs, &labels, &train, &eval, &TfidfConfig::default()).unwrap();
        assert_eq!(m.accuracy, 1.0);
    }

    #[test]
    fn single_class_is_degenerate() {
        let texts = ["a b", "c d", "e f"];
        let err = tfidf_logreg_baseline(&texts, &[0, 0, 1], &[0, 1], &[2], &TfidfConfig::default());
        assert!(err.is_err());
    }
}
