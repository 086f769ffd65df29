use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{DenseMatrix, GnnError};
use crate::graph::AdjacencyMatrix;

pub const LEAKY_SLOPE: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Gcn,
    Gat,
}

impl FromStr for Arch {
    type Err = GnnError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gcn" => Ok(Arch::Gcn),
            "gat" => Ok(Arch::Gat),
            _ => Err(GnnError::Config(format!("unknown architecture {s:?} (valid: gcn, gat)"))),
        }
    }
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arch::Gcn => "GCN",
            Arch::Gat => "GAT",
        })
    }
}

/// Shape of a model: `in -> hidden x (layers - 1) -> classes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    pub arch: Arch,
    pub hidden_dim: usize,
    pub n_layers: usize,
    pub n_heads: usize,
    pub n_classes: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            arch: Arch::Gcn,
            hidden_dim: 64,
            n_layers: 4,
            n_heads: 1,
            n_classes: crate::corpus::JobArea::ALL.len(),
        }
    }
}

impl ModelConfig {
    pub fn dims(&self, in_dim: usize) -> Vec<usize> {
        let mut d = vec![in_dim];
        d.extend(std::iter::repeat(self.hidden_dim).take(self.n_layers.saturating_sub(1)));
        d.push(self.n_classes);
        d
    }
}

/// Parameters of one layer. GCN layers have a single weight matrix and no
/// attention; GAT layers hold one weight and one attention matrix per head.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<DenseMatrix>,
    /// Per head, 2 x out: row 0 scores the receiving node, row 1 the sender.
    pub attention: Vec<DenseMatrix>,
    /// 1 x out.
    pub bias: DenseMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnnModel {
    pub arch: Arch,
    pub dims: Vec<usize>,
    pub n_heads: usize,
    pub layers: Vec<Layer>,
}

fn he_uniform(rng: &mut impl Rng, rows: usize, cols: usize, fan_in: usize) -> DenseMatrix {
    let bound = (6.0 / fan_in.max(1) as f64).sqrt();
    let dist = Uniform::new_inclusive(-bound, bound);
    let data = (0..rows * cols).map(|_| dist.sample(rng)).collect();
    DenseMatrix::from_vec(rows, cols, data).expect("sized")
}

impl GnnModel {
    pub fn new(cfg: &ModelConfig, in_dim: usize, rng: &mut impl Rng) -> Result<Self, GnnError> {
        if cfg.n_layers == 0 || cfg.n_classes == 0 || cfg.hidden_dim == 0 || in_dim == 0 {
            return Err(GnnError::Config("layers, widths and classes must be positive".into()));
        }
        let heads = match cfg.arch {
            Arch::Gcn => 1,
            Arch::Gat => cfg.n_heads.max(1),
        };
        let dims = cfg.dims(in_dim);
        let mut layers = Vec::with_capacity(cfg.n_layers);
        for w in dims.windows(2) {
            let (i, o) = (w[0], w[1]);
            let weights = (0..heads).map(|_| he_uniform(rng, i, o, i)).collect();
            let attention = match cfg.arch {
                Arch::Gcn => Vec::new(),
                Arch::Gat => (0..heads).map(|_| he_uniform(rng, 2, o, 2 * o)).collect(),
            };
            layers.push(Layer {
                weights,
                attention,
                bias: DenseMatrix::zeros(1, o),
            });
        }
        Ok(GnnModel {
            arch: cfg.arch,
            dims,
            n_heads: heads,
            layers,
        })
    }

    pub fn in_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn n_classes(&self) -> usize {
        *self.dims.last().expect("nonempty dims")
    }

    /// All parameter matrices, layer by layer: weights, attention, bias.
    pub fn params(&self) -> Vec<&DenseMatrix> {
        let mut v = Vec::new();
        for l in &self.layers {
            v.extend(l.weights.iter());
            v.extend(l.attention.iter());
            v.push(&l.bias);
        }
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut DenseMatrix> {
        let mut v = Vec::new();
        for l in &mut self.layers {
            v.extend(l.weights.iter_mut());
            v.extend(l.attention.iter_mut());
            v.push(&mut l.bias);
        }
        v
    }

    /// Whether parameter `i` (in [`params`](Self::params) order) is a bias.
    pub fn is_bias(&self, i: usize) -> bool {
        let per_layer = self.params_per_layer();
        i % per_layer == per_layer - 1
    }

    fn params_per_layer(&self) -> usize {
        match self.arch {
            Arch::Gcn => 2,
            Arch::Gat => 2 * self.n_heads + 1,
        }
    }

    pub fn param_count(&self) -> usize {
        self.params().iter().map(|p| p.rows() * p.cols()).sum()
    }

    /// Zero-valued matrices shaped like the parameters.
    pub fn zeros_like(&self) -> Vec<DenseMatrix> {
        self.params().iter().map(|p| DenseMatrix::zeros(p.rows(), p.cols())).collect()
    }
}

/// Graph operators used by the forward pass.
#[derive(Debug, Clone)]
pub struct GraphData {
    pub n: usize,
    /// Normalized adjacency for GCN layers.
    pub a_hat: DenseMatrix,
    /// Per node: itself first, then its neighbors ascending.
    pub attend: Vec<Vec<usize>>,
}

/// `D̃^-½ (A + I) D̃^-½` with `D̃` the degree matrix of `A + I`.
pub fn normalize_adjacency(a: &AdjacencyMatrix) -> DenseMatrix {
    let n = a.size();
    let deg: Vec<f64> = (0..n)
        .map(|i| 1.0 + a.row(i).iter().map(|&x| f64::from(x)).sum::<f64>())
        .collect();
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = f64::from(a.get(i, j)) + if i == j { 1.0 } else { 0.0 };
            if v != 0.0 {
                m.set(i, j, v * inv_sqrt[i] * inv_sqrt[j]);
            }
        }
    }
    m
}

impl GraphData {
    pub fn from_adjacency(a: &AdjacencyMatrix) -> Self {
        let n = a.size();
        let attend = (0..n)
            .map(|i| {
                let mut v = vec![i];
                v.extend((0..n).filter(|&j| j != i && a.get(i, j) != 0));
                v
            })
            .collect();
        GraphData {
            n,
            a_hat: normalize_adjacency(a),
            attend,
        }
    }

    /// Graph without edges: `Â = I`, every node attends only to itself.
    pub fn edgeless(n: usize) -> Self {
        GraphData {
            n,
            a_hat: DenseMatrix::identity(n),
            attend: (0..n).map(|i| vec![i]).collect(),
        }
    }
}

/// Cached intermediate values of one layer.
#[derive(Debug, Clone)]
pub struct LayerCache {
    /// Layer input after dropout.
    pub input: DenseMatrix,
    /// Inverted-dropout mask applied to the input, if any.
    pub dropout: Option<DenseMatrix>,
    /// GCN: `Â H`.
    pub propagated: Option<DenseMatrix>,
    /// GAT, per head: `H W`.
    pub projected: Vec<DenseMatrix>,
    /// GAT, per head and node: raw scores over `attend[u]` before LeakyReLU.
    pub scores: Vec<Vec<Vec<f64>>>,
    /// GAT, per head and node: attention over `attend[u]`.
    pub attention: Vec<Vec<Vec<f64>>>,
    /// Pre-activation.
    pub z: DenseMatrix,
    /// Post-activation (equal to `z` on the last layer).
    pub out: DenseMatrix,
}

#[derive(Debug, Clone)]
pub struct Forward {
    pub layers: Vec<LayerCache>,
}

impl Forward {
    pub fn logits(&self) -> &DenseMatrix {
        &self.layers.last().expect("at least one layer").out
    }

    /// Attention of the given layer and head, aligned with `GraphData::attend`.
    pub fn attention(&self, layer: usize, head: usize) -> &[Vec<f64>] {
        &self.layers[layer].attention[head]
    }

    /// Signs of every ReLU / LeakyReLU input, used to detect kinks.
    pub fn activation_pattern(&self) -> Vec<bool> {
        let last = self.layers.len() - 1;
        let mut p = Vec::new();
        for (l, c) in self.layers.iter().enumerate() {
            for s in &c.scores {
                p.extend(s.iter().flatten().map(|&x| x > 0.0));
            }
            if l != last {
                p.extend(c.z.as_slice().iter().map(|&x| x > 0.0));
            }
        }
        p
    }
}

fn leaky(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        LEAKY_SLOPE * x
    }
}

fn check_input(model: &GnnModel, g: &GraphData, x: &DenseMatrix) -> Result<(), GnnError> {
    if x.rows() != g.n || x.cols() != model.in_dim() || g.a_hat.shape() != (g.n, g.n) {
        return Err(GnnError::Shape(format!(
            "features {}x{}, graph of {} nodes, model input {}",
            x.rows(),
            x.cols(),
            g.n,
            model.in_dim()
        )));
    }
    Ok(())
}

/// Forward pass. `dropout` is `(rate, rng)` during training.
pub fn forward(
    model: &GnnModel,
    g: &GraphData,
    x: &DenseMatrix,
    mut dropout: Option<(f64, &mut dyn rand::RngCore)>,
) -> Result<Forward, GnnError> {
    check_input(model, g, x)?;
    let last = model.layers.len() - 1;
    let mut h = x.clone();
    let mut caches = Vec::with_capacity(model.layers.len());
    for (l, layer) in model.layers.iter().enumerate() {
        let mask = match dropout.as_mut() {
            Some((rate, rng)) if *rate > 0.0 => {
                let keep = 1.0 - *rate;
                let data = (0..h.rows() * h.cols())
                    .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
                    .collect();
                let m = DenseMatrix::from_vec(h.rows(), h.cols(), data)?;
                for (v, k) in h.as_mut_slice().iter_mut().zip(m.as_slice()) {
                    *v *= k;
                }
                Some(m)
            }
            _ => None,
        };
        let mut cache = LayerCache {
            input: h,
            dropout: mask,
            propagated: None,
            projected: Vec::new(),
            scores: Vec::new(),
            attention: Vec::new(),
            z: DenseMatrix::zeros(0, 0),
            out: DenseMatrix::zeros(0, 0),
        };
        let mut z = match model.arch {
            Arch::Gcn => {
                let ah = g.a_hat.matmul(&cache.input)?;
                let z = ah.matmul(&layer.weights[0])?;
                cache.propagated = Some(ah);
                z
            }
            Arch::Gat => gat_layer(layer, g, &mut cache)?,
        };
        z.add_row(layer.bias.as_slice())?;
        let out = if l == last { z.clone() } else { z.map(|v| v.max(0.0)) };
        cache.z = z;
        cache.out = out.clone();
        caches.push(cache);
        h = out;
    }
    Ok(Forward { layers: caches })
}

fn gat_layer(layer: &Layer, g: &GraphData, cache: &mut LayerCache) -> Result<DenseMatrix, GnnError> {
    let heads = layer.weights.len();
    let out_dim = layer.bias.cols();
    let mut z = DenseMatrix::zeros(g.n, out_dim);
    for h in 0..heads {
        let p = cache.input.matmul(&layer.weights[h])?;
        let a = &layer.attention[h];
        let dst: Vec<f64> = (0..g.n).map(|u| dot(p.row(u), a.row(0))).collect();
        let src: Vec<f64> = (0..g.n).map(|v| dot(p.row(v), a.row(1))).collect();
        let mut scores = Vec::with_capacity(g.n);
        let mut att = Vec::with_capacity(g.n);
        for u in 0..g.n {
            let e: Vec<f64> = g.attend[u].iter().map(|&v| dst[u] + src[v]).collect();
            let act: Vec<f64> = e.iter().map(|&s| leaky(s)).collect();
            let m = act.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = act.iter().map(|s| (s - m).exp()).collect();
            let total: f64 = exps.iter().sum();
            let alpha: Vec<f64> = exps.iter().map(|x| x / total).collect();
            let zrow = z.row_mut(u);
            for (&v, &w) in g.attend[u].iter().zip(&alpha) {
                for (o, pv) in zrow.iter_mut().zip(p.row(v)) {
                    *o += w * pv / heads as f64;
                }
            }
            scores.push(e);
            att.push(alpha);
        }
        cache.projected.push(p);
        cache.scores.push(scores);
        cache.attention.push(att);
    }
    Ok(z)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// GCN logits.
pub fn gcn_forward(a_hat: &DenseMatrix, x: &DenseMatrix, model: &GnnModel) -> Result<DenseMatrix, GnnError> {
    if model.arch != Arch::Gcn {
        return Err(GnnError::Config("gcn_forward needs a GCN model".into()));
    }
    let g = GraphData {
        n: a_hat.rows(),
        a_hat: a_hat.clone(),
        attend: Vec::new(),
    };
    Ok(forward(model, &g, x, None)?.logits().clone())
}

/// GAT logits plus the attention of every layer and head.
pub fn gat_forward(
    a: &AdjacencyMatrix,
    x: &DenseMatrix,
    model: &GnnModel,
) -> Result<(DenseMatrix, Vec<Vec<Vec<Vec<f64>>>>), GnnError> {
    if model.arch != Arch::Gat {
        return Err(GnnError::Config("gat_forward needs a GAT model".into()));
    }
    let f = forward(model, &GraphData::from_adjacency(a), x, None)?;
    let att = f.layers.iter().map(|c| c.attention.clone()).collect();
    Ok((f.logits().clone(), att))
}

/// Mean softmax cross-entropy over `mask` and its gradient w.r.t. the logits.
pub fn cross_entropy(logits: &DenseMatrix, labels: &[Option<usize>], mask: &[usize]) -> Result<(f64, DenseMatrix), GnnError> {
    if mask.is_empty() {
        return Err(GnnError::Config("empty training mask".into()));
    }
    let mut grad = DenseMatrix::zeros(logits.rows(), logits.cols());
    let scale = 1.0 / mask.len() as f64;
    let mut loss = 0.0;
    for &i in mask {
        let y = labels
            .get(i)
            .copied()
            .flatten()
            .ok_or_else(|| GnnError::Config(format!("node {i} in mask has no label")))?;
        let row = logits.row(i);
        let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + row.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
        loss += (lse - row[y]) * scale;
        let grow = grad.row_mut(i);
        for (j, g) in grow.iter_mut().enumerate() {
            *g = ((row[j] - lse).exp() - if j == y { 1.0 } else { 0.0 }) * scale;
        }
    }
    Ok((loss, grad))
}

/// Gradients of a scalar loss w.r.t. every parameter, given `dL/dlogits`.
pub fn backward(model: &GnnModel, g: &GraphData, f: &Forward, dlogits: &DenseMatrix) -> Result<Vec<DenseMatrix>, GnnError> {
    let last = model.layers.len() - 1;
    let mut grads_by_layer: Vec<Vec<DenseMatrix>> = Vec::with_capacity(model.layers.len());
    let mut dout = dlogits.clone();
    for l in (0..=last).rev() {
        let layer = &model.layers[l];
        let c = &f.layers[l];
        let mut dz = dout;
        if l != last {
            for (d, z) in dz.as_mut_slice().iter_mut().zip(c.z.as_slice()) {
                if *z <= 0.0 {
                    *d = 0.0;
                }
            }
        }
        let dbias = DenseMatrix::from_vec(1, dz.cols(), dz.col_sums())?;
        let (mut grads, mut dinput) = match model.arch {
            Arch::Gcn => {
                let ah = c.propagated.as_ref().expect("gcn cache");
                let dw = ah.t_matmul(&dz)?;
                // Â is symmetric
                let dinput = g.a_hat.matmul(&dz.matmul_t(&layer.weights[0])?)?;
                (vec![dw], dinput)
            }
            Arch::Gat => gat_backward(layer, g, c, &dz)?,
        };
        grads.push(dbias);
        if let Some(mask) = &c.dropout {
            for (d, k) in dinput.as_mut_slice().iter_mut().zip(mask.as_slice()) {
                *d *= k;
            }
        }
        grads_by_layer.push(grads);
        dout = dinput;
    }
    grads_by_layer.reverse();
    Ok(grads_by_layer.into_iter().flatten().collect())
}

fn gat_backward(
    layer: &Layer,
    g: &GraphData,
    c: &LayerCache,
    dz: &DenseMatrix,
) -> Result<(Vec<DenseMatrix>, DenseMatrix), GnnError> {
    let heads = layer.weights.len();
    let inv_h = 1.0 / heads as f64;
    let mut dws = Vec::with_capacity(heads);
    let mut das = Vec::with_capacity(heads);
    let mut dinput = DenseMatrix::zeros(c.input.rows(), c.input.cols());
    for h in 0..heads {
        let p = &c.projected[h];
        let a = &layer.attention[h];
        let mut dp = DenseMatrix::zeros(p.rows(), p.cols());
        let mut ddst = vec![0.0; g.n];
        let mut dsrc = vec![0.0; g.n];
        for u in 0..g.n {
            let alpha = &c.attention[h][u];
            let e = &c.scores[h][u];
            let dzu: Vec<f64> = dz.row(u).iter().map(|d| d * inv_h).collect();
            let dalpha: Vec<f64> = g.attend[u].iter().map(|&v| dot(&dzu, p.row(v))).collect();
            let weighted: f64 = alpha.iter().zip(&dalpha).map(|(a, d)| a * d).sum();
            for (k, &v) in g.attend[u].iter().enumerate() {
                for (o, d) in dp.row_mut(v).iter_mut().zip(&dzu) {
                    *o += alpha[k] * d;
                }
                let dact = alpha[k] * (dalpha[k] - weighted);
                let de = dact * if e[k] > 0.0 { 1.0 } else { LEAKY_SLOPE };
                ddst[u] += de;
                dsrc[v] += de;
            }
        }
        let mut da = DenseMatrix::zeros(2, a.cols());
        for u in 0..g.n {
            let pu = p.row(u);
            for j in 0..a.cols() {
                da.set(0, j, da.get(0, j) + ddst[u] * pu[j]);
                da.set(1, j, da.get(1, j) + dsrc[u] * pu[j]);
            }
            let (a0, a1) = (a.row(0), a.row(1));
            for (j, o) in dp.row_mut(u).iter_mut().enumerate() {
                *o += ddst[u] * a0[j] + dsrc[u] * a1[j];
            }
        }
        dws.push(c.input.t_matmul(&dp)?);
        das.push(da);
        dinput.add_assign(&dp.matmul_t(&layer.weights[h])?)?;
    }
    dws.extend(das);
    Ok((dws, dinput))
}

/// Loss (cross-entropy plus `weight_decay / 2 * ‖θ‖²` over non-bias
/// parameters) and its gradient.
pub fn loss_and_grad(
    model: &GnnModel,
    g: &GraphData,
    x: &DenseMatrix,
    labels: &[Option<usize>],
    mask: &[usize],
    weight_decay: f64,
    dropout: Option<(f64, &mut dyn rand::RngCore)>,
) -> Result<(f64, Vec<DenseMatrix>, Forward), GnnError> {
    let f = forward(model, g, x, dropout)?;
    let (mut loss, dl) = cross_entropy(f.logits(), labels, mask)?;
    let mut grads = backward(model, g, &f, &dl)?;
    if weight_decay > 0.0 {
        for (i, (p, gr)) in model.params().into_iter().zip(grads.iter_mut()).enumerate() {
            if model.is_bias(i) {
                continue;
            }
            loss += 0.5 * weight_decay * p.sum_squares();
            gr.axpy(weight_decay, p)?;
        }
    }
    Ok((loss, grads, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> AdjacencyMatrix {
        let mut a = AdjacencyMatrix::zeros(n);
        for i in 1..n {
            a.set_edge(i - 1, i);
        }
        a
    }

    fn small(arch: Arch, dims: (usize, usize, usize, usize), heads: usize, seed: u64) -> GnnModel {
        let cfg = ModelConfig {
            arch,
            hidden_dim: dims.1,
            n_layers: dims.2,
            n_heads: heads,
            n_classes: dims.3,
        };
        GnnModel::new(&cfg, dims.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    }

    #[test]
    fn normalized_adjacency_closed_forms() {
        let one = normalize_adjacency(&AdjacencyMatrix::zeros(1));
        assert_eq!(one.as_slice(), [1.0]);
        let pair = normalize_adjacency(&path(2));
        assert!(pair.as_slice().iter().all(|&v| (v - 0.5).abs() < 1e-15));
        let iso = normalize_adjacency(&AdjacencyMatrix::zeros(3));
        assert_eq!(iso, DenseMatrix::identity(3));
    }

    #[test]
    fn dimension_chain() {
        let m = GnnModel::new(&ModelConfig::default(), 256, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(m.dims, [256, 64, 64, 64, 20]);
        assert_eq!(m.layers.len(), 4);
        assert_eq!(m.params().len(), 8);
        assert!(m.is_bias(1) && !m.is_bias(2));
    }

    #[test]
    fn zero_weights_give_zero_logits() {
        let mut m = small(Arch::Gcn, (3, 4, 3, 2), 1, 1);
        for p in m.params_mut() {
            p.scale(0.0);
        }
        let x = DenseMatrix::from_vec(4, 3, (0..12).map(f64::from).collect()).unwrap();
        let g = GraphData::from_adjacency(&path(4));
        let out = forward(&m, &g, &x, None).unwrap();
        assert!(out.logits().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_node_path_by_hand() {
        // x = [1, 2], two linear layers w1 = 3 (ReLU), w2 = -1, zero bias.
        let mut m = small(Arch::Gcn, (1, 1, 2, 1), 1, 0);
        m.layers[0].weights[0].set(0, 0, 3.0);
        m.layers[1].weights[0].set(0, 0, -1.0);
        let x = DenseMatrix::from_vec(2, 1, vec![1.0, 2.0]).unwrap();
        let a_hat = normalize_adjacency(&path(2));
        let out = gcn_forward(&a_hat, &x, &m).unwrap();
        // Âx = [1.5, 1.5]; relu(3 * 1.5) = 4.5; Â [4.5, 4.5] * -1 = -4.5
        for v in out.as_slice() {
            assert!((v + 4.5).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn self_only_attention_is_one() {
        let m = small(Arch::Gat, (3, 4, 2, 2), 2, 5);
        let mut a = AdjacencyMatrix::zeros(3);
        a.set_edge(0, 1);
        let x = DenseMatrix::from_vec(3, 3, (0..9).map(|v| f64::from(v) / 9.0).collect()).unwrap();
        let (_, att) = gat_forward(&a, &x, &m).unwrap();
        for layer in &att {
            for head in layer {
                assert_eq!(head[2], [1.0]);
                for row in head {
                    assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn uniform_inputs_give_uniform_attention() {
        let m = small(Arch::Gat, (2, 3, 2, 2), 1, 3);
        let mut a = AdjacencyMatrix::zeros(4);
        for j in 1..4 {
            a.set_edge(0, j);
        }
        let x = DenseMatrix::from_vec(4, 2, vec![0.5; 8]).unwrap();
        let (_, att) = gat_forward(&a, &x, &m).unwrap();
        for &w in &att[0][0][0] {
            assert!((w - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_features_zero_first_layer_grad() {
        let m = small(Arch::Gcn, (3, 4, 3, 2), 1, 2);
        let x = DenseMatrix::zeros(4, 3);
        let g = GraphData::from_adjacency(&path(4));
        let labels = vec![Some(0), Some(1), Some(0), Some(1)];
        let (_, grads, _) = loss_and_grad(&m, &g, &x, &labels, &[0, 1, 2, 3], 0.0, None).unwrap();
        assert!(grads[0].as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cross_entropy_uniform_logits() {
        let logits = DenseMatrix::zeros(2, 4);
        let (loss, grad) = cross_entropy(&logits, &[Some(1), None], &[0]).unwrap();
        assert!((loss - 4f64.ln()).abs() < 1e-12);
        assert_eq!(grad.row(0), [0.25, -0.75, 0.25, 0.25]);
        assert_eq!(grad.row(1), [0.0; 4]);
        assert!(cross_entropy(&logits, &[Some(1), None], &[1]).is_err());
    }
}
