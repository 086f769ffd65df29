use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::model::{Arch, GnnModel, Layer};
use super::{DenseMatrix, GnnError};

/// JSON header of a model checkpoint; weights live in `data_file` as
/// little-endian f64 in [`GnnModel::params`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub arch: Arch,
    pub dims: Vec<usize>,
    pub n_heads: usize,
    pub seed: u64,
    pub shapes: Vec<(usize, usize)>,
    pub dtype: String,
    pub data_file: String,
}

fn paths(base: &Path) -> (PathBuf, PathBuf) {
    let name = base.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    (
        base.with_file_name(format!("{name}.json")),
        base.with_file_name(format!("{name}.bin")),
    )
}

/// Writes `<base>.json` and `<base>.bin`; returns the header path.
pub fn save_checkpoint(model: &GnnModel, seed: u64, base: &Path) -> Result<PathBuf, GnnError> {
    let (header_path, data_path) = paths(base);
    let params = model.params();
    let header = CheckpointHeader {
        arch: model.arch,
        dims: model.dims.clone(),
        n_heads: model.n_heads,
        seed,
        shapes: params.iter().map(|p| p.shape()).collect(),
        dtype: "f64-le".into(),
        data_file: data_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    let bytes: Vec<u8> = params
        .iter()
        .flat_map(|p| p.as_slice().iter().flat_map(|v| v.to_le_bytes()))
        .collect();
    fs::write(&data_path, bytes)?;
    fs::write(&header_path, serde_json::to_string_pretty(&header).expect("header serializes"))?;
    Ok(header_path)
}

/// Reads a checkpoint given its header path or base path.
pub fn load_checkpoint(path: &Path) -> Result<(GnnModel, CheckpointHeader), GnnError> {
    let header_path = if path.extension().is_some_and(|e| e == "json") {
        path.to_path_buf()
    } else {
        paths(path).0
    };
    let header: CheckpointHeader =
        serde_json::from_slice(&fs::read(&header_path)?).map_err(|e| GnnError::Checkpoint(e.to_string()))?;
    if header.dtype != "f64-le" || header.dims.len() < 2 {
        return Err(GnnError::Checkpoint("unsupported checkpoint header".into()));
    }
    let bytes = fs::read(header_path.with_file_name(&header.data_file))?;
    let total: usize = header.shapes.iter().map(|(r, c)| r * c).sum();
    if bytes.len() != total * 8 {
        return Err(GnnError::Checkpoint(format!(
            "expected {} bytes, found {}",
            total * 8,
            bytes.len()
        )));
    }
    let mut values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")));
    let mut mats = Vec::with_capacity(header.shapes.len());
    for &(r, c) in &header.shapes {
        mats.push(DenseMatrix::from_vec(r, c, values.by_ref().take(r * c).collect())?);
    }
    let heads = header.n_heads.max(1);
    let per_layer = match header.arch {
        Arch::Gcn => 2,
        Arch::Gat => 2 * heads + 1,
    };
    let n_layers = header.dims.len() - 1;
    if mats.len() != per_layer * n_layers {
        return Err(GnnError::Checkpoint("parameter count does not match the architecture".into()));
    }
    let mut it = mats.into_iter();
    let mut layers = Vec::with_capacity(n_layers);
    for l in 0..n_layers {
        let (i, o) = (header.dims[l], header.dims[l + 1]);
        let weights: Vec<DenseMatrix> = it.by_ref().take(if header.arch == Arch::Gcn { 1 } else { heads }).collect();
        let attention: Vec<DenseMatrix> = match header.arch {
            Arch::Gcn => Vec::new(),
            Arch::Gat => it.by_ref().take(heads).collect(),
        };
        let bias = it.next().expect("counted");
        if weights.iter().any(|w| w.shape() != (i, o))
            || attention.iter().any(|a| a.shape() != (2, o))
            || bias.shape() != (1, o)
        {
            return Err(GnnError::Checkpoint(format!("layer {l} shapes do not match dims")));
        }
        layers.push(Layer {
            weights,
            attention,
            bias,
        });
    }
    let model = GnnModel {
        arch: header.arch,
        dims: header.dims.clone(),
        n_heads: if header.arch == Arch::Gcn { 1 } else { heads },
        layers,
    };
    Ok((model, header))
}
