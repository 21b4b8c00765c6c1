//! Versioned JSON model file.
//!
//! ```text
//! {
//!   "format": "coolchan-mlp",
//!   "version": 1,
//!   "checksum": "<sha256 of the compact JSON of `model`>",
//!   "model": {
//!     "feature_names": [...], "scaler_mean": [...], "scaler_std": [...],
//!     "layer_dims": [...], "hidden_activation": "relu",
//!     "output_activation": "identity",
//!     "weights": [[row-major layer 0], ...], "biases": [[...], ...]
//!   }
//! }
//! ```
//!
//! Floats are written in shortest round-trip form, so a save/load cycle is
//! bit-exact.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Mlp, ScalerParams};
use crate::error::{Error, Result};
use crate::io_util::{atomic_write, sha256_hex};

pub const MODEL_FORMAT: &str = "coolchan-mlp";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelPayload {
    feature_names: Vec<String>,
    scaler_mean: Vec<f64>,
    scaler_std: Vec<f64>,
    layer_dims: Vec<usize>,
    hidden_activation: String,
    output_activation: String,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    checksum: String,
    model: ModelPayload,
}

fn payload_checksum(p: &ModelPayload) -> String {
    let compact = serde_json::to_string(p).expect("model payload serialises");
    sha256_hex(compact.as_bytes())
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        message: e.to_string(),
    }
}

pub fn model_to_string(model: &Mlp, scaler: &ScalerParams) -> Result<String> {
    if scaler.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            actual: scaler.len(),
        });
    }
    let payload = ModelPayload {
        feature_names: scaler.feature_names().to_vec(),
        scaler_mean: scaler.mean().to_vec(),
        scaler_std: scaler.std().to_vec(),
        layer_dims: model.layer_dims().to_vec(),
        hidden_activation: "relu".into(),
        output_activation: "identity".into(),
        weights: model.weights().to_vec(),
        biases: model.biases().to_vec(),
    };
    let file = ModelFile {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        checksum: payload_checksum(&payload),
        model: payload,
    };
    let mut s = serde_json::to_string_pretty(&file).map_err(json_err)?;
    s.push('\n');
    Ok(s)
}

pub fn model_from_str(text: &str) -> Result<(Mlp, ScalerParams)> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let version = value
        .get("version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing `version`".into(),
        })?;
    if version != u64::from(MODEL_VERSION) {
        return Err(Error::Version {
            found: version as u32,
            expected: MODEL_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(json_err)?;
    if file.format != MODEL_FORMAT {
        return Err(Error::Parse {
            line: 1,
            message: format!("unknown model format `{}`", file.format),
        });
    }
    if payload_checksum(&file.model) != file.checksum {
        return Err(Error::Checksum);
    }
    let p = file.model;
    if p.hidden_activation != "relu" || p.output_activation != "identity" {
        return Err(Error::Validation("only relu hidden / identity output networks are supported".into()));
    }
    let model = Mlp::from_parts(p.layer_dims, p.weights, p.biases)?;
    let scaler = ScalerParams::new(p.feature_names, p.scaler_mean, p.scaler_std)?;
    if scaler.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: model.input_dim(),
            actual: scaler.len(),
        });
    }
    Ok((model, scaler))
}

pub fn save_model(model: &Mlp, scaler: &ScalerParams, path: &Path) -> Result<()> {
    atomic_write(path, model_to_string(model, scaler)?.as_bytes())
}

pub fn load_model(path: &Path) -> Result<(Mlp, ScalerParams)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}
