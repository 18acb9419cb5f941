//! The trained-model file: weights, bias, regularization, the
//! standardization transform, and the keyword lists the features were
//! extracted with, all in one JSON document.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pmsearch_core::rerank::{KeywordLists, LogisticModel, Scaler, FEATURE_COUNT};

use super::write_atomic;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    weights: Vec<f64>,
    bias: f64,
    lambda: f64,
    mean: Vec<f64>,
    std: Vec<f64>,
    keywords: KeywordLists,
    iterations: u32,
    final_loss: f64,
}

pub fn save_model(path: &Path, model: &LogisticModel, keywords: &KeywordLists) -> Result<()> {
    let (mean, std) = match model.scaler() {
        Some(scaler) => (scaler.mean.to_vec(), scaler.std_dev.to_vec()),
        // No standardization: store the identity transform.
        None => (vec![0.0; FEATURE_COUNT], vec![1.0; FEATURE_COUNT]),
    };
    let file = ModelFile {
        weights: model.weights().to_vec(),
        bias: model.bias(),
        lambda: model.lambda(),
        mean,
        std,
        keywords: keywords.clone(),
        iterations: model.iterations(),
        final_loss: model.final_loss(),
    };
    let mut content = serde_json::to_string_pretty(&file)?;
    content.push('\n');
    write_atomic(path, content.as_bytes())
}

pub fn load_model(path: &Path) -> Result<(LogisticModel, KeywordLists)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read model file {}", path.display()))?;
    let file: ModelFile = serde_json::from_str(&text)
        .with_context(|| format!("malformed model file {}", path.display()))?;
    let weights = fixed_size(&file.weights, "weights")?;
    let scaler = Scaler {
        mean: fixed_size(&file.mean, "mean")?,
        std_dev: fixed_size(&file.std, "std")?,
    };
    let model = LogisticModel::from_parts(
        weights,
        file.bias,
        file.lambda,
        Some(scaler),
        file.iterations,
        file.final_loss,
    )
    .with_context(|| format!("invalid model parameters in {}", path.display()))?;
    Ok((model, file.keywords))
}

fn fixed_size(values: &[f64], what: &str) -> Result<[f64; FEATURE_COUNT]> {
    let Ok(array) = <[f64; FEATURE_COUNT]>::try_from(values) else {
        bail!(
            "model {what} must have exactly {FEATURE_COUNT} entries, found {}",
            values.len()
        );
    };
    Ok(array)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeywordFile {
    positive: Vec<String>,
    negative: Vec<String>,
    heading: Vec<String>,
}

/// Loads a keyword-list override: JSON with `positive`, `negative`, and
/// `heading` arrays. Terms are lowercased on load.
pub fn read_keywords(path: &Path) -> Result<KeywordLists> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read keyword file {}", path.display()))?;
    let file: KeywordFile = serde_json::from_str(&text)
        .with_context(|| format!("malformed keyword file {}", path.display()))?;
    Ok(KeywordLists::new(
        file.positive,
        file.negative,
        file.heading,
    ))
}
