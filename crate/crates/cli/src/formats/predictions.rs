//! Prediction files: a flat JSON object mapping qid to answer string.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};

pub fn load_predictions(path: &Path) -> Result<BTreeMap<String, String>> {
    let content = super::read_file(path)?;
    serde_json::from_str(&content)
        .with_context(|| format!("parsing predictions {}", path.display()))
}

pub fn save_predictions(path: &Path, predictions: &BTreeMap<String, String>) -> Result<()> {
    let json = serde_json::to_string_pretty(predictions).context("serializing predictions")?;
    super::write_file(path, &json)
}
