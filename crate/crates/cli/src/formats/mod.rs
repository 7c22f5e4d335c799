//! On-disk formats: SQuAD-style JSON, prediction maps, challenge
//! sidecars, misspelling lexicons, annotation sidecars, and G2P
//! tables.

pub mod annotations;
pub mod challenge;
pub mod g2p;
pub mod lexicon;
pub mod predictions;
pub mod squad;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

pub(crate) fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))
}
