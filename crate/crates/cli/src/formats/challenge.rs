//! Challenge sidecar: a TSV of `qid<TAB>noisy question` rows next to
//! a small JSON metadata file (`<name>.meta.json`) holding the
//! provenance. The clean side always comes from the base dataset, so
//! the sidecar composes with any copy of it.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use noiseqa_core::dataset::{pair_challenge, ChallengeSet, Dataset, Provenance};
use serde::{Deserialize, Serialize};

use crate::meta::RunMeta;
use crate::tsv;

#[derive(Serialize, Deserialize)]
struct ChallengeMeta {
    #[serde(flatten)]
    run: RunMeta,
    interface: String,
    generator: String,
    parameters: BTreeMap<String, String>,
}

fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    path.with_file_name(name)
}

pub fn save_challenge(path: &Path, set: &ChallengeSet, meta: &RunMeta) -> Result<()> {
    let mut out = meta.tsv_header();
    for (qid, pair) in &set.pairs {
        out.push_str(&tsv::format_row(&[qid, &pair.noisy]));
    }
    super::write_file(path, &out)?;

    let challenge_meta = ChallengeMeta {
        run: meta.clone(),
        interface: set.provenance.interface.clone(),
        generator: set.provenance.generator.clone(),
        parameters: set.provenance.parameters.clone(),
    };
    let json =
        serde_json::to_string_pretty(&challenge_meta).context("serializing challenge meta")?;
    super::write_file(&meta_path(path), &json)
}

/// Reads the sidecar and pairs it against the base dataset. Unknown
/// qids fail; a missing metadata file degrades to an unnamed
/// provenance so hand-written sidecars still load.
pub fn load_challenge(path: &Path, base: &Dataset) -> Result<ChallengeSet> {
    let content = super::read_file(path)?;
    let rows = tsv::parse_rows_with_arity(&content, 2, "challenge sidecar")?;
    let mut noisy = BTreeMap::new();
    for (lineno, fields) in rows {
        if noisy.insert(fields[0].clone(), fields[1].clone()).is_some() {
            anyhow::bail!("challenge sidecar: duplicate qid {} at line {lineno}", fields[0]);
        }
    }
    let provenance = match std::fs::read_to_string(meta_path(path)) {
        Ok(json) => {
            let meta: ChallengeMeta = serde_json::from_str(&json)
                .with_context(|| format!("parsing {}", meta_path(path).display()))?;
            Provenance {
                interface: meta.interface,
                generator: meta.generator,
                parameters: meta.parameters,
                seed: meta.run.seed,
            }
        }
        Err(_) => Provenance {
            interface: "unknown".to_string(),
            generator: "unknown".to_string(),
            parameters: BTreeMap::new(),
            seed: 0,
        },
    };
    pair_challenge(base, &noisy, provenance).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use noiseqa_core::dataset::{Answer, ContextParagraph, QuestionRecord};

    fn base() -> Dataset {
        let ctx = ContextParagraph {
            context_id: "c1".to_string(),
            text: "The Lama has determined to sleep.".to_string(),
            article_title: "T".to_string(),
        };
        let q = QuestionRecord {
            qid: "q1".to_string(),
            question: "What has a Lama determined to do?".to_string(),
            answers: vec![Answer { text: "sleep".to_string(), answer_start: 27 }],
            context_id: "c1".to_string(),
        };
        Dataset::from_parts(vec![ctx], vec![q]).unwrap()
    }

    fn sample_set(base: &Dataset) -> ChallengeSet {
        let mut noisy = BTreeMap::new();
        noisy.insert("q1".to_string(), "Wjat has a Lsma determined to do?".to_string());
        let provenance = Provenance {
            interface: "keyboard".to_string(),
            generator: "key_swap".to_string(),
            parameters: [("p".to_string(), "0.25".to_string())].into(),
            seed: 42,
        };
        pair_challenge(base, &noisy, provenance).unwrap()
    }

    #[test]
    fn round_trips_with_provenance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("challenge.tsv");
        let base = base();
        let set = sample_set(&base);
        save_challenge(&path, &set, &RunMeta::new("cfg", 42)).unwrap();

        let content = std::fs::read_to_string(&path).unwrap();
        assert!(content.starts_with("# tool_version="));
        assert!(dir.path().join("challenge.tsv.meta.json").exists());

        let loaded = load_challenge(&path, &base).unwrap();
        assert_eq!(loaded, set);
    }

    #[test]
    fn missing_meta_file_still_loads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bare.tsv");
        std::fs::write(&path, "q1\tWjat has a Lsma determined to do?\n").unwrap();
        let loaded = load_challenge(&path, &base()).unwrap();
        assert_eq!(loaded.provenance.generator, "unknown");
        assert_eq!(loaded.pairs["q1"].clean, "What has a Lama determined to do?");
    }

    #[test]
    fn unknown_and_duplicate_qids_fail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tsv");
        std::fs::write(&path, "zz\ttext\n").unwrap();
        assert!(load_challenge(&path, &base()).unwrap_err().to_string().contains("zz"));

        std::fs::write(&path, "q1\ta\nq1\tb\n").unwrap();
        assert!(load_challenge(&path, &base()).unwrap_err().to_string().contains("duplicate"));
    }
}
