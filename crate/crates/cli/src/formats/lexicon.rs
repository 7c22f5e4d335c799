//! Misspelling lists. Two input shapes: our canonical TSV of
//! `word<TAB>misspelling` rows, and the raw Wikipedia machine list of
//! `misspelling->correction1, correction2` lines.

use std::path::Path;

use anyhow::{bail, Result};
use noiseqa_core::noise::MisspellingLexicon;

use crate::meta::RunMeta;
use crate::tsv;

/// (word, misspelling) pairs in file order.
pub fn load_pairs_tsv(path: &Path) -> Result<Vec<(String, String)>> {
    let content = super::read_file(path)?;
    let rows = tsv::parse_rows_with_arity(&content, 2, "misspelling pairs")?;
    Ok(rows.into_iter().map(|(_, mut f)| (f.remove(0), f.remove(0))).collect())
}

/// Parses the Wikipedia "for machines" list. Each line reads
/// `misspelling->correction` with multiple corrections separated by
/// commas; one pair is produced per correction.
pub fn load_pairs_wiki(path: &Path) -> Result<Vec<(String, String)>> {
    let content = super::read_file(path)?;
    let mut pairs = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((misspelling, corrections)) = line.split_once("->") else {
            bail!("{}: line {} has no '->'", path.display(), idx + 1);
        };
        let misspelling = misspelling.trim();
        for correction in corrections.split(',') {
            let correction = correction.trim();
            if misspelling.is_empty() || correction.is_empty() {
                bail!("{}: line {} has an empty side", path.display(), idx + 1);
            }
            pairs.push((correction.to_string(), misspelling.to_string()));
        }
    }
    Ok(pairs)
}

pub fn save_pairs_tsv(path: &Path, pairs: &[(String, String)], meta: &RunMeta) -> Result<()> {
    let mut out = meta.tsv_header();
    for (word, misspelling) in pairs {
        out.push_str(&tsv::format_row(&[word, misspelling]));
    }
    super::write_file(path, &out)
}

pub fn lexicon_from_pairs(pairs: &[(String, String)]) -> Result<MisspellingLexicon> {
    MisspellingLexicon::from_pairs(pairs.iter().map(|(w, m)| (w.as_str(), m.as_str())))
        .map_err(|e| anyhow::anyhow!("invalid misspelling lexicon: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wiki_lines_expand_per_correction() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wiki.txt");
        std::fs::write(&path, "adn->and\nabilitey->ability\nwich->which, witch\n").unwrap();
        let pairs = load_pairs_wiki(&path).unwrap();
        assert_eq!(
            pairs,
            vec![
                ("and".to_string(), "adn".to_string()),
                ("ability".to_string(), "abilitey".to_string()),
                ("which".to_string(), "wich".to_string()),
                ("witch".to_string(), "wich".to_string()),
            ]
        );
    }

    #[test]
    fn wiki_rejects_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("wiki.txt");
        std::fs::write(&path, "no arrow here\n").unwrap();
        assert!(load_pairs_wiki(&path).unwrap_err().to_string().contains("line 1"));
    }

    #[test]
    fn tsv_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lex.tsv");
        let pairs = vec![("and".to_string(), "adn".to_string())];
        save_pairs_tsv(&path, &pairs, &RunMeta::new("x", 0)).unwrap();
        assert_eq!(load_pairs_tsv(&path).unwrap(), pairs);
        let lexicon = lexicon_from_pairs(&pairs).unwrap();
        assert!(lexicon.contains("and"));
    }
}
