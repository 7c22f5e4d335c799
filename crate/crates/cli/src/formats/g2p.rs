//! Grapheme-to-phoneme tables: `word<TAB>phoneme phoneme ...` rows.
//! The first entry for a word wins, matching common dictionary dumps
//! where the primary pronunciation is listed first.

use std::path::Path;

use anyhow::Result;
use noiseqa_core::phonetic::G2pTable;

use crate::tsv;

pub fn load_g2p(path: &Path) -> Result<G2pTable> {
    let content = super::read_file(path)?;
    let rows = tsv::parse_rows_with_arity(&content, 2, "g2p table")?;
    let mut table = G2pTable::new();
    for (lineno, fields) in rows {
        let phonemes: Vec<String> =
            fields[1].split_whitespace().map(str::to_string).collect();
        if phonemes.is_empty() {
            anyhow::bail!("g2p table: line {lineno} has no phonemes");
        }
        table.insert(&fields[0], phonemes);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_pronunciation_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g2p.tsv");
        std::fs::write(&path, "read\tR IY D\nread\tR EH D\n").unwrap();
        let table = load_g2p(&path).unwrap();
        assert_eq!(
            table.get("read").unwrap(),
            &["R".to_string(), "IY".to_string(), "D".to_string()][..]
        );
    }

    #[test]
    fn empty_phoneme_list_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g2p.tsv");
        std::fs::write(&path, "word\t \n").unwrap();
        assert!(load_g2p(&path).is_err());
    }
}
