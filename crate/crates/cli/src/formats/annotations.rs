//! Annotation sidecar TSV: `qid<TAB>token_index<TAB>kind<TAB>label`
//! where kind is `pos` or `ne`. Token indices refer to the tokenizer
//! output for the annotated question.

use std::path::Path;

use anyhow::{bail, Context, Result};
use noiseqa_core::dataset::{AnnotationSidecar, Dataset};
use noiseqa_core::wordclass::NeLabel;

use crate::tsv;

pub fn load_annotations(path: &Path) -> Result<AnnotationSidecar> {
    let content = super::read_file(path)?;
    let rows = tsv::parse_rows_with_arity(&content, 4, "annotation sidecar")?;
    let mut sidecar = AnnotationSidecar::default();
    for (lineno, fields) in rows {
        let qid = &fields[0];
        let token_index: usize = fields[1]
            .parse()
            .with_context(|| format!("annotation sidecar: bad token index at line {lineno}"))?;
        match fields[2].as_str() {
            "pos" => {
                sidecar
                    .pos
                    .entry(qid.clone())
                    .or_default()
                    .insert(token_index, fields[3].clone());
            }
            "ne" => {
                let Some(label) = NeLabel::parse(&fields[3]) else {
                    bail!(
                        "annotation sidecar: unknown NE label {} at line {lineno}",
                        fields[3]
                    );
                };
                sidecar.ne.entry(qid.clone()).or_default().insert(token_index, label);
            }
            other => bail!("annotation sidecar: unknown kind {other} at line {lineno}"),
        }
    }
    Ok(sidecar)
}

pub fn load_and_validate(path: &Path, dataset: &Dataset) -> Result<AnnotationSidecar> {
    let sidecar = load_annotations(path)?;
    sidecar.validate(dataset).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    Ok(sidecar)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pos_and_ne_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ann.tsv");
        std::fs::write(&path, "# header\nq1\t3\tpos\tPROPN\nq1\t3\tne\tPER\n").unwrap();
        let sidecar = load_annotations(&path).unwrap();
        assert_eq!(sidecar.pos["q1"][&3], "PROPN");
        assert_eq!(sidecar.ne["q1"][&3], NeLabel::Per);
    }

    #[test]
    fn rejects_unknown_kinds_and_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ann.tsv");
        std::fs::write(&path, "q1\t0\tlemma\trun\n").unwrap();
        assert!(load_annotations(&path).unwrap_err().to_string().contains("unknown kind"));

        std::fs::write(&path, "q1\t0\tne\tMISC\n").unwrap();
        assert!(load_annotations(&path).unwrap_err().to_string().contains("unknown NE label"));

        std::fs::write(&path, "q1\tx\tpos\tNOUN\n").unwrap();
        assert!(load_annotations(&path).unwrap_err().to_string().contains("token index"));
    }
}
