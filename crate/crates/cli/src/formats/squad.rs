//! SQuAD v1.1 JSON: `data` → articles with `title` and `paragraphs`;
//! each paragraph has `context` and `qas`; each qa has `id`,
//! `question`, `answers: [{text, answer_start}]`.
//!
//! Context ids are not part of the format; the loader assigns them in
//! file order (`c000000`, `c000001`, ...), and the writer emits
//! contexts in id order, so load → save → load is stable.

use std::path::Path;

use anyhow::{Context, Result};
use noiseqa_core::dataset::{Answer, ContextParagraph, Dataset, QuestionRecord};
use serde::{Deserialize, Serialize};

use crate::meta::RunMeta;

#[derive(Serialize, Deserialize)]
struct SquadFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<serde_json::Value>,
    data: Vec<SquadArticle>,
}

#[derive(Serialize, Deserialize)]
struct SquadArticle {
    title: String,
    paragraphs: Vec<SquadParagraph>,
}

#[derive(Serialize, Deserialize)]
struct SquadParagraph {
    context: String,
    qas: Vec<SquadQa>,
}

#[derive(Serialize, Deserialize)]
struct SquadQa {
    id: String,
    question: String,
    answers: Vec<SquadAnswer>,
}

#[derive(Serialize, Deserialize)]
struct SquadAnswer {
    text: String,
    answer_start: usize,
}

pub fn load_squad(path: &Path) -> Result<Dataset> {
    let content = super::read_file(path)?;
    let file: SquadFile = serde_json::from_str(&content)
        .with_context(|| format!("parsing SQuAD JSON {}", path.display()))?;
    let mut contexts = Vec::new();
    let mut questions = Vec::new();
    let mut counter = 0usize;
    for article in file.data {
        for paragraph in article.paragraphs {
            let context_id = format!("c{counter:06}");
            counter += 1;
            contexts.push(ContextParagraph {
                context_id: context_id.clone(),
                text: paragraph.context,
                article_title: article.title.clone(),
            });
            for qa in paragraph.qas {
                questions.push(QuestionRecord {
                    qid: qa.id,
                    question: qa.question,
                    answers: qa
                        .answers
                        .into_iter()
                        .map(|a| Answer { text: a.text, answer_start: a.answer_start })
                        .collect(),
                    context_id: context_id.clone(),
                });
            }
        }
    }
    Dataset::from_parts(contexts, questions)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn save_squad(path: &Path, dataset: &Dataset, meta: Option<&RunMeta>) -> Result<()> {
    let mut by_context: std::collections::BTreeMap<&String, Vec<&QuestionRecord>> =
        Default::default();
    for q in dataset.questions.values() {
        by_context.entry(&q.context_id).or_default().push(q);
    }
    let mut articles: Vec<SquadArticle> = Vec::new();
    for ctx in dataset.contexts.values() {
        let qas = by_context
            .get(&ctx.context_id)
            .map(|qs| {
                qs.iter()
                    .map(|q| SquadQa {
                        id: q.qid.clone(),
                        question: q.question.clone(),
                        answers: q
                            .answers
                            .iter()
                            .map(|a| SquadAnswer {
                                text: a.text.clone(),
                                answer_start: a.answer_start,
                            })
                            .collect(),
                    })
                    .collect()
            })
            .unwrap_or_default();
        let paragraph = SquadParagraph { context: ctx.text.clone(), qas };
        match articles.last_mut() {
            Some(article) if article.title == ctx.article_title => {
                article.paragraphs.push(paragraph)
            }
            _ => articles.push(SquadArticle {
                title: ctx.article_title.clone(),
                paragraphs: vec![paragraph],
            }),
        }
    }
    let file = SquadFile {
        version: Some("1.1".to_string()),
        meta: meta.map(|m| m.json_value()),
        data: articles,
    };
    let json = serde_json::to_string_pretty(&file).context("serializing SQuAD JSON")?;
    super::write_file(path, &json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use noiseqa_core::dataset::DatasetError;

    fn sample_json() -> String {
        serde_json::json!({
            "version": "1.1",
            "data": [{
                "title": "Lama",
                "paragraphs": [{
                    "context": "The Lama has determined to sleep in the temple.",
                    "qas": [{
                        "id": "q1",
                        "question": "What has a Lama determined to do?",
                        "answers": [{"text": "sleep", "answer_start": 27}]
                    }]
                }]
            }]
        })
        .to_string()
    }

    #[test]
    fn loads_contexts_and_questions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("squad.json");
        std::fs::write(&path, sample_json()).unwrap();
        let ds = load_squad(&path).unwrap();
        assert_eq!(ds.len(), 1);
        let q = &ds.questions["q1"];
        assert_eq!(q.context_id, "c000000");
        assert_eq!(ds.contexts["c000000"].article_title, "Lama");
    }

    #[test]
    fn span_mismatch_is_reported_at_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, sample_json().replace("27", "28")).unwrap();
        let err = load_squad(&path).unwrap_err();
        let expected = DatasetError::SpanMismatch(vec!["q1".to_string()]);
        assert!(err.to_string().contains(&expected.to_string()));
    }

    #[test]
    fn malformed_json_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        std::fs::write(&path, "{\"data\": [{\"title\": 3}]}").unwrap();
        let err = load_squad(&path).unwrap_err();
        assert!(err.to_string().contains("broken.json"));
    }

    #[test]
    fn round_trip_preserves_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("squad.json");
        std::fs::write(&path, sample_json()).unwrap();
        let first = load_squad(&path).unwrap();

        let out = dir.path().join("copy.json");
        save_squad(&out, &first, Some(&RunMeta::new("x", 1))).unwrap();
        let second = load_squad(&out).unwrap();
        assert_eq!(first, second);

        let third_path = dir.path().join("copy2.json");
        save_squad(&third_path, &second, None).unwrap();
        assert_eq!(load_squad(&third_path).unwrap(), second);
    }
}
