//! Extractive-QA dataset model: contexts, questions with answer
//! spans, clean/noisy challenge pairs, annotation sidecars, and
//! augmented training sets. File parsing lives in the companion
//! crate; this module owns the invariants.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::text::tokenize;
use crate::wordclass::NeLabel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer {
    pub text: String,
    /// Character offset into the context, Python-slice semantics.
    pub answer_start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionRecord {
    pub qid: String,
    pub question: String,
    pub answers: Vec<Answer>,
    pub context_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextParagraph {
    pub context_id: String,
    pub text: String,
    pub article_title: String,
}

/// Validated dataset; keys are ids, iteration order is id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub contexts: BTreeMap<String, ContextParagraph>,
    pub questions: BTreeMap<String, QuestionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetError {
    DuplicateQid(String),
    DuplicateContextId(String),
    EmptyContextText(String),
    UnknownContextId { qid: String, context_id: String },
    NoAnswers(String),
    /// Answer text does not match the context at its offset.
    SpanMismatch(Vec<String>),
    UnknownQids(Vec<String>),
    QidCollision(String),
    Transform { qid: String, policy: String, message: String },
    UnknownAnnotatedQid(String),
    AnnotationIndexOutOfRange { qid: String, token_index: usize },
}

impl core::fmt::Display for DatasetError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DatasetError::DuplicateQid(qid) => write!(f, "duplicate qid {qid}"),
            DatasetError::DuplicateContextId(id) => write!(f, "duplicate context id {id}"),
            DatasetError::EmptyContextText(id) => write!(f, "context {id} has empty text"),
            DatasetError::UnknownContextId { qid, context_id } => {
                write!(f, "question {qid} references unknown context {context_id}")
            }
            DatasetError::NoAnswers(qid) => write!(f, "question {qid} has no answers"),
            DatasetError::SpanMismatch(qids) => {
                write!(f, "answer span mismatch for qids: {}", qids.join(", "))
            }
            DatasetError::UnknownQids(qids) => {
                write!(f, "qids not in base dataset: {}", qids.join(", "))
            }
            DatasetError::QidCollision(qid) => {
                write!(f, "augmented qid {qid} collides with an existing record")
            }
            DatasetError::Transform { qid, policy, message } => {
                write!(f, "policy {policy} failed on {qid}: {message}")
            }
            DatasetError::UnknownAnnotatedQid(qid) => {
                write!(f, "annotation references unknown qid {qid}")
            }
            DatasetError::AnnotationIndexOutOfRange { qid, token_index } => {
                write!(f, "annotation for {qid} has out-of-range token index {token_index}")
            }
        }
    }
}

impl core::error::Error for DatasetError {}

fn span_matches(context: &str, answer: &Answer) -> bool {
    let ctx: Vec<char> = context.chars().collect();
    let want: Vec<char> = answer.text.chars().collect();
    let end = answer.answer_start + want.len();
    end <= ctx.len() && ctx[answer.answer_start..end] == want[..]
}

impl Dataset {
    /// Builds a dataset, checking every invariant: unique ids,
    /// resolvable contexts, non-empty fields, and answer spans that
    /// reproduce their text.
    pub fn from_parts(
        contexts: Vec<ContextParagraph>,
        questions: Vec<QuestionRecord>,
    ) -> Result<Dataset, DatasetError> {
        let mut context_map = BTreeMap::new();
        for ctx in contexts {
            if ctx.text.is_empty() {
                return Err(DatasetError::EmptyContextText(ctx.context_id));
            }
            let id = ctx.context_id.clone();
            if context_map.insert(id.clone(), ctx).is_some() {
                return Err(DatasetError::DuplicateContextId(id));
            }
        }
        let mut question_map = BTreeMap::new();
        let mut bad_spans = Vec::new();
        for q in questions {
            if q.answers.is_empty() {
                return Err(DatasetError::NoAnswers(q.qid));
            }
            let ctx = context_map.get(&q.context_id).ok_or_else(|| {
                DatasetError::UnknownContextId {
                    qid: q.qid.clone(),
                    context_id: q.context_id.clone(),
                }
            })?;
            if !q.answers.iter().all(|a| span_matches(&ctx.text, a)) {
                bad_spans.push(q.qid.clone());
            }
            let qid = q.qid.clone();
            if question_map.insert(qid.clone(), q).is_some() {
                return Err(DatasetError::DuplicateQid(qid));
            }
        }
        if !bad_spans.is_empty() {
            bad_spans.sort();
            return Err(DatasetError::SpanMismatch(bad_spans));
        }
        Ok(Dataset { contexts: context_map, questions: question_map })
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }

    /// Context paragraph a question is asked against.
    pub fn context_of(&self, qid: &str) -> Option<&ContextParagraph> {
        self.questions.get(qid).and_then(|q| self.contexts.get(&q.context_id))
    }
}

/// How a challenge set came to be.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub interface: String,
    /// Generator name, or "natural" for human-produced noise.
    pub generator: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChallengePair {
    pub clean: String,
    pub noisy: String,
}

/// Clean/noisy question pairs over a base dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChallengeSet {
    pub pairs: BTreeMap<String, ChallengePair>,
    pub provenance: Provenance,
}

/// Pairs noisy question texts with their clean originals. Every qid
/// must exist in the base dataset; the clean side is taken from it.
pub fn pair_challenge(
    base: &Dataset,
    noisy_texts: &BTreeMap<String, String>,
    provenance: Provenance,
) -> Result<ChallengeSet, DatasetError> {
    let unknown: Vec<String> = noisy_texts
        .keys()
        .filter(|qid| !base.questions.contains_key(*qid))
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(DatasetError::UnknownQids(unknown));
    }
    let pairs = noisy_texts
        .iter()
        .map(|(qid, noisy)| {
            let clean = base.questions[qid].question.clone();
            (qid.clone(), ChallengePair { clean, noisy: noisy.clone() })
        })
        .collect();
    Ok(ChallengeSet { pairs, provenance })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformError {
    pub message: String,
}

/// Rewrites one question text; implementations range from noise
/// policies to scripted engine replays.
pub trait QuestionTransform {
    fn transform(&self, qid: &str, question: &str) -> Result<String, TransformError>;
}

pub struct NamedTransform<'a> {
    pub name: String,
    pub transform: &'a dyn QuestionTransform,
}

/// Original records plus one transformed copy per record per policy,
/// with qids suffixed `#<policy-name>`. Contexts and answers are
/// carried over untouched.
pub fn emit_augmented(
    base: &Dataset,
    transforms: &[NamedTransform<'_>],
) -> Result<Dataset, DatasetError> {
    let mut questions = base.questions.clone();
    for nt in transforms {
        for record in base.questions.values() {
            let noisy = nt.transform.transform(&record.qid, &record.question).map_err(|e| {
                DatasetError::Transform {
                    qid: record.qid.clone(),
                    policy: nt.name.clone(),
                    message: e.message,
                }
            })?;
            let new_qid = alloc::format!("{}#{}", record.qid, nt.name);
            let copy = QuestionRecord {
                qid: new_qid.clone(),
                question: noisy,
                answers: record.answers.clone(),
                context_id: record.context_id.clone(),
            };
            if questions.insert(new_qid.clone(), copy).is_some() {
                return Err(DatasetError::QidCollision(new_qid));
            }
        }
    }
    Ok(Dataset { contexts: base.contexts.clone(), questions })
}

/// Token-level POS and NE annotations supplied alongside a dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationSidecar {
    pub pos: BTreeMap<String, BTreeMap<usize, String>>,
    pub ne: BTreeMap<String, BTreeMap<usize, NeLabel>>,
}

impl AnnotationSidecar {
    /// Every annotated qid must exist and every token index must be
    /// valid for that question under the tokenizer.
    pub fn validate(&self, dataset: &Dataset) -> Result<(), DatasetError> {
        let qids: BTreeSet<&String> =
            self.pos.keys().chain(self.ne.keys()).collect();
        for qid in qids {
            let record = dataset
                .questions
                .get(qid)
                .ok_or_else(|| DatasetError::UnknownAnnotatedQid(qid.clone()))?;
            let n_tokens = tokenize(&record.question).len();
            let indices = self
                .pos
                .get(qid)
                .into_iter()
                .flat_map(|m| m.keys())
                .chain(self.ne.get(qid).into_iter().flat_map(|m| m.keys()));
            for &idx in indices {
                if idx >= n_tokens {
                    return Err(DatasetError::AnnotationIndexOutOfRange {
                        qid: qid.clone(),
                        token_index: idx,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn pos_for(&self, qid: &str) -> Option<&BTreeMap<usize, String>> {
        self.pos.get(qid)
    }

    pub fn ne_for(&self, qid: &str) -> Option<&BTreeMap<usize, NeLabel>> {
        self.ne.get(qid)
    }
}
