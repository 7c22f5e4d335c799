//! Quantitative measures: exact match and token F1 for QA predictions,
//! character and word error rates against reference text, and corpus
//! BLEU. Error rates and BLEU quantify how much noise an interface
//! introduced; EM/F1 quantify what that noise costs a QA system.

pub mod bleu;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use bleu::corpus_bleu;

use crate::edit::edit_cost;
use crate::noise::strip_punctuation;
use crate::text::normalize_answer;

/// Aggregated QA accuracy over a gold set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaScore {
    /// Exact-match percentage.
    pub em: f64,
    /// Token-F1 percentage.
    pub f1: f64,
    /// Number of questions evaluated.
    pub n: usize,
}

/// Corpus-level noise measurements of a challenge set against its
/// clean side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseScore {
    /// Character error rate, percent.
    pub cer: f64,
    /// Word error rate, percent.
    pub wer: f64,
    /// Corpus BLEU, 0-100.
    pub bleu: f64,
}

/// Normalization switches for CER/WER.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricOptions {
    /// Casefold both sides first.
    pub casefold: bool,
    /// Remove punctuation tokens before WER (CER always keeps them).
    pub wer_strip_punct: bool,
}

impl Default for MetricOptions {
    fn default() -> MetricOptions {
        MetricOptions { casefold: true, wer_strip_punct: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricsError {
    /// Reference empty after normalization; the rate is undefined.
    EmptyReference,
    /// No gold questions to evaluate.
    EmptyGold,
    /// Hypothesis and reference lists differ in length.
    LengthMismatch { hyps: usize, refs: usize },
}

impl core::fmt::Display for MetricsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MetricsError::EmptyReference => write!(f, "empty reference"),
            MetricsError::EmptyGold => write!(f, "empty gold set"),
            MetricsError::LengthMismatch { hyps, refs } => {
                write!(f, "{hyps} hypotheses vs {refs} references")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

/// Result of scoring a prediction file, including the qids that had no
/// prediction and were scored zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QaEvalReport {
    pub score: QaScore,
    pub missing: Vec<String>,
}

fn token_f1(pred: &[String], gold: &[String]) -> f64 {
    if pred.is_empty() && gold.is_empty() {
        return 1.0;
    }
    let mut gold_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in gold {
        *gold_counts.entry(t.as_str()).or_insert(0) += 1;
    }
    let mut overlap = 0usize;
    for t in pred {
        if let Some(c) = gold_counts.get_mut(t.as_str()) {
            if *c > 0 {
                *c -= 1;
                overlap += 1;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / pred.len() as f64;
    let recall = overlap as f64 / gold.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Per-question EM/F1 against one or more gold answers: EM is exact
/// equality of normalized token sequences against any gold; F1 is the
/// best token-multiset F1 over the golds.
pub fn question_score(prediction: &str, golds: &[String]) -> (f64, f64) {
    let pred = normalize_answer(prediction);
    let mut em = 0.0;
    let mut f1: f64 = 0.0;
    for gold_raw in golds {
        let gold = normalize_answer(gold_raw);
        if pred == gold {
            em = 1.0;
        }
        f1 = f1.max(token_f1(&pred, &gold));
    }
    (em, f1)
}

/// Score a prediction map against gold answers keyed by qid. Gold
/// questions without a prediction score zero and are reported.
pub fn qa_eval(
    predictions: &BTreeMap<String, String>,
    gold: &BTreeMap<String, Vec<String>>,
) -> Result<QaEvalReport, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyGold);
    }
    let mut em_sum = 0.0;
    let mut f1_sum = 0.0;
    let mut missing = Vec::new();
    for (qid, answers) in gold {
        match predictions.get(qid) {
            Some(pred) => {
                let (em, f1) = question_score(pred, answers);
                em_sum += em;
                f1_sum += f1;
            }
            None => missing.push(qid.to_string()),
        }
    }
    let n = gold.len();
    Ok(QaEvalReport {
        score: QaScore { em: em_sum / n as f64 * 100.0, f1: f1_sum / n as f64 * 100.0, n },
        missing,
    })
}

fn fold(s: &str, opts: &MetricOptions) -> String {
    if opts.casefold {
        s.to_lowercase()
    } else {
        s.to_string()
    }
}

fn char_edits(hyp: &str, reference: &str, opts: &MetricOptions) -> (usize, usize) {
    let h: Vec<char> = fold(hyp, opts).chars().collect();
    let r: Vec<char> = fold(reference, opts).chars().collect();
    (edit_cost(&h, &r, false), r.len())
}

fn word_edits(hyp: &str, reference: &str, opts: &MetricOptions) -> (usize, usize) {
    let prep = |s: &str| -> Vec<String> {
        let folded = fold(s, opts);
        let stripped = if opts.wer_strip_punct { strip_punctuation(&folded) } else { folded };
        stripped.split_whitespace().map(|w| w.to_string()).collect()
    };
    let h = prep(hyp);
    let r = prep(reference);
    (edit_cost(&h, &r, false), r.len())
}

/// Character error rate, percent of reference characters.
pub fn cer(hyp: &str, reference: &str, opts: &MetricOptions) -> Result<f64, MetricsError> {
    let (edits, ref_len) = char_edits(hyp, reference, opts);
    if ref_len == 0 {
        return Err(MetricsError::EmptyReference);
    }
    Ok(edits as f64 / ref_len as f64 * 100.0)
}

/// Word error rate, percent of reference words.
pub fn wer(hyp: &str, reference: &str, opts: &MetricOptions) -> Result<f64, MetricsError> {
    let (edits, ref_len) = word_edits(hyp, reference, opts);
    if ref_len == 0 {
        return Err(MetricsError::EmptyReference);
    }
    Ok(edits as f64 / ref_len as f64 * 100.0)
}

/// Corpus CER: total edits over total reference characters.
pub fn corpus_cer<'a, I>(pairs: I, opts: &MetricOptions) -> Result<f64, MetricsError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut edits = 0usize;
    let mut total = 0usize;
    for (hyp, reference) in pairs {
        let (e, len) = char_edits(hyp, reference, opts);
        if len == 0 {
            return Err(MetricsError::EmptyReference);
        }
        edits += e;
        total += len;
    }
    if total == 0 {
        return Err(MetricsError::EmptyReference);
    }
    Ok(edits as f64 / total as f64 * 100.0)
}

/// Corpus WER: total edits over total reference words.
pub fn corpus_wer<'a, I>(pairs: I, opts: &MetricOptions) -> Result<f64, MetricsError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut edits = 0usize;
    let mut total = 0usize;
    for (hyp, reference) in pairs {
        let (e, len) = word_edits(hyp, reference, opts);
        if len == 0 {
            return Err(MetricsError::EmptyReference);
        }
        edits += e;
        total += len;
    }
    if total == 0 {
        return Err(MetricsError::EmptyReference);
    }
    Ok(edits as f64 / total as f64 * 100.0)
}
