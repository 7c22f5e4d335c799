//! Challenge-set statistics, stratified evaluation, and degradation
//! tables.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::{ChallengeSet, Dataset};
use crate::edit::{edit_cost, edit_distance};
use crate::metrics::{corpus_cer, corpus_wer, qa_eval, MetricOptions, MetricsError, NoiseScore, QaScore};
use crate::metrics::bleu::corpus_bleu;
use crate::text::{tokenize, TokenKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    EmptySet,
    Metrics(MetricsError),
}

impl From<MetricsError> for AnalysisError {
    fn from(e: MetricsError) -> AnalysisError {
        AnalysisError::Metrics(e)
    }
}

impl core::fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AnalysisError::EmptySet => write!(f, "challenge set is empty"),
            AnalysisError::Metrics(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for AnalysisError {}

/// Per-question noise measurements backing the aggregate stats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionNoiseRow {
    pub qid: String,
    pub char_diff: usize,
    pub clean_words: usize,
    pub corrupted_words: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseStats {
    pub n: usize,
    /// Percent of clean word tokens whose aligned noisy token differs.
    pub word_corruption_rate: f64,
    /// Percent of questions at character edit distance >= 1.
    pub pct_char_diff_ge1: f64,
    /// Percent of questions at character edit distance >= 2.
    pub pct_char_diff_ge2: f64,
    pub score: NoiseScore,
    pub rows: Vec<QuestionNoiseRow>,
}

fn word_surfaces(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.surface)
        .collect()
}

/// (clean word count, clean words whose aligned noisy word differs).
/// Alignment absorbs insertions and deletions, so a dropped word
/// counts once instead of shifting every later position.
pub fn word_corruption(clean: &str, noisy: &str) -> (usize, usize) {
    let clean_words = word_surfaces(clean);
    let noisy_words = word_surfaces(noisy);
    let alignment = edit_distance(&clean_words, &noisy_words, false);
    let corrupted = alignment
        .ops
        .iter()
        .filter(|op| {
            use crate::edit::EditOp::*;
            matches!(op, Substitute { .. } | Delete { .. })
        })
        .count();
    (clean_words.len(), corrupted)
}

/// Character edit distance between the raw strings, case-sensitive.
pub fn char_diff(clean: &str, noisy: &str) -> usize {
    let a: Vec<char> = clean.chars().collect();
    let b: Vec<char> = noisy.chars().collect();
    edit_cost(&a, &b, false)
}

/// Corpus-level noise measurements over a challenge set.
pub fn noise_stats(set: &ChallengeSet) -> Result<NoiseStats, AnalysisError> {
    if set.pairs.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    let mut rows = Vec::with_capacity(set.pairs.len());
    let mut total_words = 0usize;
    let mut total_corrupted = 0usize;
    let mut ge1 = 0usize;
    let mut ge2 = 0usize;
    for (qid, pair) in &set.pairs {
        let (clean_words, corrupted_words) = word_corruption(&pair.clean, &pair.noisy);
        let char_diff = char_diff(&pair.clean, &pair.noisy);
        total_words += clean_words;
        total_corrupted += corrupted_words;
        if char_diff >= 1 {
            ge1 += 1;
        }
        if char_diff >= 2 {
            ge2 += 1;
        }
        rows.push(QuestionNoiseRow { qid: qid.clone(), char_diff, clean_words, corrupted_words });
    }
    let n = set.pairs.len();
    let opts = MetricOptions::default();
    let cer = corpus_cer(set.pairs.values().map(|p| (p.noisy.as_str(), p.clean.as_str())), &opts)?;
    let wer = corpus_wer(set.pairs.values().map(|p| (p.noisy.as_str(), p.clean.as_str())), &opts)?;
    let noisy: Vec<&str> = set.pairs.values().map(|p| p.noisy.as_str()).collect();
    let clean: Vec<&str> = set.pairs.values().map(|p| p.clean.as_str()).collect();
    let bleu = corpus_bleu(&noisy, &clean)?;
    Ok(NoiseStats {
        n,
        word_corruption_rate: if total_words == 0 {
            0.0
        } else {
            total_corrupted as f64 / total_words as f64 * 100.0
        },
        pct_char_diff_ge1: ge1 as f64 / n as f64 * 100.0,
        pct_char_diff_ge2: ge2 as f64 / n as f64 * 100.0,
        score: NoiseScore { cer, wer, bleu },
        rows,
    })
}

/// Question selector for stratified evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// Question contains this exact word token (case-sensitive).
    ContainsToken(String),
    /// Question contains a number token.
    ContainsNumeral,
    /// Qid appears in an externally supplied flag set.
    Flagged(BTreeSet<String>),
}

impl Predicate {
    pub fn name(&self) -> String {
        match self {
            Predicate::ContainsToken(t) => format!("contains_token({t})"),
            Predicate::ContainsNumeral => "contains_numeral".to_string(),
            Predicate::Flagged(_) => "flagged".to_string(),
        }
    }

    pub fn eval(&self, qid: &str, question: &str) -> bool {
        match self {
            Predicate::ContainsToken(t) => tokenize(question)
                .iter()
                .any(|tok| tok.kind == TokenKind::Word && tok.surface == *t),
            Predicate::ContainsNumeral => {
                tokenize(question).iter().any(|tok| tok.kind == TokenKind::Number)
            }
            Predicate::Flagged(qids) => qids.contains(qid),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport {
    pub predicate: String,
    pub n: usize,
    /// Omitted for an empty stratum.
    pub qa: Option<QaScore>,
    /// Omitted when no challenge set was supplied or the stratum has
    /// no pairs.
    pub noise: Option<NoiseScore>,
}

fn stratum_report(
    name: String,
    qids: &BTreeSet<String>,
    gold: &Dataset,
    predictions: &BTreeMap<String, String>,
    challenge: Option<&ChallengeSet>,
) -> Result<StratumReport, AnalysisError> {
    if qids.is_empty() {
        return Ok(StratumReport { predicate: name, n: 0, qa: None, noise: None });
    }
    let gold_answers: BTreeMap<String, Vec<String>> = qids
        .iter()
        .map(|qid| {
            let record = &gold.questions[qid];
            (qid.clone(), record.answers.iter().map(|a| a.text.clone()).collect())
        })
        .collect();
    let qa = qa_eval(predictions, &gold_answers)?.score;
    let noise = match challenge {
        Some(set) => {
            let subset: BTreeMap<_, _> =
                set.pairs.iter().filter(|(qid, _)| qids.contains(*qid)).collect();
            if subset.is_empty() {
                None
            } else {
                let opts = MetricOptions::default();
                let cer = corpus_cer(
                    subset.values().map(|p| (p.noisy.as_str(), p.clean.as_str())),
                    &opts,
                )?;
                let wer = corpus_wer(
                    subset.values().map(|p| (p.noisy.as_str(), p.clean.as_str())),
                    &opts,
                )?;
                let noisy: Vec<&str> = subset.values().map(|p| p.noisy.as_str()).collect();
                let clean: Vec<&str> = subset.values().map(|p| p.clean.as_str()).collect();
                Some(NoiseScore { cer, wer, bleu: corpus_bleu(&noisy, &clean)? })
            }
        }
        None => None,
    };
    Ok(StratumReport { predicate: name, n: qids.len(), qa: Some(qa), noise })
}

/// Splits the dataset by a predicate and scores each side. The two
/// strata partition the dataset: their sizes sum to its size.
pub fn stratify(
    gold: &Dataset,
    predictions: &BTreeMap<String, String>,
    predicate: &Predicate,
    challenge: Option<&ChallengeSet>,
) -> Result<[StratumReport; 2], AnalysisError> {
    let mut hit = BTreeSet::new();
    let mut miss = BTreeSet::new();
    for record in gold.questions.values() {
        if predicate.eval(&record.qid, &record.question) {
            hit.insert(record.qid.clone());
        } else {
            miss.insert(record.qid.clone());
        }
    }
    let name = predicate.name();
    Ok([
        stratum_report(name.clone(), &hit, gold, predictions, challenge)?,
        stratum_report(format!("not {name}"), &miss, gold, predictions, challenge)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradationCell {
    pub system: String,
    pub interface: String,
    pub score: Option<QaScore>,
    pub delta_em: Option<f64>,
    pub delta_f1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradationTable {
    pub systems: Vec<String>,
    /// "base" first, then noisy interfaces in name order.
    pub interfaces: Vec<String>,
    /// Interface-major, system-minor; one cell per pair.
    pub cells: Vec<DegradationCell>,
    /// Per interface, systems ordered best to worst by F1.
    pub rankings: BTreeMap<String, Vec<String>>,
    /// True when every interface ranks systems in the base order.
    pub ranking_consistent: bool,
    /// (interface, system) pairs with no score.
    pub missing: Vec<(String, String)>,
}

const BASE_INTERFACE: &str = "base";

fn ranking(scores: &BTreeMap<String, QaScore>, systems: &[String]) -> Vec<String> {
    let mut ranked: Vec<&String> = systems.iter().filter(|s| scores.contains_key(*s)).collect();
    ranked.sort_by(|a, b| {
        scores[*b].f1.total_cmp(&scores[*a].f1).then_with(|| a.cmp(b))
    });
    ranked.into_iter().cloned().collect()
}

/// EM/F1 per (system, interface) with deltas from the clean base run,
/// plus per-interface system rankings and a flag telling whether the
/// ranking matches the base ranking everywhere.
pub fn degradation_table(
    base: &BTreeMap<String, QaScore>,
    noisy: &BTreeMap<String, BTreeMap<String, QaScore>>,
) -> DegradationTable {
    let mut systems: BTreeSet<String> = base.keys().cloned().collect();
    for scores in noisy.values() {
        systems.extend(scores.keys().cloned());
    }
    let systems: Vec<String> = systems.into_iter().collect();
    let mut interfaces = alloc::vec![BASE_INTERFACE.to_string()];
    interfaces.extend(noisy.keys().cloned());

    let mut cells = Vec::new();
    let mut missing = Vec::new();
    for interface in &interfaces {
        let scores = if interface == BASE_INTERFACE { base } else { &noisy[interface] };
        for system in &systems {
            let score = scores.get(system).copied();
            if score.is_none() {
                missing.push((interface.clone(), system.clone()));
            }
            let deltas = match (score, base.get(system)) {
                (Some(s), Some(b)) => (Some(s.em - b.em), Some(s.f1 - b.f1)),
                _ => (None, None),
            };
            cells.push(DegradationCell {
                system: system.clone(),
                interface: interface.clone(),
                score,
                delta_em: deltas.0,
                delta_f1: deltas.1,
            });
        }
    }

    let mut rankings = BTreeMap::new();
    rankings.insert(BASE_INTERFACE.to_string(), ranking(base, &systems));
    for (interface, scores) in noisy {
        rankings.insert(interface.clone(), ranking(scores, &systems));
    }
    let base_pos: BTreeMap<&String, usize> =
        rankings[BASE_INTERFACE].iter().enumerate().map(|(i, s)| (s, i)).collect();
    let ranking_consistent = rankings.iter().all(|(_, order)| {
        order
            .windows(2)
            .all(|w| match (base_pos.get(&w[0]), base_pos.get(&w[1])) {
                (Some(a), Some(b)) => a < b,
                _ => true,
            })
    });

    DegradationTable { systems, interfaces, cells, rankings, ranking_consistent, missing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{pair_challenge, Answer, ChallengePair, ContextParagraph, Provenance, QuestionRecord};

    fn provenance() -> Provenance {
        Provenance {
            interface: "keyboard".to_string(),
            generator: "key_swap".to_string(),
            parameters: BTreeMap::new(),
            seed: 1,
        }
    }

    fn challenge(pairs: &[(&str, &str, &str)]) -> ChallengeSet {
        ChallengeSet {
            pairs: pairs
                .iter()
                .map(|(qid, clean, noisy)| {
                    (
                        qid.to_string(),
                        ChallengePair { clean: clean.to_string(), noisy: noisy.to_string() },
                    )
                })
                .collect(),
            provenance: provenance(),
        }
    }

    #[test]
    fn identity_set_scores_exactly_clean() {
        let set = challenge(&[
            ("q1", "What has a Lama determined to do?", "What has a Lama determined to do?"),
            ("q2", "Where is the temple?", "Where is the temple?"),
        ]);
        let stats = noise_stats(&set).unwrap();
        assert_eq!(stats.n, 2);
        assert_eq!(stats.word_corruption_rate, 0.0);
        assert_eq!(stats.pct_char_diff_ge1, 0.0);
        assert_eq!(stats.pct_char_diff_ge2, 0.0);
        assert_eq!(stats.score.cer, 0.0);
        assert_eq!(stats.score.wer, 0.0);
        assert_eq!(stats.score.bleu, 100.0);
    }

    #[test]
    fn one_corrupted_word_in_four_is_25_percent() {
        let set = challenge(&[("q1", "What has a Lama", "Wjat has a Lama")]);
        let stats = noise_stats(&set).unwrap();
        assert_eq!(stats.word_corruption_rate, 25.0);
        assert_eq!(stats.pct_char_diff_ge1, 100.0);
        assert_eq!(stats.pct_char_diff_ge2, 0.0);
        assert_eq!(stats.rows.len(), 1);
        assert_eq!(stats.rows[0].char_diff, 1);
        assert_eq!(stats.rows[0].clean_words, 4);
        assert_eq!(stats.rows[0].corrupted_words, 1);
    }

    #[test]
    fn dropped_word_counts_once_not_positionally() {
        let set = challenge(&[("q1", "What has a Lama", "has a Lama")]);
        let stats = noise_stats(&set).unwrap();
        assert_eq!(stats.word_corruption_rate, 25.0);
    }

    #[test]
    fn diff_thresholds_count_per_question() {
        let set = challenge(&[
            ("q1", "abcd", "abcd"),
            ("q2", "abcd", "abxd"),
            ("q3", "abcd", "xbxd"),
            ("q4", "abcd", "abcd"),
        ]);
        let stats = noise_stats(&set).unwrap();
        assert_eq!(stats.pct_char_diff_ge1, 50.0);
        assert_eq!(stats.pct_char_diff_ge2, 25.0);
    }

    #[test]
    fn empty_set_is_rejected() {
        let set = ChallengeSet { pairs: BTreeMap::new(), provenance: provenance() };
        assert_eq!(noise_stats(&set).unwrap_err(), AnalysisError::EmptySet);
    }

    fn toy_dataset() -> Dataset {
        let ctx = ContextParagraph {
            context_id: "c1".to_string(),
            text: "one two three four".to_string(),
            article_title: "T".to_string(),
        };
        let q = |qid: &str, question: &str, answer: &str, start: usize| QuestionRecord {
            qid: qid.to_string(),
            question: question.to_string(),
            answers: alloc::vec![Answer { text: answer.to_string(), answer_start: start }],
            context_id: "c1".to_string(),
        };
        Dataset::from_parts(
            alloc::vec![ctx],
            alloc::vec![
                q("q1", "what is UNK here", "one", 0),
                q("q2", "plain question", "two", 4),
                q("q3", "another UNK transcript", "three", 8),
                q("q4", "no unknowns at all", "four", 14),
            ],
        )
        .unwrap()
    }

    fn perfect_predictions() -> BTreeMap<String, String> {
        [("q1", "one"), ("q2", "two"), ("q3", "three"), ("q4", "four")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn unk_predicate_splits_two_and_two() {
        let ds = toy_dataset();
        let mut predictions = perfect_predictions();
        predictions.insert("q1".to_string(), "wrong".to_string());
        let predicate = Predicate::ContainsToken("UNK".to_string());
        let [hit, miss] = stratify(&ds, &predictions, &predicate, None).unwrap();
        assert_eq!(hit.predicate, "contains_token(UNK)");
        assert_eq!(hit.n, 2);
        assert_eq!(miss.predicate, "not contains_token(UNK)");
        assert_eq!(miss.n, 2);
        assert_eq!(hit.n + miss.n, ds.len());
        assert_eq!(hit.qa.unwrap().em, 50.0);
        assert_eq!(miss.qa.unwrap().em, 100.0);
    }

    #[test]
    fn token_match_is_case_sensitive() {
        let ds = toy_dataset();
        let predicate = Predicate::ContainsToken("unk".to_string());
        let [hit, _] = stratify(&ds, &perfect_predictions(), &predicate, None).unwrap();
        assert_eq!(hit.n, 0);
    }

    #[test]
    fn always_false_predicate_leaves_one_full_stratum() {
        let ds = toy_dataset();
        let predicate = Predicate::ContainsToken("zzz".to_string());
        let [hit, miss] = stratify(&ds, &perfect_predictions(), &predicate, None).unwrap();
        assert_eq!(hit.n, 0);
        assert!(hit.qa.is_none());
        assert!(hit.noise.is_none());
        assert_eq!(miss.n, 4);
        let full = miss.qa.unwrap();
        assert_eq!(full.em, 100.0);
        assert_eq!(full.f1, 100.0);
    }

    #[test]
    fn numeral_predicate_matches_digit_tokens() {
        assert!(Predicate::ContainsNumeral.eval("q", "How many of the 100 were lost?"));
        assert!(!Predicate::ContainsNumeral.eval("q", "How many were lost?"));
    }

    #[test]
    fn flagged_predicate_uses_qids() {
        let flags: BTreeSet<String> = ["q2".to_string()].into();
        let predicate = Predicate::Flagged(flags);
        let [hit, miss] =
            stratify(&toy_dataset(), &perfect_predictions(), &predicate, None).unwrap();
        assert_eq!(hit.n, 1);
        assert_eq!(miss.n, 3);
    }

    #[test]
    fn strata_carry_noise_scores_when_pairs_supplied() {
        let ds = toy_dataset();
        let noisy: BTreeMap<String, String> = ds
            .questions
            .values()
            .map(|q| (q.qid.clone(), q.question.replace('a', "s")))
            .collect();
        let set = pair_challenge(&ds, &noisy, provenance()).unwrap();
        let predicate = Predicate::ContainsToken("UNK".to_string());
        let [hit, miss] =
            stratify(&ds, &perfect_predictions(), &predicate, Some(&set)).unwrap();
        assert!(hit.noise.unwrap().cer > 0.0);
        assert!(miss.noise.unwrap().cer > 0.0);
    }

    fn score(em: f64, f1: f64) -> QaScore {
        QaScore { em, f1, n: 10 }
    }

    #[test]
    fn base_only_single_system_has_zero_deltas() {
        let mut base = BTreeMap::new();
        base.insert("bert".to_string(), score(70.0, 80.0));
        let table = degradation_table(&base, &BTreeMap::new());
        assert_eq!(table.cells.len(), 1);
        let cell = &table.cells[0];
        assert_eq!(cell.interface, "base");
        assert_eq!(cell.delta_em, Some(0.0));
        assert_eq!(cell.delta_f1, Some(0.0));
        assert!(table.ranking_consistent);
        assert!(table.missing.is_empty());
    }

    #[test]
    fn deltas_are_exact_and_rankings_ordered() {
        let mut base = BTreeMap::new();
        base.insert("bert".to_string(), score(70.0, 81.5));
        base.insert("bidaf".to_string(), score(60.0, 72.25));
        let mut keyboard = BTreeMap::new();
        keyboard.insert("bert".to_string(), score(50.0, 61.5));
        keyboard.insert("bidaf".to_string(), score(40.0, 52.25));
        let mut noisy = BTreeMap::new();
        noisy.insert("keyboard".to_string(), keyboard);

        let table = degradation_table(&base, &noisy);
        assert_eq!(table.interfaces, alloc::vec!["base".to_string(), "keyboard".to_string()]);
        let cell = table
            .cells
            .iter()
            .find(|c| c.interface == "keyboard" && c.system == "bert")
            .unwrap();
        assert_eq!(cell.delta_em, Some(-20.0));
        assert_eq!(cell.delta_f1, Some(-20.0));
        assert_eq!(
            table.rankings["keyboard"],
            alloc::vec!["bert".to_string(), "bidaf".to_string()]
        );
        assert!(table.ranking_consistent);
    }

    #[test]
    fn flipped_ranking_clears_consistency_flag() {
        let mut base = BTreeMap::new();
        base.insert("bert".to_string(), score(70.0, 81.5));
        base.insert("bidaf".to_string(), score(60.0, 72.25));
        let mut asr = BTreeMap::new();
        asr.insert("bert".to_string(), score(30.0, 41.5));
        asr.insert("bidaf".to_string(), score(40.0, 52.25));
        let mut noisy = BTreeMap::new();
        noisy.insert("asr".to_string(), asr);

        let table = degradation_table(&base, &noisy);
        assert!(!table.ranking_consistent);
    }

    #[test]
    fn missing_cells_are_blank_and_flagged() {
        let mut base = BTreeMap::new();
        base.insert("bert".to_string(), score(70.0, 81.5));
        base.insert("bidaf".to_string(), score(60.0, 72.25));
        let mut mt = BTreeMap::new();
        mt.insert("bert".to_string(), score(50.0, 61.5));
        let mut noisy = BTreeMap::new();
        noisy.insert("mt".to_string(), mt);

        let table = degradation_table(&base, &noisy);
        let blank = table
            .cells
            .iter()
            .find(|c| c.interface == "mt" && c.system == "bidaf")
            .unwrap();
        assert!(blank.score.is_none());
        assert!(blank.delta_f1.is_none());
        assert_eq!(table.missing, alloc::vec![("mt".to_string(), "bidaf".to_string())]);
        assert_eq!(table.rankings["mt"], alloc::vec!["bert".to_string()]);
        assert!(table.ranking_consistent);
    }
}
