//! Misspelling taxonomy and interface-error filtering.
//!
//! Curated misspelling lists mix errors a physical interface could
//! produce (fat fingers, dropped or doubled keys) with errors people
//! make because they believe the wrong spelling. Only the former make
//! sense as synthetic interface noise. `classify_pair` assigns each
//! (word, misspelling) pair a mechanical category; `filter_lexicon`
//! keeps plausibly mechanical categories and then discards pairs whose
//! pronunciation barely changes, since those are spelling
//! misconceptions rather than typos.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::edit::{edit_distance, EditOp};
use crate::keyboard::{AdjacencyMode, KeyboardLayout};
use crate::noise::{LexiconError, MisspellingLexicon};
use crate::phonetic::{encode, normalized_distance, G2pTable, PhonemeWeights};

/// Mechanical shape of one misspelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ErrorCategory {
    /// Differs only in apostrophes.
    Apostrophe,
    /// Differs only in whitespace.
    Whitespace,
    /// One character missing.
    Deletion,
    /// One character replaced by a non-adjacent key.
    Substitution,
    /// Two adjacent characters swapped.
    AdjSwap,
    /// One character added.
    Insertion,
    /// One character replaced by a physically adjacent key.
    KeySwap,
    /// More than one edit.
    Multiple,
}

impl ErrorCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Apostrophe => "Apostrophe",
            ErrorCategory::Whitespace => "Whitespace",
            ErrorCategory::Deletion => "Deletion",
            ErrorCategory::Substitution => "Substitution",
            ErrorCategory::AdjSwap => "AdjSwap",
            ErrorCategory::Insertion => "Insertion",
            ErrorCategory::KeySwap => "KeySwap",
            ErrorCategory::Multiple => "Multiple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    /// The two strings are identical; there is no error to classify.
    EqualStrings,
}

impl core::fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ClassifyError::EqualStrings => write!(f, "strings are equal"),
        }
    }
}

impl core::error::Error for ClassifyError {}

fn strip_chars(s: &str, pred: impl Fn(char) -> bool) -> String {
    s.chars().filter(|c| !pred(*c)).collect()
}

/// Categorize how `typed` differs from `correct`.
pub fn classify_pair(
    correct: &str,
    typed: &str,
    layout: &KeyboardLayout,
) -> Result<ErrorCategory, ClassifyError> {
    if correct == typed {
        return Err(ClassifyError::EqualStrings);
    }
    let apos = |c: char| c == '\'' || c == '\u{2019}';
    if strip_chars(correct, apos) == strip_chars(typed, apos) {
        return Ok(ErrorCategory::Apostrophe);
    }
    if strip_chars(correct, char::is_whitespace) == strip_chars(typed, char::is_whitespace) {
        return Ok(ErrorCategory::Whitespace);
    }
    let a: Vec<char> = correct.chars().collect();
    let b: Vec<char> = typed.chars().collect();
    let alignment = edit_distance(&a, &b, true);
    if alignment.cost != 1 {
        return Ok(ErrorCategory::Multiple);
    }
    let op = alignment
        .ops
        .iter()
        .find(|op| !op.is_match())
        .expect("cost 1 implies one non-match op");
    Ok(match op {
        EditOp::Delete { .. } => ErrorCategory::Deletion,
        EditOp::Insert { .. } => ErrorCategory::Insertion,
        EditOp::Transpose { .. } => ErrorCategory::AdjSwap,
        EditOp::Substitute { src, with, .. } => {
            if layout.adjacent(a[*src], *with, AdjacencyMode::Physical) {
                ErrorCategory::KeySwap
            } else {
                ErrorCategory::Substitution
            }
        }
        EditOp::Match { .. } => unreachable!(),
    })
}

/// Configuration for the two-step filter.
#[derive(Debug, Clone)]
pub struct FilterConfig {
    /// Categories that an interface could plausibly produce.
    pub retained_categories: BTreeSet<ErrorCategory>,
    pub phoneme_weights: PhonemeWeights,
    /// Pairs with normalized pronunciation distance below this are
    /// discarded as pronunciation-preserving.
    pub pron_threshold: f64,
}

impl Default for FilterConfig {
    fn default() -> FilterConfig {
        let retained_categories = [
            ErrorCategory::Deletion,
            ErrorCategory::Insertion,
            ErrorCategory::AdjSwap,
            ErrorCategory::KeySwap,
        ]
        .into_iter()
        .collect();
        FilterConfig {
            retained_categories,
            phoneme_weights: PhonemeWeights::unit(),
            pron_threshold: 0.25,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), FilterError> {
        if !(0.0..=1.0).contains(&self.pron_threshold) || self.pron_threshold.is_nan() {
            return Err(FilterError::InvalidThreshold(self.pron_threshold));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterError {
    InvalidThreshold(f64),
    Lexicon(LexiconError),
}

impl core::fmt::Display for FilterError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FilterError::InvalidThreshold(t) => write!(f, "threshold {t} outside [0, 1]"),
            FilterError::Lexicon(e) => write!(f, "lexicon error: {e}"),
        }
    }
}

impl core::error::Error for FilterError {}

/// Outcome of filtering one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Retained,
    /// Step (a): category is not interface-plausible.
    DroppedCategory,
    /// Step (b): pronunciation too similar.
    DroppedPronunciation,
    /// Unusable input pair (equal strings).
    DroppedInvalid,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Retained => "retained",
            Verdict::DroppedCategory => "dropped-category",
            Verdict::DroppedPronunciation => "dropped-pronunciation",
            Verdict::DroppedInvalid => "dropped-invalid",
        }
    }

    pub fn is_retained(&self) -> bool {
        matches!(self, Verdict::Retained)
    }
}

/// One line of the filter's audit trail.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub word: String,
    pub misspelling: String,
    pub category: Option<ErrorCategory>,
    pub pron_distance: Option<f64>,
    pub verdict: Verdict,
}

/// Apply the two-step filter to raw (word, misspelling) pairs. Returns
/// the retained lexicon plus one audit record per input pair, in input
/// order. The two steps are independent predicates, so applying them in
/// either order yields the same retained set.
pub fn filter_lexicon<'a, I>(
    pairs: I,
    cfg: &FilterConfig,
    layout: &KeyboardLayout,
    g2p: Option<&G2pTable>,
) -> Result<(MisspellingLexicon, Vec<AuditRecord>), FilterError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    cfg.validate()?;
    let mut lexicon = MisspellingLexicon::new();
    let mut audit = Vec::new();
    for (word, misspelling) in pairs {
        let category = classify_pair(word, misspelling, layout).ok();
        let pron_distance = match (encode(word, g2p), encode(misspelling, g2p)) {
            (Ok(a), Ok(b)) => {
                Some(normalized_distance(&a.phonemes, &b.phonemes, &cfg.phoneme_weights))
            }
            _ => None,
        };
        let verdict = match category {
            None => Verdict::DroppedInvalid,
            Some(cat) if !cfg.retained_categories.contains(&cat) => Verdict::DroppedCategory,
            Some(_) => match pron_distance {
                Some(d) if d < cfg.pron_threshold => Verdict::DroppedPronunciation,
                _ => Verdict::Retained,
            },
        };
        if verdict.is_retained() {
            lexicon.insert(word, misspelling).map_err(FilterError::Lexicon)?;
        }
        audit.push(AuditRecord {
            word: word.to_string(),
            misspelling: misspelling.to_string(),
            category,
            pron_distance,
            verdict,
        });
    }
    Ok((lexicon, audit))
}

/// Human label for a pair in an evaluation sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HumanLabel {
    Interface,
    NonInterface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptySample;

impl core::fmt::Display for EmptySample {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "empty labeled sample")
    }
}

impl core::error::Error for EmptySample {}

/// Percentage of pairs where the filter verdict agrees with the human
/// label (retained ⟺ interface error).
pub fn agreement(items: &[(Verdict, HumanLabel)]) -> Result<f64, EmptySample> {
    if items.is_empty() {
        return Err(EmptySample);
    }
    let matches = items
        .iter()
        .filter(|(v, l)| v.is_retained() == (*l == HumanLabel::Interface))
        .count();
    Ok(matches as f64 / items.len() as f64 * 100.0)
}
