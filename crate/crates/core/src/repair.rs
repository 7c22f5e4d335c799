//! Context-based question repair.
//!
//! A noisy question often contains corrupted versions of words that
//! appear intact in the context paragraph the question is asked
//! against. Repair treats question words that do not occur in the
//! context as suspects and replaces each with the closest same-class
//! context word, when one is close enough. Deterministic companions:
//! restoring the final question mark, and a spellchecker hook.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::edit::edit_cost;
use crate::text::{tokenize, CasePattern, Token, TokenKind};
use crate::wordclass::{NerSource, Tagger, WordClass};

/// Which word class repair operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairMode {
    NamedEntity,
    ContentWord,
}

impl RepairMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RepairMode::NamedEntity => "named_entity",
            RepairMode::ContentWord => "content_word",
        }
    }
}

/// Denominator of the normalized character distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// max(question token length, context token length); bounded in [0,1].
    MaxLen,
    /// Context (reference) token length.
    RefLen,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairConfig {
    pub mode: RepairMode,
    /// Replace only when the best candidate is at most this far away.
    pub threshold: f64,
    pub denominator: Denominator,
}

impl RepairConfig {
    pub fn new(mode: RepairMode) -> RepairConfig {
        RepairConfig { mode, threshold: 0.5, denominator: Denominator::MaxLen }
    }

    pub fn validate(&self) -> Result<(), RepairError> {
        if self.threshold.is_nan() || self.threshold < 0.0 {
            return Err(RepairError::InvalidThreshold(self.threshold));
        }
        Ok(())
    }
}

/// One replacement made by `context_repair`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairEdit {
    pub token_index: usize,
    pub original: String,
    pub replacement: String,
    pub distance: f64,
    pub mode: RepairMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairOutcome {
    pub text: String,
    pub edits: Vec<RepairEdit>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepairError {
    EmptyContext,
    InvalidThreshold(f64),
}

impl core::fmt::Display for RepairError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RepairError::EmptyContext => write!(f, "context is empty"),
            RepairError::InvalidThreshold(t) => write!(f, "invalid repair threshold {t}"),
        }
    }
}

impl core::error::Error for RepairError {}

/// Token indices belonging to the selected class.
fn class_members(
    tokens: &[Token],
    mode: RepairMode,
    tagger: &dyn Tagger,
    ner: &dyn NerSource,
) -> Vec<usize> {
    match mode {
        RepairMode::ContentWord => (0..tokens.len())
            .filter(|&i| {
                tokens[i].kind == TokenKind::Word
                    && tagger.classify(tokens, i) == WordClass::Content
            })
            .collect(),
        RepairMode::NamedEntity => {
            let mut members = Vec::new();
            for span in ner.spans(tokens) {
                for i in span.start..span.end {
                    if tokens[i].kind == TokenKind::Word {
                        members.push(i);
                    }
                }
            }
            members.sort_unstable();
            members.dedup();
            members
        }
    }
}

struct PoolEntry {
    surface: String,
    folded: Vec<char>,
    position: usize,
}

fn normalized_char_distance(a: &[char], b: &[char], denominator: Denominator) -> f64 {
    let denom = match denominator {
        Denominator::MaxLen => a.len().max(b.len()),
        Denominator::RefLen => b.len(),
    };
    if denom == 0 {
        return 0.0;
    }
    edit_cost(a, b, false) as f64 / denom as f64
}

/// Replace out-of-context question words of the selected class with
/// their nearest in-class context word within the distance threshold.
/// Single pass; every replacement is a context word, so a second pass
/// is a no-op.
pub fn context_repair(
    question: &str,
    context: &str,
    cfg: &RepairConfig,
    tagger: &dyn Tagger,
    ner: &dyn NerSource,
) -> Result<RepairOutcome, RepairError> {
    cfg.validate()?;
    if context.trim().is_empty() {
        return Err(RepairError::EmptyContext);
    }
    let q_tokens = tokenize(question);
    let c_tokens = tokenize(context);

    let context_words: alloc::collections::BTreeSet<String> = c_tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Word)
        .map(|t| t.surface.to_lowercase())
        .collect();

    // Candidate pool: same-class context tokens, deduplicated by
    // casefolded surface keeping the earliest occurrence.
    let mut pool: Vec<PoolEntry> = Vec::new();
    let mut seen = alloc::collections::BTreeSet::new();
    for idx in class_members(&c_tokens, cfg.mode, tagger, ner) {
        let folded_str = c_tokens[idx].surface.to_lowercase();
        if !seen.insert(folded_str.clone()) {
            continue;
        }
        pool.push(PoolEntry {
            surface: c_tokens[idx].surface.clone(),
            folded: folded_str.chars().collect(),
            position: idx,
        });
    }

    let mut edits = Vec::new();
    let mut replacements: Vec<Option<String>> = alloc::vec![None; q_tokens.len()];
    for idx in class_members(&q_tokens, cfg.mode, tagger, ner) {
        let original = &q_tokens[idx].surface;
        let folded = original.to_lowercase();
        if context_words.contains(&folded) {
            continue;
        }
        let folded_chars: Vec<char> = folded.chars().collect();
        let mut best: Option<(f64, &PoolEntry)> = None;
        for entry in &pool {
            let d = normalized_char_distance(&folded_chars, &entry.folded, cfg.denominator);
            let better = match &best {
                None => true,
                Some((bd, be)) => {
                    // Lower distance, then longer candidate, then
                    // earliest context position.
                    d < *bd
                        || (d == *bd
                            && (entry.folded.len() > be.folded.len()
                                || (entry.folded.len() == be.folded.len()
                                    && entry.position < be.position)))
                }
            };
            if better {
                best = Some((d, entry));
            }
        }
        if let Some((distance, entry)) = best {
            if distance <= cfg.threshold {
                let replacement = CasePattern::detect(original).apply(&entry.surface);
                edits.push(RepairEdit {
                    token_index: idx,
                    original: original.clone(),
                    replacement: replacement.clone(),
                    distance,
                    mode: cfg.mode,
                });
                replacements[idx] = Some(replacement);
            }
        }
    }

    Ok(RepairOutcome {
        text: crate::text::rebuild_with_replacements(question, &q_tokens, &replacements),
        edits,
    })
}

/// Append a final question mark unless one is already there.
pub fn restore_final_qmark(question: &str) -> String {
    if question.trim_end().ends_with('?') {
        question.to_string()
    } else {
        format!("{question}?")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpellcheckError {
    pub message: String,
}

impl core::fmt::Display for SpellcheckError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "spellcheck failed: {}", self.message)
    }
}

impl core::error::Error for SpellcheckError {}

/// External spell-correction hook; implementations live with the
/// engine adapters.
pub trait Spellchecker {
    fn correct(&self, text: &str) -> Result<String, SpellcheckError>;
}

/// Returns its input unchanged; the no-op baseline.
pub struct IdentitySpellchecker;

impl Spellchecker for IdentitySpellchecker {
    fn correct(&self, text: &str) -> Result<String, SpellcheckError> {
        Ok(text.to_string())
    }
}

/// Run the checker on one question.
pub fn spellcheck_repair(
    question: &str,
    checker: &dyn Spellchecker,
) -> Result<String, SpellcheckError> {
    checker.correct(question)
}
