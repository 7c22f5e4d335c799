//! Word-class tagging and named-entity span detection.
//!
//! The targeted generators and the repair need to know, per token,
//! whether it is a function word, a content word (nouns and adjectives),
//! or neither. Real corpora come with annotation sidecars produced by an
//! external tagger; when none is given, a small heuristic stands in:
//! a closed-class lexicon for function words, a frequent-verb list to
//! keep verbs out of the content class, and everything else content.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::text::{CasePattern, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum WordClass {
    Function,
    Content,
    Other,
}

/// Assigns a class to a token in context.
pub trait Tagger {
    fn classify(&self, tokens: &[Token], idx: usize) -> WordClass;
}

const FUNCTION_WORDS: &str = include_str!("data/function_words.txt");
const COMMON_VERBS: &str = include_str!("data/common_verbs.txt");

const QUESTION_WORDS: [&str; 9] =
    ["what", "which", "where", "when", "whom", "whose", "who", "why", "how"];

fn load_word_list(raw: &str) -> BTreeSet<String> {
    raw.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_string())
        .collect()
}

/// Lexicon-based tagger used when no annotations are available.
#[derive(Debug, Clone)]
pub struct HeuristicTagger {
    function_words: BTreeSet<String>,
    common_verbs: BTreeSet<String>,
}

impl Default for HeuristicTagger {
    fn default() -> Self {
        HeuristicTagger::new()
    }
}

impl HeuristicTagger {
    pub fn new() -> HeuristicTagger {
        HeuristicTagger {
            function_words: load_word_list(FUNCTION_WORDS),
            common_verbs: load_word_list(COMMON_VERBS),
        }
    }

    /// Typo-tolerant question-word check: same length as a question word
    /// (at least 4 letters) with at most one differing character, so
    /// e.g. "Wjat" still counts as a function word.
    fn near_question_word(word: &str) -> bool {
        let chars: Vec<char> = word.chars().collect();
        if chars.len() < 4 {
            return false;
        }
        QUESTION_WORDS.iter().any(|qw| {
            let qchars: Vec<char> = qw.chars().collect();
            qchars.len() == chars.len()
                && qchars.iter().zip(&chars).filter(|(a, b)| a != b).count() <= 1
        })
    }
}

impl Tagger for HeuristicTagger {
    fn classify(&self, tokens: &[Token], idx: usize) -> WordClass {
        let tok = &tokens[idx];
        if tok.kind != TokenKind::Word {
            return WordClass::Other;
        }
        let lower = tok.surface.to_lowercase();
        if self.function_words.contains(&lower) || Self::near_question_word(&lower) {
            return WordClass::Function;
        }
        if self.common_verbs.contains(&lower) {
            return WordClass::Other;
        }
        WordClass::Content
    }
}

/// Tagger backed by per-token part-of-speech annotations (universal POS
/// tags), falling back to the heuristic for unannotated tokens.
#[derive(Debug, Clone)]
pub struct SidecarTagger {
    pos: BTreeMap<usize, String>,
    fallback: HeuristicTagger,
}

impl SidecarTagger {
    pub fn new(pos: BTreeMap<usize, String>) -> SidecarTagger {
        SidecarTagger { pos, fallback: HeuristicTagger::new() }
    }

    fn map_pos(tag: &str) -> WordClass {
        match tag.to_uppercase().as_str() {
            "NOUN" | "PROPN" | "ADJ" => WordClass::Content,
            "PRON" | "DET" | "CCONJ" | "SCONJ" | "CONJ" | "ADP" | "AUX" | "PART" => {
                WordClass::Function
            }
            _ => WordClass::Other,
        }
    }
}

impl Tagger for SidecarTagger {
    fn classify(&self, tokens: &[Token], idx: usize) -> WordClass {
        if tokens[idx].kind != TokenKind::Word {
            return WordClass::Other;
        }
        match self.pos.get(&idx) {
            Some(tag) => Self::map_pos(tag),
            None => self.fallback.classify(tokens, idx),
        }
    }
}

/// Named-entity label, reduced to the three classes the generators use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NeLabel {
    Per,
    Loc,
    Org,
}

impl NeLabel {
    pub fn parse(s: &str) -> Option<NeLabel> {
        match s.to_uppercase().as_str() {
            "PER" | "PERSON" => Some(NeLabel::Per),
            "LOC" | "GPE" | "LOCATION" => Some(NeLabel::Loc),
            "ORG" | "ORGANIZATION" => Some(NeLabel::Org),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NeLabel::Per => "PER",
            NeLabel::Loc => "LOC",
            NeLabel::Org => "ORG",
        }
    }
}

/// A half-open token-index range `[start, end)` marking one entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeSpan {
    pub start: usize,
    pub end: usize,
    pub label: Option<NeLabel>,
}

/// Produces entity spans over a token sequence.
pub trait NerSource {
    fn spans(&self, tokens: &[Token]) -> Vec<NeSpan>;
}

/// Capitalization-based fallback: maximal runs of capitalized word
/// tokens that are not sentence-initial and not function words, plus
/// all-caps acronyms anywhere.
#[derive(Debug, Clone)]
pub struct HeuristicNer {
    function_words: BTreeSet<String>,
}

impl Default for HeuristicNer {
    fn default() -> Self {
        HeuristicNer::new()
    }
}

impl HeuristicNer {
    pub fn new() -> HeuristicNer {
        HeuristicNer { function_words: load_word_list(FUNCTION_WORDS) }
    }
}

impl NerSource for HeuristicNer {
    fn spans(&self, tokens: &[Token]) -> Vec<NeSpan> {
        // Mark which word tokens open a sentence.
        let mut sentence_start = alloc::vec![false; tokens.len()];
        let mut at_start = true;
        for (i, tok) in tokens.iter().enumerate() {
            match tok.kind {
                TokenKind::Word => {
                    sentence_start[i] = at_start;
                    at_start = false;
                }
                TokenKind::Punctuation if matches!(tok.surface.as_str(), "." | "?" | "!") => {
                    at_start = true;
                }
                _ => {}
            }
        }

        let candidate = |i: usize| -> bool {
            let tok = &tokens[i];
            if tok.kind != TokenKind::Word {
                return false;
            }
            match CasePattern::detect(&tok.surface) {
                CasePattern::AllCaps => true,
                CasePattern::Title => {
                    !sentence_start[i] && !self.function_words.contains(&tok.surface.to_lowercase())
                }
                CasePattern::AsIs => false,
            }
        };

        let mut spans = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if candidate(i) {
                let start = i;
                while i < tokens.len() && candidate(i) {
                    i += 1;
                }
                spans.push(NeSpan { start, end: i, label: None });
            } else {
                i += 1;
            }
        }
        spans
    }
}

/// Entity spans from per-token annotations; consecutive tokens sharing
/// a label merge into one span.
#[derive(Debug, Clone, Default)]
pub struct SidecarNer {
    labels: BTreeMap<usize, NeLabel>,
}

impl SidecarNer {
    pub fn new(labels: BTreeMap<usize, NeLabel>) -> SidecarNer {
        SidecarNer { labels }
    }
}

impl NerSource for SidecarNer {
    fn spans(&self, tokens: &[Token]) -> Vec<NeSpan> {
        let mut spans: Vec<NeSpan> = Vec::new();
        for (&idx, &label) in &self.labels {
            if idx >= tokens.len() {
                continue;
            }
            match spans.last_mut() {
                Some(last) if last.end == idx && last.label == Some(label) => {
                    last.end = idx + 1;
                }
                _ => spans.push(NeSpan { start: idx, end: idx + 1, label: Some(label) }),
            }
        }
        spans
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    fn classes(tagger: &dyn Tagger, text: &str) -> Vec<(String, WordClass)> {
        let tokens = tokenize(text);
        (0..tokens.len())
            .map(|i| (tokens[i].surface.clone(), tagger.classify(&tokens, i)))
            .collect()
    }

    #[test]
    fn heuristic_classes_for_simple_clause() {
        let tagger = HeuristicTagger::new();
        let got = classes(&tagger, "the Lama slept");
        assert_eq!(
            got,
            vec![
                ("the".to_string(), WordClass::Function),
                ("Lama".to_string(), WordClass::Content),
                ("slept".to_string(), WordClass::Other),
            ]
        );
    }

    #[test]
    fn corrupted_question_word_stays_function() {
        let tagger = HeuristicTagger::new();
        let got = classes(&tagger, "Wjat has a Lsma determined to do?");
        let by_word: BTreeMap<String, WordClass> = got.into_iter().collect();
        assert_eq!(by_word["Wjat"], WordClass::Function);
        assert_eq!(by_word["has"], WordClass::Function);
        assert_eq!(by_word["a"], WordClass::Function);
        assert_eq!(by_word["Lsma"], WordClass::Content);
        assert_eq!(by_word["determined"], WordClass::Other);
        assert_eq!(by_word["to"], WordClass::Function);
        assert_eq!(by_word["do"], WordClass::Function);
        assert_eq!(by_word["?"], WordClass::Other);
    }

    #[test]
    fn short_words_do_not_fuzz_to_question_words() {
        // "hat" is one deletion from "what" but must stay content.
        let tagger = HeuristicTagger::new();
        let got = classes(&tagger, "hat");
        assert_eq!(got[0].1, WordClass::Content);
    }

    #[test]
    fn numbers_and_punctuation_are_other() {
        let tagger = HeuristicTagger::new();
        let got = classes(&tagger, "six 1866 ,");
        assert_eq!(got[0].1, WordClass::Content);
        assert_eq!(got[1].1, WordClass::Other);
        assert_eq!(got[2].1, WordClass::Other);
    }

    #[test]
    fn sidecar_pos_overrides_heuristic() {
        let tokens = tokenize("the Lama slept well");
        let mut pos = BTreeMap::new();
        pos.insert(2usize, "VERB".to_string());
        pos.insert(3usize, "ADJ".to_string());
        let tagger = SidecarTagger::new(pos);
        assert_eq!(tagger.classify(&tokens, 0), WordClass::Function);
        assert_eq!(tagger.classify(&tokens, 1), WordClass::Content);
        assert_eq!(tagger.classify(&tokens, 2), WordClass::Other);
        assert_eq!(tagger.classify(&tokens, 3), WordClass::Content);
    }

    #[test]
    fn heuristic_ner_finds_mid_sentence_capitals() {
        let ner = HeuristicNer::new();
        let tokens = tokenize("What has a Lama determined to do?");
        let spans = ner.spans(&tokens);
        assert_eq!(spans.len(), 1);
        assert_eq!(tokens[spans[0].start].surface, "Lama");
        assert_eq!(spans[0].end - spans[0].start, 1);
    }

    #[test]
    fn heuristic_ner_merges_runs_and_honors_sentence_starts() {
        let ner = HeuristicNer::new();
        let tokens = tokenize("Where is the Santa Clara stadium? Paris is big.");
        let spans = ner.spans(&tokens);
        assert_eq!(spans.len(), 1);
        let surf: Vec<&str> = (spans[0].start..spans[0].end)
            .map(|i| tokens[i].surface.as_str())
            .collect();
        assert_eq!(surf, vec!["Santa", "Clara"]);
    }

    #[test]
    fn heuristic_ner_takes_acronyms_anywhere() {
        let ner = HeuristicNer::new();
        let tokens = tokenize("IPCC reports on warming");
        let spans = ner.spans(&tokens);
        assert_eq!(spans.len(), 1);
        assert_eq!(tokens[spans[0].start].surface, "IPCC");
    }

    #[test]
    fn sidecar_ner_merges_contiguous_same_label() {
        let tokens = tokenize("the Santa Clara stadium in Paris");
        let mut labels = BTreeMap::new();
        labels.insert(1usize, NeLabel::Loc);
        labels.insert(2usize, NeLabel::Loc);
        labels.insert(5usize, NeLabel::Loc);
        let ner = SidecarNer::new(labels);
        let spans = ner.spans(&tokens);
        assert_eq!(
            spans,
            vec![
                NeSpan { start: 1, end: 3, label: Some(NeLabel::Loc) },
                NeSpan { start: 5, end: 6, label: Some(NeLabel::Loc) },
            ]
        );
    }

    #[test]
    fn ne_label_parsing() {
        assert_eq!(NeLabel::parse("per"), Some(NeLabel::Per));
        assert_eq!(NeLabel::parse("GPE"), Some(NeLabel::Loc));
        assert_eq!(NeLabel::parse("MISC"), None);
    }
}
