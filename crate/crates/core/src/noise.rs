//! Noise generators applied to question text.
//!
//! Two stochastic character/word corruptors (keyboard key swaps and
//! lexicon-sampled misspellings), deterministic strippers, targeted
//! per-word-class perturbations, and rewrites used in error analysis
//! (entity placeholders, spelled-out numerals). Every generator is a
//! pure function of (text, params, seed); batch drivers derive one seed
//! per record so parallel order never changes outputs.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hash::derive_seed;
use crate::keyboard::{AdjacencyMode, KeyboardLayout};
use crate::text::{
    rebuild_dropping_tokens, rebuild_with_replacements, tokenize, CasePattern, TokenKind,
};
use crate::wordclass::{NerSource, Tagger, WordClass};

/// Word class a targeted perturbation selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbClass {
    Function,
    Content,
    /// Words that are keys of the misspelling lexicon.
    CommonMisspelled,
}

/// Word class a drop operation removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropClass {
    Function,
    Content,
}

/// How a targeted perturbation corrupts a selected word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbMechanism {
    KeySwap,
    Misspell,
}

/// One configured generator plus its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisePolicy {
    /// Short label used in derived ids and reports.
    pub name: String,
    pub kind: PolicyKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    KeySwap { p: f64 },
    MisspellLexicon { p: f64 },
    StripPunct,
    StripFinalQmark,
    Perturb { class: PerturbClass, mechanism: PerturbMechanism },
    Drop { class: DropClass },
    NePlaceholder,
    SpellOutNumerals,
}

impl NoisePolicy {
    pub fn new(name: &str, kind: PolicyKind, seed: u64) -> NoisePolicy {
        NoisePolicy { name: name.to_owned(), kind, seed }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        match self.kind {
            PolicyKind::KeySwap { p } | PolicyKind::MisspellLexicon { p } => {
                if !(0.0..=1.0).contains(&p) || p.is_nan() {
                    return Err(NoiseError::InvalidProbability(p));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseError {
    InvalidProbability(f64),
    /// The policy needs a misspelling lexicon and none was provided.
    MissingLexicon,
}

impl core::fmt::Display for NoiseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NoiseError::InvalidProbability(p) => {
                write!(f, "probability {p} outside [0, 1]")
            }
            NoiseError::MissingLexicon => write!(f, "policy requires a misspelling lexicon"),
        }
    }
}

impl core::error::Error for NoiseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconError {
    EmptyWord,
    EmptyMisspelling,
    /// A misspelling that casefolds to its own key is not a misspelling.
    MisspellingEqualsWord(String),
}

impl core::fmt::Display for LexiconError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LexiconError::EmptyWord => write!(f, "empty word in lexicon"),
            LexiconError::EmptyMisspelling => write!(f, "empty misspelling in lexicon"),
            LexiconError::MisspellingEqualsWord(w) => {
                write!(f, "misspelling equals its word: {w}")
            }
        }
    }
}

impl core::error::Error for LexiconError {}

/// Map from a correctly spelled word to the misspellings observed for
/// it. Keys are casefolded; repeated insertions accumulate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MisspellingLexicon {
    entries: BTreeMap<String, Vec<String>>,
}

impl MisspellingLexicon {
    pub fn new() -> MisspellingLexicon {
        MisspellingLexicon::default()
    }

    pub fn from_pairs<'a, I>(pairs: I) -> Result<MisspellingLexicon, LexiconError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut lex = MisspellingLexicon::new();
        for (word, misspelling) in pairs {
            lex.insert(word, misspelling)?;
        }
        Ok(lex)
    }

    /// Add one (word, misspelling) pair. Exact duplicates are ignored.
    pub fn insert(&mut self, word: &str, misspelling: &str) -> Result<(), LexiconError> {
        if word.is_empty() {
            return Err(LexiconError::EmptyWord);
        }
        if misspelling.is_empty() {
            return Err(LexiconError::EmptyMisspelling);
        }
        let key = word.to_lowercase();
        if misspelling.to_lowercase() == key {
            return Err(LexiconError::MisspellingEqualsWord(key));
        }
        let list = self.entries.entry(key).or_default();
        if !list.iter().any(|m| m == misspelling) {
            list.push(misspelling.to_string());
        }
        Ok(())
    }

    pub fn get(&self, word: &str) -> Option<&[String]> {
        self.entries.get(&word.to_lowercase()).map(|v| v.as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(&word.to_lowercase())
    }

    /// Number of distinct words.
    pub fn word_count(&self) -> usize {
        self.entries.len()
    }

    /// Number of (word, misspelling) pairs.
    pub fn pair_count(&self) -> usize {
        self.entries.values().map(|v| v.len()).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Why a generator left a record unchanged or partially handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeFlag {
    /// ne_placeholder found no entity to replace.
    NoEntity,
    /// spell_out_numerals left an oversized digit run unchanged.
    OversizedNumeral,
}

impl OutcomeFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeFlag::NoEntity => "no-entity",
            OutcomeFlag::OversizedNumeral => "oversized-numeral",
        }
    }
}

/// Result of applying one policy to one record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyOutcome {
    pub text: String,
    pub flags: Vec<OutcomeFlag>,
}

impl PolicyOutcome {
    fn clean(text: String) -> PolicyOutcome {
        PolicyOutcome { text, flags: Vec::new() }
    }
}

/// Shared resources a policy may need.
pub struct NoiseContext<'a> {
    pub layout: &'a KeyboardLayout,
    pub lexicon: Option<&'a MisspellingLexicon>,
    pub tagger: &'a dyn Tagger,
    pub ner: &'a dyn NerSource,
}

/// Apply `policy` to one record. The effective seed is derived from the
/// policy seed and `record_id`, never from batch position.
pub fn apply_policy(
    policy: &NoisePolicy,
    ctx: &NoiseContext<'_>,
    record_id: &str,
    text: &str,
) -> Result<PolicyOutcome, NoiseError> {
    policy.validate()?;
    let seed = derive_seed(policy.seed, record_id);
    let need_lexicon = matches!(
        policy.kind,
        PolicyKind::MisspellLexicon { .. }
            | PolicyKind::Perturb { mechanism: PerturbMechanism::Misspell, .. }
            | PolicyKind::Perturb { class: PerturbClass::CommonMisspelled, .. }
    );
    let lexicon = match (need_lexicon, ctx.lexicon) {
        (true, None) => return Err(NoiseError::MissingLexicon),
        (_, lex) => lex,
    };
    Ok(match policy.kind {
        PolicyKind::KeySwap { p } => {
            PolicyOutcome::clean(key_swap_noise(text, p, ctx.layout, seed))
        }
        PolicyKind::MisspellLexicon { p } => {
            PolicyOutcome::clean(inject_misspellings(text, lexicon.unwrap(), p, seed))
        }
        PolicyKind::StripPunct => PolicyOutcome::clean(strip_punctuation(text)),
        PolicyKind::StripFinalQmark => PolicyOutcome::clean(strip_final_qmark(text)),
        PolicyKind::Perturb { class, mechanism } => PolicyOutcome::clean(targeted_perturb(
            text,
            class,
            mechanism,
            ctx.tagger,
            ctx.layout,
            lexicon,
            seed,
        )),
        PolicyKind::Drop { class } => {
            PolicyOutcome::clean(drop_words(text, class, ctx.tagger))
        }
        PolicyKind::NePlaceholder => ne_placeholder(text, ctx.ner, seed),
        PolicyKind::SpellOutNumerals => spell_out_numerals(text),
    })
}

/// Positions of characters in `chars` that can be key-swapped: on the
/// layout and with at least one row-wise neighbor.
fn swap_candidates(chars: &[char], layout: &KeyboardLayout) -> Vec<usize> {
    chars
        .iter()
        .enumerate()
        .filter(|(_, c)| !layout.neighbors(**c, AdjacencyMode::RowWise).is_empty())
        .map(|(i, _)| i)
        .collect()
}

/// Replace one uniformly chosen layout character of `word` with a
/// uniformly chosen row-wise neighbor, preserving the character's case.
/// Returns None (and leaves the RNG untouched beyond the candidate
/// check) when the word has no swappable character.
fn key_swap_word(word: &str, layout: &KeyboardLayout, rng: &mut ChaCha8Rng) -> Option<String> {
    let mut chars: Vec<char> = word.chars().collect();
    let candidates = swap_candidates(&chars, layout);
    if candidates.is_empty() {
        return None;
    }
    let pos = candidates[rng.random_range(0..candidates.len())];
    let original = chars[pos];
    let neighbors = layout.neighbors(original, AdjacencyMode::RowWise);
    let mut replacement = neighbors[rng.random_range(0..neighbors.len())];
    if original.is_uppercase() {
        replacement = replacement.to_ascii_uppercase();
    }
    chars[pos] = replacement;
    Some(chars.into_iter().collect())
}

/// Keyboard typo generator: each word token is corrupted independently
/// with probability `p`; a corrupted word gets exactly one character
/// replaced by a row-wise neighbor, case preserved.
pub fn key_swap_noise(text: &str, p: f64, layout: &KeyboardLayout, seed: u64) -> String {
    let tokens = tokenize(text);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut replacements: Vec<Option<String>> = alloc::vec![None; tokens.len()];
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Word {
            continue;
        }
        if rng.random::<f64>() >= p {
            continue;
        }
        replacements[i] = key_swap_word(&tok.surface, layout, &mut rng);
    }
    rebuild_with_replacements(text, &tokens, &replacements)
}

/// Replace lexicon-member words by sampled misspellings with
/// probability `p` per occurrence, re-applying each word's case shape.
pub fn inject_misspellings(
    text: &str,
    lexicon: &MisspellingLexicon,
    p: f64,
    seed: u64,
) -> String {
    let tokens = tokenize(text);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut replacements: Vec<Option<String>> = alloc::vec![None; tokens.len()];
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Word {
            continue;
        }
        let Some(options) = lexicon.get(&tok.surface) else {
            continue;
        };
        if rng.random::<f64>() >= p {
            continue;
        }
        let pick = &options[rng.random_range(0..options.len())];
        replacements[i] = Some(CasePattern::detect(&tok.surface).apply(pick));
    }
    rebuild_with_replacements(text, &tokens, &replacements)
}

/// Remove all punctuation tokens and collapse the whitespace left behind.
pub fn strip_punctuation(text: &str) -> String {
    let tokens = tokenize(text);
    let keep: Vec<bool> = tokens.iter().map(|t| t.kind != TokenKind::Punctuation).collect();
    rebuild_dropping_tokens(text, &tokens, &keep)
}

/// Remove a trailing question mark (and any stacked ones), leaving the
/// rest of the text untouched. Texts not ending in "?" pass through
/// unchanged, which makes the operation idempotent.
pub fn strip_final_qmark(text: &str) -> String {
    let trimmed = text.trim_end();
    if !trimmed.ends_with('?') {
        return text.to_string();
    }
    let mut s = trimmed;
    while s.ends_with('?') {
        s = s[..s.len() - 1].trim_end();
    }
    s.to_string()
}

/// Corrupt every token of the selected class with probability 1, using
/// the given mechanism. `common_misspelled` membership means "is a
/// lexicon key"; the other classes come from the tagger.
pub fn targeted_perturb(
    text: &str,
    class: PerturbClass,
    mechanism: PerturbMechanism,
    tagger: &dyn Tagger,
    layout: &KeyboardLayout,
    lexicon: Option<&MisspellingLexicon>,
    seed: u64,
) -> String {
    let tokens = tokenize(text);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut replacements: Vec<Option<String>> = alloc::vec![None; tokens.len()];
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Word {
            continue;
        }
        let selected = match class {
            PerturbClass::Function => tagger.classify(&tokens, i) == WordClass::Function,
            PerturbClass::Content => tagger.classify(&tokens, i) == WordClass::Content,
            PerturbClass::CommonMisspelled => {
                lexicon.map(|l| l.contains(&tok.surface)).unwrap_or(false)
            }
        };
        if !selected {
            continue;
        }
        replacements[i] = match mechanism {
            PerturbMechanism::KeySwap => key_swap_word(&tok.surface, layout, &mut rng),
            PerturbMechanism::Misspell => lexicon.and_then(|l| l.get(&tok.surface)).map(|opts| {
                let pick = &opts[rng.random_range(0..opts.len())];
                CasePattern::detect(&tok.surface).apply(pick)
            }),
        };
    }
    rebuild_with_replacements(text, &tokens, &replacements)
}

/// Delete every token of the class and re-collapse whitespace.
pub fn drop_words(text: &str, class: DropClass, tagger: &dyn Tagger) -> String {
    let want = match class {
        DropClass::Function => WordClass::Function,
        DropClass::Content => WordClass::Content,
    };
    let tokens = tokenize(text);
    let keep: Vec<bool> =
        (0..tokens.len()).map(|i| tagger.classify(&tokens, i) != want).collect();
    rebuild_dropping_tokens(text, &tokens, &keep)
}

/// Replace one uniformly sampled entity span with the literal token
/// "ENTITY". No entities: unchanged text plus a flag.
pub fn ne_placeholder(text: &str, ner: &dyn NerSource, seed: u64) -> PolicyOutcome {
    let tokens = tokenize(text);
    let spans = ner.spans(&tokens);
    if spans.is_empty() {
        return PolicyOutcome { text: text.to_string(), flags: alloc::vec![OutcomeFlag::NoEntity] };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = &spans[rng.random_range(0..spans.len())];
    let start_byte = tokens[span.start].span.0;
    let end_byte = tokens[span.end - 1].span.1;
    let mut out = String::with_capacity(text.len());
    out.push_str(&text[..start_byte]);
    out.push_str("ENTITY");
    out.push_str(&text[end_byte..]);
    PolicyOutcome::clean(out)
}

const MAX_NUMERAL_DIGITS: usize = 15;

/// Spell out every number token in English; 4-digit tokens that read as
/// years use the spoken year form. Oversized digit runs stay unchanged
/// and set a flag.
pub fn spell_out_numerals(text: &str) -> PolicyOutcome {
    let tokens = tokenize(text);
    let mut flags = Vec::new();
    let mut replacements: Vec<Option<String>> = alloc::vec![None; tokens.len()];
    for (i, tok) in tokens.iter().enumerate() {
        if tok.kind != TokenKind::Number {
            continue;
        }
        if tok.surface.len() > MAX_NUMERAL_DIGITS {
            flags.push(OutcomeFlag::OversizedNumeral);
            continue;
        }
        let n: u64 = tok.surface.parse().expect("digit run within u64 range");
        let spelled = if tok.surface.len() == 4 && (1100..=2099).contains(&n) {
            year_words(n)
        } else {
            number_words(n)
        };
        replacements[i] = Some(spelled);
    }
    PolicyOutcome { text: rebuild_with_replacements(text, &tokens, &replacements), flags }
}

const ONES: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen",
    "nineteen",
];
const TENS: [&str; 10] =
    ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];
const SCALES: [(u64, &str); 4] = [
    (1_000_000_000_000, "trillion"),
    (1_000_000_000, "billion"),
    (1_000_000, "million"),
    (1_000, "thousand"),
];

/// Numbers below 1000, without scale words.
fn small_number_words(n: u64) -> String {
    debug_assert!(n < 1000);
    let mut out = String::new();
    let hundreds = n / 100;
    let rest = n % 100;
    if hundreds > 0 {
        out.push_str(ONES[hundreds as usize]);
        out.push_str(" hundred");
    }
    if rest > 0 || n == 0 {
        if !out.is_empty() {
            out.push(' ');
        }
        if rest < 20 {
            out.push_str(ONES[rest as usize]);
        } else {
            out.push_str(TENS[(rest / 10) as usize]);
            if rest % 10 > 0 {
                out.push('-');
                out.push_str(ONES[(rest % 10) as usize]);
            }
        }
    }
    out
}

/// English cardinal, American style: no "and", hyphenated 21–99.
pub fn number_words(n: u64) -> String {
    if n == 0 {
        return ONES[0].to_string();
    }
    let mut out = String::new();
    let mut rest = n;
    for (scale, word) in SCALES {
        if rest >= scale {
            let count = rest / scale;
            rest %= scale;
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&small_number_words(count));
            out.push(' ');
            out.push_str(word);
        }
    }
    if rest > 0 {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&small_number_words(rest));
    }
    out
}

/// Spoken year form for 1100–2099: the number split as two two-digit
/// pairs ("eighteen sixty-six", "nineteen oh five", "nineteen hundred").
pub fn year_words(n: u64) -> String {
    debug_assert!((1100..=2099).contains(&n));
    let high = n / 100;
    let low = n % 100;
    let mut out = small_number_words(high);
    if low == 0 {
        out.push_str(" hundred");
    } else if low < 10 {
        out.push_str(" oh ");
        out.push_str(ONES[low as usize]);
    } else {
        out.push(' ');
        out.push_str(&small_number_words(low));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edit::edit_cost;
    use crate::wordclass::{HeuristicNer, HeuristicTagger};
    use proptest::prelude::*;

    fn layout() -> KeyboardLayout {
        KeyboardLayout::qwerty()
    }

    fn lexicon(pairs: &[(&str, &str)]) -> MisspellingLexicon {
        MisspellingLexicon::from_pairs(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn key_swap_zero_probability_is_identity() {
        let text = "What has a Lama determined to do?";
        assert_eq!(key_swap_noise(text, 0.0, &layout(), 7), text);
    }

    #[test]
    fn key_swap_substitutions_are_row_neighbors() {
        let kb = layout();
        let text = "What has a Lama determined to do?";
        for seed in 0..200u64 {
            let noisy = key_swap_noise(text, 1.0, &kb, seed);
            let clean_tokens = tokenize(text);
            let noisy_tokens = tokenize(&noisy);
            assert_eq!(clean_tokens.len(), noisy_tokens.len());
            for (c, n) in clean_tokens.iter().zip(&noisy_tokens) {
                if c.surface == n.surface {
                    continue;
                }
                let diff: Vec<(char, char)> = c
                    .surface
                    .chars()
                    .zip(n.surface.chars())
                    .filter(|(a, b)| a != b)
                    .collect();
                assert_eq!(diff.len(), 1, "{} vs {}", c.surface, n.surface);
                let (orig, repl) = diff[0];
                assert!(kb.adjacent(orig, repl, AdjacencyMode::RowWise));
                assert_eq!(orig.is_uppercase(), repl.is_uppercase());
            }
        }
    }

    #[test]
    fn key_swap_edge_key_goes_to_single_neighbor() {
        let noisy = key_swap_noise("qq", 1.0, &layout(), 42);
        for (a, b) in "qq".chars().zip(noisy.chars()) {
            assert!(b == a || b == 'w', "unexpected replacement {b}");
        }
        assert_ne!(noisy, "qq");
    }

    #[test]
    fn key_swap_is_deterministic() {
        let text = "How many Panthers defense players were selected for the Pro Bowl?";
        let a = key_swap_noise(text, 0.5, &layout(), 99);
        let b = key_swap_noise(text, 0.5, &layout(), 99);
        assert_eq!(a, b);
    }

    #[test]
    fn key_swap_locality_one_char_per_word() {
        let kb = layout();
        for seed in 0..100u64 {
            let text = "the quick brown fox jumps over thirteen lazy dogs";
            let noisy = key_swap_noise(text, 1.0, &kb, seed);
            for (c, n) in text.split(' ').zip(noisy.split(' ')) {
                let cv: Vec<char> = c.chars().collect();
                let nv: Vec<char> = n.chars().collect();
                assert!(edit_cost(&cv, &nv, false) <= 1);
            }
        }
    }

    #[test]
    fn inject_replaces_every_occurrence_at_p1() {
        let lex = lexicon(&[("and", "adn")]);
        assert_eq!(inject_misspellings("and and", &lex, 1.0, 3), "adn adn");
        assert_eq!(inject_misspellings("and and", &lex, 0.0, 3), "and and");
    }

    #[test]
    fn inject_keeps_case_pattern() {
        let lex = lexicon(&[("type", "tpye"), ("and", "adn")]);
        assert_eq!(
            inject_misspellings("What type of Lord", &lex, 1.0, 1),
            "What tpye of Lord"
        );
        assert_eq!(inject_misspellings("AND", &lex, 1.0, 1), "ADN");
        assert_eq!(inject_misspellings("And", &lex, 1.0, 1), "Adn");
    }

    #[test]
    fn inject_samples_within_lexicon_entry() {
        let lex = lexicon(&[("will", "well"), ("will", "wull")]);
        for seed in 0..50u64 {
            let out = inject_misspellings("will", &lex, 1.0, seed);
            assert!(out == "well" || out == "wull", "{out}");
        }
    }

    #[test]
    fn lexicon_rejects_identity_pairs() {
        let mut lex = MisspellingLexicon::new();
        assert_eq!(
            lex.insert("and", "And"),
            Err(LexiconError::MisspellingEqualsWord("and".into()))
        );
        lex.insert("and", "adn").unwrap();
        lex.insert("AND", "adn").unwrap();
        assert_eq!(lex.pair_count(), 1);
        assert_eq!(lex.word_count(), 1);
    }

    #[test]
    fn strip_punctuation_keeps_internal_apostrophes() {
        assert_eq!(strip_punctuation("How many?"), "How many");
        assert_eq!(strip_punctuation("it's six."), "it's six");
        assert_eq!(strip_punctuation("a - b"), "a b");
    }

    #[test]
    fn strip_final_qmark_only_touches_trailing() {
        assert_eq!(strip_final_qmark("Why?"), "Why");
        assert_eq!(strip_final_qmark("Why"), "Why");
        assert_eq!(strip_final_qmark("Why??"), "Why");
        assert_eq!(strip_final_qmark("Why? Because."), "Why? Because.");
        assert_eq!(strip_final_qmark("? "), "");
    }

    #[test]
    fn strip_final_qmark_is_idempotent() {
        for s in ["Why?", "Why??", "Why ? ?", "no mark", "", "? ?"] {
            let once = strip_final_qmark(s);
            assert_eq!(strip_final_qmark(&once), once, "input {s:?}");
        }
    }

    #[test]
    fn targeted_function_perturb_skips_content_only_text() {
        let tagger = HeuristicTagger::new();
        let out = targeted_perturb(
            "six",
            PerturbClass::Function,
            PerturbMechanism::KeySwap,
            &tagger,
            &layout(),
            None,
            5,
        );
        assert_eq!(out, "six");
    }

    #[test]
    fn targeted_content_perturb_touches_only_content() {
        let tagger = HeuristicTagger::new();
        let kb = layout();
        for seed in 0..50u64 {
            let out = targeted_perturb(
                "the Lama slept",
                PerturbClass::Content,
                PerturbMechanism::KeySwap,
                &tagger,
                &kb,
                None,
                seed,
            );
            let words: Vec<&str> = out.split(' ').collect();
            assert_eq!(words[0], "the");
            assert_eq!(words[2], "slept");
            assert_ne!(words[1], "Lama");
            let diff = "Lama".chars().zip(words[1].chars()).filter(|(a, b)| a != b).count();
            assert_eq!(words[1].len(), 4);
            assert_eq!(diff, 1);
        }
    }

    #[test]
    fn targeted_common_misspelled_uses_lexicon() {
        let tagger = HeuristicTagger::new();
        let lex = lexicon(&[("determined", "determied")]);
        let out = targeted_perturb(
            "determined to do",
            PerturbClass::CommonMisspelled,
            PerturbMechanism::Misspell,
            &tagger,
            &layout(),
            Some(&lex),
            11,
        );
        assert_eq!(out, "determied to do");
    }

    #[test]
    fn drop_function_words() {
        let tagger = HeuristicTagger::new();
        assert_eq!(drop_words("the Pro Bowl", DropClass::Function, &tagger), "Pro Bowl");
        assert_eq!(drop_words("", DropClass::Function, &tagger), "");
        // No content words: identity modulo collapsed whitespace.
        assert_eq!(drop_words("is it?", DropClass::Content, &tagger), "is it?");
    }

    #[test]
    fn ne_placeholder_single_span_is_deterministic() {
        let ner = HeuristicNer::new();
        let out = ne_placeholder("Who is the chair of the IPCC?", &ner, 1);
        assert_eq!(out.text, "Who is the chair of the ENTITY?");
        assert!(out.flags.is_empty());
    }

    #[test]
    fn ne_placeholder_flags_entity_free_text() {
        let ner = HeuristicNer::new();
        let out = ne_placeholder("how many were there?", &ner, 1);
        assert_eq!(out.text, "how many were there?");
        assert_eq!(out.flags, vec![OutcomeFlag::NoEntity]);
    }

    #[test]
    fn ne_placeholder_multi_span_replaces_exactly_one() {
        let ner = HeuristicNer::new();
        let text = "Did Newton visit the Royal Society?";
        for seed in 0..20u64 {
            let out = ne_placeholder(text, &ner, seed);
            let count = out.text.matches("ENTITY").count();
            assert_eq!(count, 1, "{}", out.text);
            assert_eq!(out, ne_placeholder(text, &ner, seed));
        }
    }

    #[test]
    fn spell_out_basic_numbers() {
        assert_eq!(spell_out_numerals("7").text, "seven");
        assert_eq!(spell_out_numerals("100").text, "one hundred");
        assert_eq!(spell_out_numerals("1866").text, "eighteen sixty-six");
        assert_eq!(spell_out_numerals("in 1905?").text, "in nineteen oh five?");
        assert_eq!(spell_out_numerals("0 points").text, "zero points");
    }

    #[test]
    fn spell_out_year_rule_bounds() {
        // Inside the year window: paired two-digit reading.
        assert_eq!(number_or_year("1100"), "eleven hundred");
        assert_eq!(number_or_year("1999"), "nineteen ninety-nine");
        assert_eq!(number_or_year("2099"), "twenty ninety-nine");
        // Outside: plain cardinal reading.
        assert_eq!(number_or_year("1099"), "one thousand ninety-nine");
        assert_eq!(number_or_year("2100"), "two thousand one hundred");
        assert_eq!(number_or_year("02017"), "two thousand seventeen");
    }

    fn number_or_year(token: &str) -> String {
        spell_out_numerals(token).text
    }

    #[test]
    fn spell_out_oversized_run_is_flagged() {
        let long = "1234567890123456";
        let out = spell_out_numerals(long);
        assert_eq!(out.text, long);
        assert_eq!(out.flags, vec![OutcomeFlag::OversizedNumeral]);
    }

    #[test]
    fn number_words_oracle_table() {
        let cases: [(u64, &str); 24] = [
            (0, "zero"),
            (1, "one"),
            (13, "thirteen"),
            (20, "twenty"),
            (21, "twenty-one"),
            (40, "forty"),
            (55, "fifty-five"),
            (66, "sixty-six"),
            (99, "ninety-nine"),
            (100, "one hundred"),
            (101, "one hundred one"),
            (110, "one hundred ten"),
            (115, "one hundred fifteen"),
            (999, "nine hundred ninety-nine"),
            (1000, "one thousand"),
            (1001, "one thousand one"),
            (1866, "one thousand eight hundred sixty-six"),
            (10000, "ten thousand"),
            (100000, "one hundred thousand"),
            (1000000, "one million"),
            (2716, "two thousand seven hundred sixteen"),
            (1000000000, "one billion"),
            (1000000000000, "one trillion"),
            (999999999999999, "nine hundred ninety-nine trillion nine hundred ninety-nine billion nine hundred ninety-nine million nine hundred ninety-nine thousand nine hundred ninety-nine"),
        ];
        for (n, words) in cases {
            assert_eq!(number_words(n), words, "n = {n}");
        }
    }

    #[test]
    fn year_words_oracle_table() {
        let cases: [(u64, &str); 8] = [
            (1100, "eleven hundred"),
            (1105, "eleven oh five"),
            (1866, "eighteen sixty-six"),
            (1900, "nineteen hundred"),
            (1905, "nineteen oh five"),
            (1910, "nineteen ten"),
            (2016, "twenty sixteen"),
            (2099, "twenty ninety-nine"),
        ];
        for (n, words) in cases {
            assert_eq!(year_words(n), words, "n = {n}");
        }
    }

    #[test]
    fn apply_policy_derives_per_record_seeds() {
        let kb = layout();
        let tagger = HeuristicTagger::new();
        let ner = HeuristicNer::new();
        let ctx = NoiseContext { layout: &kb, lexicon: None, tagger: &tagger, ner: &ner };
        let policy = NoisePolicy::new("kb", PolicyKind::KeySwap { p: 1.0 }, 42);
        let a = apply_policy(&policy, &ctx, "q1", "some question here").unwrap();
        let b = apply_policy(&policy, &ctx, "q1", "some question here").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn apply_policy_validates_inputs() {
        let kb = layout();
        let tagger = HeuristicTagger::new();
        let ner = HeuristicNer::new();
        let ctx = NoiseContext { layout: &kb, lexicon: None, tagger: &tagger, ner: &ner };
        let bad = NoisePolicy::new("kb", PolicyKind::KeySwap { p: 1.5 }, 0);
        assert_eq!(
            apply_policy(&bad, &ctx, "q", "text"),
            Err(NoiseError::InvalidProbability(1.5))
        );
        let needs_lex = NoisePolicy::new("ms", PolicyKind::MisspellLexicon { p: 1.0 }, 0);
        assert_eq!(
            apply_policy(&needs_lex, &ctx, "q", "text"),
            Err(NoiseError::MissingLexicon)
        );
    }

    proptest! {
        #[test]
        fn key_swap_rate_is_plausible(seed in 0u64..1000) {
            let kb = layout();
            let words: Vec<String> = (0..200).map(|i| format!("word{i}")).collect();
            let text = words.join(" ");
            let noisy = key_swap_noise(&text, 0.25, &kb, seed);
            let changed = text
                .split(' ')
                .zip(noisy.split(' '))
                .filter(|(a, b)| a != b)
                .count();
            // 200 words at p=0.25: allow a generous band, the tight
            // 3-sigma check runs over 10,000 words elsewhere.
            prop_assert!(changed >= 20 && changed <= 90, "changed {changed}");
        }

        #[test]
        fn generators_are_deterministic(text in "[a-zA-Z ?.,']{0,60}", seed: u64) {
            let kb = layout();
            prop_assert_eq!(
                key_swap_noise(&text, 0.5, &kb, seed),
                key_swap_noise(&text, 0.5, &kb, seed)
            );
            prop_assert_eq!(strip_punctuation(&text), strip_punctuation(&text));
        }
    }
}
