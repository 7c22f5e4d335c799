//! Phonetic encoding and pronunciation distance.
//!
//! Words are mapped to phoneme sequences either through a user-supplied
//! grapheme-to-phoneme table (e.g. one derived from a pronouncing
//! dictionary) or, when a word is missing, through a small builtin
//! encoder. The builtin encoder keeps the consonant skeleton and blurs
//! vowels, so spellings that plausibly sound alike ("receive" and
//! "recieve") encode identically while interface errors ("and" and
//! "adn") stay apart.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Where a phoneme sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhonemeSource {
    G2pTable,
    BuiltinEncoder,
}

/// A word's pronunciation as a phoneme symbol sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneticForm {
    pub phonemes: Vec<String>,
    pub source: PhonemeSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhoneticError {
    /// The input contains no letters to encode.
    NoLetters,
}

impl core::fmt::Display for PhoneticError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PhoneticError::NoLetters => write!(f, "word contains no letters"),
        }
    }
}

impl core::error::Error for PhoneticError {}

/// Grapheme-to-phoneme lookup table. Keys are casefolded; the first
/// pronunciation seen for a word wins, later duplicates are ignored.
#[derive(Debug, Clone, Default)]
pub struct G2pTable {
    entries: BTreeMap<String, Vec<String>>,
}

impl G2pTable {
    pub fn new() -> G2pTable {
        G2pTable::default()
    }

    /// Insert a pronunciation. Returns false if the word was already
    /// present (the existing entry is kept).
    pub fn insert(&mut self, word: &str, phonemes: Vec<String>) -> bool {
        let key = word.to_lowercase();
        if self.entries.contains_key(&key) {
            return false;
        }
        self.entries.insert(key, phonemes);
        true
    }

    pub fn get(&self, word: &str) -> Option<&[String]> {
        self.entries.get(&word.to_lowercase()).map(|v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Encode a word, preferring the table when it knows the word.
pub fn encode(word: &str, table: Option<&G2pTable>) -> Result<PhoneticForm, PhoneticError> {
    if let Some(phonemes) = table.and_then(|t| t.get(word)) {
        return Ok(PhoneticForm { phonemes: phonemes.to_vec(), source: PhonemeSource::G2pTable });
    }
    Ok(PhoneticForm { phonemes: builtin_encode(word)?, source: PhonemeSource::BuiltinEncoder })
}

/// Marker symbol for a word-internal vowel run. Deliberately not a
/// letter so it cannot collide with a consonant symbol.
const MEDIAL_VOWEL: &str = "@";

fn vowel_class(c: char) -> Option<&'static str> {
    match c {
        'a' => Some("A"),
        'e' | 'i' | 'y' => Some("E"),
        'o' | 'u' => Some("O"),
        _ => None,
    }
}

fn consonant_symbol(c: char) -> String {
    match c {
        'c' | 'k' | 'q' => "K".to_string(),
        's' | 'z' => "S".to_string(),
        other => other.to_uppercase().collect(),
    }
}

/// Builtin encoder. Casefolds, drops non-letters, then:
/// a word-initial vowel run keeps the coarse class of its first vowel,
/// a word-final vowel run is dropped, an internal vowel run becomes a
/// single marker symbol, consonants keep their letter with c/k/q and
/// s/z merged, and repeated symbols collapse.
pub fn builtin_encode(word: &str) -> Result<Vec<String>, PhoneticError> {
    let letters: Vec<char> = word.to_lowercase().chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return Err(PhoneticError::NoLetters);
    }
    let mut symbols: Vec<String> = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        if let Some(class) = vowel_class(letters[i]) {
            let start = i;
            while i < letters.len() && vowel_class(letters[i]).is_some() {
                i += 1;
            }
            if start == 0 {
                symbols.push(class.to_string());
            } else if i < letters.len() {
                symbols.push(MEDIAL_VOWEL.to_string());
            }
            // A word-final run (start > 0, i == len) is dropped.
        } else {
            symbols.push(consonant_symbol(letters[i]));
            i += 1;
        }
    }
    symbols.dedup();
    Ok(symbols)
}

/// Substitution weights between phoneme symbols. Lookups are symmetric;
/// unlisted pairs cost 1, identical symbols cost 0. Insertions and
/// deletions always cost 1.
#[derive(Debug, Clone, Default)]
pub struct PhonemeWeights {
    subs: BTreeMap<(String, String), f64>,
}

impl PhonemeWeights {
    /// Unit costs everywhere.
    pub fn unit() -> PhonemeWeights {
        PhonemeWeights::default()
    }

    pub fn set(&mut self, a: &str, b: &str, cost: f64) {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        self.subs.insert((x.to_string(), y.to_string()), cost);
    }

    pub fn substitution(&self, a: &str, b: &str) -> f64 {
        if a == b {
            return 0.0;
        }
        let key = if a <= b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
        self.subs.get(&key).copied().unwrap_or(1.0)
    }
}

/// Weighted edit distance between phoneme sequences.
pub fn weighted_distance(a: &[String], b: &[String], weights: &PhonemeWeights) -> f64 {
    let mut prev: Vec<f64> = (0..=b.len()).map(|j| j as f64).collect();
    let mut cur = alloc::vec![0.0f64; b.len() + 1];
    for (i, ac) in a.iter().enumerate() {
        cur[0] = (i + 1) as f64;
        for (j, bc) in b.iter().enumerate() {
            let sub = prev[j] + weights.substitution(ac, bc);
            cur[j + 1] = sub.min(prev[j + 1] + 1.0).min(cur[j] + 1.0);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Weighted distance divided by the longer sequence length. Two empty
/// sequences are distance zero.
pub fn normalized_distance(a: &[String], b: &[String], weights: &PhonemeWeights) -> f64 {
    let denom = a.len().max(b.len());
    if denom == 0 {
        return 0.0;
    }
    weighted_distance(a, b, weights) / denom as f64
}
