//! Tokenization, answer normalization, and small string utilities shared
//! by the generators, metrics, and repair.
//!
//! The tokenizer is deliberately simple and fixed: word tokens are
//! maximal alphabetic runs (apostrophes between letters stay inside the
//! word), number tokens are maximal ASCII digit runs, and every other
//! non-space character is a single punctuation or symbol token. All
//! word-level operations in this workspace are defined over these tokens,
//! so the rules here are part of the output contract.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// What a token is, at the granularity the noise model cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
    Symbol,
}

/// One token plus its half-open byte span in the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Byte offsets into the source; `source[span.0..span.1] == surface`.
    pub span: (usize, usize),
    pub kind: TokenKind,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

const APOSTROPHES: [char; 2] = ['\'', '\u{2019}'];

fn is_apostrophe(c: char) -> bool {
    APOSTROPHES.contains(&c)
}

/// Punctuation set used by the tokenizer and the punctuation-stripping
/// generator: ASCII punctuation plus the usual typographic marks.
pub fn is_punct_char(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{2018}' | '\u{2019}' | '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{00AB}'
                | '\u{00BB}' | '\u{2013}' | '\u{2014}' | '\u{2026}' | '\u{00BF}' | '\u{00A1}'
                | '\u{00B7}'
        )
}

/// Split `text` into tokens. Whitespace is not a token; the byte spans
/// let callers reconstruct the original gaps exactly.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let bytes_len = text.len();
    let mut iter = text.char_indices().peekable();

    while let Some(&(start, c)) = iter.peek() {
        if c.is_whitespace() {
            iter.next();
            continue;
        }
        if c.is_alphabetic() {
            // Maximal alphabetic run; an apostrophe joins two letter runs.
            let mut end = start;
            while let Some(&(i, ch)) = iter.peek() {
                if ch.is_alphabetic() {
                    end = i + ch.len_utf8();
                    iter.next();
                } else if is_apostrophe(ch) {
                    // Look one past the apostrophe without consuming.
                    let after = i + ch.len_utf8();
                    let next_is_letter = text[after..]
                        .chars()
                        .next()
                        .map(|n| n.is_alphabetic())
                        .unwrap_or(false);
                    if end > start && next_is_letter {
                        end = after;
                        iter.next();
                    } else {
                        break;
                    }
                } else {
                    break;
                }
            }
            tokens.push(Token {
                surface: text[start..end].to_string(),
                span: (start, end),
                kind: TokenKind::Word,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, ch)) = iter.peek() {
                if ch.is_ascii_digit() {
                    end = i + ch.len_utf8();
                    iter.next();
                } else {
                    break;
                }
            }
            tokens.push(Token {
                surface: text[start..end].to_string(),
                span: (start, end),
                kind: TokenKind::Number,
            });
            continue;
        }
        let end = start + c.len_utf8();
        tokens.push(Token {
            surface: text[start..end].to_string(),
            span: (start, end),
            kind: if is_punct_char(c) {
                TokenKind::Punctuation
            } else {
                TokenKind::Symbol
            },
        });
        iter.next();
    }

    debug_assert!(tokens.iter().all(|t| t.span.1 <= bytes_len));
    tokens
}

/// SQuAD answer normalization: lowercase, drop ASCII punctuation
/// characters, drop the articles a/an/the as whole tokens, split on
/// whitespace. This matches the official evaluation script, including
/// its quirk that removing punctuation joins adjacent pieces
/// ("six-year" becomes "sixyear").
pub fn normalize_answer(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    let stripped: String = lowered.chars().filter(|c| !c.is_ascii_punctuation()).collect();
    stripped
        .split_whitespace()
        .filter(|t| !matches!(*t, "a" | "an" | "the"))
        .map(|t| t.to_string())
        .collect()
}

/// Case shape of a word, used to re-apply the original casing after a
/// token is replaced by a generator or by repair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasePattern {
    /// All letters uppercase (two or more letters).
    AllCaps,
    /// First letter uppercase.
    Title,
    /// Anything else; replacements are used verbatim.
    AsIs,
}

impl CasePattern {
    pub fn detect(s: &str) -> CasePattern {
        let letters: Vec<char> = s.chars().filter(|c| c.is_alphabetic()).collect();
        if letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
            CasePattern::AllCaps
        } else if letters.first().map(|c| c.is_uppercase()).unwrap_or(false) {
            CasePattern::Title
        } else {
            CasePattern::AsIs
        }
    }

    pub fn apply(&self, replacement: &str) -> String {
        match self {
            CasePattern::AllCaps => replacement.to_uppercase(),
            CasePattern::Title => {
                let mut chars = replacement.chars();
                match chars.next() {
                    Some(first) => {
                        let mut out: String = first.to_uppercase().collect();
                        out.push_str(chars.as_str());
                        out
                    }
                    None => String::new(),
                }
            }
            CasePattern::AsIs => replacement.to_string(),
        }
    }
}

/// Rebuild `text` with some token surfaces swapped out, keeping every
/// inter-token gap byte-for-byte. `replacements[i] == None` keeps token i.
pub fn rebuild_with_replacements(
    text: &str,
    tokens: &[Token],
    replacements: &[Option<String>],
) -> String {
    debug_assert_eq!(tokens.len(), replacements.len());
    let mut out = String::with_capacity(text.len());
    let mut cursor = 0;
    for (tok, repl) in tokens.iter().zip(replacements) {
        out.push_str(&text[cursor..tok.span.0]);
        match repl {
            Some(r) => out.push_str(r),
            None => out.push_str(&tok.surface),
        }
        cursor = tok.span.1;
    }
    out.push_str(&text[cursor..]);
    out
}

/// Rebuild `text` keeping only the tokens for which `keep` is true, then
/// collapse whitespace runs to single spaces and trim.
pub fn rebuild_dropping_tokens(text: &str, tokens: &[Token], keep: &[bool]) -> String {
    debug_assert_eq!(tokens.len(), keep.len());
    let mut raw = String::with_capacity(text.len());
    let mut cursor = 0;
    for (tok, &k) in tokens.iter().zip(keep) {
        raw.push_str(&text[cursor..tok.span.0]);
        if k {
            raw.push_str(&tok.surface);
        }
        cursor = tok.span.1;
    }
    raw.push_str(&text[cursor..]);
    collapse_whitespace(&raw)
}

/// Collapse whitespace runs to single ASCII spaces and trim the ends.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for part in s.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(part);
    }
    out
}
