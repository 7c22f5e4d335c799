//! Corpus BLEU with mteval-13a tokenization.
//!
//! Self-contained reimplementation of the conventional WMT scoring
//! path: the 13a tokenizer (punctuation split out, periods and commas
//! kept inside numbers, intra-word hyphens and apostrophes kept),
//! BLEU-4 over clipped n-gram counts pooled across the corpus,
//! exponential smoothing for zero n-gram matches, effective order for
//! short segments, and the standard brevity penalty. Scores are
//! case-insensitive.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::MetricsError;

const MAX_ORDER: usize = 4;

/// Replace every occurrence of `pat` in `s`.
fn replace_all(s: &str, pat: &str, with: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find(pat) {
        out.push_str(&rest[..pos]);
        out.push_str(with);
        rest = &rest[pos + pat.len()..];
    }
    out.push_str(rest);
    out
}

/// The language-independent character class the 13a tokenizer pads
/// with spaces: most ASCII punctuation except apostrophe, comma,
/// hyphen, and period (those get context-dependent rules).
fn is_padded_punct(c: char) -> bool {
    matches!(c,
        '\u{20}'..='\u{26}'
        | '\u{28}'..='\u{2b}'
        | '/'
        | '\u{3a}'..='\u{40}'
        | '\u{5b}'..='\u{60}'
        | '\u{7b}'..='\u{7e}')
}

/// Tokenize one segment with the mteval-13a rules and return its
/// tokens. The input is lowercased first (uncased scoring).
pub fn tokenize_13a(segment: &str) -> Vec<String> {
    let mut line = segment.to_lowercase();
    line = replace_all(&line, "<skipped>", "");
    line = replace_all(&line, "-\n", "");
    line = line.replace('\n', " ");
    if line.contains('&') {
        line = replace_all(&line, "&quot;", "\"");
        line = replace_all(&line, "&amp;", "&");
        line = replace_all(&line, "&lt;", "<");
        line = replace_all(&line, "&gt;", ">");
    }
    let line = format!(" {line} ");

    // Pass 1: pad the general punctuation class with spaces.
    let mut pass1 = String::with_capacity(line.len() * 2);
    for c in line.chars() {
        if is_padded_punct(c) {
            pass1.push(' ');
            pass1.push(c);
            pass1.push(' ');
        } else {
            pass1.push(c);
        }
    }

    // Passes 2-4 are two-character rules applied left to right,
    // non-overlapping, exactly like successive regex substitutions.
    let two_char_pass = |input: &str, rule: &dyn Fn(char, char) -> Option<String>| -> String {
        let chars: Vec<char> = input.chars().collect();
        let mut out = String::with_capacity(input.len() * 2);
        let mut i = 0;
        while i < chars.len() {
            if i + 1 < chars.len() {
                if let Some(repl) = rule(chars[i], chars[i + 1]) {
                    out.push_str(&repl);
                    i += 2;
                    continue;
                }
            }
            out.push(chars[i]);
            i += 1;
        }
        out
    };

    // Period/comma split unless preceded by a digit.
    let pass2 = two_char_pass(&pass1, &|a, b| {
        (!a.is_ascii_digit() && (b == '.' || b == ','))
            .then(|| format!("{a} {b} "))
    });
    // Period/comma split unless followed by a digit.
    let pass3 = two_char_pass(&pass2, &|a, b| {
        ((a == '.' || a == ',') && !b.is_ascii_digit())
            .then(|| format!(" {a} {b}"))
    });
    // Dash split when preceded by a digit.
    let pass4 = two_char_pass(&pass3, &|a, b| {
        (a.is_ascii_digit() && b == '-').then(|| format!("{a} {b} "))
    });

    pass4.split_whitespace().map(|t| t.to_owned()).collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> BTreeMap<&[String], usize> {
    let mut counts: BTreeMap<&[String], usize> = BTreeMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

fn ln(x: f64) -> f64 {
    if x == 0.0 {
        -9_999_999_999.0
    } else {
        libm::log(x)
    }
}

/// Uncased corpus BLEU of hypotheses against one reference each.
pub fn corpus_bleu<H: AsRef<str>, R: AsRef<str>>(
    hyps: &[H],
    refs: &[R],
) -> Result<f64, MetricsError> {
    if hyps.len() != refs.len() || hyps.is_empty() {
        return Err(MetricsError::LengthMismatch { hyps: hyps.len(), refs: refs.len() });
    }
    let mut correct = [0usize; MAX_ORDER];
    let mut total = [0usize; MAX_ORDER];
    let mut sys_len = 0usize;
    let mut ref_len = 0usize;

    for (hyp, reference) in hyps.iter().zip(refs) {
        let h = tokenize_13a(hyp.as_ref());
        let r = tokenize_13a(reference.as_ref());
        sys_len += h.len();
        ref_len += r.len();
        for n in 1..=MAX_ORDER {
            if h.len() < n {
                break;
            }
            total[n - 1] += h.len() - n + 1;
            let r_counts = ngram_counts(&r, n);
            for (gram, count) in ngram_counts(&h, n) {
                let clip = r_counts.get(gram).copied().unwrap_or(0);
                correct[n - 1] += count.min(clip);
            }
        }
    }

    let mut precisions = [0.0f64; MAX_ORDER];
    let mut smooth = 1.0f64;
    let mut effective_order = MAX_ORDER;
    for n in 1..=MAX_ORDER {
        if total[n - 1] == 0 {
            break;
        }
        effective_order = n;
        precisions[n - 1] = if correct[n - 1] == 0 {
            smooth *= 2.0;
            100.0 / (smooth * total[n - 1] as f64)
        } else {
            100.0 * correct[n - 1] as f64 / total[n - 1] as f64
        };
    }

    let bp = if sys_len < ref_len {
        if sys_len > 0 {
            libm::exp(1.0 - ref_len as f64 / sys_len as f64)
        } else {
            0.0
        }
    } else {
        1.0
    };
    // Perfect precisions with no length penalty are exactly 100; the
    // log/exp round trip would wobble in the last bits.
    if bp == 1.0 && precisions[..effective_order].iter().all(|&p| p == 100.0) {
        return Ok(100.0);
    }
    let mean_log = precisions[..effective_order].iter().map(|&p| ln(p)).sum::<f64>()
        / effective_order as f64;
    Ok(bp * libm::exp(mean_log))
}
