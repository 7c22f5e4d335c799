//! Tab-separated files with `#` comment lines and backslash escapes
//! so fields may contain tabs and newlines.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};

pub fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            other => out.push(other),
        }
    }
    out
}

pub fn unescape(field: &str) -> Result<String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => bail!("unknown escape \\{other}"),
            None => bail!("dangling backslash"),
        }
    }
    Ok(out)
}

pub fn format_row(fields: &[&str]) -> String {
    let mut line = String::new();
    for (i, field) in fields.iter().enumerate() {
        if i > 0 {
            line.push('\t');
        }
        let _ = write!(line, "{}", escape(field));
    }
    line.push('\n');
    line
}

/// Data rows of a TSV file, unescaped, with their 1-based line
/// numbers. Comment (`#`) and blank lines are skipped.
pub fn parse_rows(content: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut rows = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = line
            .split('\t')
            .map(unescape)
            .collect::<Result<Vec<String>>>()
            .with_context(|| format!("line {lineno}"))?;
        rows.push((lineno, fields));
    }
    Ok(rows)
}

/// Like `parse_rows` but enforces a column count.
pub fn parse_rows_with_arity(content: &str, arity: usize, what: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let rows = parse_rows(content)?;
    for (lineno, fields) in &rows {
        if fields.len() != arity {
            bail!("{what}: line {lineno} has {} fields, expected {arity}", fields.len());
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        let samples = ["plain", "tab\tin", "line\nbreak", "back\\slash", "\r", ""];
        for s in samples {
            assert_eq!(unescape(&escape(s)).unwrap(), s);
            assert!(!escape(s).contains('\t') || s.is_empty());
        }
    }

    #[test]
    fn rows_skip_comments_and_blanks() {
        let content = "# meta\n\nq1\ta b\nq2\tc\\td\n";
        let rows = parse_rows(content).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], (3, vec!["q1".to_string(), "a b".to_string()]));
        assert_eq!(rows[1].1[1], "c\td");
    }

    #[test]
    fn arity_violations_name_the_line() {
        let err = parse_rows_with_arity("a\tb\nc\n", 2, "pairs").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn bad_escapes_are_rejected() {
        assert!(parse_rows("a\\q\tb\n").is_err());
        assert!(unescape("trailing\\").is_err());
    }
}
