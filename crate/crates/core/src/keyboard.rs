//! Keyboard layout geometry for typo modeling.
//!
//! A layout is three letter rows. Adjacency comes in two flavors:
//! row-wise (left/right neighbors only), which is what the key-swap
//! generator uses, and physical, which adds the diagonally staggered
//! keys from the rows above and below and is used when deciding whether
//! a substitution could plausibly be a fat-finger error.

use alloc::string::String;
use alloc::vec::Vec;

/// Which keys count as neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjacencyMode {
    /// Same row, one position left or right.
    RowWise,
    /// Row-wise plus the staggered keys on the rows above and below.
    Physical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayoutError {
    /// A letter appears in more than one position.
    DuplicateKey(char),
    /// A row contains something other than lowercase ASCII letters.
    InvalidKey(char),
    EmptyRow,
}

impl core::fmt::Display for LayoutError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LayoutError::DuplicateKey(c) => write!(f, "duplicate key '{c}' in layout"),
            LayoutError::InvalidKey(c) => write!(f, "invalid key '{c}' in layout (lowercase ASCII letters only)"),
            LayoutError::EmptyRow => write!(f, "layout row is empty"),
        }
    }
}

impl core::error::Error for LayoutError {}

/// A physical letter layout: rows of lowercase keys, staggered like a
/// typewriter. Row `r + 1` is shifted roughly half a key right of row `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyboardLayout {
    rows: Vec<Vec<char>>,
}

impl KeyboardLayout {
    /// Standard QWERTY letter rows.
    pub fn qwerty() -> KeyboardLayout {
        KeyboardLayout::from_rows(&["qwertyuiop", "asdfghjkl", "zxcvbnm"])
            .expect("builtin layout is valid")
    }

    /// Build a layout from letter rows. Every key must be a lowercase
    /// ASCII letter and no key may repeat.
    pub fn from_rows(rows: &[&str]) -> Result<KeyboardLayout, LayoutError> {
        let mut seen = [false; 26];
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            if row.is_empty() {
                return Err(LayoutError::EmptyRow);
            }
            let mut keys = Vec::with_capacity(row.len());
            for c in row.chars() {
                if !c.is_ascii_lowercase() {
                    return Err(LayoutError::InvalidKey(c));
                }
                let slot = (c as u8 - b'a') as usize;
                if seen[slot] {
                    return Err(LayoutError::DuplicateKey(c));
                }
                seen[slot] = true;
                keys.push(c);
            }
            out.push(keys);
        }
        Ok(KeyboardLayout { rows: out })
    }

    fn position(&self, key: char) -> Option<(usize, usize)> {
        let k = key.to_ascii_lowercase();
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(i) = row.iter().position(|&c| c == k) {
                return Some((r, i));
            }
        }
        None
    }

    /// Whether the layout has a key for this character (case ignored).
    pub fn contains(&self, key: char) -> bool {
        key.is_ascii_alphabetic() && self.position(key).is_some()
    }

    /// Neighboring keys of `key` under `mode`, in a fixed order:
    /// left, right, then upper-left, upper-right, lower-left,
    /// lower-right for physical adjacency. Unknown keys have none.
    pub fn neighbors(&self, key: char, mode: AdjacencyMode) -> Vec<char> {
        let Some((r, i)) = self.position(key) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let row = &self.rows[r];
        if i > 0 {
            out.push(row[i - 1]);
        }
        if i + 1 < row.len() {
            out.push(row[i + 1]);
        }
        if mode == AdjacencyMode::Physical {
            // Staggering: key (r, i) sits between (r-1, i) and (r-1, i+1)
            // above, and between (r+1, i-1) and (r+1, i) below.
            if r > 0 {
                let above = &self.rows[r - 1];
                if i < above.len() {
                    out.push(above[i]);
                }
                if i + 1 < above.len() {
                    out.push(above[i + 1]);
                }
            }
            if r + 1 < self.rows.len() {
                let below = &self.rows[r + 1];
                if i > 0 && i - 1 < below.len() {
                    out.push(below[i - 1]);
                }
                if i < below.len() {
                    out.push(below[i]);
                }
            }
        }
        out
    }

    /// Whether two keys are adjacent under `mode`. Case-insensitive;
    /// false if either key is not on the layout.
    pub fn adjacent(&self, a: char, b: char, mode: AdjacencyMode) -> bool {
        self.neighbors(a, mode).contains(&b.to_ascii_lowercase())
    }

    /// All keys on the layout, row by row.
    pub fn keys(&self) -> impl Iterator<Item = char> + '_ {
        self.rows.iter().flat_map(|r| r.iter().copied())
    }

    /// Rows as strings, for serialization.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.iter().collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qwerty_row_neighbors() {
        let kb = KeyboardLayout::qwerty();
        assert_eq!(kb.neighbors('q', AdjacencyMode::RowWise), vec!['w']);
        assert_eq!(kb.neighbors('p', AdjacencyMode::RowWise), vec!['o']);
        assert_eq!(kb.neighbors('s', AdjacencyMode::RowWise), vec!['a', 'd']);
        assert_eq!(kb.neighbors('m', AdjacencyMode::RowWise), vec!['n']);
        // Case-insensitive lookup.
        assert_eq!(kb.neighbors('S', AdjacencyMode::RowWise), vec!['a', 'd']);
    }

    #[test]
    fn qwerty_physical_neighbors() {
        let kb = KeyboardLayout::qwerty();
        let a: Vec<char> = kb.neighbors('a', AdjacencyMode::Physical);
        assert_eq!(a, vec!['s', 'q', 'w', 'z']);
        assert!(kb.adjacent('g', 't', AdjacencyMode::Physical));
        assert!(kb.adjacent('g', 'y', AdjacencyMode::Physical));
        assert!(kb.adjacent('b', 'g', AdjacencyMode::Physical));
        assert!(kb.adjacent('b', 'h', AdjacencyMode::Physical));
        // frame -> framd: e and d are physically adjacent but not row-wise.
        assert!(kb.adjacent('e', 'd', AdjacencyMode::Physical));
        assert!(!kb.adjacent('e', 'd', AdjacencyMode::RowWise));
        // o -> i is row-wise (of -> if).
        assert!(kb.adjacent('o', 'i', AdjacencyMode::RowWise));
    }

    #[test]
    fn adjacency_is_symmetric() {
        let kb = KeyboardLayout::qwerty();
        for mode in [AdjacencyMode::RowWise, AdjacencyMode::Physical] {
            let keys: Vec<char> = kb.keys().collect();
            for &x in &keys {
                for &y in &keys {
                    assert_eq!(
                        kb.adjacent(x, y, mode),
                        kb.adjacent(y, x, mode),
                        "{x} {y} {mode:?}"
                    );
                }
                assert!(!kb.adjacent(x, x, mode));
            }
        }
    }

    #[test]
    fn every_letter_has_row_neighbor() {
        let kb = KeyboardLayout::qwerty();
        for key in kb.keys().collect::<Vec<_>>() {
            let n = kb.neighbors(key, AdjacencyMode::RowWise);
            assert!(!n.is_empty());
            assert!(n.len() <= 2);
        }
    }

    #[test]
    fn invalid_layouts_rejected() {
        assert_eq!(
            KeyboardLayout::from_rows(&["ab", "bc"]),
            Err(LayoutError::DuplicateKey('b'))
        );
        assert_eq!(
            KeyboardLayout::from_rows(&["aB"]),
            Err(LayoutError::InvalidKey('B'))
        );
        assert_eq!(KeyboardLayout::from_rows(&["ab", ""]), Err(LayoutError::EmptyRow));
    }

    #[test]
    fn unknown_keys_have_no_neighbors() {
        let kb = KeyboardLayout::qwerty();
        assert!(kb.neighbors('é', AdjacencyMode::Physical).is_empty());
        assert!(kb.neighbors('3', AdjacencyMode::RowWise).is_empty());
        assert!(!kb.contains('3'));
        assert!(kb.contains('Q'));
    }
}
