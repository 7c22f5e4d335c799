//! Generic edit distance with full alignments.
//!
//! Works over any element type, so the same code serves character-level
//! distance (CER, misspelling classification), word-level distance (WER,
//! corruption statistics), and phoneme-level distance. Transpositions of
//! adjacent elements can be enabled to get the restricted Damerau
//! (optimal string alignment) variant used for typo classification.

use alloc::vec;
use alloc::vec::Vec;

/// One step in an alignment between a source and a target sequence.
/// Indices refer to positions in the respective sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp<T> {
    Match { src: usize, tgt: usize },
    Substitute { src: usize, tgt: usize, with: T },
    Delete { src: usize },
    Insert { tgt: usize, elem: T },
    /// Adjacent swap: source positions `src`, `src + 1` map to target
    /// positions `tgt`, `tgt + 1` in reverse order.
    Transpose { src: usize, tgt: usize },
}

impl<T> EditOp<T> {
    pub fn is_match(&self) -> bool {
        matches!(self, EditOp::Match { .. })
    }
}

/// An alignment plus its total cost (unit costs, matches free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditAlignment<T> {
    pub ops: Vec<EditOp<T>>,
    pub cost: usize,
}

impl<T: Clone + PartialEq> EditAlignment<T> {
    /// Replay the alignment against `source`, producing the target.
    pub fn apply(&self, source: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(source.len());
        for op in &self.ops {
            match op {
                EditOp::Match { src, .. } => out.push(source[*src].clone()),
                EditOp::Substitute { with, .. } => out.push(with.clone()),
                EditOp::Delete { .. } => {}
                EditOp::Insert { elem, .. } => out.push(elem.clone()),
                EditOp::Transpose { src, .. } => {
                    out.push(source[*src + 1].clone());
                    out.push(source[*src].clone());
                }
            }
        }
        out
    }

    /// Number of non-match operations (a transpose counts once).
    pub fn error_count(&self) -> usize {
        self.ops.iter().filter(|op| !op.is_match()).count()
    }
}

/// Edit distance only, without building an alignment. Two rows of DP;
/// use this on hot paths (corpus CER/WER, repair candidate scoring).
pub fn edit_cost<T: PartialEq>(a: &[T], b: &[T], allow_transpose: bool) -> usize {
    if !allow_transpose {
        let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut prev: Vec<usize> = (0..=short.len()).collect();
        let mut cur = vec![0usize; short.len() + 1];
        for (i, lc) in long.iter().enumerate() {
            cur[0] = i + 1;
            for (j, sc) in short.iter().enumerate() {
                let sub = prev[j] + usize::from(lc != sc);
                cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            }
            core::mem::swap(&mut prev, &mut cur);
        }
        return prev[short.len()];
    }
    // Three rows for the optimal string alignment recurrence.
    let mut prev2: Vec<usize> = vec![0; b.len() + 1];
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ac) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, bc) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ac != bc);
            let mut best = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            if i > 0 && j > 0 && a[i] == b[j - 1] && a[i - 1] == b[j] {
                best = best.min(prev2[j - 1] + 1);
            }
            cur[j + 1] = best;
        }
        core::mem::swap(&mut prev2, &mut prev);
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Full DP with traceback. Ties are broken in a fixed order (match,
/// substitute, delete, insert, transpose) so the alignment is
/// deterministic for a given input pair.
pub fn edit_distance<T: PartialEq + Clone>(
    a: &[T],
    b: &[T],
    allow_transpose: bool,
) -> EditAlignment<T> {
    let n = a.len();
    let m = b.len();
    let idx = |i: usize, j: usize| i * (m + 1) + j;
    let mut d = vec![0usize; (n + 1) * (m + 1)];
    for i in 0..=n {
        d[idx(i, 0)] = i;
    }
    for j in 0..=m {
        d[idx(0, j)] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[idx(i - 1, j - 1)] + usize::from(a[i - 1] != b[j - 1]);
            let mut best = sub.min(d[idx(i - 1, j)] + 1).min(d[idx(i, j - 1)] + 1);
            if allow_transpose && i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(d[idx(i - 2, j - 2)] + 1);
            }
            d[idx(i, j)] = best;
        }
    }

    let cost = d[idx(n, m)];
    let mut ops: Vec<EditOp<T>> = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[idx(i, j)];
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] && here == d[idx(i - 1, j - 1)] {
            ops.push(EditOp::Match { src: i - 1, tgt: j - 1 });
            i -= 1;
            j -= 1;
        } else if i > 0 && j > 0 && here == d[idx(i - 1, j - 1)] + 1 {
            ops.push(EditOp::Substitute { src: i - 1, tgt: j - 1, with: b[j - 1].clone() });
            i -= 1;
            j -= 1;
        } else if i > 0 && here == d[idx(i - 1, j)] + 1 {
            ops.push(EditOp::Delete { src: i - 1 });
            i -= 1;
        } else if j > 0 && here == d[idx(i, j - 1)] + 1 {
            ops.push(EditOp::Insert { tgt: j - 1, elem: b[j - 1].clone() });
            j -= 1;
        } else {
            debug_assert!(
                allow_transpose
                    && i > 1
                    && j > 1
                    && a[i - 1] == b[j - 2]
                    && a[i - 2] == b[j - 1]
                    && here == d[idx(i - 2, j - 2)] + 1
            );
            ops.push(EditOp::Transpose { src: i - 2, tgt: j - 2 });
            i -= 2;
            j -= 2;
        }
    }
    ops.reverse();
    EditAlignment { ops, cost }
}
