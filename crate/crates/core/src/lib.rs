//! Core algorithms for studying interface noise in question answering:
//! tokenization, edit distance with alignments, keyboard-layout typo
//! models, phonetic encoding, noise generators, QA/noise metrics, and
//! context-based question repair.
//!
//! This crate is `no_std` + `alloc`: everything in it is a pure function
//! of its inputs, safe to call concurrently, and deterministic for a
//! fixed seed. File formats, adapters for external engines, and the CLI
//! live in the companion `noiseqa` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod dataset;
pub mod edit;
pub mod hash;
pub mod keyboard;
pub mod metrics;
pub mod misspell;
pub mod noise;
pub mod phonetic;
pub mod repair;
pub mod text;
pub mod wordclass;

pub use edit::{edit_cost, edit_distance, EditAlignment, EditOp};
pub use keyboard::{AdjacencyMode, KeyboardLayout};
pub use text::{normalize_answer, tokenize, Token, TokenKind};
