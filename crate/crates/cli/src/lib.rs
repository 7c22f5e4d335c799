//! Command-line pipeline and file formats for interface-noise
//! experiments on extractive QA data: noise generation, challenge-set
//! statistics, repair, augmentation, misspelling filtering, and
//! evaluation, with pluggable engine adapters.

pub mod adapters;
pub mod cli;
pub mod commands;
pub mod formats;
pub mod meta;
pub mod pipeline;
pub mod policy;
pub mod tsv;
