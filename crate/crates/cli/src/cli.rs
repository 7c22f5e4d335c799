//! Argument surface and dispatch. Precedence for tunables is command
//! line, then `--config` file, then built-in defaults. Environment
//! variables are never read here; only HTTP engine credentials come
//! from the environment.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::commands;

#[derive(Debug, Parser)]
#[command(name = "noiseqa", version, about = "Interface-noise toolkit for extractive QA")]
pub struct Cli {
    /// TOML file with defaults for seed, jobs, prob, threshold, pivot,
    /// and pron_threshold. Flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for batch stages. Defaults to all cores.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Master seed; every derived stream is keyed off it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply noise policies to a dataset's questions, emitting a
    /// challenge set.
    Noise(NoiseArgs),
    /// Score predictions against gold answers, or measure a challenge
    /// set against its clean side.
    Eval(EvalArgs),
    /// CER, WER, and BLEU between two parallel line files.
    Textmetrics(TextmetricsArgs),
    /// Repair noisy questions against their paragraph contexts.
    Repair(RepairArgs),
    /// Emit a copy of the dataset augmented with noisy duplicates.
    Augment(AugmentArgs),
    /// Reduce a misspelling list to pairs an input interface could
    /// plausibly produce.
    FilterMisspellings(FilterArgs),
    /// Corruption statistics for a challenge set.
    Stats(StatsArgs),
    /// Split an evaluation into predicate and complement strata.
    Stratify(StratifyArgs),
    /// Sweep the pronunciation threshold against human labels.
    CalibrateFilter(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    /// Dataset JSON with contexts, questions, and answers.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Policy spec, repeatable; later policies see earlier output.
    /// Example: key_swap:p=0.25 or mt:pivot=de,name=bt-de.
    #[arg(long = "policy", required = true, value_name = "SPEC")]
    pub policies: Vec<String>,

    /// Output challenge TSV; a .meta.json sidecar is written next to it.
    #[arg(long)]
    pub out: PathBuf,

    /// Default per-word corruption probability for policies that take p.
    #[arg(long)]
    pub prob: Option<f64>,

    /// Default pivot language for mt policies.
    #[arg(long)]
    pub pivot: Option<String>,

    /// Misspelling lexicon TSV (word, misspelling) for lexicon-backed
    /// policies.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,

    /// Token annotation TSV overriding the heuristic POS and NE guesses.
    #[arg(long)]
    pub annotations: Option<PathBuf>,

    /// Engine adapter TOML; required by asr and mt policies.
    #[arg(long, value_name = "FILE")]
    pub adapter_config: Option<PathBuf>,

    /// Write the engine audit trail to this TSV.
    #[arg(long)]
    pub audit: Option<PathBuf>,

    /// Interface label recorded in provenance; inferred from the
    /// policies when absent.
    #[arg(long)]
    pub interface: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Dataset JSON providing gold answers and clean questions.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Predictions JSON (qid to answer string); QA mode.
    #[arg(long)]
    pub predictions: Option<PathBuf>,

    /// Challenge TSV; noise measurement mode.
    #[arg(long)]
    pub challenge: Option<PathBuf>,

    /// Output report TSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TextmetricsArgs {
    /// Hypothesis file, one segment per line.
    #[arg(long)]
    pub hyp: PathBuf,

    /// Reference file, parallel to --hyp.
    #[arg(long = "ref")]
    pub reference: PathBuf,

    /// Output report TSV.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepairModeArg {
    /// Swap unknown content words for close context words.
    Content,
    /// Swap out-of-context proper nouns only.
    Ne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DenominatorArg {
    /// Normalize edit distance by the longer word.
    Max,
    /// Normalize by the context word's length.
    Ref,
}

#[derive(Debug, Args)]
pub struct RepairArgs {
    /// Dataset JSON the challenge set was generated from.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Challenge TSV with the noisy questions to repair.
    #[arg(long)]
    pub challenge: PathBuf,

    /// Output challenge TSV with repaired questions.
    #[arg(long)]
    pub out: PathBuf,

    /// Write one row per replacement to this TSV.
    #[arg(long)]
    pub edits: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "content")]
    pub mode: RepairModeArg,

    /// Maximum normalized distance for a replacement.
    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long, value_enum, default_value = "max")]
    pub denominator: DenominatorArg,

    /// Append a question mark when the final one is missing.
    #[arg(long)]
    pub restore_qmark: bool,

    /// Run the configured spellcheck engine before context repair.
    #[arg(long)]
    pub spellcheck: bool,

    /// Engine adapter TOML; required by --spellcheck.
    #[arg(long, value_name = "FILE")]
    pub adapter_config: Option<PathBuf>,

    /// Token annotation TSV for the noisy questions.
    #[arg(long)]
    pub annotations: Option<PathBuf>,

    /// Write the engine audit trail to this TSV.
    #[arg(long)]
    pub audit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Dataset JSON to augment.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Policy spec, repeatable; each policy adds one noisy copy per
    /// question.
    #[arg(long = "policy", required = true, value_name = "SPEC")]
    pub policies: Vec<String>,

    /// Output dataset JSON.
    #[arg(long)]
    pub out: PathBuf,

    #[arg(long)]
    pub prob: Option<f64>,

    #[arg(long)]
    pub pivot: Option<String>,

    #[arg(long)]
    pub lexicon: Option<PathBuf>,

    #[arg(long)]
    pub annotations: Option<PathBuf>,

    #[arg(long, value_name = "FILE")]
    pub adapter_config: Option<PathBuf>,

    /// Write the engine audit trail to this TSV.
    #[arg(long)]
    pub audit: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LexiconFormatArg {
    /// Two-column TSV: word, misspelling.
    Tsv,
    /// Wikipedia-style lines: misspelling->correction, correction.
    Wiki,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Raw misspelling list.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value = "tsv")]
    pub format: LexiconFormatArg,

    /// Output TSV with the retained pairs.
    #[arg(long)]
    pub out: PathBuf,

    /// Write one verdict row per input pair to this TSV.
    #[arg(long)]
    pub audit: Option<PathBuf>,

    /// Discard pairs whose pronunciations differ by less than this.
    #[arg(long)]
    pub pron_threshold: Option<f64>,

    /// Comma-separated error categories to retain. Defaults to
    /// deletion, insertion, adjswap, keyswap.
    #[arg(long)]
    pub categories: Option<String>,

    /// Pronunciation table TSV (word, space-separated phonemes)
    /// overriding the built-in letter rules.
    #[arg(long)]
    pub g2p: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Dataset JSON the challenge set was generated from.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Challenge TSV to measure.
    #[arg(long)]
    pub challenge: PathBuf,

    /// Output report TSV with per-question rows.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct StratifyArgs {
    /// Dataset JSON providing gold answers.
    #[arg(long)]
    pub dataset: PathBuf,

    /// Predictions JSON to score.
    #[arg(long)]
    pub predictions: PathBuf,

    /// contains_token:WORD, contains_numeral, or flagged:FILE (one qid
    /// per line).
    #[arg(long)]
    pub predicate: String,

    /// Challenge TSV; adds noise scores per stratum.
    #[arg(long)]
    pub challenge: Option<PathBuf>,

    /// Output report TSV, one row per stratum.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Labeled TSV: word, misspelling, interface or non-interface.
    #[arg(long)]
    pub input: PathBuf,

    /// Output TSV with agreement per threshold.
    #[arg(long)]
    pub out: PathBuf,

    /// Comma-separated error categories to retain during the sweep.
    #[arg(long)]
    pub categories: Option<String>,

    /// Pronunciation table TSV overriding the built-in letter rules.
    #[arg(long)]
    pub g2p: Option<PathBuf>,
}

/// Optional defaults loaded from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub prob: Option<f64>,
    pub threshold: Option<f64>,
    pub pivot: Option<String>,
    pub pron_threshold: Option<f64>,
}

/// Effective tunables after merging flags, config file, and defaults.
/// Per-command flags still override these.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub jobs: Option<usize>,
    pub prob: f64,
    pub threshold: f64,
    pub pivot: String,
    pub pron_threshold: f64,
}

impl Settings {
    fn resolve(cli: &Cli, file: &FileConfig) -> Settings {
        Settings {
            seed: cli.seed.or(file.seed).unwrap_or(0),
            jobs: cli.jobs.or(file.jobs),
            prob: file.prob.unwrap_or(0.25),
            threshold: file.threshold.unwrap_or(0.5),
            pivot: file.pivot.clone().unwrap_or_else(|| "de".to_string()),
            pron_threshold: file.pron_threshold.unwrap_or(0.25),
        }
    }
}

pub fn run() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => {
            let raw = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let parsed: FileConfig = toml::from_str(&raw)
                .with_context(|| format!("parsing config {}", path.display()))?;
            if let Some(p) = parsed.prob {
                if !(0.0..=1.0).contains(&p) {
                    bail!("config prob {p} outside [0, 1]");
                }
            }
            parsed
        }
        None => FileConfig::default(),
    };
    let settings = Settings::resolve(&cli, &file);
    match &cli.command {
        Command::Noise(args) => commands::noise::run(args, &settings),
        Command::Eval(args) => commands::eval::run(args, &settings),
        Command::Textmetrics(args) => commands::eval::run_textmetrics(args, &settings),
        Command::Repair(args) => commands::repair::run(args, &settings),
        Command::Augment(args) => commands::augment::run(args, &settings),
        Command::FilterMisspellings(args) => commands::filter::run(args, &settings),
        Command::Stats(args) => commands::stats::run(args, &settings),
        Command::Stratify(args) => commands::stats::run_stratify(args, &settings),
        Command::CalibrateFilter(args) => commands::filter::run_calibrate(args, &settings),
    }
}
