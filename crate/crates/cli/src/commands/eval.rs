//! Scoring drivers. `eval` either scores predictions against gold
//! answers or measures how far a challenge set drifted from its clean
//! side; `textmetrics` compares two parallel line files.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use noiseqa_core::analysis::noise_stats;
use noiseqa_core::metrics::{corpus_bleu, corpus_cer, corpus_wer, qa_eval, MetricOptions};

use crate::cli::{EvalArgs, Settings, TextmetricsArgs};
use crate::commands::{fmt_score, write_report};
use crate::formats::challenge::load_challenge;
use crate::formats::predictions::load_predictions;
use crate::formats::squad::load_squad;
use crate::formats::read_file;
use crate::meta::{config_repr, RunMeta};

pub fn run(args: &EvalArgs, settings: &Settings) -> Result<()> {
    let dataset = load_squad(&args.dataset)?;
    let (mode, rows) = match (&args.predictions, &args.challenge) {
        (Some(path), None) => {
            let predictions = load_predictions(path)?;
            if predictions.is_empty() {
                eprintln!("warning: predictions file is empty; every question scores zero");
            }
            let gold: BTreeMap<String, Vec<String>> = dataset
                .questions
                .iter()
                .map(|(qid, r)| {
                    (qid.clone(), r.answers.iter().map(|a| a.text.clone()).collect())
                })
                .collect();
            let report = qa_eval(&predictions, &gold)?;
            if !report.missing.is_empty() {
                eprintln!(
                    "warning: {} of {} questions have no prediction",
                    report.missing.len(),
                    gold.len()
                );
            }
            let rows = vec![
                ("mode", "qa".to_string()),
                ("n", report.score.n.to_string()),
                ("em", fmt_score(report.score.em)),
                ("f1", fmt_score(report.score.f1)),
                ("missing", report.missing.len().to_string()),
            ];
            ("qa", rows)
        }
        (None, Some(path)) => {
            let set = load_challenge(path, &dataset)?;
            let stats = noise_stats(&set)?;
            let rows = vec![
                ("mode", "noise".to_string()),
                ("n", stats.n.to_string()),
                ("cer", fmt_score(stats.score.cer)),
                ("wer", fmt_score(stats.score.wer)),
                ("bleu", fmt_score(stats.score.bleu)),
            ];
            ("noise", rows)
        }
        _ => bail!("pass exactly one of --predictions or --challenge"),
    };
    let repr = config_repr(&[("command", "eval".to_string()), ("mode", mode.to_string())]);
    let meta = RunMeta::new(&repr, settings.seed);
    write_report(&args.out, &meta, &rows)?;
    println!("wrote {mode} report to {}", args.out.display());
    Ok(())
}

pub fn run_textmetrics(args: &TextmetricsArgs, settings: &Settings) -> Result<()> {
    let hyp_raw = read_file(&args.hyp)?;
    let ref_raw = read_file(&args.reference)?;
    let hyps: Vec<&str> = hyp_raw.lines().collect();
    let refs: Vec<&str> = ref_raw.lines().collect();
    if hyps.len() != refs.len() {
        bail!(
            "{} has {} lines but {} has {}",
            args.hyp.display(),
            hyps.len(),
            args.reference.display(),
            refs.len()
        );
    }
    let opts = MetricOptions::default();
    let pairs = || hyps.iter().copied().zip(refs.iter().copied());
    let cer = corpus_cer(pairs(), &opts).context("computing CER")?;
    let wer = corpus_wer(pairs(), &opts).context("computing WER")?;
    let bleu = corpus_bleu(&hyps, &refs).context("computing BLEU")?;
    let rows = vec![
        ("n", hyps.len().to_string()),
        ("cer", fmt_score(cer)),
        ("wer", fmt_score(wer)),
        ("bleu", fmt_score(bleu)),
    ];
    let repr = config_repr(&[("command", "textmetrics".to_string())]);
    let meta = RunMeta::new(&repr, settings.seed);
    write_report(&args.out, &meta, &rows)?;
    println!("wrote text metrics to {}", args.out.display());
    Ok(())
}
