//! Challenge-set statistics and stratified evaluation reports.

use std::collections::BTreeSet;

use anyhow::{bail, Context, Result};
use noiseqa_core::analysis::{noise_stats, stratify, Predicate, StratumReport};

use crate::cli::{Settings, StatsArgs, StratifyArgs};
use crate::commands::fmt_score;
use crate::formats::challenge::load_challenge;
use crate::formats::predictions::load_predictions;
use crate::formats::squad::load_squad;
use crate::formats::{read_file, write_file};
use crate::meta::{config_repr, RunMeta};
use crate::tsv;

pub fn run(args: &StatsArgs, settings: &Settings) -> Result<()> {
    let dataset = load_squad(&args.dataset)?;
    let set = load_challenge(&args.challenge, &dataset)?;
    let stats = noise_stats(&set)?;

    let repr = config_repr(&[("command", "stats".to_string())]);
    let meta = RunMeta::new(&repr, settings.seed);
    let mut out = meta.tsv_header();
    out.push_str(&format!("# n={}\n", stats.n));
    out.push_str(&format!(
        "# word_corruption_rate={}\n",
        fmt_score(stats.word_corruption_rate)
    ));
    out.push_str(&format!("# pct_char_diff_ge1={}\n", fmt_score(stats.pct_char_diff_ge1)));
    out.push_str(&format!("# pct_char_diff_ge2={}\n", fmt_score(stats.pct_char_diff_ge2)));
    out.push_str(&format!("# cer={}\n", fmt_score(stats.score.cer)));
    out.push_str(&format!("# wer={}\n", fmt_score(stats.score.wer)));
    out.push_str(&format!("# bleu={}\n", fmt_score(stats.score.bleu)));
    out.push_str("# columns=qid,char_diff,clean_words,corrupted_words\n");
    for row in &stats.rows {
        out.push_str(&tsv::format_row(&[
            &row.qid,
            &row.char_diff.to_string(),
            &row.clean_words.to_string(),
            &row.corrupted_words.to_string(),
        ]));
    }
    write_file(&args.out, &out)?;
    println!(
        "measured {} pairs (corruption rate {}), wrote {}",
        stats.n,
        fmt_score(stats.word_corruption_rate),
        args.out.display()
    );
    Ok(())
}

fn parse_predicate(spec: &str) -> Result<Predicate> {
    if spec == "contains_numeral" {
        return Ok(Predicate::ContainsNumeral);
    }
    match spec.split_once(':') {
        Some(("contains_token", token)) if !token.is_empty() => {
            Ok(Predicate::ContainsToken(token.to_string()))
        }
        Some(("flagged", path)) if !path.is_empty() => {
            let content =
                read_file(std::path::Path::new(path)).context("reading flagged qid list")?;
            let qids: BTreeSet<String> = content
                .lines()
                .map(str::trim)
                .filter(|line| !line.is_empty() && !line.starts_with('#'))
                .map(str::to_string)
                .collect();
            Ok(Predicate::Flagged(qids))
        }
        _ => bail!(
            "predicate {spec:?} is not contains_token:WORD, contains_numeral, or flagged:FILE"
        ),
    }
}

fn stratum_fields(report: &StratumReport) -> Vec<String> {
    let mut fields = vec![report.predicate.clone(), report.n.to_string()];
    match &report.qa {
        Some(qa) => {
            fields.push(fmt_score(qa.em));
            fields.push(fmt_score(qa.f1));
        }
        None => {
            fields.push(String::new());
            fields.push(String::new());
        }
    }
    match &report.noise {
        Some(noise) => {
            fields.push(fmt_score(noise.cer));
            fields.push(fmt_score(noise.wer));
            fields.push(fmt_score(noise.bleu));
        }
        None => {
            fields.push(String::new());
            fields.push(String::new());
            fields.push(String::new());
        }
    }
    fields
}

pub fn run_stratify(args: &StratifyArgs, settings: &Settings) -> Result<()> {
    let dataset = load_squad(&args.dataset)?;
    let predictions = load_predictions(&args.predictions)?;
    let predicate = parse_predicate(&args.predicate)?;
    let challenge = args
        .challenge
        .as_ref()
        .map(|path| load_challenge(path, &dataset))
        .transpose()?;
    let reports = stratify(&dataset, &predictions, &predicate, challenge.as_ref())?;

    let repr = config_repr(&[
        ("command", "stratify".to_string()),
        ("predicate", predicate.name()),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    let mut out = meta.tsv_header();
    out.push_str("# columns=stratum,n,em,f1,cer,wer,bleu\n");
    for report in &reports {
        let fields = stratum_fields(report);
        let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
        out.push_str(&tsv::format_row(&refs));
    }
    write_file(&args.out, &out)?;
    println!(
        "stratified {} questions by {}, wrote {}",
        dataset.questions.len(),
        predicate.name(),
        args.out.display()
    );
    Ok(())
}
