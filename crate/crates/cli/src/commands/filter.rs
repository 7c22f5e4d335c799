//! Misspelling-lexicon filtering and threshold calibration. Filtering
//! keeps pairs a keyboard could plausibly produce and whose
//! pronunciations differ; calibration sweeps the pronunciation
//! threshold against human interface/non-interface labels.

use std::path::Path;

use anyhow::{bail, Context, Result};
use noiseqa_core::keyboard::KeyboardLayout;
use noiseqa_core::misspell::{agreement, filter_lexicon, FilterConfig, HumanLabel};
use noiseqa_core::phonetic::G2pTable;

use crate::cli::{CalibrateArgs, FilterArgs, LexiconFormatArg, Settings};
use crate::commands::{fmt_score, parse_categories};
use crate::formats::g2p::load_g2p;
use crate::formats::lexicon::{load_pairs_tsv, load_pairs_wiki, save_pairs_tsv};
use crate::formats::{read_file, write_file};
use crate::meta::{config_repr, RunMeta};
use crate::tsv;

fn load_g2p_opt(path: Option<&Path>) -> Result<Option<G2pTable>> {
    path.map(load_g2p).transpose()
}

pub fn run(args: &FilterArgs, settings: &Settings) -> Result<()> {
    let pairs = match args.format {
        LexiconFormatArg::Tsv => load_pairs_tsv(&args.input)?,
        LexiconFormatArg::Wiki => load_pairs_wiki(&args.input)?,
    };
    let mut cfg = FilterConfig::default();
    cfg.pron_threshold = args.pron_threshold.unwrap_or(settings.pron_threshold);
    if let Some(spec) = &args.categories {
        cfg.retained_categories = parse_categories(spec)?;
    }
    let g2p = load_g2p_opt(args.g2p.as_deref())?;

    let layout = KeyboardLayout::qwerty();
    let (lexicon, audit) = filter_lexicon(
        pairs.iter().map(|(w, m)| (w.as_str(), m.as_str())),
        &cfg,
        &layout,
        g2p.as_ref(),
    )?;

    let retained: Vec<(String, String)> = lexicon
        .iter()
        .flat_map(|(word, misspellings)| {
            misspellings.iter().map(move |m| (word.to_string(), m.clone()))
        })
        .collect();
    let categories = cfg
        .retained_categories
        .iter()
        .map(|c| c.as_str())
        .collect::<Vec<_>>()
        .join(",");
    let repr = config_repr(&[
        ("command", "filter-misspellings".to_string()),
        ("pron_threshold", fmt_score(cfg.pron_threshold)),
        ("categories", categories),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    save_pairs_tsv(&args.out, &retained, &meta)?;

    if let Some(path) = &args.audit {
        let mut content = meta.tsv_header();
        content.push_str("# columns=word,misspelling,category,pron_distance,verdict\n");
        for record in &audit {
            content.push_str(&tsv::format_row(&[
                &record.word,
                &record.misspelling,
                record.category.map(|c| c.as_str()).unwrap_or(""),
                &record.pron_distance.map(fmt_score).unwrap_or_default(),
                record.verdict.as_str(),
            ]));
        }
        write_file(path, &content)?;
    }
    println!(
        "retained {} of {} pairs covering {} words, wrote {}",
        lexicon.pair_count(),
        pairs.len(),
        lexicon.word_count(),
        args.out.display()
    );
    Ok(())
}

fn parse_label(raw: &str) -> Result<HumanLabel> {
    match raw.to_ascii_lowercase().as_str() {
        "interface" => Ok(HumanLabel::Interface),
        "non-interface" => Ok(HumanLabel::NonInterface),
        _ => bail!("label {raw:?} is not interface or non-interface"),
    }
}

pub fn run_calibrate(args: &CalibrateArgs, settings: &Settings) -> Result<()> {
    let content = read_file(&args.input)?;
    let rows = tsv::parse_rows_with_arity(&content, 3, "labeled pair")?;
    let mut pairs = Vec::new();
    let mut labels = Vec::new();
    for (lineno, fields) in &rows {
        pairs.push((fields[0].clone(), fields[1].clone()));
        labels.push(
            parse_label(&fields[2])
                .with_context(|| format!("{} line {lineno}", args.input.display()))?,
        );
    }
    if pairs.is_empty() {
        bail!("{} has no labeled pairs", args.input.display());
    }

    let mut cfg = FilterConfig::default();
    if let Some(spec) = &args.categories {
        cfg.retained_categories = parse_categories(spec)?;
    }
    let g2p = load_g2p_opt(args.g2p.as_deref())?;
    let layout = KeyboardLayout::qwerty();

    let mut sweep = Vec::new();
    for step in 0..=20u32 {
        let threshold = f64::from(step) * 0.05;
        cfg.pron_threshold = threshold.min(1.0);
        let (_, audit) = filter_lexicon(
            pairs.iter().map(|(w, m)| (w.as_str(), m.as_str())),
            &cfg,
            &layout,
            g2p.as_ref(),
        )?;
        let sample: Vec<(noiseqa_core::misspell::Verdict, HumanLabel)> =
            audit.iter().map(|r| r.verdict).zip(labels.iter().copied()).collect();
        let score = agreement(&sample)?;
        sweep.push((cfg.pron_threshold, score));
    }
    let (best_threshold, best_score) = sweep
        .iter()
        .copied()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
        .expect("sweep is never empty");

    let repr = config_repr(&[
        ("command", "calibrate-filter".to_string()),
        (
            "categories",
            cfg.retained_categories.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(","),
        ),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    let mut out = meta.tsv_header();
    out.push_str(&format!("# best_threshold={}\n", format_threshold(best_threshold)));
    out.push_str(&format!("# best_agreement={}\n", fmt_score(best_score)));
    out.push_str("# columns=threshold,agreement\n");
    for (threshold, score) in &sweep {
        out.push_str(&tsv::format_row(&[&format_threshold(*threshold), &fmt_score(*score)]));
    }
    write_file(&args.out, &out)?;
    println!(
        "best threshold {} (agreement {}), wrote {}",
        format_threshold(best_threshold),
        fmt_score(best_score),
        args.out.display()
    );
    Ok(())
}

fn format_threshold(t: f64) -> String {
    format!("{t:.2}")
}
