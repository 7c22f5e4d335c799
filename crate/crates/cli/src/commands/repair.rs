//! Context-based repair over a challenge set: optional spellcheck
//! engine first, then one replacement pass against each question's
//! paragraph, then optional question-mark restoration.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use noiseqa_core::dataset::{pair_challenge, ChallengePair, Provenance};
use noiseqa_core::repair::{
    context_repair, restore_final_qmark, Denominator, RepairConfig, RepairEdit, RepairMode,
};

use crate::adapters::ops::spellcheck;
use crate::adapters::config::EngineSet;
use crate::adapters::AuditLog;
use crate::cli::{DenominatorArg, RepairArgs, RepairModeArg, Settings};
use crate::commands::{fmt_score, write_audit, PolicyResources};
use crate::formats::challenge::{load_challenge, save_challenge};
use crate::formats::squad::load_squad;
use crate::formats::write_file;
use crate::meta::{config_repr, RunMeta};
use crate::pipeline::run_pool;
use crate::tsv;

struct Repaired {
    qid: String,
    text: String,
    edits: Vec<RepairEdit>,
    audit: AuditLog,
    spell_warning: Option<String>,
    failure: Option<String>,
}

pub fn run(args: &RepairArgs, settings: &Settings) -> Result<()> {
    let dataset = load_squad(&args.dataset)?;
    let set = load_challenge(&args.challenge, &dataset)?;

    let mode = match args.mode {
        RepairModeArg::Content => RepairMode::ContentWord,
        RepairModeArg::Ne => RepairMode::NamedEntity,
    };
    let mut cfg = RepairConfig::new(mode);
    cfg.threshold = args.threshold.unwrap_or(settings.threshold);
    cfg.denominator = match args.denominator {
        DenominatorArg::Max => Denominator::MaxLen,
        DenominatorArg::Ref => Denominator::RefLen,
    };
    cfg.validate()?;

    let engines = match &args.adapter_config {
        Some(path) => Some(EngineSet::load(path)?),
        None if args.spellcheck => bail!("--spellcheck needs --adapter-config"),
        None => None,
    };
    let spell_engine = match (&engines, args.spellcheck) {
        (Some(set), true) => Some(set.engine_for("spellcheck")?),
        _ => None,
    };
    let retry = engines.as_ref().map(|e| e.retry()).unwrap_or_default();

    // Annotations describe the noisy questions, so index bounds are
    // checked against the challenge text rather than the dataset.
    let resources = PolicyResources::load_for_texts(
        &set.pairs
            .iter()
            .map(|(qid, pair)| (qid.clone(), pair.noisy.clone()))
            .collect(),
        args.annotations.as_deref(),
    )?;

    let pairs: Vec<(&String, &ChallengePair)> = set.pairs.iter().collect();
    let results = run_pool(settings.jobs, &pairs, |(qid, pair)| {
        let mut audit = AuditLog::new();
        let mut spell_warning = None;
        let mut text = pair.noisy.clone();
        if let Some(engine) = spell_engine {
            match spellcheck(&text, engine, retry, &mut audit, Some(qid)) {
                Ok(corrected) => text = corrected,
                Err(e) => spell_warning = Some(format!("{qid}: spellcheck failed, text kept: {e}")),
            }
        }
        let context = &dataset.context_of(qid).expect("challenge qids validated").text;
        let (text, edits, failure) =
            match context_repair(&text, context, &cfg, resources.tagger_for(qid), resources.ner_for(qid)) {
                Ok(outcome) => (outcome.text, outcome.edits, None),
                Err(e) => (text, Vec::new(), Some(format!("{qid}: {e}"))),
            };
        let text = if args.restore_qmark { restore_final_qmark(&text) } else { text };
        Repaired { qid: (*qid).clone(), text, edits, audit, spell_warning, failure }
    })?;

    let mut repaired = BTreeMap::new();
    let mut audit_log = AuditLog::new();
    let mut edit_rows = String::new();
    let mut edit_count = 0usize;
    for r in results {
        if let Some(message) = r.failure {
            bail!("{message}");
        }
        if let Some(warning) = r.spell_warning {
            eprintln!("warning: {warning}");
        }
        for edit in &r.edits {
            edit_rows.push_str(&tsv::format_row(&[
                &r.qid,
                &edit.token_index.to_string(),
                &edit.original,
                &edit.replacement,
                &fmt_score(edit.distance),
                edit.mode.as_str(),
            ]));
            edit_count += 1;
        }
        audit_log.extend(r.audit);
        repaired.insert(r.qid, r.text);
    }

    let mut parameters = set.provenance.parameters.clone();
    parameters.insert("repair.mode".to_string(), mode.as_str().to_string());
    parameters.insert("repair.threshold".to_string(), fmt_score(cfg.threshold));
    parameters.insert("repair.denominator".to_string(), denominator_name(&cfg));
    parameters.insert("repair.restore_qmark".to_string(), args.restore_qmark.to_string());
    parameters.insert("repair.spellcheck".to_string(), args.spellcheck.to_string());
    let provenance = Provenance {
        interface: set.provenance.interface.clone(),
        generator: format!("{}+repair", set.provenance.generator),
        parameters,
        seed: set.provenance.seed,
    };
    let out_set = pair_challenge(&dataset, &repaired, provenance)?;

    let repr = config_repr(&[
        ("command", "repair".to_string()),
        ("mode", mode.as_str().to_string()),
        ("threshold", fmt_score(cfg.threshold)),
        ("denominator", denominator_name(&cfg)),
        ("restore_qmark", args.restore_qmark.to_string()),
        ("spellcheck", args.spellcheck.to_string()),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    save_challenge(&args.out, &out_set, &meta)?;
    if let Some(path) = &args.edits {
        let mut content = meta.tsv_header();
        content.push_str("# columns=qid,token_index,original,replacement,distance,mode\n");
        content.push_str(&edit_rows);
        write_file(path, &content)?;
    }
    if let Some(path) = &args.audit {
        write_audit(path, &meta, &audit_log)?;
    }
    println!(
        "repaired {} questions with {} edits, wrote {}",
        out_set.pairs.len(),
        edit_count,
        args.out.display()
    );
    Ok(())
}

fn denominator_name(cfg: &RepairConfig) -> String {
    match cfg.denominator {
        Denominator::MaxLen => "max".to_string(),
        Denominator::RefLen => "ref".to_string(),
    }
}
