//! Challenge-set generation: fold each question through the policy
//! chain, pair the survivors with their clean originals, and record
//! provenance plus an optional engine audit trail.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use noiseqa_core::dataset::{pair_challenge, Provenance, QuestionRecord};
use noiseqa_core::noise::apply_policy;

use crate::adapters::ops::{back_translate, tts_then_asr};
use crate::adapters::AuditLog;
use crate::cli::NoiseArgs;
use crate::cli::Settings;
use crate::commands::{write_audit, OpEngines, PolicyResources};
use crate::formats::challenge::save_challenge;
use crate::formats::squad::load_squad;
use crate::meta::{config_repr, RunMeta};
use crate::pipeline::run_pool;
use crate::policy::{parse_policies, ParsedPolicy, PolicyDefaults, PolicyStep};

enum Processed {
    Done { qid: String, text: String, flags: Vec<&'static str>, audit: AuditLog },
    /// Engine gave up after retries; the record is left out.
    Skipped { qid: String, reason: String, audit: AuditLog },
    /// Policy-level fault; the whole run is wrong, not one record.
    Failed { qid: String, message: String },
}

fn process_record(
    record: &QuestionRecord,
    policies: &[ParsedPolicy],
    resources: &PolicyResources,
    ops: &OpEngines<'_>,
) -> Processed {
    let qid = record.qid.clone();
    let retry = resources.retry();
    let mut text = record.question.clone();
    let mut flags = Vec::new();
    let mut audit = AuditLog::new();
    for policy in policies {
        let step = match &policy.step {
            PolicyStep::Core(noise_policy) => {
                match apply_policy(noise_policy, &resources.noise_ctx(&qid), &qid, &text) {
                    Ok(outcome) => {
                        flags.extend(outcome.flags.iter().map(|f| f.as_str()));
                        Ok(outcome.text)
                    }
                    Err(e) => {
                        let message = format!("policy {:?}: {e}", policy.name);
                        return Processed::Failed { qid, message };
                    }
                }
            }
            PolicyStep::Asr => tts_then_asr(
                &text,
                ops.tts.expect("resolved"),
                ops.asr.expect("resolved"),
                retry,
                &mut audit,
                Some(&qid),
            )
            .map_err(|e| format!("policy {:?}: {e}", policy.name)),
            PolicyStep::Mt { pivot } => back_translate(
                &text,
                pivot,
                ops.mt.expect("resolved"),
                retry,
                &mut audit,
                Some(&qid),
            )
            .map_err(|e| format!("policy {:?}: {e}", policy.name)),
        };
        match step {
            Ok(next) => text = next,
            Err(reason) => return Processed::Skipped { qid, reason, audit },
        }
    }
    Processed::Done { qid, text, flags, audit }
}

fn infer_interface(policies: &[ParsedPolicy]) -> String {
    if policies.iter().any(|p| matches!(p.step, PolicyStep::Asr)) {
        "asr".to_string()
    } else if policies.iter().any(|p| matches!(p.step, PolicyStep::Mt { .. })) {
        "mt".to_string()
    } else {
        "keyboard".to_string()
    }
}

pub fn run(args: &NoiseArgs, settings: &Settings) -> Result<()> {
    let dataset = load_squad(&args.dataset)?;
    let defaults = PolicyDefaults {
        prob: args.prob.unwrap_or(settings.prob),
        pivot: args.pivot.clone().unwrap_or_else(|| settings.pivot.clone()),
        seed: settings.seed,
    };
    let policies = parse_policies(&args.policies, &defaults)?;
    let resources = PolicyResources::load(
        &policies,
        &dataset,
        args.lexicon.as_deref(),
        args.annotations.as_deref(),
        args.adapter_config.as_deref(),
    )?;
    let ops = resources.op_engines(&policies)?;

    let records: Vec<&QuestionRecord> = dataset.questions.values().collect();
    let results = run_pool(settings.jobs, &records, |record| {
        process_record(record, &policies, &resources, &ops)
    })?;

    let mut noisy = BTreeMap::new();
    let mut audit_log = AuditLog::new();
    let mut flag_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut skipped = 0usize;
    for result in results {
        match result {
            Processed::Done { qid, text, flags, audit } => {
                for flag in flags {
                    *flag_counts.entry(flag).or_default() += 1;
                }
                audit_log.extend(audit);
                noisy.insert(qid, text);
            }
            Processed::Skipped { qid, reason, audit } => {
                eprintln!("warning: skipping {qid}: {reason}");
                audit_log.extend(audit);
                skipped += 1;
            }
            Processed::Failed { qid, message } => bail!("{qid}: {message}"),
        }
    }
    for (flag, count) in &flag_counts {
        eprintln!("warning: {count} records flagged {flag}");
    }
    if noisy.is_empty() {
        eprintln!("warning: every record was skipped; challenge set is empty");
    }

    let interface = args.interface.clone().unwrap_or_else(|| infer_interface(&policies));
    let generator =
        policies.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join("+");
    let mut parameters = BTreeMap::new();
    for policy in &policies {
        parameters.insert(policy.name.clone(), policy.repr.clone());
    }
    let provenance = Provenance {
        interface: interface.clone(),
        generator: generator.clone(),
        parameters,
        seed: settings.seed,
    };
    let set = pair_challenge(&dataset, &noisy, provenance)?;

    let repr = config_repr(&[
        ("command", "noise".to_string()),
        ("interface", interface),
        ("policies", policies.iter().map(|p| p.repr.clone()).collect::<Vec<_>>().join(";")),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    save_challenge(&args.out, &set, &meta)?;
    if let Some(path) = &args.audit {
        write_audit(path, &meta, &audit_log)?;
    }
    println!(
        "wrote {} pairs ({} skipped) to {}",
        set.pairs.len(),
        skipped,
        args.out.display()
    );
    Ok(())
}
