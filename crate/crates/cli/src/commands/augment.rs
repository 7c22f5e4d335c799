//! Training-set augmentation: every policy contributes one rewritten
//! copy of each question, qids suffixed with the policy name, contexts
//! and answers untouched.

use std::sync::Mutex;

use anyhow::Result;
use noiseqa_core::dataset::{NamedTransform, QuestionTransform, TransformError};
use noiseqa_core::dataset::emit_augmented;
use noiseqa_core::noise::apply_policy;

use crate::adapters::ops::{back_translate, tts_then_asr};
use crate::adapters::AuditLog;
use crate::cli::{AugmentArgs, Settings};
use crate::commands::{write_audit, OpEngines, PolicyResources};
use crate::formats::squad::{load_squad, save_squad};
use crate::meta::{config_repr, RunMeta};
use crate::policy::{parse_policies, ParsedPolicy, PolicyDefaults, PolicyStep};

/// Adapts one policy step into a dataset transform. Engine calls feed
/// a shared audit log; any failure aborts the augmentation, since a
/// training set with silently missing copies would be misleading.
struct StepTransform<'a> {
    policy: &'a ParsedPolicy,
    resources: &'a PolicyResources,
    ops: &'a OpEngines<'a>,
    audit: &'a Mutex<AuditLog>,
    flags: &'a Mutex<Vec<(String, &'static str)>>,
}

impl QuestionTransform for StepTransform<'_> {
    fn transform(&self, qid: &str, question: &str) -> Result<String, TransformError> {
        let retry = self.resources.retry();
        match &self.policy.step {
            PolicyStep::Core(noise_policy) => {
                let ctx = self.resources.noise_ctx(qid);
                let outcome = apply_policy(noise_policy, &ctx, qid, question)
                    .map_err(|e| TransformError { message: e.to_string() })?;
                let mut flags = self.flags.lock().expect("flag log poisoned");
                for flag in &outcome.flags {
                    flags.push((qid.to_string(), flag.as_str()));
                }
                Ok(outcome.text)
            }
            PolicyStep::Asr => {
                let mut audit = self.audit.lock().expect("audit log poisoned");
                tts_then_asr(
                    question,
                    self.ops.tts.expect("resolved"),
                    self.ops.asr.expect("resolved"),
                    retry,
                    &mut audit,
                    Some(qid),
                )
                .map_err(|e| TransformError { message: e.to_string() })
            }
            PolicyStep::Mt { pivot } => {
                let mut audit = self.audit.lock().expect("audit log poisoned");
                back_translate(
                    question,
                    pivot,
                    self.ops.mt.expect("resolved"),
                    retry,
                    &mut audit,
                    Some(qid),
                )
                .map_err(|e| TransformError { message: e.to_string() })
            }
        }
    }
}

pub fn run(args: &AugmentArgs, settings: &Settings) -> Result<()> {
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

    let audit = Mutex::new(AuditLog::new());
    let flags = Mutex::new(Vec::new());
    let steps: Vec<StepTransform<'_>> = policies
        .iter()
        .map(|policy| StepTransform {
            policy,
            resources: &resources,
            ops: &ops,
            audit: &audit,
            flags: &flags,
        })
        .collect();
    let named: Vec<NamedTransform<'_>> = steps
        .iter()
        .map(|step| NamedTransform { name: step.policy.name.clone(), transform: step })
        .collect();
    let augmented = emit_augmented(&dataset, &named)?;

    let repr = config_repr(&[
        ("command", "augment".to_string()),
        ("policies", policies.iter().map(|p| p.repr.clone()).collect::<Vec<_>>().join(";")),
    ]);
    let meta = RunMeta::new(&repr, settings.seed);
    save_squad(&args.out, &augmented, Some(&meta))?;

    let mut flag_counts = std::collections::BTreeMap::new();
    for (_, flag) in flags.into_inner().expect("flag log poisoned") {
        *flag_counts.entry(flag).or_insert(0usize) += 1;
    }
    for (flag, count) in flag_counts {
        eprintln!("warning: {count} records flagged {flag}");
    }
    if let Some(path) = &args.audit {
        write_audit(path, &meta, &audit.into_inner().expect("audit log poisoned"))?;
    }
    println!(
        "augmented {} questions to {}, wrote {}",
        dataset.questions.len(),
        augmented.questions.len(),
        args.out.display()
    );
    Ok(())
}
