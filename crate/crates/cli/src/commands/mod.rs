//! One module per subcommand plus the resources they share.

pub mod augment;
pub mod eval;
pub mod filter;
pub mod noise;
pub mod repair;
pub mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context, Result};
use noiseqa_core::dataset::{AnnotationSidecar, Dataset};
use noiseqa_core::keyboard::KeyboardLayout;
use noiseqa_core::misspell::ErrorCategory;
use noiseqa_core::noise::{MisspellingLexicon, NoiseContext};
use noiseqa_core::text::tokenize;
use noiseqa_core::wordclass::{
    HeuristicNer, HeuristicTagger, NerSource, SidecarNer, SidecarTagger, Tagger,
};

use crate::adapters::config::EngineSet;
use crate::adapters::ops::RetryPolicy;
use crate::adapters::{AuditEntry, Engine};
use crate::formats;
use crate::meta::RunMeta;
use crate::policy::{ParsedPolicy, PolicyStep};
use crate::tsv;

pub(crate) fn fmt_score(x: f64) -> String {
    format!("{x:.4}")
}

/// Metadata header, then one `key<TAB>value` row per entry.
pub(crate) fn write_report(path: &Path, meta: &RunMeta, rows: &[(&str, String)]) -> Result<()> {
    let mut out = meta.tsv_header();
    for (key, value) in rows {
        out.push_str(&tsv::format_row(&[key, value]));
    }
    formats::write_file(path, &out)
}

pub(crate) fn write_audit(path: &Path, meta: &RunMeta, entries: &[AuditEntry]) -> Result<()> {
    let mut out = meta.tsv_header();
    out.push_str("# columns=request_hash,engine_id,outcome,detail\n");
    for e in entries {
        out.push_str(&tsv::format_row(&[&e.request_hash, &e.engine_id, &e.outcome, &e.detail]));
    }
    formats::write_file(path, &out)
}

const ALL_CATEGORIES: [ErrorCategory; 8] = [
    ErrorCategory::Apostrophe,
    ErrorCategory::Whitespace,
    ErrorCategory::Deletion,
    ErrorCategory::Substitution,
    ErrorCategory::AdjSwap,
    ErrorCategory::Insertion,
    ErrorCategory::KeySwap,
    ErrorCategory::Multiple,
];

pub(crate) fn parse_categories(spec: &str) -> Result<BTreeSet<ErrorCategory>> {
    let mut set = BTreeSet::new();
    for name in spec.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        match ALL_CATEGORIES.iter().find(|c| c.as_str().eq_ignore_ascii_case(name)) {
            Some(cat) => {
                set.insert(*cat);
            }
            None => bail!(
                "unknown error category {name:?}; expected one of {}",
                ALL_CATEGORIES.map(|c| c.as_str()).join(", ")
            ),
        }
    }
    if set.is_empty() {
        bail!("no error categories given");
    }
    Ok(set)
}

/// Everything the policy runners need besides the dataset itself:
/// loaded engines, the misspelling lexicon, keyboard geometry, and
/// per-question taggers (annotation sidecar entries override the
/// heuristics).
pub(crate) struct PolicyResources {
    pub engines: Option<EngineSet>,
    lexicon: Option<MisspellingLexicon>,
    layout: KeyboardLayout,
    heuristic_tagger: HeuristicTagger,
    heuristic_ner: HeuristicNer,
    sidecar_taggers: BTreeMap<String, SidecarTagger>,
    sidecar_ners: BTreeMap<String, SidecarNer>,
}

impl PolicyResources {
    pub fn load(
        policies: &[ParsedPolicy],
        dataset: &Dataset,
        lexicon_path: Option<&Path>,
        annotations_path: Option<&Path>,
        adapter_path: Option<&Path>,
    ) -> Result<PolicyResources> {
        let engines = match adapter_path {
            Some(path) => Some(EngineSet::load(path)?),
            None => {
                if let Some(p) = policies.iter().find(|p| p.step.needs_adapters()) {
                    bail!("policy {:?} needs --adapter-config", p.name);
                }
                None
            }
        };
        let lexicon = match lexicon_path {
            Some(path) => {
                let pairs = formats::lexicon::load_pairs_tsv(path)?;
                Some(formats::lexicon::lexicon_from_pairs(&pairs)?)
            }
            None => {
                if let Some(p) = policies.iter().find(|p| p.step.needs_lexicon()) {
                    bail!("policy {:?} needs --lexicon", p.name);
                }
                None
            }
        };
        let mut sidecar_taggers = BTreeMap::new();
        let mut sidecar_ners = BTreeMap::new();
        if let Some(path) = annotations_path {
            let sidecar = formats::annotations::load_and_validate(path, dataset)?;
            split_sidecar(&sidecar, &mut sidecar_taggers, &mut sidecar_ners);
        }
        Ok(PolicyResources {
            engines,
            lexicon,
            layout: KeyboardLayout::qwerty(),
            heuristic_tagger: HeuristicTagger::new(),
            heuristic_ner: HeuristicNer::new(),
            sidecar_taggers,
            sidecar_ners,
        })
    }

    /// Variant for stages that run on rewritten questions: annotation
    /// indices are checked against the supplied texts instead of the
    /// dataset, and no engines or lexicon are loaded.
    pub fn load_for_texts(
        texts: &BTreeMap<String, String>,
        annotations_path: Option<&Path>,
    ) -> Result<PolicyResources> {
        let mut sidecar_taggers = BTreeMap::new();
        let mut sidecar_ners = BTreeMap::new();
        if let Some(path) = annotations_path {
            let sidecar = formats::annotations::load_annotations(path)?;
            validate_against_texts(&sidecar, texts)
                .with_context(|| path.display().to_string())?;
            split_sidecar(&sidecar, &mut sidecar_taggers, &mut sidecar_ners);
        }
        Ok(PolicyResources {
            engines: None,
            lexicon: None,
            layout: KeyboardLayout::qwerty(),
            heuristic_tagger: HeuristicTagger::new(),
            heuristic_ner: HeuristicNer::new(),
            sidecar_taggers,
            sidecar_ners,
        })
    }

    pub fn noise_ctx(&self, qid: &str) -> NoiseContext<'_> {
        NoiseContext {
            layout: &self.layout,
            lexicon: self.lexicon.as_ref(),
            tagger: self.tagger_for(qid),
            ner: self.ner_for(qid),
        }
    }

    pub fn tagger_for(&self, qid: &str) -> &dyn Tagger {
        match self.sidecar_taggers.get(qid) {
            Some(t) => t,
            None => &self.heuristic_tagger,
        }
    }

    pub fn ner_for(&self, qid: &str) -> &dyn NerSource {
        match self.sidecar_ners.get(qid) {
            Some(n) => n,
            None => &self.heuristic_ner,
        }
    }

    pub fn retry(&self) -> RetryPolicy {
        self.engines.as_ref().map(|e| e.retry()).unwrap_or_default()
    }

    /// Resolve the engines the given policies will call, failing early
    /// when an op slot is unassigned.
    pub fn op_engines(&self, policies: &[ParsedPolicy]) -> Result<OpEngines<'_>> {
        let mut ops = OpEngines { mt: None, tts: None, asr: None };
        let wants_mt = policies.iter().any(|p| matches!(p.step, PolicyStep::Mt { .. }));
        let wants_asr = policies.iter().any(|p| matches!(p.step, PolicyStep::Asr));
        if wants_mt || wants_asr {
            let set = self.engines.as_ref().context("adapter policies need --adapter-config")?;
            if wants_mt {
                ops.mt = Some(set.engine_for("mt")?);
            }
            if wants_asr {
                ops.tts = Some(set.engine_for("tts")?);
                ops.asr = Some(set.engine_for("asr")?);
            }
        }
        Ok(ops)
    }
}

pub(crate) struct OpEngines<'a> {
    pub mt: Option<&'a dyn Engine>,
    pub tts: Option<&'a dyn Engine>,
    pub asr: Option<&'a dyn Engine>,
}

fn validate_against_texts(
    sidecar: &AnnotationSidecar,
    texts: &BTreeMap<String, String>,
) -> Result<()> {
    let bounds: BTreeMap<&str, usize> =
        texts.iter().map(|(qid, text)| (qid.as_str(), tokenize(text).len())).collect();
    let mut indexed: Vec<(&String, Vec<usize>)> = Vec::new();
    for (qid, entries) in &sidecar.pos {
        indexed.push((qid, entries.keys().copied().collect()));
    }
    for (qid, entries) in &sidecar.ne {
        indexed.push((qid, entries.keys().copied().collect()));
    }
    for (qid, indices) in indexed {
        let n = *bounds
            .get(qid.as_str())
            .with_context(|| format!("annotations name unknown qid {qid:?}"))?;
        for index in indices {
            if index >= n {
                bail!("annotation for {qid:?} names token {index}, question has {n}");
            }
        }
    }
    Ok(())
}

fn split_sidecar(
    sidecar: &AnnotationSidecar,
    taggers: &mut BTreeMap<String, SidecarTagger>,
    ners: &mut BTreeMap<String, SidecarNer>,
) {
    for (qid, pos) in &sidecar.pos {
        taggers.insert(qid.clone(), SidecarTagger::new(pos.clone()));
    }
    for (qid, ne) in &sidecar.ne {
        ners.insert(qid.clone(), SidecarNer::new(ne.clone()));
    }
}
