//! Policy specs from the command line: `kind` or
//! `kind:key=value,key=value`. Synthetic kinds map onto the noise
//! generators; `asr` and `mt` route through the engine adapters.

use anyhow::{bail, Result};
use noiseqa_core::hash::{fnv1a64, splitmix64};
use noiseqa_core::noise::{
    DropClass, NoisePolicy, PerturbClass, PerturbMechanism, PolicyKind,
};

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyStep {
    Core(NoisePolicy),
    Asr,
    Mt { pivot: String },
}

impl PolicyStep {
    pub fn needs_adapters(&self) -> bool {
        matches!(self, PolicyStep::Asr | PolicyStep::Mt { .. })
    }

    pub fn needs_lexicon(&self) -> bool {
        match self {
            PolicyStep::Core(policy) => matches!(
                policy.kind,
                PolicyKind::MisspellLexicon { .. }
                    | PolicyKind::Perturb { mechanism: PerturbMechanism::Misspell, .. }
                    | PolicyKind::Perturb { class: PerturbClass::CommonMisspelled, .. }
            ),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedPolicy {
    pub name: String,
    pub step: PolicyStep,
    /// Canonical form for config hashing.
    pub repr: String,
}

#[derive(Debug, Clone)]
pub struct PolicyDefaults {
    pub prob: f64,
    pub pivot: String,
    pub seed: u64,
}

struct Params<'a> {
    kind: &'a str,
    entries: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str) -> Result<Params<'a>> {
        let (kind, rest) = match spec.split_once(':') {
            Some((k, r)) => (k.trim(), r),
            None => (spec.trim(), ""),
        };
        if kind.is_empty() {
            bail!("empty policy spec");
        }
        let mut entries = Vec::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let Some((key, value)) = part.split_once('=') else {
                bail!("policy {kind}: parameter {part} is not key=value");
            };
            entries.push((key.trim(), value.trim()));
        }
        Ok(Params { kind, entries })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        let pos = self.entries.iter().position(|(k, _)| *k == key)?;
        Some(self.entries.remove(pos).1)
    }

    fn take_prob(&mut self, default: f64) -> Result<f64> {
        match self.take("p") {
            None => Ok(default),
            Some(raw) => raw
                .parse::<f64>()
                .map_err(|_| anyhow::anyhow!("policy {}: p={raw} is not a number", self.kind)),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some((key, _)) = self.entries.first() {
            bail!("policy {}: unknown parameter {key}", self.kind);
        }
        Ok(())
    }
}

fn mechanism(raw: Option<&str>, default: PerturbMechanism, kind: &str) -> Result<PerturbMechanism> {
    match raw {
        None => Ok(default),
        Some("key_swap") => Ok(PerturbMechanism::KeySwap),
        Some("misspell") => Ok(PerturbMechanism::Misspell),
        Some(other) => bail!("policy {kind}: unknown mechanism {other}"),
    }
}

/// Parses one policy spec. `index` decorrelates the seeds of repeated
/// policies in one run.
pub fn parse_policy(spec: &str, defaults: &PolicyDefaults, index: usize) -> Result<ParsedPolicy> {
    let mut params = Params::parse(spec)?;
    let name_override = params.take("name").map(str::to_string);
    let kind = params.kind;

    let (step, repr) = match kind {
        "key_swap" => {
            let p = params.take_prob(defaults.prob)?;
            (make_core(kind, PolicyKind::KeySwap { p }, defaults, index, &name_override), format!("key_swap:p={p}"))
        }
        "misspell_lexicon" => {
            // Lexicon hits are replaced unconditionally unless told
            // otherwise.
            let p = params.take_prob(1.0)?;
            (
                make_core(kind, PolicyKind::MisspellLexicon { p }, defaults, index, &name_override),
                format!("misspell_lexicon:p={p}"),
            )
        }
        "strip_punct" => {
            (make_core(kind, PolicyKind::StripPunct, defaults, index, &name_override), kind.to_string())
        }
        "strip_final_qmark" => {
            (make_core(kind, PolicyKind::StripFinalQmark, defaults, index, &name_override), kind.to_string())
        }
        "perturb_function_words" => {
            let mech = mechanism(params.take("mechanism"), PerturbMechanism::KeySwap, kind)?;
            (
                make_core(
                    kind,
                    PolicyKind::Perturb { class: PerturbClass::Function, mechanism: mech },
                    defaults,
                    index,
                    &name_override,
                ),
                format!("{kind}:mechanism={mech:?}"),
            )
        }
        "perturb_content_words" => {
            let mech = mechanism(params.take("mechanism"), PerturbMechanism::KeySwap, kind)?;
            (
                make_core(
                    kind,
                    PolicyKind::Perturb { class: PerturbClass::Content, mechanism: mech },
                    defaults,
                    index,
                    &name_override,
                ),
                format!("{kind}:mechanism={mech:?}"),
            )
        }
        "perturb_common_misspelled" => {
            let mech = mechanism(params.take("mechanism"), PerturbMechanism::Misspell, kind)?;
            (
                make_core(
                    kind,
                    PolicyKind::Perturb { class: PerturbClass::CommonMisspelled, mechanism: mech },
                    defaults,
                    index,
                    &name_override,
                ),
                format!("{kind}:mechanism={mech:?}"),
            )
        }
        "drop_function_words" => (
            make_core(kind, PolicyKind::Drop { class: DropClass::Function }, defaults, index, &name_override),
            kind.to_string(),
        ),
        "drop_content_words" => (
            make_core(kind, PolicyKind::Drop { class: DropClass::Content }, defaults, index, &name_override),
            kind.to_string(),
        ),
        "ne_placeholder" => {
            (make_core(kind, PolicyKind::NePlaceholder, defaults, index, &name_override), kind.to_string())
        }
        "spell_out_numerals" => {
            (make_core(kind, PolicyKind::SpellOutNumerals, defaults, index, &name_override), kind.to_string())
        }
        "asr" => (PolicyStep::Asr, "asr".to_string()),
        "mt" => {
            let pivot = params.take("pivot").unwrap_or(&defaults.pivot).to_string();
            let repr = format!("mt:pivot={pivot}");
            (PolicyStep::Mt { pivot }, repr)
        }
        other => bail!("unknown policy kind {other}"),
    };
    params.finish()?;

    let name = match &step {
        PolicyStep::Core(policy) => policy.name.clone(),
        _ => name_override.unwrap_or_else(|| kind.to_string()),
    };
    Ok(ParsedPolicy { name, step, repr })
}

fn make_core(
    kind: &str,
    policy_kind: PolicyKind,
    defaults: &PolicyDefaults,
    index: usize,
    name_override: &Option<String>,
) -> PolicyStep {
    let name = name_override.clone().unwrap_or_else(|| kind.to_string());
    let seed = splitmix64(defaults.seed ^ fnv1a64(format!("{index}:{name}").as_bytes()));
    PolicyStep::Core(NoisePolicy::new(&name, policy_kind, seed))
}

pub fn parse_policies(specs: &[String], defaults: &PolicyDefaults) -> Result<Vec<ParsedPolicy>> {
    let policies: Vec<ParsedPolicy> = specs
        .iter()
        .enumerate()
        .map(|(index, spec)| parse_policy(spec, defaults, index))
        .collect::<Result<_>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for policy in &policies {
        if !seen.insert(policy.name.as_str()) {
            bail!("duplicate policy name {:?}; disambiguate with name=", policy.name);
        }
    }
    Ok(policies)
}
