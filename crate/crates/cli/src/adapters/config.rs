//! Adapter configuration: a TOML file declaring engines, which engine
//! serves each operation, and the retry policy. Script paths are
//! resolved relative to the config file so fixture bundles relocate
//! cleanly.
//!
//! ```toml
//! [engines.mt-replay]
//! kind = "scripted"
//! script = "table1_mt.tsv"
//! language_pairs = ["en-de", "de-en"]
//!
//! [engines.tts-mock]
//! kind = "identity"
//!
//! [engines.google-mt]
//! kind = "http"
//! url = "https://translation.example/v2"
//! body_template = '{"q": "{{text}}", "source": "{{src}}", "target": "{{tgt}}"}'
//! response_field = "data.translations.0.translatedText"
//! credentials_env = "MT_API_KEY"
//!
//! [ops]
//! mt = "mt-replay"
//! tts = "tts-mock"
//! asr = "asr-replay"
//!
//! [retry]
//! attempts = 3
//! base_delay_ms = 100
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use super::http::{HttpEngine, UreqTransport};
use super::identity::IdentityEngine;
use super::ops::RetryPolicy;
use super::scripted::ScriptedEngine;
use super::Engine;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AdapterConfigFile {
    #[serde(default)]
    engines: BTreeMap<String, EngineDecl>,
    #[serde(default)]
    ops: OpsDecl,
    #[serde(default)]
    retry: RetryDecl,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum EngineDecl {
    Identity {
        #[serde(default)]
        lowercase: bool,
        #[serde(default)]
        language_pairs: Option<Vec<String>>,
    },
    Scripted {
        script: PathBuf,
        #[serde(default)]
        language_pairs: Option<Vec<String>>,
    },
    Http {
        url: String,
        #[serde(default)]
        headers: BTreeMap<String, String>,
        body_template: String,
        response_field: String,
        #[serde(default)]
        credentials_env: Option<String>,
        #[serde(default)]
        language_pairs: Option<Vec<String>>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpsDecl {
    mt: Option<String>,
    tts: Option<String>,
    asr: Option<String>,
    spellcheck: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RetryDecl {
    attempts: u32,
    base_delay_ms: u64,
}

impl Default for RetryDecl {
    fn default() -> RetryDecl {
        RetryDecl { attempts: 3, base_delay_ms: 100 }
    }
}

fn parse_pairs(raw: &[String], engine: &str) -> Result<BTreeSet<(String, String)>> {
    let mut pairs = BTreeSet::new();
    for entry in raw {
        let Some((src, tgt)) = entry.split_once('-') else {
            bail!("engine {engine}: language pair {entry} is not of the form src-tgt");
        };
        pairs.insert((src.to_string(), tgt.to_string()));
    }
    Ok(pairs)
}

/// Engines ready to call, plus the op routing and retry policy.
pub struct EngineSet {
    engines: BTreeMap<String, Box<dyn Engine>>,
    ops: OpsDecl,
    retry: RetryPolicy,
}

impl EngineSet {
    pub fn load(path: &Path) -> Result<EngineSet> {
        let content = crate::formats::read_file(path)?;
        let file: AdapterConfigFile = toml::from_str(&content)
            .with_context(|| format!("parsing adapter config {}", path.display()))?;
        let base_dir = path.parent().unwrap_or_else(|| Path::new("."));

        let mut engines: BTreeMap<String, Box<dyn Engine>> = BTreeMap::new();
        for (name, decl) in file.engines {
            let engine: Box<dyn Engine> = match decl {
                EngineDecl::Identity { lowercase, language_pairs } => {
                    let mut engine = IdentityEngine::new(&name, lowercase);
                    if let Some(raw) = language_pairs {
                        engine = engine.with_language_pairs(parse_pairs(&raw, &name)?);
                    }
                    Box::new(engine)
                }
                EngineDecl::Scripted { script, language_pairs } => {
                    let script_path =
                        if script.is_absolute() { script } else { base_dir.join(script) };
                    let mut engine = ScriptedEngine::from_tsv(&name, &script_path)?;
                    if let Some(raw) = language_pairs {
                        engine = engine.with_language_pairs(parse_pairs(&raw, &name)?);
                    }
                    Box::new(engine)
                }
                EngineDecl::Http {
                    url,
                    headers,
                    body_template,
                    response_field,
                    credentials_env,
                    language_pairs,
                } => {
                    let pairs = match language_pairs {
                        Some(raw) => Some(parse_pairs(&raw, &name)?),
                        None => None,
                    };
                    Box::new(HttpEngine::new(
                        &name,
                        &url,
                        headers,
                        &body_template,
                        &response_field,
                        credentials_env,
                        pairs,
                        Box::new(UreqTransport),
                    ))
                }
            };
            engines.insert(name, engine);
        }

        for (op, engine) in [
            ("mt", &file.ops.mt),
            ("tts", &file.ops.tts),
            ("asr", &file.ops.asr),
            ("spellcheck", &file.ops.spellcheck),
        ] {
            if let Some(name) = engine {
                if !engines.contains_key(name) {
                    bail!("ops.{op} references undeclared engine {name}");
                }
            }
        }

        Ok(EngineSet {
            engines,
            ops: file.ops,
            retry: RetryPolicy {
                attempts: file.retry.attempts,
                base_delay: Duration::from_millis(file.retry.base_delay_ms),
            },
        })
    }

    pub fn retry(&self) -> RetryPolicy {
        self.retry
    }

    pub fn named(&self, name: &str) -> Result<&dyn Engine> {
        self.engines
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| anyhow::anyhow!("no engine named {name} in adapter config"))
    }

    /// Engine routed to an op slot (`mt`, `tts`, `asr`, `spellcheck`).
    pub fn engine_for(&self, op: &str) -> Result<&dyn Engine> {
        let name = match op {
            "mt" => &self.ops.mt,
            "tts" => &self.ops.tts,
            "asr" => &self.ops.asr,
            "spellcheck" => &self.ops.spellcheck,
            other => bail!("unknown op slot {other}"),
        };
        match name {
            Some(name) => self.named(name),
            None => bail!("adapter config assigns no engine to ops.{op}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::{EngineRequest, OpKind, Payload};

    fn write_config(dir: &Path, body: &str) -> PathBuf {
        let path = dir.join("adapters.toml");
        std::fs::write(&path, body).unwrap();
        path
    }

    #[test]
    fn loads_engines_ops_and_retry() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("mt.tsv"), "q1\tdecided\n").unwrap();
        let path = write_config(
            dir.path(),
            r#"
[engines.mt-replay]
kind = "scripted"
script = "mt.tsv"

[engines.mock]
kind = "identity"
lowercase = true

[ops]
mt = "mt-replay"
asr = "mock"

[retry]
attempts = 5
base_delay_ms = 0
"#,
        );
        let set = EngineSet::load(&path).unwrap();
        assert_eq!(set.retry().attempts, 5);
        assert_eq!(set.retry().base_delay, Duration::ZERO);
        let mt = set.engine_for("mt").unwrap();
        let resp = mt
            .call(&EngineRequest::text(
                OpKind::Translate { src: "en".into(), tgt: "de".into() },
                "x",
                Some("q1"),
            ))
            .unwrap();
        assert_eq!(resp.payload, Payload::Text("decided".into()));
        assert!(set.engine_for("tts").is_err());
        assert!(set.named("missing").is_err());
    }

    #[test]
    fn undeclared_op_engine_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(dir.path(), "[ops]\nmt = \"ghost\"\n");
        let err = match EngineSet::load(&path) {
            Ok(_) => panic!("load should fail"),
            Err(e) => e,
        };
        assert!(err.to_string().contains("ghost"));
    }

    #[test]
    fn bad_language_pair_shape_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_config(
            dir.path(),
            "[engines.mt]\nkind = \"identity\"\nlanguage_pairs = [\"ende\"]\n",
        );
        let err = match EngineSet::load(&path) {
            Ok(_) => panic!("load should fail"),
            Err(e) => e,
        };
        assert!(err.to_string().contains("src-tgt"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path =
            write_config(dir.path(), "[engines.mt]\nkind = \"identity\"\nvolume = 11\n");
        assert!(EngineSet::load(&path).is_err());
    }
}
