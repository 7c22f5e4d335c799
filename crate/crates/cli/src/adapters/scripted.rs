//! Scripted engine replaying `key<TAB>output` files. The key is the
//! request's qid when present, with a fallback to the 16-hex fnv1a64
//! content key, so released challenge-set files can stand in for live
//! engines.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use anyhow::Result;

use super::{content_key, Engine, EngineError, EngineRequest, EngineResponse, OpKind, Payload};
use crate::tsv;

pub struct ScriptedEngine {
    id: String,
    entries: BTreeMap<String, String>,
    language_pairs: Option<BTreeSet<(String, String)>>,
}

impl ScriptedEngine {
    pub fn new(id: &str, entries: BTreeMap<String, String>) -> ScriptedEngine {
        ScriptedEngine { id: id.to_string(), entries, language_pairs: None }
    }

    pub fn from_tsv(id: &str, path: &Path) -> Result<ScriptedEngine> {
        let content = crate::formats::read_file(path)?;
        let rows = tsv::parse_rows_with_arity(&content, 2, "script file")?;
        let mut entries = BTreeMap::new();
        for (lineno, mut fields) in rows {
            let value = fields.remove(1);
            let key = fields.remove(0);
            if entries.insert(key.clone(), value).is_some() {
                anyhow::bail!("script file {}: duplicate key {key} at line {lineno}", path.display());
            }
        }
        Ok(ScriptedEngine::new(id, entries))
    }

    pub fn with_language_pairs(mut self, pairs: BTreeSet<(String, String)>) -> ScriptedEngine {
        self.language_pairs = Some(pairs);
        self
    }

    fn lookup(&self, request: &EngineRequest) -> Result<&str, EngineError> {
        let mut tried = Vec::new();
        if let Some(qid) = &request.qid {
            if let Some(value) = self.entries.get(qid) {
                return Ok(value);
            }
            tried.push(qid.clone());
        }
        let key = content_key(&request.payload);
        if let Some(value) = self.entries.get(&key) {
            return Ok(value);
        }
        tried.push(key);
        Err(EngineError::Unscripted(tried.join(" or ")))
    }
}

impl Engine for ScriptedEngine {
    fn id(&self) -> &str {
        &self.id
    }

    fn supports_pair(&self, src: &str, tgt: &str) -> bool {
        match &self.language_pairs {
            Some(pairs) => pairs.contains(&(src.to_string(), tgt.to_string())),
            None => true,
        }
    }

    fn call(&self, request: &EngineRequest) -> Result<EngineResponse, EngineError> {
        let start = Instant::now();
        if request.op == OpKind::Asr && !matches!(request.payload, Payload::Audio(_)) {
            return Err(EngineError::MissingAudio);
        }
        let value = self.lookup(request)?.to_string();
        let payload = match request.op {
            OpKind::Tts => Payload::Audio(value),
            _ => Payload::Text(value),
        };
        Ok(EngineResponse { payload, latency: start.elapsed(), engine_id: self.id.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(rows: &[(&str, &str)]) -> ScriptedEngine {
        let entries =
            rows.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        ScriptedEngine::new("script", entries)
    }

    #[test]
    fn qid_key_wins() {
        let engine = engine(&[("q1", "scripted output")]);
        let req = EngineRequest::text(OpKind::Spellcheck, "anything", Some("q1"));
        assert_eq!(engine.call(&req).unwrap().payload, Payload::Text("scripted output".into()));
    }

    #[test]
    fn content_hash_is_the_fallback() {
        let key = content_key(&Payload::Text("determied".into()));
        let engine = engine(&[(key.as_str(), "determined")]);
        let with_qid = EngineRequest::text(OpKind::Spellcheck, "determied", Some("q9"));
        assert_eq!(engine.call(&with_qid).unwrap().payload, Payload::Text("determined".into()));
        let without = EngineRequest::text(OpKind::Spellcheck, "determied", None);
        assert_eq!(engine.call(&without).unwrap().payload, Payload::Text("determined".into()));
    }

    #[test]
    fn missing_entry_is_an_unscripted_error() {
        let engine = engine(&[("q1", "x")]);
        let req = EngineRequest::text(OpKind::Spellcheck, "other", Some("q2"));
        let err = engine.call(&req).unwrap_err();
        match err {
            EngineError::Unscripted(keys) => assert!(keys.contains("q2")),
            other => panic!("expected Unscripted, got {other:?}"),
        }
    }

    #[test]
    fn loads_from_tsv_and_rejects_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("script.tsv");
        std::fs::write(&path, "# comment\nq1\tout one\nq2\tout two\n").unwrap();
        let engine = ScriptedEngine::from_tsv("s", &path).unwrap();
        let req = EngineRequest::text(OpKind::Spellcheck, "x", Some("q2"));
        assert_eq!(engine.call(&req).unwrap().payload, Payload::Text("out two".into()));

        std::fs::write(&path, "q1\ta\nq1\tb\n").unwrap();
        assert!(ScriptedEngine::from_tsv("s", &path).is_err());
    }

    #[test]
    fn asr_requires_audio_payload() {
        let engine = engine(&[("q1", "transcript")]);
        let text_req = EngineRequest::text(OpKind::Asr, "x", Some("q1"));
        assert_eq!(engine.call(&text_req).unwrap_err(), EngineError::MissingAudio);
        let audio_req = EngineRequest {
            op: OpKind::Asr,
            payload: Payload::Audio("inline:x".into()),
            qid: Some("q1".into()),
        };
        assert_eq!(engine.call(&audio_req).unwrap().payload, Payload::Text("transcript".into()));
    }
}
