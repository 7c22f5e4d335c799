//! Batch-facing engine drivers: retry with exponential backoff, audit
//! every call, and compose the two-engine pipelines (back-translation,
//! TTS followed by ASR).

use std::time::Duration;

use super::{
    AuditEntry, AuditLog, Engine, EngineError, EngineRequest, EngineResponse, OpKind, Payload,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> RetryPolicy {
        RetryPolicy { attempts: 3, base_delay: Duration::from_millis(100) }
    }
}

fn audit_outcome(result: &Result<EngineResponse, EngineError>) -> (String, String) {
    match result {
        Ok(response) => {
            let detail = match &response.payload {
                Payload::Audio(path) => path.clone(),
                Payload::Text(_) => String::new(),
            };
            ("ok".to_string(), detail)
        }
        Err(e) => (format!("error: {e}"), String::new()),
    }
}

/// Calls the engine, retrying transient failures with doubling delay.
/// Every attempt lands in the audit log.
pub fn call_with_retry(
    engine: &dyn Engine,
    request: &EngineRequest,
    retry: RetryPolicy,
    audit: &mut AuditLog,
) -> Result<EngineResponse, EngineError> {
    let attempts = retry.attempts.max(1);
    let mut delay = retry.base_delay;
    for attempt in 0..attempts {
        let result = engine.call(request);
        let (outcome, detail) = audit_outcome(&result);
        audit.push(AuditEntry {
            request_hash: request.hash_hex(),
            engine_id: engine.id().to_string(),
            outcome,
            detail,
        });
        match result {
            Ok(response) => return Ok(response),
            Err(e) if e.is_retryable() && attempt + 1 < attempts => {
                if !delay.is_zero() {
                    std::thread::sleep(delay);
                }
                delay *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    unreachable!("loop returns on the last attempt")
}

fn expect_text(response: EngineResponse) -> Result<String, EngineError> {
    match response.payload {
        Payload::Text(text) => Ok(text),
        Payload::Audio(_) => {
            Err(EngineError::Config("engine returned audio where text was expected".into()))
        }
    }
}

pub fn translate(
    text: &str,
    src: &str,
    tgt: &str,
    engine: &dyn Engine,
    retry: RetryPolicy,
    audit: &mut AuditLog,
    qid: Option<&str>,
) -> Result<String, EngineError> {
    if !engine.supports_pair(src, tgt) {
        let err = EngineError::UnsupportedPair { src: src.to_string(), tgt: tgt.to_string() };
        let request = EngineRequest::text(
            OpKind::Translate { src: src.to_string(), tgt: tgt.to_string() },
            text,
            qid,
        );
        audit.push(AuditEntry {
            request_hash: request.hash_hex(),
            engine_id: engine.id().to_string(),
            outcome: format!("error: {err}"),
            detail: String::new(),
        });
        return Err(err);
    }
    let request = EngineRequest::text(
        OpKind::Translate { src: src.to_string(), tgt: tgt.to_string() },
        text,
        qid,
    );
    expect_text(call_with_retry(engine, &request, retry, audit)?)
}

/// English → pivot → English; both hops audited.
pub fn back_translate(
    text: &str,
    pivot: &str,
    engine: &dyn Engine,
    retry: RetryPolicy,
    audit: &mut AuditLog,
    qid: Option<&str>,
) -> Result<String, EngineError> {
    let hop = translate(text, "en", pivot, engine, retry, audit, qid)?;
    translate(&hop, pivot, "en", engine, retry, audit, qid)
}

/// Voices the text, then transcribes the audio artifact. The artifact
/// reference shows up in the audit log's detail column.
pub fn tts_then_asr(
    text: &str,
    tts: &dyn Engine,
    asr: &dyn Engine,
    retry: RetryPolicy,
    audit: &mut AuditLog,
    qid: Option<&str>,
) -> Result<String, EngineError> {
    let tts_request = EngineRequest::text(OpKind::Tts, text, qid);
    let voiced = call_with_retry(tts, &tts_request, retry, audit)?;
    let audio = match voiced.payload {
        Payload::Audio(path) => path,
        Payload::Text(_) => return Err(EngineError::MissingAudio),
    };
    let asr_request = EngineRequest {
        op: OpKind::Asr,
        payload: Payload::Audio(audio),
        qid: qid.map(str::to_string),
    };
    expect_text(call_with_retry(asr, &asr_request, retry, audit)?)
}

pub fn spellcheck(
    text: &str,
    engine: &dyn Engine,
    retry: RetryPolicy,
    audit: &mut AuditLog,
    qid: Option<&str>,
) -> Result<String, EngineError> {
    let request = EngineRequest::text(OpKind::Spellcheck, text, qid);
    expect_text(call_with_retry(engine, &request, retry, audit)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::identity::IdentityEngine;
    use crate::adapters::scripted::ScriptedEngine;
    use std::sync::atomic::{AtomicU32, Ordering};

    fn no_delay() -> RetryPolicy {
        RetryPolicy { attempts: 3, base_delay: Duration::ZERO }
    }

    struct FlakyEngine {
        failures: AtomicU32,
    }

    impl Engine for FlakyEngine {
        fn id(&self) -> &str {
            "flaky"
        }
        fn call(&self, request: &EngineRequest) -> Result<EngineResponse, EngineError> {
            let remaining = self.failures.load(Ordering::SeqCst);
            if remaining > 0 {
                self.failures.store(remaining - 1, Ordering::SeqCst);
                return Err(EngineError::RateLimit);
            }
            Ok(EngineResponse {
                payload: request.payload.clone(),
                latency: Duration::ZERO,
                engine_id: "flaky".to_string(),
            })
        }
    }

    #[test]
    fn identity_back_translation_is_identity_with_two_audited_hops() {
        let engine = IdentityEngine::new("mt", false);
        let mut audit = AuditLog::new();
        let out =
            back_translate("What has a Lama determined to do?", "de", &engine, no_delay(), &mut audit, Some("q1"))
                .unwrap();
        assert_eq!(out, "What has a Lama determined to do?");
        assert_eq!(audit.len(), 2);
        assert!(audit.iter().all(|e| e.outcome == "ok"));
    }

    #[test]
    fn scripted_back_translation_replays_by_qid() {
        let entries = [("q1".to_string(), "What has a Lama decided to do?".to_string())].into();
        let engine = ScriptedEngine::new("mt-replay", entries);
        let mut audit = AuditLog::new();
        let out = back_translate(
            "What has a Lama determined to do?",
            "de",
            &engine,
            no_delay(),
            &mut audit,
            Some("q1"),
        )
        .unwrap();
        assert_eq!(out, "What has a Lama decided to do?");
        assert_eq!(audit.len(), 2);
    }

    #[test]
    fn unsupported_pivot_errors_and_is_audited() {
        let pairs = [("en".to_string(), "de".to_string()), ("de".to_string(), "en".to_string())]
            .into();
        let engine = IdentityEngine::new("mt", false).with_language_pairs(pairs);
        let mut audit = AuditLog::new();
        let err =
            back_translate("text", "fr", &engine, no_delay(), &mut audit, None).unwrap_err();
        assert_eq!(err, EngineError::UnsupportedPair { src: "en".into(), tgt: "fr".into() });
        assert_eq!(audit.len(), 1);
        assert!(audit[0].outcome.starts_with("error:"));
    }

    #[test]
    fn tts_then_asr_records_the_audio_artifact() {
        let tts = IdentityEngine::new("tts", false);
        let asr = IdentityEngine::new("asr", true);
        let mut audit = AuditLog::new();
        let out = tts_then_asr("Pro Bowl", &tts, &asr, no_delay(), &mut audit, Some("q1")).unwrap();
        assert_eq!(out, "pro bowl");
        assert_eq!(audit.len(), 2);
        assert_eq!(audit[0].detail, "inline:Pro Bowl");
        assert_eq!(audit[1].detail, "");
    }

    #[test]
    fn transient_failures_are_retried_then_succeed() {
        let engine = FlakyEngine { failures: AtomicU32::new(2) };
        let mut audit = AuditLog::new();
        let request = EngineRequest::text(OpKind::Spellcheck, "x", None);
        let response = call_with_retry(&engine, &request, no_delay(), &mut audit).unwrap();
        assert_eq!(response.payload, Payload::Text("x".into()));
        assert_eq!(audit.len(), 3);
        assert!(audit[0].outcome.starts_with("error:"));
        assert_eq!(audit[2].outcome, "ok");
    }

    #[test]
    fn non_retryable_errors_fail_immediately() {
        let engine = ScriptedEngine::new("s", Default::default());
        let mut audit = AuditLog::new();
        let err = spellcheck("zzz", &engine, no_delay(), &mut audit, None).unwrap_err();
        assert!(matches!(err, EngineError::Unscripted(_)));
        assert_eq!(audit.len(), 1);
    }

    #[test]
    fn retries_are_bounded() {
        struct AlwaysDown;
        impl Engine for AlwaysDown {
            fn id(&self) -> &str {
                "down"
            }
            fn call(&self, _request: &EngineRequest) -> Result<EngineResponse, EngineError> {
                Err(EngineError::Transport("connection refused".into()))
            }
        }
        let mut audit = AuditLog::new();
        let err = spellcheck("x", &AlwaysDown, no_delay(), &mut audit, None).unwrap_err();
        assert!(matches!(err, EngineError::Transport(_)));
        assert_eq!(audit.len(), 3);
    }
}
