//! External-engine adapters: machine translation, TTS, ASR, and
//! spellcheck behind one calling contract, with an audit log that
//! makes batch runs replayable.

pub mod config;
pub mod http;
pub mod identity;
pub mod ops;
pub mod scripted;

use std::time::Duration;

use noiseqa_core::hash::fnv1a64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpKind {
    Translate { src: String, tgt: String },
    Tts,
    Asr,
    Spellcheck,
}

impl OpKind {
    fn label(&self) -> String {
        match self {
            OpKind::Translate { src, tgt } => format!("translate:{src}->{tgt}"),
            OpKind::Tts => "tts".to_string(),
            OpKind::Asr => "asr".to_string(),
            OpKind::Spellcheck => "spellcheck".to_string(),
        }
    }
}

/// Text in flight, or a reference to an audio artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Text(String),
    Audio(String),
}

impl Payload {
    pub fn as_str(&self) -> &str {
        match self {
            Payload::Text(s) | Payload::Audio(s) => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineRequest {
    pub op: OpKind,
    pub payload: Payload,
    /// Record id, when the call belongs to a dataset record. Scripted
    /// engines key on it.
    pub qid: Option<String>,
}

impl EngineRequest {
    pub fn text(op: OpKind, text: &str, qid: Option<&str>) -> EngineRequest {
        EngineRequest {
            op,
            payload: Payload::Text(text.to_string()),
            qid: qid.map(str::to_string),
        }
    }

    /// Stable key of this request for the audit log.
    pub fn hash_hex(&self) -> String {
        let canonical = format!(
            "op={}\npayload={}\nqid={}",
            self.op.label(),
            self.payload.as_str(),
            self.qid.as_deref().unwrap_or("")
        );
        format!("{:016x}", fnv1a64(canonical.as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineResponse {
    pub payload: Payload,
    pub latency: Duration,
    pub engine_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("unsupported language pair {src}->{tgt}")]
    UnsupportedPair { src: String, tgt: String },
    #[error("rate limited")]
    RateLimit,
    #[error("unscripted input: no entry for {0}")]
    Unscripted(String),
    #[error("missing audio artifact")]
    MissingAudio,
    #[error("engine configuration: {0}")]
    Config(String),
}

impl EngineError {
    /// Transient failures worth retrying with backoff.
    pub fn is_retryable(&self) -> bool {
        matches!(self, EngineError::Transport(_) | EngineError::RateLimit)
    }
}

pub trait Engine: Send + Sync {
    fn id(&self) -> &str;
    fn call(&self, request: &EngineRequest) -> Result<EngineResponse, EngineError>;
    /// Language pairs this engine accepts; `true` means unrestricted.
    fn supports_pair(&self, src: &str, tgt: &str) -> bool {
        let _ = (src, tgt);
        true
    }
}

/// One line per engine call, successful or not. `detail` carries the
/// audio artifact path for TTS responses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub request_hash: String,
    pub engine_id: String,
    pub outcome: String,
    pub detail: String,
}

pub type AuditLog = Vec<AuditEntry>;

/// 16-hex-digit content key used by scripted engines when no qid is
/// available.
pub fn content_key(payload: &Payload) -> String {
    format!("{:016x}", fnv1a64(payload.as_str().as_bytes()))
}
