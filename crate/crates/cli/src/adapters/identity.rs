//! Identity mock engine. Text ops return their input, optionally
//! lowercased. TTS carries the text through an `inline:` audio
//! reference so a paired identity ASR can transcribe it without real
//! audio.

use std::collections::BTreeSet;
use std::time::Instant;

use super::{Engine, EngineError, EngineRequest, EngineResponse, OpKind, Payload};

pub struct IdentityEngine {
    id: String,
    lowercase: bool,
    language_pairs: Option<BTreeSet<(String, String)>>,
}

impl IdentityEngine {
    pub fn new(id: &str, lowercase: bool) -> IdentityEngine {
        IdentityEngine { id: id.to_string(), lowercase, language_pairs: None }
    }

    pub fn with_language_pairs(mut self, pairs: BTreeSet<(String, String)>) -> IdentityEngine {
        self.language_pairs = Some(pairs);
        self
    }

    fn finish(&self, text: &str) -> String {
        if self.lowercase {
            text.to_lowercase()
        } else {
            text.to_string()
        }
    }
}

pub const INLINE_AUDIO_PREFIX: &str = "inline:";

impl Engine for IdentityEngine {
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
        let payload = match (&request.op, &request.payload) {
            (OpKind::Tts, Payload::Text(text)) => {
                Payload::Audio(format!("{INLINE_AUDIO_PREFIX}{text}"))
            }
            (OpKind::Asr, Payload::Audio(audio)) => match audio.strip_prefix(INLINE_AUDIO_PREFIX) {
                Some(text) => Payload::Text(self.finish(text)),
                None => {
                    return Err(EngineError::Config(format!(
                        "identity asr can only transcribe {INLINE_AUDIO_PREFIX} audio, got {audio}"
                    )))
                }
            },
            (OpKind::Asr, Payload::Text(_)) | (OpKind::Tts, Payload::Audio(_)) => {
                return Err(EngineError::MissingAudio)
            }
            (_, Payload::Text(text)) => Payload::Text(self.finish(text)),
            (_, Payload::Audio(_)) => return Err(EngineError::MissingAudio),
        };
        Ok(EngineResponse { payload, latency: start.elapsed(), engine_id: self.id.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_ops_are_identity() {
        let engine = IdentityEngine::new("ident", false);
        let req = EngineRequest::text(
            OpKind::Translate { src: "en".into(), tgt: "de".into() },
            "What has a Lama determined to do?",
            None,
        );
        let resp = engine.call(&req).unwrap();
        assert_eq!(resp.payload, Payload::Text("What has a Lama determined to do?".into()));
        assert_eq!(resp.engine_id, "ident");
    }

    #[test]
    fn lowercase_mock_lowercases() {
        let engine = IdentityEngine::new("lc", true);
        let req = EngineRequest::text(OpKind::Spellcheck, "Pro Bowl", None);
        assert_eq!(engine.call(&req).unwrap().payload, Payload::Text("pro bowl".into()));
    }

    #[test]
    fn tts_then_asr_round_trips_inline_audio() {
        let tts = IdentityEngine::new("tts", false);
        let asr = IdentityEngine::new("asr", true);
        let audio = tts
            .call(&EngineRequest::text(OpKind::Tts, "Pro Bowl", Some("q1")))
            .unwrap()
            .payload;
        assert_eq!(audio, Payload::Audio("inline:Pro Bowl".into()));
        let req = EngineRequest { op: OpKind::Asr, payload: audio, qid: Some("q1".into()) };
        assert_eq!(asr.call(&req).unwrap().payload, Payload::Text("pro bowl".into()));
    }

    #[test]
    fn asr_without_audio_errors() {
        let asr = IdentityEngine::new("asr", false);
        let req = EngineRequest::text(OpKind::Asr, "text not audio", None);
        assert_eq!(asr.call(&req).unwrap_err(), EngineError::MissingAudio);
    }

    #[test]
    fn pair_restriction_is_honored() {
        let pairs: BTreeSet<(String, String)> =
            [("en".to_string(), "de".to_string())].into();
        let engine = IdentityEngine::new("mt", false).with_language_pairs(pairs);
        assert!(engine.supports_pair("en", "de"));
        assert!(!engine.supports_pair("de", "en"));
    }
}
