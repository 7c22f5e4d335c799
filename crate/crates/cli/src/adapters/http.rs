//! Declarative HTTP engine for black-box commercial endpoints. The
//! request shape lives entirely in config: URL, headers, a body
//! template with `{{text}}`/`{{src}}`/`{{tgt}}`/`{{credentials}}`
//! placeholders, and a dot path selecting the output field from the
//! JSON response. Credentials come from an environment variable, never
//! from the config file itself.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use super::{Engine, EngineError, EngineRequest, EngineResponse, OpKind, Payload};

/// The one seam touching the network; tests plug in a mock.
pub trait HttpTransport: Send + Sync {
    fn post(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &str,
    ) -> Result<String, EngineError>;
}

pub struct UreqTransport;

impl HttpTransport for UreqTransport {
    fn post(
        &self,
        url: &str,
        headers: &[(String, String)],
        body: &str,
    ) -> Result<String, EngineError> {
        let mut request = ureq::post(url);
        for (name, value) in headers {
            request = request.header(name, value);
        }
        let mut response = request.send(body).map_err(classify)?;
        response
            .body_mut()
            .read_to_string()
            .map_err(|e| EngineError::Transport(e.to_string()))
    }
}

fn classify(err: ureq::Error) -> EngineError {
    match err {
        ureq::Error::StatusCode(429) => EngineError::RateLimit,
        other => EngineError::Transport(other.to_string()),
    }
}

pub struct HttpEngine {
    id: String,
    url: String,
    headers: BTreeMap<String, String>,
    body_template: String,
    response_field: String,
    credentials_env: Option<String>,
    language_pairs: Option<BTreeSet<(String, String)>>,
    transport: Box<dyn HttpTransport>,
}

impl HttpEngine {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: &str,
        url: &str,
        headers: BTreeMap<String, String>,
        body_template: &str,
        response_field: &str,
        credentials_env: Option<String>,
        language_pairs: Option<BTreeSet<(String, String)>>,
        transport: Box<dyn HttpTransport>,
    ) -> HttpEngine {
        HttpEngine {
            id: id.to_string(),
            url: url.to_string(),
            headers,
            body_template: body_template.to_string(),
            response_field: response_field.to_string(),
            credentials_env,
            language_pairs,
            transport,
        }
    }

    fn credentials(&self) -> Result<String, EngineError> {
        match &self.credentials_env {
            None => Ok(String::new()),
            Some(var) => std::env::var(var).map_err(|_| {
                EngineError::Config(format!("credentials variable {var} is not set"))
            }),
        }
    }
}

/// `{{text}}` is JSON-string-escaped so templates can embed it inside
/// JSON bodies; the other placeholders are inserted raw.
fn expand(template: &str, text: &str, src: &str, tgt: &str, credentials: &str) -> String {
    let escaped = {
        let quoted = serde_json::to_string(text).unwrap_or_default();
        quoted[1..quoted.len() - 1].to_string()
    };
    template
        .replace("{{text}}", &escaped)
        .replace("{{src}}", src)
        .replace("{{tgt}}", tgt)
        .replace("{{credentials}}", credentials)
}

/// Walks a dot path through a JSON value; numeric components index
/// arrays.
fn select<'v>(value: &'v serde_json::Value, path: &str) -> Option<&'v serde_json::Value> {
    let mut current = value;
    for part in path.split('.') {
        current = match part.parse::<usize>() {
            Ok(index) => current.get(index)?,
            Err(_) => current.get(part)?,
        };
    }
    Some(current)
}

impl Engine for HttpEngine {
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
        let Payload::Text(text) = &request.payload else {
            return Err(EngineError::Config(
                "http engines handle text payloads only".to_string(),
            ));
        };
        let (src, tgt) = match &request.op {
            OpKind::Translate { src, tgt } => (src.as_str(), tgt.as_str()),
            _ => ("", ""),
        };
        let credentials = self.credentials()?;
        let url = expand(&self.url, text, src, tgt, &credentials);
        let body = expand(&self.body_template, text, src, tgt, &credentials);
        let headers: Vec<(String, String)> = self
            .headers
            .iter()
            .map(|(k, v)| (k.clone(), expand(v, text, src, tgt, &credentials)))
            .collect();

        let raw = self.transport.post(&url, &headers, &body)?;
        let parsed: serde_json::Value = serde_json::from_str(&raw)
            .map_err(|e| EngineError::Transport(format!("invalid JSON response: {e}")))?;
        let field = select(&parsed, &self.response_field).ok_or_else(|| {
            EngineError::Transport(format!(
                "response field {} not found in engine reply",
                self.response_field
            ))
        })?;
        let out = field.as_str().ok_or_else(|| {
            EngineError::Transport(format!("response field {} is not a string", self.response_field))
        })?;
        Ok(EngineResponse {
            payload: Payload::Text(out.to_string()),
            latency: start.elapsed(),
            engine_id: self.id.clone(),
        })
    }
}
