use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{build_prompt, parse_llm_response, ExtractionError, RawEntitySet};
use crate::corpus::Document;

/// Chat-completion endpoint settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub temperature: f64,
    /// Retries after the first attempt for transient failures.
    pub retry_max: u32,
    pub backoff_base_ms: u64,
    pub timeout_secs: u64,
    pub max_in_flight: usize,
}

impl Default for LlmConfig {
    fn default() -> Self {
        LlmConfig {
            endpoint: "http://localhost:8080/v1/chat/completions".into(),
            model: "gemini-pro".into(),
            api_key_env: "LLM_API_KEY".into(),
            temperature: 0.0,
            retry_max: 3,
            backoff_base_ms: 500,
            timeout_secs: 60,
            max_in_flight: 4,
        }
    }
}

/// Append-only JSONL log of request/response pairs.
#[derive(Debug)]
pub struct AuditLog {
    file: Mutex<File>,
}

impl AuditLog {
    pub fn create(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(AuditLog {
            file: Mutex::new(file),
        })
    }

    fn record(&self, entry: &Value) {
        let mut f = self.file.lock().unwrap_or_else(|e| e.into_inner());
        // audit failures must not fail extraction
        let _ = writeln!(f, "{entry}");
    }
}

/// Blocking client for the chat-completion endpoint.
#[derive(Debug)]
pub struct LlmClient {
    cfg: LlmConfig,
    key: String,
    agent: ureq::Agent,
    audit: Option<AuditLog>,
}

enum Attempt {
    Done(String),
    Transient(String),
    Fatal(String),
}

impl LlmClient {
    pub fn new(cfg: LlmConfig, api_key: impl Into<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(cfg.timeout_secs.max(1))))
            .http_status_as_error(false)
            .build()
            .new_agent();
        LlmClient {
            cfg,
            key: api_key.into(),
            agent,
            audit: None,
        }
    }

    /// Reads the API key from `cfg.api_key_env`; fails before any request when unset.
    pub fn from_env(cfg: LlmConfig) -> Result<Self, ExtractionError> {
        match std::env::var(&cfg.api_key_env) {
            Ok(k) if !k.trim().is_empty() => Ok(Self::new(cfg, k)),
            _ => Err(ExtractionError::Config(format!(
                "LLM extractor requires the API key environment variable {} to be set",
                cfg.api_key_env
            ))),
        }
    }

    pub fn with_audit(mut self, audit: AuditLog) -> Self {
        self.audit = Some(audit);
        self
    }

    pub fn config(&self) -> &LlmConfig {
        &self.cfg
    }

    fn request_body(&self, prompt: &str) -> Value {
        json!({
            "model": self.cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.cfg.temperature,
        })
    }

    fn attempt(&self, body: &Value) -> Attempt {
        let resp = self
            .agent
            .post(&self.cfg.endpoint)
            .header("Authorization", format!("Bearer {}", self.key))
            .send_json(body);
        match resp {
            Ok(mut r) => {
                let status = r.status().as_u16();
                let text = r.body_mut().read_to_string().unwrap_or_default();
                match status {
                    200..=299 => Attempt::Done(text),
                    429 | 500..=599 => Attempt::Transient(format!("HTTP {status}: {text}")),
                    _ => Attempt::Fatal(format!("HTTP {status}: {text}")),
                }
            }
            Err(e) => Attempt::Transient(e.to_string()),
        }
    }

    /// Sends the prompt, retrying transient failures with exponential backoff,
    /// and returns the assistant's reply text.
    pub fn complete(&self, doc_id: &str, prompt: &str) -> Result<String, ExtractionError> {
        let body = self.request_body(prompt);
        let mut attempts = 0;
        loop {
            attempts += 1;
            let outcome = self.attempt(&body);
            if let Some(a) = &self.audit {
                let (status, response) = match &outcome {
                    Attempt::Done(t) => ("ok", t.as_str()),
                    Attempt::Transient(t) => ("transient", t.as_str()),
                    Attempt::Fatal(t) => ("fatal", t.as_str()),
                };
                a.record(&json!({
                    "doc_id": doc_id, "attempt": attempts, "request": body,
                    "status": status, "response": response,
                }));
            }
            match outcome {
                Attempt::Done(text) => return Ok(reply_content(&text)),
                Attempt::Transient(_) if attempts <= self.cfg.retry_max => {
                    let wait = self.cfg.backoff_base_ms.saturating_mul(1 << (attempts - 1).min(16));
                    std::thread::sleep(Duration::from_millis(wait));
                }
                Attempt::Transient(message) | Attempt::Fatal(message) => {
                    return Err(ExtractionError::Http {
                        doc_id: doc_id.to_string(),
                        attempts,
                        message,
                    })
                }
            }
        }
    }
}

// Accepts OpenAI-style `choices[0].message.content`, completion-style
// `choices[0].text`, a bare `content` field, or falls back to the raw body.
fn reply_content(body: &str) -> String {
    let Ok(v) = serde_json::from_str::<Value>(body) else {
        return body.to_string();
    };
    let candidates = [
        v.pointer("/choices/0/message/content"),
        v.pointer("/choices/0/text"),
        v.pointer("/message/content"),
        v.pointer("/content"),
    ];
    let found = candidates
        .into_iter()
        .flatten()
        .find_map(|c| c.as_str().map(str::to_string));
    found.unwrap_or_else(|| body.to_string())
}

/// Extracts raw entities from one document through the LLM endpoint.
pub fn extract_llm(doc: &Document, client: &LlmClient) -> Result<RawEntitySet, ExtractionError> {
    if doc.text.trim().is_empty() {
        return Err(ExtractionError::EmptyText(doc.id.clone()));
    }
    let reply = client.complete(&doc.id, &build_prompt(doc))?;
    let mut set = parse_llm_response(&reply).map_err(|e| ExtractionError::Response {
        doc_id: doc.id.clone(),
        source: Box::new(e),
        raw: reply.clone(),
    })?;
    set.doc_id = doc.id.clone();
    Ok(set)
}

/// Runs [`extract_llm`] over many documents with at most
/// `max_in_flight` concurrent requests. Results are in input order.
pub fn extract_llm_batch(
    docs: &[Document],
    client: &LlmClient,
) -> Vec<Result<RawEntitySet, ExtractionError>> {
    let workers = client.cfg.max_in_flight.max(1).min(docs.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<RawEntitySet, ExtractionError>>>> =
        docs.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(doc) = docs.get(i) else { break };
                let r = extract_llm(doc, client);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every slot filled")
        })
        .collect()
}
