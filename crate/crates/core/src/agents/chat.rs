use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use base64::Engine;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{AgentError, Answerer, PlanAgent, PlanRequest, Query};
use crate::protocol::Prompt;

fn default_temperature() -> f64 {
    0.0
}
fn default_max_tokens() -> u32 {
    1024
}
fn default_timeout() -> u64 {
    120
}
fn default_retries() -> u32 {
    2
}
fn default_backoff() -> u64 {
    1000
}
fn default_in_flight() -> usize {
    8
}

/// An OpenAI-compatible chat-completions endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatEndpointConfig {
    /// e.g. `https://api.openai.com/v1`; `/chat/completions` is appended.
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the API key; no auth header when absent.
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    /// Command that reads SVG on stdin and writes PNG on stdout. Without it
    /// scenes are sent as text.
    #[serde(default)]
    pub rasterizer: Option<Vec<String>>,
    /// JSONL file receiving every request and response.
    #[serde(default)]
    pub audit_log: Option<PathBuf>,
}

impl ChatEndpointConfig {
    pub fn new(base_url: &str, model: &str) -> Self {
        ChatEndpointConfig {
            base_url: base_url.to_string(),
            model: model.to_string(),
            api_key_env: None,
            temperature: default_temperature(),
            max_tokens: default_max_tokens(),
            timeout_secs: default_timeout(),
            retries: default_retries(),
            backoff_ms: default_backoff(),
            max_in_flight: default_in_flight(),
            rasterizer: None,
            audit_log: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContentPart {
    Text(String),
    ImagePng(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChatMessage {
    pub role: String,
    pub parts: Vec<ContentPart>,
}

impl ChatMessage {
    pub fn text(role: &str, text: &str) -> Self {
        ChatMessage { role: role.to_string(), parts: vec![ContentPart::Text(text.to_string())] }
    }

    fn to_json(&self) -> Value {
        if let [ContentPart::Text(t)] = self.parts.as_slice() {
            return json!({ "role": self.role, "content": t });
        }
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|p| match p {
                ContentPart::Text(t) => json!({ "type": "text", "text": t }),
                ContentPart::ImagePng(png) => {
                    let b64 = base64::engine::general_purpose::STANDARD.encode(png);
                    json!({ "type": "image_url", "image_url": { "url": format!("data:image/png;base64,{b64}") } })
                }
            })
            .collect();
        json!({ "role": self.role, "content": parts })
    }
}

/// Counting semaphore bounding concurrent requests.
struct Gate {
    count: Mutex<usize>,
    freed: Condvar,
    max: usize,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn acquire(&self) -> Permit<'_> {
        let mut n = self.count.lock().unwrap_or_else(|e| e.into_inner());
        while *n >= self.max {
            n = self.freed.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n += 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.count.lock().unwrap_or_else(|e| e.into_inner()) -= 1;
        self.0.freed.notify_one();
    }
}

/// Shared, thread-safe client; conversations are stateless per request.
pub struct ChatClient {
    cfg: ChatEndpointConfig,
    agent: ureq::Agent,
    key: Option<String>,
    gate: Gate,
    audit: Option<Mutex<File>>,
    requests: AtomicU64,
}

impl ChatClient {
    /// Fails before any request when the key variable is named but unset.
    pub fn new(cfg: ChatEndpointConfig) -> Result<Self, AgentError> {
        let key = match &cfg.api_key_env {
            Some(var) => Some(
                std::env::var(var)
                    .map_err(|_| AgentError::Config(format!("environment variable `{var}` is not set")))?,
            ),
            None => None,
        };
        if cfg.max_in_flight == 0 {
            return Err(AgentError::Config("max_in_flight must be positive".into()));
        }
        let audit = match &cfg.audit_log {
            Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p)?)),
            None => None,
        };
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(cfg.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        let gate = Gate { count: Mutex::new(0), freed: Condvar::new(), max: cfg.max_in_flight };
        Ok(ChatClient { cfg, agent, key, gate, audit, requests: AtomicU64::new(0) })
    }

    pub fn config(&self) -> &ChatEndpointConfig {
        &self.cfg
    }

    /// Number of HTTP requests sent, retries included.
    pub fn request_count(&self) -> u64 {
        self.requests.load(Ordering::Relaxed)
    }

    fn audit(&self, entry: Value) {
        if let Some(file) = &self.audit {
            let mut line = entry.to_string();
            line.push('\n');
            let mut f = file.lock().unwrap_or_else(|e| e.into_inner());
            if let Err(e) = f.write_all(line.as_bytes()) {
                log::warn!("audit log write failed: {e}");
            }
        }
    }

    pub fn complete(&self, messages: &[ChatMessage]) -> Result<String, AgentError> {
        self.complete_tagged(messages, "text")
    }

    fn complete_tagged(&self, messages: &[ChatMessage], modality: &str) -> Result<String, AgentError> {
        let _permit = self.gate.acquire();
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let body = json!({
            "model": self.cfg.model,
            "temperature": self.cfg.temperature,
            "max_tokens": self.cfg.max_tokens,
            "messages": messages.iter().map(ChatMessage::to_json).collect::<Vec<_>>(),
        });
        let mut last = AgentError::Transport("no attempt made".into());
        for attempt in 0..=self.cfg.retries {
            if attempt > 0 {
                std::thread::sleep(Duration::from_millis(
                    self.cfg.backoff_ms.saturating_mul(1 << (attempt - 1).min(16)),
                ));
            }
            self.requests.fetch_add(1, Ordering::Relaxed);
            let started = Instant::now();
            let mut req = self.agent.post(&url).header("Content-Type", "application/json");
            if let Some(k) = &self.key {
                req = req.header("Authorization", format!("Bearer {k}"));
            }
            let outcome = req.send(body.to_string().as_bytes()).and_then(|mut r| {
                let status = r.status().as_u16();
                r.body_mut().read_to_string().map(|text| (status, text))
            });
            let elapsed_ms = started.elapsed().as_millis() as u64;
            let auth = if self.key.is_some() { "Bearer ***" } else { "none" };
            match outcome {
                Ok((status, text)) => {
                    self.audit(json!({
                        "url": url, "attempt": attempt, "auth": auth, "modality": modality,
                        "request": body, "status": status, "response": text, "elapsed_ms": elapsed_ms,
                    }));
                    if (200..300).contains(&status) {
                        return extract_content(&text);
                    }
                    last = AgentError::Http { status, body: text };
                    if status != 429 && status < 500 {
                        return Err(last);
                    }
                }
                Err(e) => {
                    self.audit(json!({
                        "url": url, "attempt": attempt, "auth": auth, "modality": modality,
                        "request": body, "error": e.to_string(), "elapsed_ms": elapsed_ms,
                    }));
                    last = AgentError::Transport(e.to_string());
                }
            }
        }
        Err(last)
    }

    fn rasterize(&self, svg: &str) -> Option<Vec<u8>> {
        let cmd = self.cfg.rasterizer.as_ref()?;
        let (prog, args) = cmd.split_first()?;
        let run = || -> std::io::Result<Vec<u8>> {
            let mut child = Command::new(prog)
                .args(args)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::null())
                .spawn()?;
            child.stdin.take().expect("piped stdin").write_all(svg.as_bytes())?;
            let out = child.wait_with_output()?;
            if !out.status.success() || out.stdout.is_empty() {
                return Err(std::io::Error::other(format!("rasterizer exited with {}", out.status)));
            }
            Ok(out.stdout)
        };
        run().map_err(|e| log::warn!("rasterizer failed, sending text scene: {e}")).ok()
    }

    /// System message plus a user message with the scene image in the
    /// `{image}` slot, or the scene description when no image is available.
    pub fn prompt_messages(&self, prompt: &Prompt) -> (Vec<ChatMessage>, &'static str) {
        let system = ChatMessage::text("system", &prompt.system);
        if let Some(png) = prompt.image_svg.as_deref().and_then(|svg| self.rasterize(svg)) {
            let (before, after) = prompt.split_at_image();
            let mut parts = Vec::new();
            if !before.trim().is_empty() {
                parts.push(ContentPart::Text(before.to_string()));
            }
            parts.push(ContentPart::ImagePng(png));
            if !after.trim().is_empty() {
                parts.push(ContentPart::Text(after.to_string()));
            }
            return (vec![system, ChatMessage { role: "user".into(), parts }], "image");
        }
        (vec![system, ChatMessage::text("user", &prompt.user_text())], "text")
    }

    pub fn complete_prompt(&self, prompt: &Prompt) -> Result<String, AgentError> {
        let (messages, modality) = self.prompt_messages(prompt);
        self.complete_tagged(&messages, modality)
    }
}

fn extract_content(text: &str) -> Result<String, AgentError> {
    let v: Value = serde_json::from_str(text).map_err(|e| AgentError::Malformed(e.to_string()))?;
    let content = v
        .pointer("/choices/0/message/content")
        .ok_or_else(|| AgentError::Malformed("missing choices[0].message.content".into()))?;
    match content {
        Value::String(s) => Ok(s.clone()),
        Value::Array(parts) => {
            Ok(parts.iter().filter_map(|p| p.get("text").and_then(Value::as_str)).collect::<Vec<_>>().join(""))
        }
        _ => Err(AgentError::Malformed("content is neither text nor parts".into())),
    }
}

pub struct ChatAnswerer(pub Arc<ChatClient>);

impl Answerer for ChatAnswerer {
    fn name(&self) -> String {
        self.0.cfg.model.clone()
    }

    fn answer(&mut self, q: &Query) -> Result<String, AgentError> {
        self.0.complete_prompt(q.prompt)
    }
}

pub struct ChatPlanAgent(pub Arc<ChatClient>);

impl PlanAgent for ChatPlanAgent {
    fn name(&self) -> String {
        self.0.cfg.model.clone()
    }

    fn plan(&mut self, req: &PlanRequest) -> Result<String, AgentError> {
        self.0.complete_prompt(req.prompt)
    }
}
