use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::pddl::{parse_domain, parse_problem, print_domain, print_problem};
use crate::pruning::{apply_proposal, relevance_prune};
use crate::task::build_task;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("request failed: {0}")]
    Request(String),
    #[error("endpoint answered with HTTP status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("unexpected response body: {0}")]
    Body(String),
    #[error("environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("scripted failure: {0}")]
    Scripted(String),
    #[error("backend cannot handle this task: {0}")]
    Unsupported(String),
}

/// What a backend sees on each call. Text-only backends use `prompt`; the
/// offline backends also read the original files.
#[derive(Debug, Clone, Copy)]
pub struct LlmRequest<'a> {
    pub prompt: &'a str,
    pub domain: &'a str,
    pub problem: &'a str,
    /// 1-based attempt number.
    pub attempt: usize,
}

pub trait LlmBackend: Send + Sync {
    fn complete(&self, request: &LlmRequest<'_>) -> Result<String, TransportError>;
}

/// Single-turn chat completion over HTTP.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    extra: Map<String, Value>,
    agent: ureq::Agent,
    min_interval: Duration,
    last_request: Arc<Mutex<Option<Instant>>>,
}

impl HttpBackend {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, timeout: Duration) -> Self {
        let agent: ureq::Agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        HttpBackend {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: None,
            extra: Map::new(),
            agent,
            min_interval: Duration::ZERO,
            last_request: Arc::new(Mutex::new(None)),
        }
    }

    pub fn with_api_key(mut self, key: Option<String>) -> Self {
        self.api_key = key;
        self
    }

    /// Extra top-level request fields, passed through unchanged.
    pub fn with_extra(mut self, extra: Map<String, Value>) -> Self {
        self.extra = extra;
        self
    }

    /// Minimum spacing between requests, shared by clones of this backend.
    pub fn with_min_interval(mut self, interval: Duration) -> Self {
        self.min_interval = interval;
        self
    }

    fn throttle(&self) {
        if self.min_interval.is_zero() {
            return;
        }
        let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = *last {
            let wait = self.min_interval.saturating_sub(t.elapsed());
            if !wait.is_zero() {
                std::thread::sleep(wait);
            }
        }
        *last = Some(Instant::now());
    }

    pub fn request_body(&self, prompt: &str) -> Value {
        let mut body = json!({
            "model": self.model,
            "messages": [{ "role": "user", "content": prompt }],
        });
        if let Value::Object(map) = &mut body {
            for (k, v) in &self.extra {
                map.insert(k.clone(), v.clone());
            }
        }
        body
    }
}

impl LlmBackend for HttpBackend {
    fn complete(&self, request: &LlmRequest<'_>) -> Result<String, TransportError> {
        self.throttle();
        let mut req = self.agent.post(&self.endpoint).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp =
            req.send_json(self.request_body(request.prompt)).map_err(|e| TransportError::Request(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(|e| TransportError::Request(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(TransportError::Status { status, body: text });
        }
        let value: Value = serde_json::from_str(&text).map_err(|e| TransportError::Body(e.to_string()))?;
        value
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| TransportError::Body("missing choices[0].message.content".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MockReply {
    Text(String),
    /// The original domain and problem, unchanged.
    Identity,
    Fail(String),
}

/// Replays a fixed script of replies; the last entry repeats once the
/// script runs out.
#[derive(Debug)]
pub struct MockBackend {
    script: Vec<MockReply>,
    calls: AtomicUsize,
    prompts: Mutex<Vec<String>>,
}

impl MockBackend {
    pub fn new(script: Vec<MockReply>) -> Self {
        assert!(!script.is_empty(), "mock script needs at least one reply");
        MockBackend { script, calls: AtomicUsize::new(0), prompts: Mutex::new(Vec::new()) }
    }

    pub fn identity() -> Self {
        Self::new(vec![MockReply::Identity])
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn prompts(&self) -> Vec<String> {
        self.prompts.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }
}

impl LlmBackend for MockBackend {
    fn complete(&self, request: &LlmRequest<'_>) -> Result<String, TransportError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst);
        self.prompts.lock().unwrap_or_else(|e| e.into_inner()).push(request.prompt.to_string());
        match &self.script[n.min(self.script.len() - 1)] {
            MockReply::Text(t) => Ok(t.clone()),
            MockReply::Identity => Ok(format!("{}\n\n{}\n", request.domain, request.problem)),
            MockReply::Fail(m) => Err(TransportError::Scripted(m.clone())),
        }
    }
}

/// Answers with the relevance-pruned files, formatted like a model reply.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleBackend;

impl LlmBackend for RuleBackend {
    fn complete(&self, request: &LlmRequest<'_>) -> Result<String, TransportError> {
        let unsupported = |e: &dyn std::fmt::Display| TransportError::Unsupported(e.to_string());
        let d = parse_domain(request.domain).map_err(|e| unsupported(&e))?;
        let p = parse_problem(request.problem, &d).map_err(|e| unsupported(&e))?;
        let task = build_task(&d, &p).map_err(|e| unsupported(&e))?;
        let (d2, p2) = apply_proposal(&task, &relevance_prune(&task)).map_err(|e| unsupported(&e))?;
        Ok(format!("```pddl\n{}```\n\n```pddl\n{}```\n", print_domain(&d2), print_problem(&p2)))
    }
}
