//! The prune-validate-retry loop around a language model, with HTTP, scripted
//! and rule-based backends.

mod backend;
mod extract;
mod template;

use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::pddl::{parse_domain, parse_problem};
use crate::task::{build_task, StripsTask};
use crate::validate::{Diagnostic, Validation, ValidationReport, Validator};

pub use backend::{HttpBackend, LlmBackend, LlmRequest, MockBackend, MockReply, RuleBackend, TransportError};
pub use extract::{extract_task_files, ExtractionError};
pub use template::{format_prompt, format_repair_prompt, PromptTemplate, TemplateError, REPAIR_SEPARATOR};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Http,
    /// Echoes the original files.
    #[default]
    Mock,
    Rule,
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "http" | "llm" => Ok(BackendKind::Http),
            "mock" => Ok(BackendKind::Mock),
            "rule" => Ok(BackendKind::Rule),
            other => Err(format!("unknown backend '{other}' (expected llm, mock or rule)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LlmConfig {
    pub backend: BackendKind,
    pub endpoint: String,
    pub model: String,
    /// Maximum number of model calls per task.
    pub attempts: usize,
    pub request_timeout_secs: f64,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: String,
    pub min_request_interval_secs: f64,
    /// Retry with the first prompt instead of a repair prompt.
    pub resample_original_prompt: bool,
    /// Extra request fields, e.g. sampling or reasoning settings.
    pub extra: Map<String, Value>,
}

impl Default for LlmConfig {
    fn default() -> Self {
        LlmConfig {
            backend: BackendKind::Mock,
            endpoint: "http://localhost:8000/v1/chat/completions".into(),
            model: String::new(),
            attempts: 1,
            request_timeout_secs: 600.0,
            api_key_env: "SPG_API_KEY".into(),
            min_request_interval_secs: 0.0,
            resample_original_prompt: false,
            extra: Map::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpgError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("original task is invalid: {0}")]
    Original(String),
}

impl LlmConfig {
    pub fn check(&self) -> Result<(), SpgError> {
        if self.attempts == 0 {
            return Err(SpgError::Config("attempts must be at least 1".into()));
        }
        if self.backend == BackendKind::Http && (self.endpoint.is_empty() || self.model.is_empty()) {
            return Err(SpgError::Config("the http backend needs an endpoint and a model name".into()));
        }
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.request_timeout_secs)
            || !(self.min_request_interval_secs.is_finite() && self.min_request_interval_secs >= 0.0)
        {
            return Err(SpgError::Config("timeouts must be positive".into()));
        }
        Ok(())
    }

    pub fn make_backend(&self) -> Result<Box<dyn LlmBackend>, SpgError> {
        self.check()?;
        Ok(match self.backend {
            BackendKind::Http => Box::new(
                HttpBackend::new(&self.endpoint, &self.model, Duration::from_secs_f64(self.request_timeout_secs))
                    .with_api_key(std::env::var(&self.api_key_env).ok())
                    .with_extra(self.extra.clone())
                    .with_min_interval(Duration::from_secs_f64(self.min_request_interval_secs)),
            ),
            BackendKind::Mock => Box::new(MockBackend::identity()),
            BackendKind::Rule => Box::new(RuleBackend),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpgAttempt {
    pub prompt: String,
    /// Raw model output; `None` when the call itself failed.
    pub response: Option<String>,
    pub transport_error: Option<String>,
    /// `None` when there was no response to validate.
    pub report: Option<ValidationReport>,
    pub seconds: f64,
}

impl SpgAttempt {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(ValidationReport::passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SpgStatus {
    Accepted { domain: String, problem: String },
    Rejected,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpgOutcome {
    pub status: SpgStatus,
    pub attempts: Vec<SpgAttempt>,
    /// Wall-clock time of the whole loop, model calls and validation.
    pub seconds: f64,
    /// The accepted pruned task and the search run during its validation.
    #[serde(skip)]
    pub accepted: Option<Validation>,
}

impl SpgOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self.status, SpgStatus::Accepted { .. })
    }

    /// Writes every prompt, response and report, plus the accepted files.
    pub fn write_transcript(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (i, a) in self.attempts.iter().enumerate() {
            let n = i + 1;
            std::fs::write(dir.join(format!("attempt-{n}.prompt.txt")), &a.prompt)?;
            match (&a.response, &a.transport_error) {
                (Some(r), _) => std::fs::write(dir.join(format!("attempt-{n}.response.txt")), r)?,
                (None, Some(e)) => std::fs::write(dir.join(format!("attempt-{n}.error.txt")), e)?,
                (None, None) => {}
            }
            if let Some(report) = &a.report {
                std::fs::write(dir.join(format!("attempt-{n}.report.txt")), report.to_text())?;
            }
        }
        if let SpgStatus::Accepted { domain, problem } = &self.status {
            std::fs::write(dir.join("domain.pddl"), domain)?;
            std::fs::write(dir.join("problem.pddl"), problem)?;
        }
        let json = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(dir.join("outcome.json"), json)
    }
}

pub fn parse_original(domain_text: &str, problem_text: &str) -> Result<StripsTask, SpgError> {
    let d = parse_domain(domain_text).map_err(|e| SpgError::Original(e.to_string()))?;
    let p = parse_problem(problem_text, &d).map_err(|e| SpgError::Original(e.to_string()))?;
    build_task(&d, &p).map_err(|e| SpgError::Original(e.to_string()))
}

/// Asks the backend for a pruned task at most `config.attempts` times. Each
/// retry carries the previous answer and what was wrong with it, unless
/// `resample_original_prompt` is set.
pub fn spg_llm(
    domain_text: &str,
    problem_text: &str,
    template: &PromptTemplate,
    config: &LlmConfig,
    backend: &dyn LlmBackend,
    validator: &Validator,
) -> Result<SpgOutcome, SpgError> {
    config.check()?;
    let started = Instant::now();
    let original = parse_original(domain_text, problem_text)?;
    let first = format_prompt(template, domain_text, problem_text)?;
    let mut attempts: Vec<SpgAttempt> = Vec::with_capacity(config.attempts);
    // (previous domain, previous problem, rendered failures)
    let mut last_failure: Option<(String, String, String)> = None;

    for k in 1..=config.attempts {
        let t0 = Instant::now();
        let prompt = match &last_failure {
            Some((d, p, err)) if !config.resample_original_prompt => {
                format_repair_prompt(template, domain_text, problem_text, d, p, err)?
            }
            _ => first.clone(),
        };
        let request = LlmRequest { prompt: &prompt, domain: domain_text, problem: problem_text, attempt: k };
        let response = match backend.complete(&request) {
            Ok(r) => r,
            Err(e) => {
                attempts.push(SpgAttempt {
                    prompt,
                    response: None,
                    transport_error: Some(e.to_string()),
                    report: None,
                    seconds: t0.elapsed().as_secs_f64(),
                });
                continue;
            }
        };
        let (report, files, validation) = match extract_task_files(&response) {
            Err(e) => {
                let report = ValidationReport::syntactic_failure(Diagnostic::Extraction {
                    found_domains: e.found_domains,
                    found_problems: e.found_problems,
                });
                (report, (response.clone(), String::new()), None)
            }
            Ok((d, p)) => {
                let v = validator.validate(&original, &d, &p);
                (v.report.clone(), (d, p), Some(v))
            }
        };
        let passed = report.passed();
        let error = report.failure_lines().iter().map(|l| format!("- {l}")).collect::<Vec<_>>().join("\n");
        attempts.push(SpgAttempt {
            prompt,
            response: Some(response),
            transport_error: None,
            report: Some(report),
            seconds: t0.elapsed().as_secs_f64(),
        });
        if passed {
            let (domain, problem) = files;
            return Ok(SpgOutcome {
                status: SpgStatus::Accepted { domain, problem },
                attempts,
                seconds: started.elapsed().as_secs_f64(),
                accepted: validation,
            });
        }
        last_failure = Some((files.0, files.1, error));
    }
    Ok(SpgOutcome { status: SpgStatus::Rejected, attempts, seconds: started.elapsed().as_secs_f64(), accepted: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: &str = "(define (domain d) (:predicates (p) (g) (junk))
        (:action a :parameters () :precondition (p) :effect (g))
        (:action b :parameters () :precondition (p) :effect (junk)))";
    const P: &str = "(define (problem x) (:domain d) (:init (p)) (:goal (g)))";

    fn run(script: Vec<MockReply>, attempts: usize) -> (SpgOutcome, MockBackend) {
        let backend = MockBackend::new(script);
        let config = LlmConfig { attempts, ..LlmConfig::default() };
        let out = spg_llm(D, P, &PromptTemplate::default(), &config, &backend, &Validator::default()).unwrap();
        (out, backend)
    }

    #[test]
    fn identity_is_accepted_first_time() {
        let (out, backend) = run(vec![MockReply::Identity], 3);
        assert!(out.is_accepted());
        assert_eq!(backend.calls(), 1);
        assert!(out.accepted.unwrap().search.unwrap().plan().is_some());
    }

    #[test]
    fn malformed_reply_is_rejected() {
        let (out, backend) = run(vec![MockReply::Text("(define (domain d) (:predicates".into())], 1);
        assert_eq!(out.status, SpgStatus::Rejected);
        assert_eq!(backend.calls(), 1);
        let report = out.attempts[0].report.as_ref().unwrap();
        assert!(!report.syntactic.passed());
    }

    #[test]
    fn repair_prompt_carries_previous_failure() {
        let pruned_d = "(define (domain d) (:predicates (p) (g))
            (:action a :parameters () :precondition (p) :effect (g)))";
        let bad = format!("{pruned_d}\n(define (problem x) (:domain d) (:init (p) (g)) (:goal (g)))");
        let good = format!("{pruned_d}\n{P}");
        let (out, backend) = run(vec![MockReply::Text(bad), MockReply::Text(good)], 2);
        assert!(out.is_accepted(), "{:?}", out.attempts);
        assert_eq!(backend.calls(), 2);
        let prompts = backend.prompts();
        assert!(prompts[1].contains("initial state atom (g) is not in the original initial state"));
        assert!(!prompts[0].contains("rejected"));
    }

    #[test]
    fn resampling_reuses_first_prompt() {
        let backend = MockBackend::new(vec![MockReply::Text("nothing".into())]);
        let config = LlmConfig { attempts: 2, resample_original_prompt: true, ..LlmConfig::default() };
        let out = spg_llm(D, P, &PromptTemplate::default(), &config, &backend, &Validator::default()).unwrap();
        assert_eq!(out.status, SpgStatus::Rejected);
        let prompts = backend.prompts();
        assert_eq!(prompts[0], prompts[1]);
    }

    #[test]
    fn transport_errors_use_up_attempts() {
        let (out, backend) = run(vec![MockReply::Fail("down".into())], 3);
        assert_eq!(out.status, SpgStatus::Rejected);
        assert_eq!(backend.calls(), 3);
        assert!(out.attempts.iter().all(|a| a.transport_error.is_some()));
    }

    #[test]
    fn transcript_files() {
        let (out, _) = run(vec![MockReply::Text("x".into()), MockReply::Identity], 2);
        let dir = tempfile::tempdir().unwrap();
        out.write_transcript(dir.path()).unwrap();
        for f in
            ["attempt-1.prompt.txt", "attempt-2.response.txt", "attempt-1.report.txt", "domain.pddl", "outcome.json"]
        {
            assert!(dir.path().join(f).exists(), "{f}");
        }
    }

    #[test]
    fn config_checks() {
        assert!(LlmConfig { attempts: 0, ..LlmConfig::default() }.check().is_err());
        assert!(LlmConfig { backend: BackendKind::Http, ..LlmConfig::default() }.check().is_err());
        let cfg: LlmConfig = toml::from_str("backend = \"rule\"\nattempts = 3\n").unwrap();
        assert_eq!((cfg.backend, cfg.attempts), (BackendKind::Rule, 3));
    }
}
