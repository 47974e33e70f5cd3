//! Instance generation, full-grounding versus pruned pipeline runs, and CSV
//! output of the per-task metrics.

mod emit;
mod generate;

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::grounder::{ground_with_limits, GroundingLimits};
use crate::llm::{spg_llm, LlmBackend, LlmConfig, PromptTemplate, RuleBackend};
use crate::planner::{solve_with_limits, SearchLimits, SearchOutcome};
use crate::task::StripsTask;
use crate::validate::{validate_plan, Validator};

pub use emit::{emit_csv, emit_scatter, Metric, CSV_HEADER, SCATTER_HEADER};
pub use generate::{desk_corpus, generate_instance, GeneratorSpec, InvalidSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "FG")]
    Fg,
    #[serde(rename = "SPG-rule")]
    SpgRule,
    #[serde(rename = "SPG-llm")]
    SpgLlm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Method::Fg => "FG",
            Method::SpgRule => "SPG-rule",
            Method::SpgLlm => "SPG-llm",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "fg" => Ok(Method::Fg),
            "spg-rule" | "rule" => Ok(Method::SpgRule),
            "spg-llm" | "llm" => Ok(Method::SpgLlm),
            _ => Err(format!("unknown method '{s}' (expected FG, SPG-rule or SPG-llm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Soundness {
    /// A plan was found and replays on the original task.
    Valid,
    /// A plan was found but does not solve the original task.
    Invalid,
    /// No plan: pruning rejected, grounding failed, or search gave up.
    Unsolved,
}

impl fmt::Display for Soundness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Soundness::Valid => "valid",
            Soundness::Invalid => "invalid",
            Soundness::Unsolved => "unsolved",
        })
    }
}

/// One task under one method. Times are wall-clock seconds around exactly
/// the named step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub task: String,
    pub family: String,
    pub method: Method,
    pub grounded_actions: Option<usize>,
    pub grounded_atoms: Option<usize>,
    pub parse_time: Option<f64>,
    /// Whole pruning loop, including model calls and validation.
    pub prune_time: Option<f64>,
    pub grounding_time: Option<f64>,
    pub solving_time: Option<f64>,
    pub plan_cost: Option<Cost>,
    pub plan_length: Option<usize>,
    pub sound: Soundness,
    pub attempts: Option<usize>,
    pub error: Option<String>,
}

impl BenchmarkRecord {
    fn empty(task: &BenchTask, method: Method) -> Self {
        BenchmarkRecord {
            task: task.id.clone(),
            family: task.family.clone(),
            method,
            grounded_actions: None,
            grounded_atoms: None,
            parse_time: None,
            prune_time: None,
            grounding_time: None,
            solving_time: None,
            plan_cost: None,
            plan_length: None,
            sound: Soundness::Unsolved,
            attempts: None,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchTask {
    pub id: String,
    pub family: String,
    pub domain: String,
    pub problem: String,
}

impl BenchTask {
    pub fn generated(spec: &GeneratorSpec) -> Result<Self, InvalidSpec> {
        let (domain, problem) = generate_instance(spec)?;
        Ok(BenchTask { id: spec.id(), family: spec.family().into(), domain, problem })
    }
}

/// Everything that determines a run; written next to its results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: u64,
    pub time_bound_secs: f64,
    pub max_ground_actions: usize,
    pub max_states: usize,
    pub methods: Vec<Method>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Prompt template file for the model backend; the built-in one if unset.
    pub template_file: Option<String>,
    /// Where each pruning run's transcript goes, as `<dir>/<task>/<method>`.
    pub log_dir: Option<String>,
    pub llm: LlmConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 0,
            time_bound_secs: 60.0,
            max_ground_actions: GroundingLimits::default().max_actions,
            max_states: SearchLimits::default().max_states,
            methods: vec![Method::Fg, Method::SpgRule],
            threads: 0,
            template_file: None,
            log_dir: None,
            llm: LlmConfig::default(),
        }
    }
}

impl BenchConfig {
    pub fn time_bound(&self) -> Duration {
        Duration::from_secs_f64(self.time_bound_secs)
    }

    pub fn grounding_limits(&self) -> GroundingLimits {
        GroundingLimits { max_actions: self.max_ground_actions, ..GroundingLimits::default() }
    }

    fn validator(&self) -> Validator {
        Validator { time_bound: self.time_bound(), grounding_limits: self.grounding_limits(), ..Validator::default() }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Runs every task under every method. A failing task becomes a record with
/// its error, never a missing row. Records are sorted by (task, method).
pub fn run_benchmark(
    tasks: &[BenchTask],
    methods: &[Method],
    config: &BenchConfig,
    llm: Option<&dyn LlmBackend>,
) -> Vec<BenchmarkRecord> {
    let template = match &config.template_file {
        None => Ok(PromptTemplate::default()),
        Some(path) => PromptTemplate::from_file(Path::new(path)).map_err(|e| e.to_string()),
    };
    let jobs: Vec<(&BenchTask, Method)> = tasks.iter().flat_map(|t| methods.iter().map(move |&m| (t, m))).collect();
    let run = || {
        jobs.par_iter()
            .map(|&(t, m)| match &template {
                Ok(template) => run_one(t, m, config, template, llm),
                Err(e) => BenchmarkRecord { error: Some(e.clone()), ..BenchmarkRecord::empty(t, m) },
            })
            .collect::<Vec<_>>()
    };
    let mut records = if config.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    };
    records.sort_by(|a, b| (&a.task, a.method).cmp(&(&b.task, b.method)));
    records
}

/// One pipeline run: prune (SPG methods), ground, solve, replay the plan on
/// the original task.
pub fn run_one(
    task: &BenchTask,
    method: Method,
    config: &BenchConfig,
    template: &PromptTemplate,
    llm: Option<&dyn LlmBackend>,
) -> BenchmarkRecord {
    let mut rec = BenchmarkRecord::empty(task, method);
    let t0 = Instant::now();
    let original = match crate::llm::parse_original(&task.domain, &task.problem) {
        Ok(t) => t,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.parse_time = Some(t0.elapsed().as_secs_f64());

    let pruned: StripsTask = match method {
        Method::Fg => original.clone(),
        Method::SpgRule | Method::SpgLlm => {
            let rule = RuleBackend;
            let backend: &dyn LlmBackend = match (method, llm) {
                (Method::SpgRule, _) => &rule,
                (_, Some(b)) => b,
                (_, None) => {
                    rec.error = Some("no language model backend configured".into());
                    return rec;
                }
            };
            let outcome =
                match spg_llm(&task.domain, &task.problem, template, &config.llm, backend, &config.validator()) {
                    Ok(o) => o,
                    Err(e) => {
                        rec.error = Some(e.to_string());
                        return rec;
                    }
                };
            if let Some(dir) = &config.log_dir {
                let dir = Path::new(dir).join(&task.id).join(method.to_string());
                if let Err(e) = outcome.write_transcript(&dir) {
                    rec.error = Some(format!("cannot write transcript: {e}"));
                }
            }
            rec.prune_time = Some(outcome.seconds);
            rec.attempts = Some(outcome.attempts.len());
            match outcome.accepted.and_then(|v| v.task) {
                Some(t) => t,
                None => {
                    rec.error = Some("pruning rejected after all attempts".into());
                    return rec;
                }
            }
        }
    };

    let gt = match ground_with_limits(&pruned, config.grounding_limits()) {
        Ok(gt) => gt,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    rec.grounded_actions = Some(gt.stats.num_actions);
    rec.grounded_atoms = Some(gt.stats.num_atoms);
    rec.grounding_time = Some(gt.stats.grounding_time.as_secs_f64());

    let limits = SearchLimits { time_bound: config.time_bound(), max_states: config.max_states };
    let result = solve_with_limits(&gt, limits);
    match result.outcome {
        SearchOutcome::Solved { plan, cost, solving_time } => {
            rec.solving_time = Some(solving_time.as_secs_f64());
            rec.plan_cost = Some(cost);
            rec.plan_length = Some(plan.len());
            let verdict = validate_plan(&original, &pruned.plan_steps(&plan));
            if verdict.is_valid() {
                rec.sound = Soundness::Valid;
            } else {
                rec.sound = Soundness::Invalid;
                rec.error = Some(verdict.to_string());
            }
        }
        other => {
            rec.solving_time = Some(result.elapsed.as_secs_f64());
            rec.error = Some(
                match other {
                    SearchOutcome::Unsolvable => "planner proved the task unsolvable",
                    SearchOutcome::Timeout => "planner hit the time bound",
                    _ => "planner hit the state limit",
                }
                .into(),
            );
        }
    }
    rec
}

/// Writes `records.csv`, one scatter file per metric and `run-config.toml`.
pub fn write_results(dir: &Path, records: &[BenchmarkRecord], config: &BenchConfig) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("records.csv"), emit_csv(records))?;
    for &spg in &config.methods {
        if spg == Method::Fg {
            continue;
        }
        for metric in Metric::ALL {
            let name = format!("scatter-{}-{}.csv", spg.to_string().to_lowercase(), metric.name());
            std::fs::write(dir.join(name), emit_scatter(records, metric, spg))?;
        }
    }
    std::fs::write(dir.join("run-config.toml"), config.to_toml())
}
