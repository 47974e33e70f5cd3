use std::path::Path;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::pddl::{print_domain, print_problem};
use crate::task::{apply_plan, plan_cost, Plan, PlanStep, StepError, StripsTask};

use super::{SearchOutcome, SearchResult};

#[derive(Debug, Error)]
pub enum ExternalPlannerError {
    #[error("could not run external planner: {0}")]
    Io(#[from] std::io::Error),
    #[error("plan file line {line}: cannot parse '{text}'")]
    PlanSyntax { line: usize, text: String },
    #[error("plan file step {index}: {source}")]
    UnknownStep { index: usize, source: StepError },
    #[error("external planner returned a plan that does not solve the task")]
    InvalidPlan,
}

/// Runs a planner binary through `sh -c`. The command template receives the
/// placeholders `{domain}`, `{problem}` and `{plan}`, substituted with quoted
/// file paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalPlanner {
    pub command: String,
    /// Exit codes that mean "proved unsolvable"; any other non-zero exit
    /// counts as a timeout.
    pub unsolvable_exit_codes: Vec<i32>,
}

impl ExternalPlanner {
    pub fn new(command: impl Into<String>) -> Self {
        // Fast Downward's codes for unsolvable and unsolvable-incomplete
        ExternalPlanner { command: command.into(), unsolvable_exit_codes: vec![11, 12] }
    }

    pub fn solve(&self, task: &StripsTask, time_bound: Duration) -> Result<SearchResult, ExternalPlannerError> {
        let started = Instant::now();
        let dir = tempfile::tempdir()?;
        let domain = dir.path().join("domain.pddl");
        let problem = dir.path().join("problem.pddl");
        let plan_file = dir.path().join("plan");
        std::fs::write(&domain, print_domain(task.domain()))?;
        std::fs::write(&problem, print_problem(task.problem()))?;
        let cmd = self
            .command
            .replace("{domain}", &quote(&domain))
            .replace("{problem}", &quote(&problem))
            .replace("{plan}", &quote(&plan_file));

        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&cmd)
            .current_dir(dir.path())
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()?;
        let deadline = started + time_bound;
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if Instant::now() >= deadline {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(result(SearchOutcome::Timeout, started));
            }
            std::thread::sleep(Duration::from_millis(10));
        };
        match status.code() {
            Some(0) => {}
            Some(code) if self.unsolvable_exit_codes.contains(&code) => {
                return Ok(result(SearchOutcome::Unsolvable, started));
            }
            _ => return Ok(result(SearchOutcome::Timeout, started)),
        }
        let Ok(text) = std::fs::read_to_string(&plan_file) else {
            return Ok(result(SearchOutcome::Unsolvable, started));
        };
        let solving_time = started.elapsed();
        let steps = parse_plan(&text)?;
        let actions = steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                task.ground_step(s).map_err(|source| ExternalPlannerError::UnknownStep { index: i + 1, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let plan = Plan::new(actions);
        match apply_plan(task.init(), &plan) {
            Ok(end) if task.is_goal_state(&end) => {}
            _ => return Err(ExternalPlannerError::InvalidPlan),
        }
        let cost = plan_cost(&plan);
        Ok(result(SearchOutcome::Solved { plan, cost, solving_time }, started))
    }
}

fn result(outcome: SearchOutcome, started: Instant) -> SearchResult {
    SearchResult { outcome, expanded: 0, generated: 0, elapsed: started.elapsed() }
}

fn quote(p: &Path) -> String {
    format!("'{}'", p.display().to_string().replace('\'', r"'\''"))
}

/// One `(name arg ...)` step per line; blank lines and `;` comments skipped.
pub fn parse_plan(text: &str) -> Result<Vec<PlanStep>, ExternalPlannerError> {
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || ExternalPlannerError::PlanSyntax { line: i + 1, text: raw.to_string() };
        let inner = line.strip_prefix('(').and_then(|l| l.strip_suffix(')')).ok_or_else(bad)?;
        let mut words = inner.split_whitespace().map(str::to_lowercase);
        let name = words.next().ok_or_else(bad)?;
        steps.push(PlanStep { action: name, args: words.collect() });
    }
    Ok(steps)
}
