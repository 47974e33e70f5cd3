use std::collections::BTreeMap;

use super::{BenchmarkRecord, Method, Soundness};

pub const CSV_HEADER: [&str; 15] = [
    "task",
    "family",
    "method",
    "grounded_actions",
    "grounded_atoms",
    "parse_time",
    "prune_time",
    "grounding_time",
    "solving_time",
    "plan_cost",
    "plan_length",
    "sound",
    "attempts",
    "error",
    "prune_plus_grounding_time",
];

pub const SCATTER_HEADER: [&str; 5] = ["task", "family", "spg", "baseline", "failed"];

/// Value used in scatter files for a missing coordinate.
const FAILED: f64 = -1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    GroundedActions,
    GroundingTime,
    PlanCost,
    SolvingTime,
}

impl Metric {
    pub const ALL: [Metric; 4] =
        [Metric::GroundedActions, Metric::GroundingTime, Metric::PlanCost, Metric::SolvingTime];

    pub fn name(self) -> &'static str {
        match self {
            Metric::GroundedActions => "grounded_actions",
            Metric::GroundingTime => "grounding_time",
            Metric::PlanCost => "plan_cost",
            Metric::SolvingTime => "solving_time",
        }
    }

    fn value(self, r: &BenchmarkRecord) -> Option<f64> {
        match self {
            Metric::GroundedActions => r.grounded_actions.map(|n| n as f64),
            Metric::GroundingTime => r.grounding_time,
            Metric::PlanCost => r.plan_cost.map(|c| c.to_f64()),
            Metric::SolvingTime => r.solving_time,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Metric::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown metric '{s}'"))
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn secs(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is UTF-8")
}

/// One row per record under [`CSV_HEADER`]; empty fields for missing values.
pub fn emit_csv(records: &[BenchmarkRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in records {
        let combined = match (r.prune_time, r.grounding_time) {
            (Some(p), Some(g)) => Some(p + g),
            (None, g) => g,
            (Some(_), None) => None,
        };
        w.write_record([
            r.task.clone(),
            r.family.clone(),
            r.method.to_string(),
            opt(r.grounded_actions),
            opt(r.grounded_atoms),
            secs(r.parse_time),
            secs(r.prune_time),
            secs(r.grounding_time),
            secs(r.solving_time),
            opt(r.plan_cost),
            opt(r.plan_length),
            r.sound.to_string(),
            opt(r.attempts),
            r.error.clone().unwrap_or_default(),
            secs(combined),
        ])
        .expect("in-memory write");
    }
    finish(w)
}

/// Per task that has both an FG record and a `spg` record: x is the pruned
/// run's metric, y the FG metric. A run without a valid plan (or without the
/// metric) gets the coordinate -1 and `failed = true`.
pub fn emit_scatter(records: &[BenchmarkRecord], metric: Metric, spg: Method) -> String {
    let mut by_task: BTreeMap<&str, (Option<&BenchmarkRecord>, Option<&BenchmarkRecord>)> = BTreeMap::new();
    for r in records {
        let e = by_task.entry(r.task.as_str()).or_default();
        if r.method == Method::Fg {
            e.1 = Some(r);
        } else if r.method == spg {
            e.0 = Some(r);
        }
    }
    let coord = |r: &BenchmarkRecord| match metric {
        // grounding happens whether or not a plan is found later
        Metric::GroundedActions | Metric::GroundingTime => metric.value(r),
        _ if r.sound == Soundness::Valid => metric.value(r),
        _ => None,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SCATTER_HEADER).expect("in-memory write");
    for (task, pair) in by_task {
        let (Some(s), Some(b)) = pair else { continue };
        let x = coord(s).filter(|_| s.sound == Soundness::Valid);
        let y = coord(b);
        w.write_record([
            task.to_string(),
            s.family.clone(),
            x.unwrap_or(FAILED).to_string(),
            y.unwrap_or(FAILED).to_string(),
            (x.is_none() || y.is_none()).to_string(),
        ])
        .expect("in-memory write");
    }
    finish(w)
}
