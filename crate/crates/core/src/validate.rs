//! Checks for a pruned task (syntax, subset relations against the original,
//! solvability within a bound) and replay of plans on the original task.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::cost::Cost;
use crate::grounder::{ground_with_limits, GroundingLimits};
use crate::pddl::{parse_domain, parse_problem, AtomAst, DomainAst, PddlError, ProblemAst, SchemaAst};
use crate::planner::{solve_with_limits, ExternalPlanner, SearchLimits, SearchOutcome, SearchResult, SearchSummary};
use crate::task::{apply_action, build_task, PlanStep, StepError, StripsTask, TaskError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    Passed,
    Failed,
    NotRun,
}

impl fmt::Display for LevelStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelStatus::Passed => "passed",
            LevelStatus::Failed => "failed",
            LevelStatus::NotRun => "not run",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Predicates,
    Schemas,
    Objects,
    Init,
    Goal,
}

impl Relation {
    pub const ALL: [Relation; 5] =
        [Relation::Predicates, Relation::Schemas, Relation::Objects, Relation::Init, Relation::Goal];
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Predicates => "P' ⊆ P",
            Relation::Schemas => "A' ⊆ A",
            Relation::Objects => "O' ⊆ O",
            Relation::Init => "s0' ⊆ s0",
            Relation::Goal => "G' ≡ G",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FileKind {
    Domain,
    Problem,
}

impl fmt::Display for FileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileKind::Domain => "domain",
            FileKind::Problem => "problem",
        })
    }
}

/// One machine-readable finding. `Display` gives the sentence used in
/// reports and repair prompts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diagnostic {
    Extraction { found_domains: usize, found_problems: usize },
    Parse { file: FileKind, line: Option<usize>, column: Option<usize>, message: String },
    DanglingReference { schema: String, predicate: String },
    TaskBuild { message: String },
    UnknownPredicate { predicate: String },
    ChangedPredicate { predicate: String },
    UnknownSchema { schema: String },
    ChangedSchema { schema: String },
    UnknownObject { object: String },
    ChangedObjectType { object: String, original: String, found: String },
    AddedInitAtom { atom: String },
    MissingGoalAtom { atom: String },
    AddedGoalAtom { atom: String },
    GroundingLimit { message: String },
    Unsolvable,
    Timeout { seconds: f64 },
    OutOfMemory,
    PlannerError { message: String },
}

impl Diagnostic {
    /// The subset relation a semantic finding violates.
    pub fn relation(&self) -> Option<Relation> {
        match self {
            Diagnostic::UnknownPredicate { .. } | Diagnostic::ChangedPredicate { .. } => Some(Relation::Predicates),
            Diagnostic::UnknownSchema { .. } | Diagnostic::ChangedSchema { .. } => Some(Relation::Schemas),
            Diagnostic::UnknownObject { .. } | Diagnostic::ChangedObjectType { .. } => Some(Relation::Objects),
            Diagnostic::AddedInitAtom { .. } => Some(Relation::Init),
            Diagnostic::MissingGoalAtom { .. } | Diagnostic::AddedGoalAtom { .. } => Some(Relation::Goal),
            _ => None,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Extraction { found_domains, found_problems } => write!(
                f,
                "the answer must contain exactly one domain and one problem definition, \
                 found {found_domains} domain(s) and {found_problems} problem(s)"
            ),
            Diagnostic::Parse { file, message, .. } => write!(f, "{file} file: {message}"),
            Diagnostic::DanglingReference { schema, predicate } => {
                write!(f, "action '{schema}' references removed predicate '{predicate}'")
            }
            Diagnostic::TaskBuild { message } => write!(f, "the files do not form a valid task: {message}"),
            Diagnostic::UnknownPredicate { predicate } => {
                write!(f, "predicate '{predicate}' does not exist in the original domain")
            }
            Diagnostic::ChangedPredicate { predicate } => {
                write!(f, "predicate '{predicate}' has different parameter types than in the original domain")
            }
            Diagnostic::UnknownSchema { schema } => {
                write!(f, "action '{schema}' does not exist in the original domain")
            }
            Diagnostic::ChangedSchema { schema } => {
                write!(f, "action '{schema}' was modified; kept actions must be identical to the original")
            }
            Diagnostic::UnknownObject { object } => {
                write!(f, "object '{object}' does not exist in the original problem")
            }
            Diagnostic::ChangedObjectType { object, original, found } => {
                write!(f, "object '{object}' has type '{found}' but its original type is '{original}'")
            }
            Diagnostic::AddedInitAtom { atom } => {
                write!(f, "initial state atom {atom} is not in the original initial state")
            }
            Diagnostic::MissingGoalAtom { atom } => write!(f, "goal atom {atom} of the original goal is missing"),
            Diagnostic::AddedGoalAtom { atom } => write!(f, "goal atom {atom} is not in the original goal"),
            Diagnostic::GroundingLimit { message } => write!(f, "the task could not be grounded: {message}"),
            Diagnostic::Unsolvable => write!(f, "the pruned task is unsolvable"),
            Diagnostic::Timeout { seconds } => write!(f, "no plan was found within the time bound of {seconds} s"),
            Diagnostic::OutOfMemory => write!(f, "the planner ran out of memory on the pruned task"),
            Diagnostic::PlannerError { message } => write!(f, "the planner failed: {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub status: LevelStatus,
    pub diagnostics: Vec<Diagnostic>,
}

impl LevelReport {
    pub fn from_diagnostics(diagnostics: Vec<Diagnostic>) -> Self {
        let status = if diagnostics.is_empty() { LevelStatus::Passed } else { LevelStatus::Failed };
        LevelReport { status, diagnostics }
    }

    pub fn not_run() -> Self {
        LevelReport { status: LevelStatus::NotRun, diagnostics: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == LevelStatus::Passed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationVerdict {
    pub relation: Relation,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub syntactic: LevelReport,
    pub semantic: LevelReport,
    /// Empty when the semantic level did not run.
    pub relations: Vec<RelationVerdict>,
    pub computational: LevelReport,
    pub search: Option<SearchSummary>,
}

impl ValidationReport {
    /// Report for output that never reached parsing.
    pub fn syntactic_failure(diagnostic: Diagnostic) -> Self {
        ValidationReport {
            syntactic: LevelReport::from_diagnostics(vec![diagnostic]),
            semantic: LevelReport::not_run(),
            relations: Vec::new(),
            computational: LevelReport::not_run(),
            search: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.syntactic.passed() && self.semantic.passed() && self.computational.passed()
    }

    pub fn diagnostics(&self) -> impl Iterator<Item = &Diagnostic> {
        self.syntactic.diagnostics.iter().chain(&self.semantic.diagnostics).chain(&self.computational.diagnostics)
    }

    /// One line per failed check, prefixed with its level.
    pub fn failure_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, level) in
            [("syntactic", &self.syntactic), ("semantic", &self.semantic), ("computational", &self.computational)]
        {
            for d in &level.diagnostics {
                match d.relation() {
                    Some(r) => out.push(format!("{name} ({r}): {d}")),
                    None => out.push(format!("{name}: {d}")),
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let level = |name: &str, l: &LevelReport, s: &mut String| {
            s.push_str(&format!("{name}: {}\n", l.status));
            for d in &l.diagnostics {
                s.push_str(&format!("  - {d}\n"));
            }
        };
        level("syntactic", &self.syntactic, &mut s);
        level("semantic", &self.semantic, &mut s);
        for r in &self.relations {
            s.push_str(&format!("  {}: {}\n", r.relation, if r.passed { "passed" } else { "failed" }));
        }
        level("computational", &self.computational, &mut s);
        if let Some(summary) = &self.search {
            s.push_str(&format!(
                "  search: {} ({} expanded, {:.3} s)\n",
                summary.status, summary.expanded, summary.seconds
            ));
        }
        s.push_str(&format!("overall: {}\n", if self.passed() { "passed" } else { "failed" }));
        s
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_diagnostic(file: FileKind, e: &PddlError) -> Diagnostic {
    let pos = e.position();
    Diagnostic::Parse { file, line: pos.map(|p| p.line), column: pos.map(|p| p.column), message: e.to_string() }
}

/// Parses and type-checks the pair. With `original`, an action that uses a
/// predicate present in the original domain but missing from the new one is
/// reported as a dangling reference.
pub fn validate_syntactic(
    domain_text: &str,
    problem_text: &str,
    original: Option<&StripsTask>,
) -> (LevelReport, Option<StripsTask>) {
    let domain = match parse_domain(domain_text) {
        Ok(d) => d,
        Err(PddlError::UndeclaredPredicateInSchema { schema, predicate })
            if original.is_some_and(|t| t.predicate_id(&predicate).is_some()) =>
        {
            return (LevelReport::from_diagnostics(vec![Diagnostic::DanglingReference { schema, predicate }]), None);
        }
        Err(e) => return (LevelReport::from_diagnostics(vec![parse_diagnostic(FileKind::Domain, &e)]), None),
    };
    let problem = match parse_problem(problem_text, &domain) {
        Ok(p) => p,
        Err(e) => return (LevelReport::from_diagnostics(vec![parse_diagnostic(FileKind::Problem, &e)]), None),
    };
    match build_task(&domain, &problem) {
        Ok(t) => (LevelReport::from_diagnostics(Vec::new()), Some(t)),
        Err(e) => {
            let d = match e {
                TaskError::Pddl(e) => parse_diagnostic(FileKind::Domain, &e),
                other => Diagnostic::TaskBuild { message: other.to_string() },
            };
            (LevelReport::from_diagnostics(vec![d]), None)
        }
    }
}

/// Schema with variables replaced by parameter positions and atom lists
/// sorted, so conjunct order and variable names do not matter.
#[derive(Debug, PartialEq, Eq)]
struct NormalSchema {
    params: Vec<String>,
    pre: Vec<(String, Vec<usize>)>,
    add: Vec<(String, Vec<usize>)>,
    del: Vec<(String, Vec<usize>)>,
    equalities: Vec<(usize, usize, bool)>,
    cost: Cost,
}

fn normalize(s: &SchemaAst) -> NormalSchema {
    let pos = |v: &str| s.parameters.iter().position(|p| p.name == v).unwrap_or(usize::MAX);
    let atoms = |list: &[AtomAst]| {
        let mut v: Vec<(String, Vec<usize>)> =
            list.iter().map(|a| (a.predicate.clone(), a.args.iter().map(|x| pos(x)).collect())).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut equalities: Vec<(usize, usize, bool)> = s
        .equalities
        .iter()
        .map(|e| {
            let (l, r) = (pos(&e.left), pos(&e.right));
            (l.min(r), l.max(r), e.negated)
        })
        .collect();
    equalities.sort();
    equalities.dedup();
    NormalSchema {
        params: s.parameters.iter().map(|p| p.ty.clone()).collect(),
        pre: atoms(&s.precondition),
        add: atoms(&s.add_effects),
        del: atoms(&s.del_effects),
        equalities,
        cost: s.cost(),
    }
}

/// The five subset relations, each reported separately.
pub fn semantic_diagnostics(pruned: &StripsTask, original: &StripsTask) -> Vec<Diagnostic> {
    let (d1, p1) = (pruned.domain(), pruned.problem());
    let (d0, p0) = (original.domain(), original.problem());
    let mut out = Vec::new();
    out.extend(check_predicates(d1, d0));
    for s in &d1.schemas {
        match d0.schemas.iter().find(|o| o.name == s.name) {
            None => out.push(Diagnostic::UnknownSchema { schema: s.name.clone() }),
            Some(o) if normalize(o) != normalize(s) => out.push(Diagnostic::ChangedSchema { schema: s.name.clone() }),
            Some(_) => {}
        }
    }
    out.extend(check_objects(p1, p0));
    let init0: BTreeSet<String> = p0.init.iter().map(|a| a.to_string()).collect();
    let init1: BTreeSet<String> = p1.init.iter().map(|a| a.to_string()).collect();
    out.extend(init1.difference(&init0).map(|a| Diagnostic::AddedInitAtom { atom: a.clone() }));
    let goal0: BTreeSet<String> = p0.goal.iter().map(|a| a.to_string()).collect();
    let goal1: BTreeSet<String> = p1.goal.iter().map(|a| a.to_string()).collect();
    out.extend(goal0.difference(&goal1).map(|a| Diagnostic::MissingGoalAtom { atom: a.clone() }));
    out.extend(goal1.difference(&goal0).map(|a| Diagnostic::AddedGoalAtom { atom: a.clone() }));
    out
}

fn check_predicates(d1: &DomainAst, d0: &DomainAst) -> Vec<Diagnostic> {
    d1.predicates
        .iter()
        .filter_map(|p| match d0.predicates.iter().find(|o| o.name == p.name) {
            None => Some(Diagnostic::UnknownPredicate { predicate: p.name.clone() }),
            Some(o) => {
                let types = |ps: &[crate::pddl::TypedName]| ps.iter().map(|t| t.ty.clone()).collect::<Vec<_>>();
                (types(&o.parameters) != types(&p.parameters))
                    .then(|| Diagnostic::ChangedPredicate { predicate: p.name.clone() })
            }
        })
        .collect()
}

fn check_objects(p1: &ProblemAst, p0: &ProblemAst) -> Vec<Diagnostic> {
    p1.objects
        .iter()
        .filter_map(|o| match p0.objects.iter().find(|x| x.name == o.name) {
            None => Some(Diagnostic::UnknownObject { object: o.name.clone() }),
            Some(x) if x.ty != o.ty => Some(Diagnostic::ChangedObjectType {
                object: o.name.clone(),
                original: x.ty.clone(),
                found: o.ty.clone(),
            }),
            Some(_) => None,
        })
        .collect()
}

pub fn validate_semantic(pruned: &StripsTask, original: &StripsTask) -> (LevelReport, Vec<RelationVerdict>) {
    let diagnostics = semantic_diagnostics(pruned, original);
    let relations = Relation::ALL
        .iter()
        .map(|&relation| RelationVerdict {
            relation,
            passed: !diagnostics.iter().any(|d| d.relation() == Some(relation)),
        })
        .collect();
    (LevelReport::from_diagnostics(diagnostics), relations)
}

/// Which planner the computational level uses.
#[derive(Debug, Clone, Default)]
pub enum PlannerChoice {
    #[default]
    Internal,
    External(ExternalPlanner),
}

/// Grounds and solves the task; passes iff a plan is found within `bound`.
pub fn validate_computational(pruned: &StripsTask, bound: Duration) -> (LevelReport, Option<SearchResult>) {
    validate_computational_with(pruned, bound, GroundingLimits::default(), &PlannerChoice::Internal)
}

pub fn validate_computational_with(
    pruned: &StripsTask,
    bound: Duration,
    limits: GroundingLimits,
    planner: &PlannerChoice,
) -> (LevelReport, Option<SearchResult>) {
    let result = match planner {
        PlannerChoice::Internal => {
            let gt = match ground_with_limits(pruned, limits) {
                Ok(gt) => gt,
                Err(e) => {
                    return (
                        LevelReport::from_diagnostics(vec![Diagnostic::GroundingLimit { message: e.to_string() }]),
                        None,
                    )
                }
            };
            let remaining = bound.saturating_sub(gt.stats.grounding_time);
            solve_with_limits(&gt, SearchLimits::with_time_bound(remaining))
        }
        PlannerChoice::External(ext) => match ext.solve(pruned, bound) {
            Ok(r) => r,
            Err(e) => {
                return (LevelReport::from_diagnostics(vec![Diagnostic::PlannerError { message: e.to_string() }]), None)
            }
        },
    };
    let diagnostics = match &result.outcome {
        SearchOutcome::Solved { .. } => Vec::new(),
        SearchOutcome::Unsolvable => vec![Diagnostic::Unsolvable],
        SearchOutcome::Timeout => vec![Diagnostic::Timeout { seconds: bound.as_secs_f64() }],
        SearchOutcome::OutOfMemory => vec![Diagnostic::OutOfMemory],
    };
    (LevelReport::from_diagnostics(diagnostics), Some(result))
}

/// Runs the three levels in order; a failing level leaves the later ones
/// not run.
#[derive(Debug, Clone)]
pub struct Validator {
    pub time_bound: Duration,
    pub grounding_limits: GroundingLimits,
    pub planner: PlannerChoice,
}

impl Default for Validator {
    fn default() -> Self {
        Validator {
            time_bound: Duration::from_secs(60),
            grounding_limits: GroundingLimits::default(),
            planner: PlannerChoice::Internal,
        }
    }
}

/// Result of [`Validator::validate`]: the report plus the artifacts later
/// pipeline stages reuse.
#[derive(Debug, Clone)]
pub struct Validation {
    pub report: ValidationReport,
    pub task: Option<StripsTask>,
    pub search: Option<SearchResult>,
}

impl Validator {
    pub fn with_time_bound(time_bound: Duration) -> Self {
        Validator { time_bound, ..Self::default() }
    }

    pub fn validate(&self, original: &StripsTask, domain_text: &str, problem_text: &str) -> Validation {
        let (syntactic, task) = validate_syntactic(domain_text, problem_text, Some(original));
        let mut report = ValidationReport {
            syntactic,
            semantic: LevelReport::not_run(),
            relations: Vec::new(),
            computational: LevelReport::not_run(),
            search: None,
        };
        let Some(task) = task else {
            return Validation { report, task: None, search: None };
        };
        let (semantic, relations) = validate_semantic(&task, original);
        report.semantic = semantic;
        report.relations = relations;
        if !report.semantic.passed() {
            return Validation { report, task: Some(task), search: None };
        }
        let (computational, search) =
            validate_computational_with(&task, self.time_bound, self.grounding_limits, &self.planner);
        report.computational = computational;
        report.search = search.as_ref().map(SearchResult::summary);
        Validation { report, task: Some(task), search }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum PlanVerdict {
    Valid {
        cost: Cost,
    },
    /// `step` is 1-based; `None` when every step applies but the goal does
    /// not hold at the end.
    Invalid {
        step: Option<usize>,
        reason: String,
    },
}

impl PlanVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, PlanVerdict::Valid { .. })
    }
}

impl fmt::Display for PlanVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanVerdict::Valid { cost } => write!(f, "valid (cost {cost})"),
            PlanVerdict::Invalid { step: Some(i), reason } => write!(f, "invalid at step {i}: {reason}"),
            PlanVerdict::Invalid { step: None, reason } => write!(f, "invalid: {reason}"),
        }
    }
}

/// Grounds each named step afresh against `original` and replays from its
/// initial state.
pub fn validate_plan(original: &StripsTask, steps: &[PlanStep]) -> PlanVerdict {
    let mut state = original.init().clone();
    let mut cost = Cost::ZERO;
    for (i, step) in steps.iter().enumerate() {
        let invalid = |reason: String| PlanVerdict::Invalid { step: Some(i + 1), reason };
        let action = match original.ground_step(step) {
            Ok(a) => a,
            Err(e @ (StepError::UnknownAction(_) | StepError::UnknownObject(_))) => {
                return invalid(format!("{step}: {e} in the original task"))
            }
            Err(e) => return invalid(format!("{step}: {e}")),
        };
        state = match apply_action(&state, &action) {
            Ok(s) => s,
            Err(_) => {
                let missing: Vec<String> = state.missing(&action.pre).iter().map(|a| original.atom_name(a)).collect();
                return invalid(format!("{step}: unsatisfied precondition {}", missing.join(" ")));
            }
        };
        cost = cost + action.cost;
    }
    let missing = state.missing(original.goal().iter());
    if missing.is_empty() {
        PlanVerdict::Valid { cost }
    } else {
        let names: Vec<String> = missing.iter().map(|a| original.atom_name(a)).collect();
        PlanVerdict::Invalid { step: None, reason: format!("goal atoms not reached: {}", names.join(" ")) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{print_domain, print_problem};

    const DOMAIN: &str = "(define (domain d) (:requirements :typing) (:types item)
        (:predicates (p ?x - item) (q ?x - item) (r))
        (:action a :parameters (?x - item) :precondition (p ?x) :effect (and (q ?x) (not (p ?x))))
        (:action b :parameters () :precondition (r) :effect (r)))";
    const PROBLEM: &str = "(define (problem t) (:domain d) (:objects o1 o2 - item)
        (:init (p o1) (p o2)) (:goal (and (q o1) (q o2))))";

    fn original() -> StripsTask {
        let (r, t) = validate_syntactic(DOMAIN, PROBLEM, None);
        assert!(r.passed());
        t.unwrap()
    }

    #[test]
    fn identity_passes_everything() {
        let t = original();
        let v = Validator::with_time_bound(Duration::from_secs(5)).validate(
            &t,
            &print_domain(t.domain()),
            &print_problem(t.problem()),
        );
        assert!(v.report.passed(), "{}", v.report);
        assert!(v.report.relations.iter().all(|r| r.passed));
    }

    #[test]
    fn syntax_failures_are_positioned() {
        let t = original();
        let (r, _) = validate_syntactic("(define (domain d)\n\n(:predicates (p)", PROBLEM, Some(&t));
        match &r.diagnostics[..] {
            [Diagnostic::Parse { file: FileKind::Domain, line: Some(_), .. }] => {}
            other => panic!("unexpected {other:?}"),
        }
        let bad_problem = PROBLEM.replace("(p o2)", "(zz o2)");
        let (r, _) = validate_syntactic(DOMAIN, &bad_problem, Some(&t));
        assert!(r.diagnostics[0].to_string().contains("unknown predicate 'zz'"), "{}", r.diagnostics[0]);
    }

    #[test]
    fn dangling_reference_is_named() {
        let t = original();
        let pruned = DOMAIN.replacen("(r))", ")", 1);
        let (r, _) = validate_syntactic(&pruned, PROBLEM, Some(&t));
        assert_eq!(r.diagnostics[0].to_string(), "action 'b' references removed predicate 'r'");
    }

    #[test]
    fn reordered_goal_and_renamed_variables_pass() {
        let t = original();
        let d = DOMAIN.replace("?x", "?item");
        let p = PROBLEM.replace("(and (q o1) (q o2))", "(and (q o2) (q o1))");
        let v = Validator::with_time_bound(Duration::from_secs(5)).validate(&t, &d, &p);
        assert!(v.report.passed(), "{}", v.report);
    }

    #[test]
    fn altered_schema_fails_schema_relation_only() {
        let t = original();
        let d = DOMAIN.replace("(and (q ?x) (not (p ?x)))", "(q ?x)");
        let v = Validator::default().validate(&t, &d, PROBLEM);
        assert_eq!(v.report.semantic.diagnostics, vec![Diagnostic::ChangedSchema { schema: "a".into() }]);
        let failed: Vec<Relation> = v.report.relations.iter().filter(|r| !r.passed).map(|r| r.relation).collect();
        assert_eq!(failed, vec![Relation::Schemas]);
        assert_eq!(v.report.computational.status, LevelStatus::NotRun);
    }

    #[test]
    fn computational_outcomes() {
        let t = original();
        let (r, s) = validate_computational(&t, Duration::from_secs(5));
        assert!(r.passed());
        assert!(s.unwrap().plan().is_some());
        let (d, p) = (DOMAIN.replace(":effect (and (q ?x)", ":effect (and (r)"), PROBLEM);
        let (_, unsolvable) = validate_syntactic(&d, p, None);
        let (r, _) = validate_computational(&unsolvable.unwrap(), Duration::from_secs(5));
        assert_eq!(r.diagnostics, vec![Diagnostic::Unsolvable]);
        assert_eq!(
            Diagnostic::Timeout { seconds: 60.0 }.to_string(),
            "no plan was found within the time bound of 60 s"
        );
    }

    #[test]
    fn plan_replay() {
        let t = original();
        let a1 = PlanStep::new("a", ["o1"]);
        let a2 = PlanStep::new("a", ["o2"]);
        assert_eq!(validate_plan(&t, &[a1.clone(), a2.clone()]), PlanVerdict::Valid { cost: Cost::from_integer(2) });
        match validate_plan(&t, &[a1.clone(), a1.clone()]) {
            PlanVerdict::Invalid { step: Some(2), reason } => assert!(reason.contains("unsatisfied precondition")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(validate_plan(&t, &[a1]), PlanVerdict::Invalid { step: None, .. }));
        assert!(matches!(
            validate_plan(&t, &[PlanStep::new("fly", ["o1"])]),
            PlanVerdict::Invalid { step: Some(1), .. }
        ));
    }

    #[test]
    fn report_serializes() {
        let t = original();
        let v = Validator::default().validate(&t, DOMAIN, &PROBLEM.replace("(p o1) (p o2)", "(p o1) (p o2) (r)"));
        let json = serde_json::to_string(&v.report).unwrap();
        let back: ValidationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v.report);
        assert!(v.report.failure_lines()[0].contains("(r)"));
    }
}
