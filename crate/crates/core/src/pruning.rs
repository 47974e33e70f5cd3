//! Removing objects, predicates and action schemas from a task before
//! grounding, plus a deterministic backward-relevance pruner.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pddl::{DomainAst, ProblemAst};
use crate::task::StripsTask;

/// Names to remove. Serializes as three flat name lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruningProposal {
    #[serde(default)]
    pub removed_objects: BTreeSet<String>,
    #[serde(default)]
    pub removed_predicates: BTreeSet<String>,
    #[serde(default)]
    pub removed_schemas: BTreeSet<String>,
}

impl PruningProposal {
    pub fn is_empty(&self) -> bool {
        self.removed_objects.is_empty() && self.removed_predicates.is_empty() && self.removed_schemas.is_empty()
    }

    /// What `pruned` drops relative to `original`, by name.
    pub fn between(original: &StripsTask, pruned: &StripsTask) -> Self {
        let gone = |all: Vec<&str>, kept: Vec<&str>| -> BTreeSet<String> {
            let kept: BTreeSet<&str> = kept.into_iter().collect();
            all.into_iter().filter(|n| !kept.contains(n)).map(String::from).collect()
        };
        PruningProposal {
            removed_objects: gone(
                original.objects().iter().map(|o| o.name.as_str()).collect(),
                pruned.objects().iter().map(|o| o.name.as_str()).collect(),
            ),
            removed_predicates: gone(
                original.predicates().iter().map(|p| p.name.as_str()).collect(),
                pruned.predicates().iter().map(|p| p.name.as_str()).collect(),
            ),
            removed_schemas: gone(
                original.schemas().iter().map(|s| s.name.as_str()).collect(),
                pruned.schemas().iter().map(|s| s.name.as_str()).collect(),
            ),
        }
    }
}

impl std::fmt::Display for PruningProposal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "removed-objects: {}", list(&self.removed_objects))?;
        writeln!(f, "removed-predicates: {}", list(&self.removed_predicates))?;
        write!(f, "removed-schemas: {}", list(&self.removed_schemas))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PruneError {
    #[error("'{symbol}' occurs in the goal and cannot be removed")]
    GoalViolation { symbol: String },
    #[error("action '{schema}' references removed predicate '{predicate}'")]
    DanglingReference { schema: String, predicate: String },
    #[error("unknown {kind} '{name}'")]
    UnknownSymbol { kind: &'static str, name: String },
}

/// Objects and predicates occurring in the goal.
pub fn goal_protected_symbols(task: &StripsTask) -> (BTreeSet<String>, BTreeSet<String>) {
    let goal = &task.problem().goal;
    let objects = goal.iter().flat_map(|a| a.args.iter().cloned()).collect();
    let predicates = goal.iter().map(|a| a.predicate.clone()).collect();
    (objects, predicates)
}

/// Builds the pruned domain and problem. Init atoms mentioning a removed
/// object or predicate are dropped; the goal is kept as is.
pub fn apply_proposal(task: &StripsTask, p: &PruningProposal) -> Result<(DomainAst, ProblemAst), PruneError> {
    let norm = |s: &BTreeSet<String>| s.iter().map(|n| n.to_lowercase()).collect::<BTreeSet<String>>();
    let (objects, predicates, schemas) =
        (norm(&p.removed_objects), norm(&p.removed_predicates), norm(&p.removed_schemas));

    for o in &objects {
        if task.object_id(o).is_none() {
            return Err(PruneError::UnknownSymbol { kind: "object", name: o.clone() });
        }
    }
    for q in &predicates {
        if task.predicate_id(q).is_none() {
            return Err(PruneError::UnknownSymbol { kind: "predicate", name: q.clone() });
        }
    }
    for s in &schemas {
        if task.schema_id(s).is_none() {
            return Err(PruneError::UnknownSymbol { kind: "action", name: s.clone() });
        }
    }
    let (goal_objects, goal_predicates) = goal_protected_symbols(task);
    if let Some(symbol) = objects.intersection(&goal_objects).chain(predicates.intersection(&goal_predicates)).next() {
        return Err(PruneError::GoalViolation { symbol: symbol.clone() });
    }

    let mut domain = task.domain().clone();
    domain.schemas.retain(|s| !schemas.contains(&s.name));
    for s in &domain.schemas {
        if let Some(q) = s.predicates_used().find(|q| predicates.contains(*q)) {
            return Err(PruneError::DanglingReference { schema: s.name.clone(), predicate: q.to_string() });
        }
    }
    domain.predicates.retain(|d| !predicates.contains(&d.name));

    let mut problem = task.problem().clone();
    problem.objects.retain(|o| !objects.contains(&o.name));
    problem.init.retain(|a| !predicates.contains(&a.predicate) && !a.args.iter().any(|x| objects.contains(x)));
    Ok((domain, problem))
}

/// Backward relevance from the goal, lifted to schemas. A schema is relevant
/// when it adds a relevant predicate; relevant schemas make their
/// precondition predicates relevant. Objects go only when no kept schema
/// parameter can take them and the goal does not mention them.
pub fn relevance_prune(task: &StripsTask) -> PruningProposal {
    let schemas = &task.domain().schemas;
    let (goal_objects, mut relevant) = goal_protected_symbols(task);
    let mut kept = vec![false; schemas.len()];
    loop {
        let mut changed = false;
        for (i, s) in schemas.iter().enumerate() {
            if !kept[i] && s.add_effects.iter().any(|a| relevant.contains(&a.predicate)) {
                kept[i] = true;
                changed = true;
                relevant.extend(s.precondition.iter().map(|a| a.predicate.clone()));
            }
        }
        if !changed {
            break;
        }
    }
    let used: BTreeSet<&str> =
        schemas.iter().zip(&kept).filter(|(_, k)| **k).flat_map(|(s, _)| s.predicates_used()).collect();
    let removed_predicates = task
        .predicates()
        .iter()
        .map(|p| &p.name)
        .filter(|n| !relevant.contains(*n) && !used.contains(n.as_str()))
        .cloned()
        .collect();
    let removed_schemas = schemas.iter().zip(&kept).filter(|(_, k)| !**k).map(|(s, _)| s.name.clone()).collect();
    let param_types: Vec<_> = task
        .schemas()
        .iter()
        .zip(&kept)
        .filter(|(_, k)| **k)
        .flat_map(|(s, _)| s.params.iter().map(|(_, t)| *t))
        .collect();
    let removed_objects = task
        .objects()
        .iter()
        .filter(|o| !goal_objects.contains(&o.name))
        .filter(|o| !param_types.iter().any(|&t| task.types().is_subtype(o.ty, t)))
        .map(|o| o.name.clone())
        .collect();
    PruningProposal { removed_objects, removed_predicates, removed_schemas }
}
