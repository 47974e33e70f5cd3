use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ObjId, PredId, SchemaId};
use crate::cost::Cost;

/// `p(o1, ..., on)`; ordered by predicate id, then argument ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: PredId,
    pub args: Box<[ObjId]>,
}

impl GroundAtom {
    pub fn new(predicate: PredId, args: impl Into<Box<[ObjId]>>) -> Self {
        GroundAtom { predicate, args: args.into() }
    }

    pub fn mentions(&self, obj: ObjId) -> bool {
        self.args.contains(&obj)
    }
}

/// Immutable set of ground atoms that are true.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct State(BTreeSet<GroundAtom>);

impl State {
    pub fn new() -> Self {
        State(BTreeSet::new())
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.0.contains(atom)
    }

    pub fn contains_all<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> bool {
        atoms.into_iter().all(|a| self.0.contains(a))
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &State) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn missing<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Vec<GroundAtom> {
        atoms.into_iter().filter(|a| !self.0.contains(*a)).cloned().collect()
    }
}

impl FromIterator<GroundAtom> for State {
    fn from_iter<I: IntoIterator<Item = GroundAtom>>(iter: I) -> Self {
        State(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a State {
    type Item = &'a GroundAtom;
    type IntoIter = std::collections::btree_set::Iter<'a, GroundAtom>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A schema instantiated under a binding of its parameters.
///
/// `pre`, `add` and `del` are sorted and duplicate-free, and `add ∩ del = ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub schema: SchemaId,
    pub binding: Box<[ObjId]>,
    pub pre: Vec<GroundAtom>,
    pub add: Vec<GroundAtom>,
    pub del: Vec<GroundAtom>,
    pub cost: Cost,
}

impl GroundAction {
    pub(crate) fn normalized(
        schema: SchemaId,
        binding: Box<[ObjId]>,
        mut pre: Vec<GroundAtom>,
        mut add: Vec<GroundAtom>,
        mut del: Vec<GroundAtom>,
        cost: Cost,
    ) -> Self {
        for v in [&mut pre, &mut add, &mut del] {
            v.sort();
            v.dedup();
        }
        del.retain(|a| add.binary_search(a).is_err());
        GroundAction { schema, binding, pre, add, del, cost }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Plan {
    pub actions: Vec<GroundAction>,
}

impl Plan {
    pub fn new(actions: Vec<GroundAction>) -> Self {
        Plan { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// A plan step by name, independent of any particular task's interning.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanStep {
    pub action: String,
    pub args: Vec<String>,
}

impl PlanStep {
    pub fn new<S: Into<String>>(action: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        PlanStep { action: action.into(), args: args.into_iter().map(Into::into).collect() }
    }
}

impl std::fmt::Display for PlanStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.action)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("action is not applicable: {} precondition atom(s) missing", missing.len())]
    NotApplicable { missing: Vec<GroundAtom> },
    #[error("plan step {index} is not applicable: {} precondition atom(s) missing", missing.len())]
    NotApplicableAt { index: usize, missing: Vec<GroundAtom> },
}

/// `pre(a) ⊆ s`.
pub fn is_applicable(state: &State, action: &GroundAction) -> bool {
    state.contains_all(&action.pre)
}

/// `(s \ del(a)) ∪ add(a)`, refusing inapplicable actions.
pub fn apply_action(state: &State, action: &GroundAction) -> Result<State, ApplyError> {
    if !is_applicable(state, action) {
        return Err(ApplyError::NotApplicable { missing: state.missing(&action.pre) });
    }
    let mut next = state.0.clone();
    for d in &action.del {
        next.remove(d);
    }
    next.extend(action.add.iter().cloned());
    Ok(State(next))
}

/// Applies the actions in order; the error carries the 0-based index of the
/// first inapplicable step.
pub fn apply_plan(state: &State, plan: &Plan) -> Result<State, ApplyError> {
    let mut cur = state.clone();
    for (index, a) in plan.actions.iter().enumerate() {
        cur = apply_action(&cur, a).map_err(|e| match e {
            ApplyError::NotApplicable { missing } => ApplyError::NotApplicableAt { index, missing },
            other => other,
        })?;
    }
    Ok(cur)
}

pub fn plan_cost(plan: &Plan) -> Cost {
    plan.actions.iter().map(|a| a.cost).sum()
}
