//! Full grounding: every atom and action reachable from the initial state
//! under delete relaxation.
//!
//! Atoms are processed in queue order. When an atom is dequeued it is added
//! to the reached set and unified with every precondition atom of the same
//! predicate; the remaining preconditions are joined against the reached set,
//! always extending the partial binding through the precondition with the
//! fewest candidate facts. An action is therefore found no later than when
//! the last of its precondition atoms is processed.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::task::{GroundAction, GroundAtom, LiftedAtom, ObjId, SchemaId, State, StripsTask};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundingLimits {
    pub max_actions: usize,
    pub max_atoms: usize,
}

impl Default for GroundingLimits {
    fn default() -> Self {
        GroundingLimits { max_actions: 10_000_000, max_atoms: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("grounding exceeded the limit of {limit} {what}")]
    ResourceExceeded { what: &'static str, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundingStats {
    pub num_actions: usize,
    pub num_atoms: usize,
    pub grounding_time: Duration,
}

/// Propositional task. Atoms and actions are sorted, so ids are stable across
/// runs.
#[derive(Debug, Clone)]
pub struct GroundTask {
    pub atoms: Vec<GroundAtom>,
    pub actions: Vec<GroundAction>,
    pub init: State,
    pub goal: State,
    /// Whether every goal atom is relaxed-reachable.
    pub goal_reachable: bool,
    pub stats: GroundingStats,
}

impl GroundTask {
    fn assemble(
        task: &StripsTask,
        mut atoms: Vec<GroundAtom>,
        mut actions: Vec<GroundAction>,
        started: Instant,
    ) -> GroundTask {
        atoms.sort();
        actions.sort_by(|a, b| (a.schema, &a.binding).cmp(&(b.schema, &b.binding)));
        let reached: HashSet<&GroundAtom> = atoms.iter().collect();
        let goal_reachable = task.goal().iter().all(|g| reached.contains(g));
        let stats =
            GroundingStats { num_actions: actions.len(), num_atoms: atoms.len(), grounding_time: started.elapsed() };
        GroundTask { atoms, actions, init: task.init().clone(), goal: task.goal().clone(), goal_reachable, stats }
    }

    /// Newline-delimited dump: atoms `(pred o1 o2)` then actions
    /// `(schema o1 o2)`, each block sorted lexicographically.
    pub fn dump(&self, task: &StripsTask) -> String {
        let mut atoms: Vec<String> = self.atoms.iter().map(|a| task.atom_name(a)).collect();
        let mut actions: Vec<String> = self.actions.iter().map(|a| task.action_name(a)).collect();
        atoms.sort();
        actions.sort();
        let mut out = String::new();
        for line in atoms.iter().chain(&actions) {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

/// Per-predicate table of reached argument tuples with per-position indices.
#[derive(Default)]
struct FactTable {
    tuples: Vec<Box<[ObjId]>>,
    members: HashSet<Box<[ObjId]>>,
    by_position: Vec<HashMap<ObjId, Vec<u32>>>,
}

impl FactTable {
    fn insert(&mut self, args: &[ObjId]) {
        if !self.members.insert(args.into()) {
            return;
        }
        if self.by_position.len() < args.len() {
            self.by_position.resize_with(args.len(), HashMap::new);
        }
        let idx = self.tuples.len() as u32;
        for (pos, o) in args.iter().enumerate() {
            self.by_position[pos].entry(*o).or_default().push(idx);
        }
        self.tuples.push(args.into());
    }
}

enum Candidates<'a> {
    Membership(bool),
    Indexed(&'a [u32]),
    All(usize),
}

impl Candidates<'_> {
    fn count(&self) -> usize {
        match self {
            Candidates::Membership(b) => *b as usize,
            Candidates::Indexed(v) => v.len(),
            Candidates::All(n) => *n,
        }
    }
}

struct Grounder<'t> {
    task: &'t StripsTask,
    limits: GroundingLimits,
    tables: Vec<FactTable>,
    reached: HashSet<GroundAtom>,
    queue: VecDeque<GroundAtom>,
    seen_actions: HashSet<(SchemaId, Box<[ObjId]>)>,
    actions: Vec<GroundAction>,
    /// `compatible[schema][param][obj]`
    compatible: Vec<Vec<Vec<bool>>>,
}

pub fn ground(task: &StripsTask) -> Result<GroundTask, GroundingError> {
    ground_with_limits(task, GroundingLimits::default())
}

pub fn ground_with_limits(task: &StripsTask, limits: GroundingLimits) -> Result<GroundTask, GroundingError> {
    let started = Instant::now();
    let compatible = task
        .schemas()
        .iter()
        .map(|s| {
            s.params
                .iter()
                .map(|(_, ty)| {
                    let mut v = vec![false; task.objects().len()];
                    for o in task.objects_of_type(*ty) {
                        v[o.0 as usize] = true;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut g = Grounder {
        task,
        limits,
        tables: (0..task.predicates().len()).map(|_| FactTable::default()).collect(),
        reached: HashSet::new(),
        queue: VecDeque::new(),
        seen_actions: HashSet::new(),
        actions: Vec::new(),
        compatible,
    };

    for atom in task.init().iter() {
        g.reach(atom.clone())?;
    }

    let mut triggers: Vec<Vec<(usize, usize)>> = vec![Vec::new(); task.predicates().len()];
    for (si, schema) in task.schemas().iter().enumerate() {
        if schema.pre.is_empty() {
            let mut binding = vec![None; schema.params.len()];
            g.complete(si, &mut binding)?;
        }
        for (pi, atom) in schema.pre.iter().enumerate() {
            triggers[atom.predicate.0 as usize].push((si, pi));
        }
    }

    while let Some(atom) = g.queue.pop_front() {
        g.tables[atom.predicate.0 as usize].insert(&atom.args);
        for &(si, pi) in &triggers[atom.predicate.0 as usize] {
            let schema = &task.schemas()[si];
            let mut binding = vec![None; schema.params.len()];
            if !g.unify(si, &schema.pre[pi], &atom.args, &mut binding) {
                continue;
            }
            let rest: Vec<usize> = (0..schema.pre.len()).filter(|&i| i != pi).collect();
            g.join(si, &rest, &mut binding)?;
        }
    }

    let atoms: Vec<GroundAtom> = g.reached.into_iter().collect();
    Ok(GroundTask::assemble(task, atoms, g.actions, started))
}

impl Grounder<'_> {
    fn reach(&mut self, atom: GroundAtom) -> Result<(), GroundingError> {
        if self.reached.contains(&atom) {
            return Ok(());
        }
        if self.reached.len() >= self.limits.max_atoms {
            return Err(GroundingError::ResourceExceeded { what: "atoms", limit: self.limits.max_atoms });
        }
        self.reached.insert(atom.clone());
        self.queue.push_back(atom);
        Ok(())
    }

    /// Extends `binding` so that `atom` matches `args`; undoes nothing on
    /// failure, callers pass a scratch copy.
    fn unify(&self, si: usize, atom: &LiftedAtom, args: &[ObjId], binding: &mut [Option<ObjId>]) -> bool {
        for (&var, &obj) in atom.args.iter().zip(args) {
            match binding[var] {
                Some(b) if b != obj => return false,
                Some(_) => {}
                None => {
                    if !self.compatible[si][var][obj.0 as usize] {
                        return false;
                    }
                    binding[var] = Some(obj);
                }
            }
        }
        let schema = &self.task.schemas()[si];
        schema.equalities.iter().all(|e| match (binding[e.left], binding[e.right]) {
            (Some(l), Some(r)) => (l == r) != e.negated,
            _ => true,
        })
    }

    fn candidates(&self, atom: &LiftedAtom, binding: &[Option<ObjId>]) -> Candidates<'_> {
        let table = &self.tables[atom.predicate.0 as usize];
        let bound: Vec<Option<ObjId>> = atom.args.iter().map(|&v| binding[v]).collect();
        if bound.iter().all(Option::is_some) {
            let key: Vec<ObjId> = bound.into_iter().flatten().collect();
            return Candidates::Membership(table.members.contains(key.as_slice()));
        }
        let mut best: Option<&[u32]> = None;
        for (pos, b) in bound.iter().enumerate() {
            if let Some(o) = b {
                let list = table.by_position.get(pos).and_then(|m| m.get(o)).map(Vec::as_slice).unwrap_or(&[]);
                if best.is_none_or(|cur| list.len() < cur.len()) {
                    best = Some(list);
                }
            }
        }
        match best {
            Some(list) => Candidates::Indexed(list),
            None => Candidates::All(table.tuples.len()),
        }
    }

    fn join(&mut self, si: usize, rest: &[usize], binding: &mut Vec<Option<ObjId>>) -> Result<(), GroundingError> {
        let schema = &self.task.schemas()[si];
        if rest.is_empty() {
            return self.complete(si, binding);
        }
        let (choice, _) = rest
            .iter()
            .enumerate()
            .map(|(k, &pi)| (k, self.candidates(&schema.pre[pi], binding).count()))
            .min_by_key(|&(_, n)| n)
            .expect("non-empty");
        let pi = rest[choice];
        let remaining: Vec<usize> = rest.iter().copied().filter(|&i| i != pi).collect();
        let atom = &schema.pre[pi];
        let pred = atom.predicate.0 as usize;

        let tuples: Vec<Box<[ObjId]>> = match self.candidates(atom, binding) {
            Candidates::Membership(false) => return Ok(()),
            Candidates::Membership(true) => {
                return self.join(si, &remaining, binding);
            }
            Candidates::Indexed(ids) => ids.iter().map(|&i| self.tables[pred].tuples[i as usize].clone()).collect(),
            Candidates::All(_) => self.tables[pred].tuples.clone(),
        };
        for args in tuples {
            let mut next = binding.clone();
            if self.unify(si, atom, &args, &mut next) {
                self.join(si, &remaining, &mut next)?;
            }
        }
        Ok(())
    }

    /// Enumerates parameters not fixed by the precondition, then emits.
    fn complete(&mut self, si: usize, binding: &mut [Option<ObjId>]) -> Result<(), GroundingError> {
        let Some(free) = binding.iter().position(Option::is_none) else {
            let full: Vec<ObjId> = binding.iter().map(|b| b.expect("bound")).collect();
            return self.emit(si, full);
        };
        let ty = self.task.schemas()[si].params[free].1;
        let objs = self.task.objects_of_type(ty).to_vec();
        for o in objs {
            let mut next = binding.to_vec();
            next[free] = Some(o);
            let ok = self.task.schemas()[si].equalities.iter().all(|e| match (next[e.left], next[e.right]) {
                (Some(l), Some(r)) => (l == r) != e.negated,
                _ => true,
            });
            if ok {
                self.complete(si, &mut next)?;
            }
        }
        Ok(())
    }

    fn emit(&mut self, si: usize, binding: Vec<ObjId>) -> Result<(), GroundingError> {
        let id = SchemaId(si as u32);
        let key = (id, binding.into_boxed_slice());
        if self.seen_actions.contains(&key) {
            return Ok(());
        }
        if self.actions.len() >= self.limits.max_actions {
            return Err(GroundingError::ResourceExceeded { what: "ground actions", limit: self.limits.max_actions });
        }
        let action = self.task.instantiate_unchecked(id, &key.1);
        for a in &action.add {
            self.reach(a.clone())?;
        }
        self.seen_actions.insert(key);
        self.actions.push(action);
        Ok(())
    }
}

/// Every type-correct binding of every schema that satisfies its equality
/// constraints, regardless of reachability. `max_bindings` bounds the size
/// of the enumeration before any work is done.
pub fn enumerate_all_bindings(task: &StripsTask, max_bindings: usize) -> Result<GroundTask, GroundingError> {
    let started = Instant::now();
    let mut total: usize = 0;
    for s in task.schemas() {
        let n = s
            .params
            .iter()
            .try_fold(1usize, |acc, (_, ty)| acc.checked_mul(task.objects_of_type(*ty).len()))
            .unwrap_or(usize::MAX);
        total = total.saturating_add(n);
    }
    if total > max_bindings {
        return Err(GroundingError::ResourceExceeded { what: "bindings", limit: max_bindings });
    }

    let mut actions = Vec::new();
    for (si, s) in task.schemas().iter().enumerate() {
        let domains: Vec<&[ObjId]> = s.params.iter().map(|(_, ty)| task.objects_of_type(*ty)).collect();
        if domains.iter().any(|d| d.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; domains.len()];
        loop {
            let binding: Vec<ObjId> = idx.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
            if s.equalities.iter().all(|e| e.holds(&binding)) {
                actions.push(task.instantiate_unchecked(SchemaId(si as u32), &binding));
            }
            let mut k = domains.len();
            let exhausted = loop {
                if k == 0 {
                    break true;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break false;
                }
                idx[k] = 0;
            };
            if exhausted {
                break;
            }
        }
    }

    let mut atoms: HashSet<GroundAtom> = task.init().iter().cloned().collect();
    for a in &actions {
        atoms.extend(a.pre.iter().cloned());
        atoms.extend(a.add.iter().cloned());
    }
    Ok(GroundTask::assemble(task, atoms.into_iter().collect(), actions, started))
}
