//! Satisficing planner: greedy best-first search with deferred evaluation of
//! the additive delete-relaxation heuristic.

mod compiled;
mod external;

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cost::Cost;
use crate::grounder::GroundTask;
use crate::task::{apply_plan, plan_cost, Plan, State};
use compiled::{Bits, CompiledTask};

pub use external::{parse_plan, ExternalPlanner, ExternalPlannerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub time_bound: Duration,
    /// Ceiling on registered states, the search's memory bound.
    pub max_states: usize,
}

impl SearchLimits {
    pub fn with_time_bound(time_bound: Duration) -> Self {
        SearchLimits { time_bound, ..Self::default() }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { time_bound: Duration::from_secs(60), max_states: 4_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Solved { plan: Plan, cost: Cost, solving_time: Duration },
    Unsolvable,
    Timeout,
    OutOfMemory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub expanded: usize,
    pub generated: usize,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn plan(&self) -> Option<&Plan> {
        match &self.outcome {
            SearchOutcome::Solved { plan, .. } => Some(plan),
            _ => None,
        }
    }

    pub fn summary(&self) -> SearchSummary {
        let (status, cost, plan_length) = match &self.outcome {
            SearchOutcome::Solved { plan, cost, .. } => ("solved", Some(*cost), Some(plan.len())),
            SearchOutcome::Unsolvable => ("unsolvable", None, None),
            SearchOutcome::Timeout => ("timeout", None, None),
            SearchOutcome::OutOfMemory => ("out-of-memory", None, None),
        };
        SearchSummary {
            status: status.to_string(),
            cost,
            plan_length,
            expanded: self.expanded,
            generated: self.generated,
            seconds: self.elapsed.as_secs_f64(),
        }
    }
}

/// Flat, serializable view of a [`SearchResult`].
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct SearchSummary {
    pub status: String,
    pub cost: Option<Cost>,
    pub plan_length: Option<usize>,
    pub expanded: usize,
    pub generated: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Additive heuristic over a fixed ground task.
pub struct AdditiveHeuristic {
    task: CompiledTask,
}

impl AdditiveHeuristic {
    pub fn new(gt: &GroundTask) -> Self {
        AdditiveHeuristic { task: CompiledTask::new(gt) }
    }

    pub fn evaluate(&self, state: &State) -> f64 {
        h_add_bits(&self.task, &self.task.encode(state))
    }
}

/// Sum over goal atoms of their cheapest delete-relaxed cost from `state`;
/// infinite iff some goal atom is relaxed-unreachable.
pub fn h_add(gt: &GroundTask, state: &State) -> f64 {
    AdditiveHeuristic::new(gt).evaluate(state)
}

fn h_add_bits(ct: &CompiledTask, s: &Bits) -> f64 {
    let Some(goal) = &ct.goal else {
        return f64::INFINITY;
    };
    let mut cost = vec![f64::INFINITY; ct.num_atoms];
    let mut done = vec![false; ct.num_atoms];
    let mut unsatisfied: Vec<u32> = ct.actions.iter().map(|a| a.pre.len() as u32).collect();
    let mut pre_sum = vec![0.0f64; ct.actions.len()];
    let mut heap = BinaryHeap::new();

    let fire = |a: u32, base: f64, cost: &mut [f64], heap: &mut BinaryHeap<Reverse<(Key, u32)>>| {
        let act = &ct.actions[a as usize];
        let c = base + act.h_cost;
        for &q in &act.add {
            if c < cost[q as usize] {
                cost[q as usize] = c;
                heap.push(Reverse((Key(c), q)));
            }
        }
    };

    for p in s.ones() {
        cost[p as usize] = 0.0;
        heap.push(Reverse((Key(0.0), p)));
    }
    for &a in &ct.no_pre {
        fire(a, 0.0, &mut cost, &mut heap);
    }
    let mut goals_left = goal.iter().filter(|&&g| !s.get(g)).count();
    while let Some(Reverse((Key(c), p))) = heap.pop() {
        if done[p as usize] {
            continue;
        }
        done[p as usize] = true;
        if goals_left > 0 && goal.contains(&p) && !s.get(p) {
            goals_left -= 1;
        }
        if goals_left == 0 {
            break;
        }
        for &a in &ct.pre_of[p as usize] {
            let u = &mut unsatisfied[a as usize];
            *u -= 1;
            pre_sum[a as usize] += c;
            if *u == 0 {
                fire(a, pre_sum[a as usize], &mut cost, &mut heap);
            }
        }
    }
    goal.iter().map(|&g| cost[g as usize]).sum()
}

pub fn solve(gt: &GroundTask, time_bound: Duration) -> SearchResult {
    solve_with_limits(gt, SearchLimits::with_time_bound(time_bound))
}

/// Greedy best-first search. Successors enter the open list with their
/// parent's heuristic value and are evaluated when expanded; ties are broken
/// first-in first-out, and successors are generated in ascending action id.
pub fn solve_with_limits(gt: &GroundTask, limits: SearchLimits) -> SearchResult {
    let started = Instant::now();
    let deadline = started + limits.time_bound;
    let ct = CompiledTask::new(gt);
    let finish =
        |outcome, expanded, generated| SearchResult { outcome, expanded, generated, elapsed: started.elapsed() };

    if ct.is_goal(&ct.init) {
        return finish(solved(gt, Vec::new(), started), 0, 0);
    }
    let h0 = h_add_bits(&ct, &ct.init);
    if h0.is_infinite() {
        return finish(SearchOutcome::Unsolvable, 0, 0);
    }
    if limits.time_bound.is_zero() {
        return finish(SearchOutcome::Timeout, 0, 0);
    }

    // (parent node, action) per registered state; the root has no parent.
    let mut parents: Vec<Option<(u32, u32)>> = vec![None];
    let mut states: Vec<Bits> = vec![ct.init.clone()];
    let mut seen: HashMap<Bits, u32> = HashMap::from([(ct.init.clone(), 0)]);
    let mut open: BinaryHeap<Reverse<(Key, u64, u32)>> = BinaryHeap::new();
    let mut seq = 0u64;
    open.push(Reverse((Key(h0), seq, 0)));
    let mut root_h = Some(h0);
    let (mut expanded, mut generated) = (0usize, 0usize);
    let mut applicable = Vec::new();

    while let Some(Reverse((_, _, node))) = open.pop() {
        if expanded % 64 == 0 && Instant::now() >= deadline {
            return finish(SearchOutcome::Timeout, expanded, generated);
        }
        let state = states[node as usize].clone();
        if ct.is_goal(&state) {
            let mut actions = Vec::new();
            let mut cur = node;
            while let Some((parent, action)) = parents[cur as usize] {
                actions.push(action);
                cur = parent;
            }
            actions.reverse();
            return finish(solved(gt, actions, started), expanded, generated);
        }
        let h = match root_h.take() {
            Some(h) if node == 0 => h,
            _ => h_add_bits(&ct, &state),
        };
        expanded += 1;
        if h.is_infinite() {
            continue;
        }
        ct.applicable(&state, &mut applicable);
        for &a in &applicable {
            let succ = ct.successor(&state, a);
            generated += 1;
            if seen.contains_key(&succ) {
                continue;
            }
            if states.len() >= limits.max_states {
                return finish(SearchOutcome::OutOfMemory, expanded, generated);
            }
            let id = states.len() as u32;
            seen.insert(succ.clone(), id);
            states.push(succ);
            parents.push(Some((node, a)));
            seq += 1;
            open.push(Reverse((Key(h), seq, id)));
        }
    }
    finish(SearchOutcome::Unsolvable, expanded, generated)
}

fn solved(gt: &GroundTask, action_ids: Vec<u32>, started: Instant) -> SearchOutcome {
    let plan = Plan::new(action_ids.iter().map(|&a| gt.actions[a as usize].clone()).collect());
    let end = apply_plan(&gt.init, &plan).expect("search produced an inapplicable plan");
    assert!(end.contains_all(&gt.goal), "search produced a plan that misses the goal");
    let cost = plan_cost(&plan);
    SearchOutcome::Solved { plan, cost, solving_time: started.elapsed() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grounder::ground;
    use crate::pddl::{parse_domain, parse_problem};
    use crate::task::{build_task, StripsTask};

    const CHAIN: &str = "(define (domain chain) (:predicates (p0) (p1) (p2)) \
        (:action a1 :parameters () :precondition (p0) :effect (p1)) \
        (:action a2 :parameters () :precondition (p1) :effect (p2)))";

    fn task(domain: &str, problem: &str) -> StripsTask {
        let d = parse_domain(domain).unwrap();
        build_task(&d, &parse_problem(problem, &d).unwrap()).unwrap()
    }

    #[test]
    fn chain_heuristic_and_plan() {
        let t = task(CHAIN, "(define (problem c) (:domain chain) (:init (p0)) (:goal (p2)))");
        let gt = ground(&t).unwrap();
        assert_eq!(h_add(&gt, t.init()), 2.0);
        assert_eq!(h_add(&gt, &gt.goal), 0.0);
        let r = solve(&gt, Duration::from_secs(5));
        match &r.outcome {
            SearchOutcome::Solved { plan, cost, .. } => {
                let names: Vec<String> = plan.actions.iter().map(|a| t.action_name(a)).collect();
                assert_eq!(names, vec!["(a1)", "(a2)"]);
                assert_eq!(*cost, Cost::from_integer(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn goal_in_init_gives_empty_plan() {
        let t = task(CHAIN, "(define (problem c) (:domain chain) (:init (p0) (p2)) (:goal (p2)))");
        let r = solve(&ground(&t).unwrap(), Duration::from_secs(1));
        match r.outcome {
            SearchOutcome::Solved { plan, cost, .. } => {
                assert!(plan.is_empty());
                assert_eq!(cost, Cost::ZERO);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unreachable_goal_is_unsolvable_without_expansion() {
        let t = task(CHAIN, "(define (problem c) (:domain chain) (:init (p1)) (:goal (p0)))");
        let gt = ground(&t).unwrap();
        assert!(h_add(&gt, t.init()).is_infinite());
        let r = solve(&gt, Duration::from_secs(1));
        assert_eq!(r.outcome, SearchOutcome::Unsolvable);
        assert_eq!(r.expanded, 0);
    }

    #[test]
    fn exhausted_state_space_is_unsolvable() {
        // relaxed-reachable but blocked by a delete: b needs both p and q
        let t = task(
            "(define (domain d) (:predicates (p) (q) (g)) \
             (:action a :parameters () :precondition (p) :effect (and (q) (not (p)))) \
             (:action b :parameters () :precondition (and (p) (q)) :effect (g)))",
            "(define (problem x) (:domain d) (:init (p)) (:goal (g)))",
        );
        let gt = ground(&t).unwrap();
        assert!(h_add(&gt, t.init()).is_finite());
        assert_eq!(solve(&gt, Duration::from_secs(1)).outcome, SearchOutcome::Unsolvable);
    }

    #[test]
    fn zero_cost_actions_keep_goal_zero_equivalence() {
        let t = task(
            "(define (domain d) (:requirements :action-costs) (:predicates (p) (g)) (:functions (total-cost) - number) \
             (:action free :parameters () :precondition (p) :effect (and (g) (increase (total-cost) 0))))",
            "(define (problem x) (:domain d) (:init (p)) (:goal (g)))",
        );
        let gt = ground(&t).unwrap();
        assert!(h_add(&gt, t.init()) > 0.0);
        match solve(&gt, Duration::from_secs(1)).outcome {
            SearchOutcome::Solved { cost, plan, .. } => {
                assert_eq!(cost, Cost::ZERO);
                assert_eq!(plan.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn state_ceiling_reports_out_of_memory() {
        let t = task(
            "(define (domain d) (:predicates (at ?x) (link ?x ?y)) \
             (:action mv :parameters (?x ?y) :precondition (and (at ?x) (link ?x ?y)) :effect (and (at ?y) (not (at ?x)))))",
            "(define (problem x) (:domain d) (:objects a b c e) \
             (:init (at a) (link a b) (link b a) (link a c) (link c a) (link b e)) (:goal (at e)))",
        );
        let gt = ground(&t).unwrap();
        let r = solve_with_limits(&gt, SearchLimits { time_bound: Duration::from_secs(1), max_states: 1 });
        assert_eq!(r.outcome, SearchOutcome::OutOfMemory);
    }
}
