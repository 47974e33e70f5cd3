//! Shared helpers for the integration tests, including a grounding oracle
//! that shares no code with the library's grounder.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::PathBuf;

use pddl_prune::bench::{desk_corpus, BenchTask};
use pddl_prune::grounder::GroundTask;
use pddl_prune::pddl::{DomainAst, ProblemAst, ROOT_TYPE};
use pddl_prune::pruning::{apply_proposal, goal_protected_symbols, PruningProposal};
use pddl_prune::task::StripsTask;
use rand::seq::IteratorRandom;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture(name: &str) -> String {
    let path = fixture_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Every (domain, problem) fixture pair, keyed by problem file name.
pub fn fixture_pairs() -> Vec<(String, String, String)> {
    [
        ("blocksworld4.domain.pddl", "blocksworld4.problem.pddl"),
        ("blocksworld5.domain.pddl", "blocksworld4.problem.pddl"),
        ("minimal.domain.pddl", "minimal.problem.pddl"),
        ("zeno.domain.pddl", "zeno.problem.pddl"),
        ("zeno-pruned.domain.pddl", "zeno-pruned.problem.pddl"),
    ]
    .into_iter()
    .map(|(d, p)| (format!("{d}+{p}"), fixture(d), fixture(p)))
    .collect()
}

pub fn corpus() -> Vec<BenchTask> {
    desk_corpus(0).iter().map(|s| BenchTask::generated(s).unwrap()).collect()
}

/// Ground action names, e.g. `(stack b1 b2)`.
pub fn action_names(task: &StripsTask, gt: &GroundTask) -> BTreeSet<String> {
    gt.actions.iter().map(|a| task.action_name(a)).collect()
}

fn ancestors<'a>(types: &'a HashMap<&'a str, &'a str>, mut ty: &'a str) -> Vec<&'a str> {
    let mut out = vec![ty];
    while let Some(&parent) = types.get(ty) {
        if out.contains(&parent) {
            break;
        }
        out.push(parent);
        ty = parent;
    }
    if !out.contains(&ROOT_TYPE) {
        out.push(ROOT_TYPE);
    }
    out
}

/// Naive grounding: enumerate every type-correct binding of every schema,
/// then add actions whose preconditions hold in the relaxed fact set until
/// nothing changes. Returns ground action names and reached atom names.
pub fn oracle_ground(d: &DomainAst, p: &ProblemAst) -> (BTreeSet<String>, BTreeSet<String>) {
    let parents: HashMap<&str, &str> = d.types.iter().map(|t| (t.name.as_str(), t.parent.as_str())).collect();
    let objects_of = |ty: &str| -> Vec<&str> {
        p.objects.iter().filter(|o| ancestors(&parents, &o.ty).contains(&ty)).map(|o| o.name.as_str()).collect()
    };

    struct Candidate {
        name: String,
        pre: Vec<String>,
        add: Vec<String>,
    }
    let mut candidates = Vec::new();
    for s in &d.schemas {
        let domains: Vec<Vec<&str>> = s.parameters.iter().map(|v| objects_of(&v.ty)).collect();
        let mut idx = vec![0usize; domains.len()];
        if domains.iter().any(Vec::is_empty) {
            continue;
        }
        'bindings: loop {
            let binding: HashMap<&str, &str> = s
                .parameters
                .iter()
                .zip(&idx)
                .enumerate()
                .map(|(i, (v, &j))| (v.name.as_str(), domains[i][j]))
                .collect();
            let eq_ok =
                s.equalities.iter().all(|e| (binding[e.left.as_str()] == binding[e.right.as_str()]) != e.negated);
            if eq_ok {
                let render = |atoms: &[pddl_prune::pddl::AtomAst]| -> Vec<String> {
                    atoms
                        .iter()
                        .map(|a| {
                            let mut t = format!("({}", a.predicate);
                            for x in &a.args {
                                t.push(' ');
                                t.push_str(binding[x.as_str()]);
                            }
                            t + ")"
                        })
                        .collect()
                };
                let args: Vec<&str> = s.parameters.iter().map(|v| binding[v.name.as_str()]).collect();
                let name =
                    if args.is_empty() { format!("({})", s.name) } else { format!("({} {})", s.name, args.join(" ")) };
                candidates.push(Candidate { name, pre: render(&s.precondition), add: render(&s.add_effects) });
            }
            let mut k = idx.len();
            loop {
                if k == 0 {
                    break 'bindings;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    let mut facts: HashSet<String> = p.init.iter().map(|a| a.to_string()).collect();
    let mut taken = vec![false; candidates.len()];
    loop {
        let mut changed = false;
        for (i, c) in candidates.iter().enumerate() {
            if !taken[i] && c.pre.iter().all(|f| facts.contains(f)) {
                taken[i] = true;
                changed = true;
                facts.extend(c.add.iter().cloned());
            }
        }
        if !changed {
            break;
        }
    }
    let actions = candidates.iter().zip(&taken).filter(|(_, &t)| t).map(|(c, _)| c.name.clone()).collect();
    (actions, facts.into_iter().collect())
}

/// A proposal `apply_proposal` accepts: random schemas, then predicates no
/// kept schema and no goal atom mentions, then non-goal objects.
pub fn random_valid_proposal(task: &StripsTask, rng: &mut impl Rng) -> PruningProposal {
    let (goal_objects, goal_preds) = goal_protected_symbols(task);
    let d = task.domain();
    let removed_schemas: BTreeSet<String> =
        d.schemas.iter().filter(|_| rng.random_bool(0.3)).map(|s| s.name.clone()).collect();
    let used: BTreeSet<&str> =
        d.schemas.iter().filter(|s| !removed_schemas.contains(&s.name)).flat_map(|s| s.predicates_used()).collect();
    let removed_predicates = d
        .predicates
        .iter()
        .map(|p| p.name.clone())
        .filter(|n| !used.contains(n.as_str()) && !goal_preds.contains(n))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    let candidates = task.problem().objects.iter().map(|o| o.name.clone()).filter(|n| !goal_objects.contains(n));
    let n = candidates.clone().count();
    let k = if n == 0 { 0 } else { rng.random_range(0..=n) };
    let removed_objects = candidates.choose_multiple(rng, k).into_iter().collect();
    let proposal = PruningProposal { removed_objects, removed_predicates, removed_schemas };
    apply_proposal(task, &proposal).expect("generated proposals are valid");
    proposal
}
