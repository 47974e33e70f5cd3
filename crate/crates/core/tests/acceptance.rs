//! Desk-scale acceptance checks. Each test writes one `PASS`/`FAIL` line to
//! stderr (outside the harness capture) before asserting.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use pddl_prune::bench::{
    generate_instance, run_benchmark, run_one, BenchConfig, BenchTask, GeneratorSpec, Method, Soundness,
};
use pddl_prune::grounder::ground;
use pddl_prune::llm::{parse_original, spg_llm, LlmConfig, MockBackend, MockReply, PromptTemplate};
use pddl_prune::pddl::{parse_domain, parse_problem, print_domain, print_problem};
use pddl_prune::planner::{h_add, solve, SearchOutcome};
use pddl_prune::pruning::{apply_proposal, PruningProposal};
use pddl_prune::task::{apply_action, apply_plan, build_task, is_applicable, State};
use pddl_prune::validate::{validate_plan, LevelStatus, Relation, Validator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{action_names, corpus, fixture, fixture_pairs, oracle_ground, random_valid_proposal};

// Tolerances and sizes.
const MIN_ORACLE_TASKS: usize = 50;
const MAX_ORACLE_OBJECTS: usize = 10;
const ORACLE_BUDGET: Duration = Duration::from_secs(10);
const MONOTONICITY_PAIRS: usize = 100;
const MIN_CORPUS: usize = 100;
const TIME_BOUND_SECS: f64 = 60.0;
const LOOP_KS: [usize; 3] = [1, 2, 3];
const RANDOM_WALK_STEPS: usize = 30;

fn verdict(n: u32, name: &str, ok: bool, detail: impl std::fmt::Display) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "acceptance {n:02} {status} {name}: {detail}");
    assert!(ok, "{name}: {detail}");
}

fn config() -> BenchConfig {
    BenchConfig { time_bound_secs: TIME_BOUND_SECS, ..BenchConfig::default() }
}

#[test]
fn a01_grounder_matches_naive_oracle() {
    let mut specs: Vec<GeneratorSpec> = pddl_prune::bench::desk_corpus(0);
    for seed in 0..10 {
        specs.push(GeneratorSpec::ZenoLike {
            cities: 2 + (seed % 2) as usize,
            persons: 2 + (seed % 3) as usize,
            goal_persons: 1,
            aircraft: 1,
            fuel_levels: 3,
            seed,
        });
    }
    let mut tasks: Vec<(String, String, String)> = specs
        .iter()
        .map(|s| {
            let (d, p) = generate_instance(s).unwrap();
            (s.id(), d, p)
        })
        .collect();
    tasks.extend(fixture_pairs());

    let started = Instant::now();
    let (mut checked, mut mismatches) = (0, Vec::new());
    for (id, d, p) in &tasks {
        let task = parse_original(d, p).unwrap();
        if task.objects().len() > MAX_ORACLE_OBJECTS {
            continue;
        }
        checked += 1;
        let gt = ground(&task).unwrap();
        let (oracle_actions, oracle_atoms) = oracle_ground(task.domain(), task.problem());
        let atoms: BTreeSet<String> = gt.atoms.iter().map(|a| task.atom_name(a)).collect();
        if action_names(&task, &gt) != oracle_actions || atoms != oracle_atoms {
            mismatches.push(id.clone());
        }
    }
    let elapsed = started.elapsed();
    verdict(
        1,
        "grounder equals naive oracle",
        checked >= MIN_ORACLE_TASKS && mismatches.is_empty() && elapsed < ORACLE_BUDGET,
        format!("{checked} tasks, mismatches {mismatches:?}, {:.2} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn a02_blocksworld_counts() {
    let problem = fixture("blocksworld4.problem.pddl");
    let bw4 = parse_original(&fixture("blocksworld4.domain.pddl"), &problem).unwrap();
    let bw5 = parse_original(&fixture("blocksworld5.domain.pddl"), &problem).unwrap();

    // pick-up and put-down: n each; stack and unstack: n(n-1) each (x != y)
    let n = 4;
    let expected4 = 2 * n + 2 * n * (n - 1);
    // move-b-to-b ?x ?y: ordered pairs of distinct blocks
    let expected5 = expected4 + n * (n - 1);

    let g4 = ground(&bw4).unwrap().stats.num_actions;
    let g5 = ground(&bw5).unwrap().stats.num_actions;

    let proposal = PruningProposal { removed_schemas: BTreeSet::from(["move-b-to-b".into()]), ..Default::default() };
    let (d, p) = apply_proposal(&bw5, &proposal).unwrap();
    let pruned = build_task(&d, &p).unwrap();
    let gt = ground(&pruned).unwrap();
    let result = solve(&gt, Duration::from_secs_f64(TIME_BOUND_SECS));
    let plan_ok = match &result.outcome {
        SearchOutcome::Solved { plan, .. } => validate_plan(&bw5, &pruned.plan_steps(plan)).is_valid(),
        _ => false,
    };
    let gp = gt.stats.num_actions;
    verdict(
        2,
        "blocksworld ground action counts",
        g4 == 32 && expected4 == 32 && g5 == 44 && expected5 == 44 && gp == 32 && plan_ok,
        format!("4-op {g4}, 5-op {g5}, pruned 5-op {gp}, plan valid on original: {plan_ok}"),
    );
}

#[test]
fn a03_pruning_never_adds_ground_actions() {
    let tasks = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = Vec::new();
    for i in 0..MONOTONICITY_PAIRS {
        let t = &tasks[rng.random_range(0..tasks.len())];
        let task = parse_original(&t.domain, &t.problem).unwrap();
        let proposal = random_valid_proposal(&task, &mut rng);
        let (d, p) = apply_proposal(&task, &proposal).unwrap();
        let pruned = build_task(&d, &p).unwrap();
        let before = ground(&task).unwrap().stats.num_actions;
        let after = ground(&pruned).unwrap().stats.num_actions;
        if after > before {
            violations.push(format!("pair {i} on {}: {before} -> {after}", t.id));
        }
    }
    verdict(
        3,
        "pruning monotonicity",
        violations.is_empty(),
        format!("{MONOTONICITY_PAIRS} random proposals, {} violations {violations:?}", violations.len()),
    );
}

#[test]
fn a04_rule_pruning_is_sound_on_corpus() {
    let tasks = corpus();
    let records = run_benchmark(&tasks, &[Method::Fg, Method::SpgRule], &config(), None);
    let fg_solved = records.iter().filter(|r| r.method == Method::Fg && r.sound == Soundness::Valid).count();
    let spg: Vec<_> = records.iter().filter(|r| r.method == Method::SpgRule).collect();
    let accepted = spg.iter().filter(|r| r.grounded_actions.is_some()).count();
    let unsound = spg.iter().filter(|r| r.sound == Soundness::Invalid).count();
    let valid = spg.iter().filter(|r| r.sound == Soundness::Valid).count();
    verdict(
        4,
        "rule pruning soundness sweep",
        tasks.len() >= MIN_CORPUS && fg_solved == tasks.len() && unsound == 0 && valid == accepted,
        format!(
            "{} tasks, FG solved {fg_solved}, rule accepted {accepted}, valid {valid}, unsound {unsound}",
            tasks.len()
        ),
    );
}

#[test]
fn a05_identity_backend_matches_full_grounding() {
    let tasks = corpus();
    let backend = MockBackend::identity();
    let template = PromptTemplate::default();
    let config = config();
    let mut differences = Vec::new();
    for t in &tasks {
        let fg = run_one(t, Method::Fg, &config, &template, None);
        let spg = run_one(t, Method::SpgLlm, &config, &template, Some(&backend));
        if fg.grounded_actions.is_none()
            || fg.grounded_actions != spg.grounded_actions
            || fg.plan_cost != spg.plan_cost
            || spg.sound != Soundness::Valid
        {
            differences.push(t.id.clone());
        }
    }
    verdict(
        5,
        "identity backend equals full grounding",
        differences.is_empty(),
        format!("{} tasks, {} differ {differences:?}", tasks.len(), differences.len()),
    );
}

#[test]
fn a06_retry_loop_contract() {
    let d = fixture("blocksworld4.domain.pddl");
    let p = fixture("blocksworld4.problem.pddl");
    let template = PromptTemplate::default();
    let validator = Validator::default();
    let mut failures = Vec::new();
    for k in LOOP_KS {
        let config = LlmConfig { attempts: k, ..LlmConfig::default() };

        let mut script: Vec<MockReply> = (1..k)
            .map(|i| match i % 2 {
                1 => MockReply::Text("I could not find anything to remove.".into()),
                _ => MockReply::Fail("connection reset".into()),
            })
            .collect();
        script.push(MockReply::Identity);
        let backend = MockBackend::new(script);
        let out = spg_llm(&d, &p, &template, &config, &backend, &validator).unwrap();
        if !(out.is_accepted() && backend.calls() == k && out.attempts.len() == k && out.accepted.is_some()) {
            failures.push(format!("K={k}: succeed-last gave {} calls", backend.calls()));
        }

        let backend = MockBackend::new(vec![MockReply::Text("(define (domain nothing))".into())]);
        let out = spg_llm(&d, &p, &template, &config, &backend, &validator).unwrap();
        if out.is_accepted() || out.accepted.is_some() || backend.calls() != k {
            failures.push(format!("K={k}: always-fail gave {} calls", backend.calls()));
        }
    }
    verdict(6, "retry loop contract", failures.is_empty(), format!("K in {LOOP_KS:?}, problems {failures:?}"));
}

#[test]
fn a07_zeno_hand_pruning() {
    let d = fixture("zeno.domain.pddl");
    let p = fixture("zeno.problem.pddl");
    let pd = fixture("zeno-pruned.domain.pddl");
    let pp = fixture("zeno-pruned.problem.pddl");
    let original = parse_original(&d, &p).unwrap();
    let pruned = parse_original(&pd, &pp).unwrap();
    let proposal = PruningProposal::between(&original, &pruned);
    let surplus: BTreeSet<String> = ["p3", "p4", "p5", "p6"].map(String::from).into();
    let shape_ok = proposal.removed_objects == surplus
        && proposal.removed_schemas == BTreeSet::from(["zoom".to_string()])
        && proposal.removed_predicates.is_empty();

    let backend = MockBackend::new(vec![MockReply::Text(format!("```\n{pd}```\n```\n{pp}```"))]);
    let out =
        spg_llm(&d, &p, &PromptTemplate::default(), &LlmConfig::default(), &backend, &Validator::default()).unwrap();
    let report = &out.attempts[0].report.as_ref().unwrap();
    let levels_ok =
        [&report.syntactic, &report.semantic, &report.computational].iter().all(|l| l.status == LevelStatus::Passed);

    let task = BenchTask { id: "zeno".into(), family: "zeno_like".into(), domain: d, problem: p };
    let config = config();
    let fg = run_one(&task, Method::Fg, &config, &PromptTemplate::default(), None);
    let spg = run_one(&task, Method::SpgLlm, &config, &PromptTemplate::default(), Some(&backend));
    let (fa, sa) = (fg.grounded_actions.unwrap_or(0), spg.grounded_actions.unwrap_or(usize::MAX));
    verdict(
        7,
        "zeno hand pruning",
        shape_ok && levels_ok && sa < fa && spg.sound == Soundness::Valid,
        format!(
            "levels passed {levels_ok}, actions FG {fa} vs pruned {sa}, cost FG {} vs pruned {}, pruned plan {}",
            fg.plan_cost.map(|c| c.to_string()).unwrap_or_default(),
            spg.plan_cost.map(|c| c.to_string()).unwrap_or_default(),
            spg.sound
        ),
    );
}

#[test]
fn a08_planner_properties() {
    let mut tasks: Vec<(String, String, String)> = corpus().into_iter().map(|t| (t.id, t.domain, t.problem)).collect();
    // a dead end: the goal needs a block on itself, which no action achieves
    let bw = fixture("blocksworld4.domain.pddl");
    let dead = fixture("blocksworld4.problem.pddl").replacen("(on b1 b2)", "(on b1 b1)", 1);
    tasks.push(("bw-dead".into(), bw, dead));

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut states, mut infinite, mut solved, mut problems) = (0usize, 0usize, 0usize, Vec::new());
    for (id, d, p) in &tasks {
        let task = parse_original(d, p).unwrap();
        let gt = ground(&task).unwrap();

        // h = 0 exactly on goal states, along a random walk from s0
        let mut s: State = gt.init.clone();
        for _ in 0..RANDOM_WALK_STEPS {
            states += 1;
            if (h_add(&gt, &s) == 0.0) != task.is_goal_state(&s) {
                problems.push(format!("{id}: h=0 disagrees with goal test"));
            }
            let app: Vec<_> = gt.actions.iter().filter(|a| is_applicable(&s, a)).collect();
            if app.is_empty() {
                break;
            }
            s = apply_action(&s, app[rng.random_range(0..app.len())]).unwrap();
        }
        // the goal state itself; only meaningful when the goal atoms were grounded
        let goal_state = State::from_iter(gt.goal.iter().cloned());
        if gt.goal_reachable && h_add(&gt, &goal_state) != 0.0 {
            problems.push(format!("{id}: h(goal) != 0"));
        }

        let result = solve(&gt, Duration::from_secs_f64(TIME_BOUND_SECS));
        if h_add(&gt, &gt.init).is_infinite() {
            infinite += 1;
            if result.outcome != SearchOutcome::Unsolvable {
                problems.push(format!("{id}: h=inf but search said {}", result.summary().status));
            }
        }
        if let SearchOutcome::Solved { plan, .. } = &result.outcome {
            solved += 1;
            let ok = apply_plan(&gt.init, plan).is_ok_and(|end| task.is_goal_state(&end));
            if !ok || !validate_plan(&task, &task.plan_steps(plan)).is_valid() {
                problems.push(format!("{id}: plan does not replay"));
            }
        }
    }
    verdict(
        8,
        "planner properties",
        problems.is_empty() && infinite >= 1 && solved + 1 == tasks.len(),
        format!(
            "{} tasks, {states} walk states, {infinite} dead ends, {solved} solved, problems {problems:?}",
            tasks.len()
        ),
    );
}

#[test]
fn a09_parse_print_round_trip() {
    let mut pairs = fixture_pairs();
    pairs.extend(corpus().into_iter().map(|t| (t.id, t.domain, t.problem)));
    let mut failures = Vec::new();
    for (id, d, p) in &pairs {
        let dom = parse_domain(d).unwrap();
        let prob = parse_problem(p, &dom).unwrap();
        let (dt, pt) = (print_domain(&dom), print_problem(&prob));
        let dom2 = parse_domain(&dt).unwrap();
        let prob2 = parse_problem(&pt, &dom2).unwrap();
        if dom2 != dom || prob2 != prob || print_domain(&dom2) != dt || print_problem(&prob2) != pt {
            failures.push(id.clone());
        }
    }
    verdict(9, "parse/print round trip", failures.is_empty(), format!("{} tasks, failures {failures:?}", pairs.len()));
}

#[test]
fn a10_each_relation_fails_alone() {
    let d = fixture("blocksworld4.domain.pddl");
    let p = fixture("blocksworld4.problem.pddl");
    let teleport = "  (:action teleport\n    :parameters (?x - block)\n    :precondition (and (holding ?x))\n    :effect (and (ontable ?x) (not (holding ?x))))\n";
    let cases: [(Relation, String, String, &str); 5] = [
        (
            Relation::Predicates,
            d.replacen("(holding ?x - block))", "(holding ?x - block)\n    (sparkly ?x - block))", 1),
            p.clone(),
            "sparkly",
        ),
        (
            Relation::Schemas,
            d.replacen("  (:action pick-up", &format!("{teleport}  (:action pick-up"), 1),
            p.clone(),
            "teleport",
        ),
        (Relation::Objects, d.clone(), p.replacen("b4 - block", "b4 b9 - block", 1), "b9"),
        (Relation::Init, d.clone(), p.replacen("(handempty)", "(handempty) (on b4 b1)", 1), "(on b4 b1)"),
        (Relation::Goal, d.clone(), p.replacen("(on b3 b4)", "", 1), "(on b3 b4)"),
    ];

    let original = parse_original(&d, &p).unwrap();
    let mut problems = Vec::new();
    for (relation, pd, pp, symbol) in &cases {
        assert!(pd != &d || pp != &p, "fixture edit for {relation} did not apply");
        let v = Validator::default().validate(&original, pd, pp);
        let failing: Vec<Relation> = v.report.relations.iter().filter(|r| !r.passed).map(|r| r.relation).collect();
        if v.report.syntactic.status != LevelStatus::Passed || failing != [*relation] {
            problems.push(format!("{relation}: failing relations {failing:?}"));
            continue;
        }
        let backend = MockBackend::new(vec![MockReply::Text(format!("{pd}\n{pp}")), MockReply::Identity]);
        let config = LlmConfig { attempts: 2, ..LlmConfig::default() };
        spg_llm(&d, &p, &PromptTemplate::default(), &config, &backend, &Validator::default()).unwrap();
        let repair = &backend.prompts()[1];
        let lines = v.report.failure_lines();
        let named = lines.iter().any(|l| l.contains(symbol));
        if !named || !lines.iter().all(|l| repair.contains(&format!("- {l}"))) {
            problems.push(format!("{relation}: repair prompt does not name {symbol}: {lines:?}"));
        }
    }
    verdict(
        10,
        "each semantic relation fails alone",
        problems.is_empty(),
        format!("{} relations, problems {problems:?}", cases.len()),
    );
}
