//! A hand-written pruning of a Zenotravel-like task: people who are not in
//! the goal and the `zoom` action are removed. The pruned task passes all
//! validation levels and grounds to far fewer actions; the plan found on it
//! is checked against the original.
//!
//! ```bash
//! cargo run --example zeno_pruning
//! ```

use pddl_prune::bench::{run_one, BenchConfig, BenchTask, Method};
use pddl_prune::llm::{parse_original, MockBackend, MockReply, PromptTemplate};
use pddl_prune::pruning::PruningProposal;

const DOMAIN: &str = include_str!("../tests/fixtures/zeno.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/zeno.problem.pddl");
const PRUNED_DOMAIN: &str = include_str!("../tests/fixtures/zeno-pruned.domain.pddl");
const PRUNED_PROBLEM: &str = include_str!("../tests/fixtures/zeno-pruned.problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let original = parse_original(DOMAIN, PROBLEM)?;
    let pruned = parse_original(PRUNED_DOMAIN, PRUNED_PROBLEM)?;
    println!("{}", PruningProposal::between(&original, &pruned));

    let task =
        BenchTask { id: "zeno".into(), family: "zeno_like".into(), domain: DOMAIN.into(), problem: PROBLEM.into() };
    let backend = MockBackend::new(vec![MockReply::Text(format!("{PRUNED_DOMAIN}\n{PRUNED_PROBLEM}"))]);
    let config = BenchConfig::default();
    let template = PromptTemplate::default();

    println!("{:<8} {:>8} {:>6} {:>10}", "method", "actions", "cost", "sound");
    for method in [Method::Fg, Method::SpgLlm] {
        let r = run_one(&task, method, &config, &template, Some(&backend));
        let cost = r.plan_cost.map(|c| c.to_string()).unwrap_or_default();
        println!("{:<8} {:>8} {:>6} {:>10}", r.method, r.grounded_actions.unwrap_or(0), cost, r.sound);
    }
    Ok(())
}
