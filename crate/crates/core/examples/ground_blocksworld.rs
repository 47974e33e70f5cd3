//! Full grounding of Blocksworld with and without the extra `move-b-to-b`
//! schema, and the effect of removing that schema before grounding.
//!
//! ```bash
//! cargo run --example ground_blocksworld
//! ```

use std::collections::BTreeSet;

use pddl_prune::grounder::ground;
use pddl_prune::llm::parse_original;
use pddl_prune::pruning::{apply_proposal, PruningProposal};
use pddl_prune::task::build_task;

const BW4: &str = include_str!("../tests/fixtures/blocksworld4.domain.pddl");
const BW5: &str = include_str!("../tests/fixtures/blocksworld5.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/blocksworld4.problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (label, domain) in [("4 operators", BW4), ("5 operators", BW5)] {
        let task = parse_original(domain, PROBLEM)?;
        let gt = ground(&task)?;
        println!("{label}: {} ground actions, {} atoms", gt.stats.num_actions, gt.stats.num_atoms);
        let mut per_schema = std::collections::BTreeMap::<&str, usize>::new();
        for a in &gt.actions {
            *per_schema.entry(task.schema(a.schema).name.as_str()).or_default() += 1;
        }
        for (name, n) in per_schema {
            println!("    {name:<12} {n}");
        }
    }

    let task = parse_original(BW5, PROBLEM)?;
    let proposal =
        PruningProposal { removed_schemas: BTreeSet::from(["move-b-to-b".to_string()]), ..Default::default() };
    let (d, p) = apply_proposal(&task, &proposal)?;
    let pruned = build_task(&d, &p)?;
    println!("\nafter removing move-b-to-b: {} ground actions", ground(&pruned)?.stats.num_actions);

    let gt = ground(&pruned)?;
    println!("\nfirst few ground actions:");
    for a in gt.actions.iter().take(6) {
        println!("  {}", pruned.action_name(a));
    }
    Ok(())
}
