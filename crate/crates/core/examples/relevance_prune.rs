//! Rule-based pruning: a backward relevance fixpoint proposes which
//! objects, predicates and action schemas can go, and the proposal is applied
//! to the lifted task before grounding.
//!
//! ```bash
//! cargo run --example relevance_prune
//! ```

use pddl_prune::bench::{generate_instance, GeneratorSpec};
use pddl_prune::grounder::ground;
use pddl_prune::llm::parse_original;
use pddl_prune::pddl::{print_domain, print_problem};
use pddl_prune::pruning::{apply_proposal, goal_protected_symbols, relevance_prune};
use pddl_prune::task::build_task;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = GeneratorSpec::Chain { length: 6, ornaments: 5, shortcuts: 2, seed: 3 };
    let (d, p) = generate_instance(&spec)?;
    let task = parse_original(&d, &p)?;

    let (objects, predicates) = goal_protected_symbols(&task);
    println!("goal mentions objects {objects:?} and predicates {predicates:?}");

    let proposal = relevance_prune(&task);
    println!("{proposal}");

    let (d2, p2) = apply_proposal(&task, &proposal)?;
    let pruned = build_task(&d2, &p2)?;
    println!(
        "ground actions: {} before, {} after",
        ground(&task)?.stats.num_actions,
        ground(&pruned)?.stats.num_actions
    );
    print!("\n{}\n{}", print_domain(&d2), print_problem(&p2));
    Ok(())
}
