//! Parse a typed STRIPS task, inspect it, and print it back canonically.
//!
//! ```bash
//! cargo run --example parse_print
//! ```

use pddl_prune::pddl::{parse_domain, parse_problem, print_domain, print_problem};
use pddl_prune::task::build_task;

const DOMAIN: &str = include_str!("../tests/fixtures/blocksworld4.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/blocksworld4.problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = parse_domain(DOMAIN)?;
    let problem = parse_problem(PROBLEM, &domain)?;
    let task = build_task(&domain, &problem)?;

    println!("domain {} / problem {}", domain.name, problem.name);
    for schema in task.schemas() {
        let params: Vec<String> =
            schema.params.iter().map(|(name, ty)| format!("{name} - {}", task.types().name(*ty))).collect();
        println!("  action {} ({})", schema.name, params.join(", "));
    }
    for atom in task.goal().iter() {
        println!("  goal {}", task.atom_name(atom));
    }

    let text = print_domain(&domain);
    print!("\n{text}\n{}", print_problem(&problem));

    // printing is canonical: a second round trip changes nothing
    let again = parse_domain(&text)?;
    assert_eq!(again, domain);

    // errors carry a position
    let broken = DOMAIN.replacen("(:action", "(:action (", 1);
    if let Err(e) = parse_domain(&broken) {
        println!("\nbroken input: {e}");
    }
    Ok(())
}
