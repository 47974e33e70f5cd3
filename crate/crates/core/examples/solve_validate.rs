//! Solve a task with the built-in planner (greedy best-first search on the
//! additive heuristic), then replay plans on the task.
//!
//! ```bash
//! cargo run --example solve_validate
//! ```

use std::time::Duration;

use pddl_prune::grounder::ground;
use pddl_prune::llm::parse_original;
use pddl_prune::planner::{h_add, parse_plan, solve, SearchOutcome};
use pddl_prune::validate::validate_plan;

const DOMAIN: &str = include_str!("../tests/fixtures/zeno.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/zeno.problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let task = parse_original(DOMAIN, PROBLEM)?;
    let gt = ground(&task)?;
    println!("h_add(s0) = {}", h_add(&gt, &gt.init));

    let result = solve(&gt, Duration::from_secs(10));
    let SearchOutcome::Solved { plan, cost, solving_time } = &result.outcome else {
        return Err(format!("no plan: {}", result.summary().status).into());
    };
    println!("plan of cost {cost} in {:.3} ms, {} states expanded", solving_time.as_secs_f64() * 1e3, result.expanded);
    let steps = task.plan_steps(plan);
    for s in &steps {
        println!("  {s}");
    }
    println!("replay: {}", validate_plan(&task, &steps));

    // a plan text from elsewhere: the second step is not applicable
    let foreign = parse_plan("(board p1 a1 c1)\n(debark p1 a1 c2) ; a1 never flew\n")?;
    println!("foreign plan: {}", validate_plan(&task, &foreign));
    Ok(())
}
