//! The prune-validate-retry loop against a scripted backend. The first reply
//! drops a goal atom, so validation fails and the second call receives a
//! repair prompt that names the problem; the second reply is accepted.
//!
//! ```bash
//! cargo run --example spg_mock_loop
//! ```

use pddl_prune::llm::{spg_llm, LlmConfig, MockBackend, MockReply, PromptTemplate};
use pddl_prune::validate::Validator;

const DOMAIN: &str = include_str!("../tests/fixtures/blocksworld5.domain.pddl");
const PROBLEM: &str = include_str!("../tests/fixtures/blocksworld4.problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bw4 = include_str!("../tests/fixtures/blocksworld4.domain.pddl");
    let bad_problem = PROBLEM.replacen("(on b1 b2)", "", 1);
    assert_ne!(bad_problem, PROBLEM);
    let backend = MockBackend::new(vec![
        MockReply::Text(format!("Here you go:\n{bw4}\n{bad_problem}")),
        MockReply::Text(format!("Fixed.\n```pddl\n{bw4}```\n```pddl\n{PROBLEM}```")),
    ]);
    let config = LlmConfig { attempts: 3, ..LlmConfig::default() };

    let outcome = spg_llm(DOMAIN, PROBLEM, &PromptTemplate::default(), &config, &backend, &Validator::default())?;
    for (i, a) in outcome.attempts.iter().enumerate() {
        let verdict = if a.passed() { "accepted" } else { "rejected" };
        println!("attempt {} {verdict} ({:.3} s)", i + 1, a.seconds);
        if let Some(report) = a.report.as_ref().filter(|r| !r.passed()) {
            for line in report.failure_lines() {
                println!("    {line}");
            }
        }
    }
    println!("model calls: {}", backend.calls());

    let repair = &backend.prompts()[1];
    let tail: Vec<&str> = repair.lines().rev().take(12).collect();
    println!("\nend of the repair prompt:");
    for line in tail.into_iter().rev() {
        println!("| {line}");
    }
    Ok(())
}
