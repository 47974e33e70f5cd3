//! Pre-grounding pruning of STRIPS planning tasks.
//!
//! The crate parses PDDL, prunes objects, predicates and action schemas
//! before grounding (through an LLM chat-completion endpoint, a scripted mock
//! or a deterministic relevance analysis), validates the pruned task, grounds
//! it by delete-relaxed reachability, solves it with a greedy best-first
//! planner and replays the resulting plan on the original task.

pub mod bench;
pub mod cost;
pub mod grounder;
pub mod llm;
pub mod pddl;
pub mod planner;
pub mod pruning;
pub mod task;
pub mod validate;

pub use cost::Cost;
