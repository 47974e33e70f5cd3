//! Reading and canonically printing the STRIPS subset of PDDL.

mod ast;
mod error;
mod parser;
mod printer;
mod sexp;

pub use ast::*;
pub use error::{PddlError, Pos};
pub use parser::{parse_domain, parse_problem};
pub use printer::{print_domain, print_problem};
