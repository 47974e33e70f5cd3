use serde::{Deserialize, Serialize};

use crate::cost::Cost;

pub const ROOT_TYPE: &str = "object";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainAst {
    pub name: String,
    /// Requirement keywords including the leading colon, e.g. `:strips`.
    pub requirements: Vec<String>,
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<PredicateDecl>,
    /// Whether `(:functions (total-cost) - number)` is declared.
    pub declares_total_cost: bool,
    pub schemas: Vec<SchemaAst>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDecl {
    pub name: String,
    pub parent: String,
}

/// A name with its declared type; used for parameters and objects.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

impl TypedName {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        TypedName { name: name.into(), ty: ty.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDecl {
    pub name: String,
    pub parameters: Vec<TypedName>,
}

/// An atom whose arguments are variables (`?x`) inside schemas and object
/// names inside problems.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomAst {
    pub predicate: String,
    pub args: Vec<String>,
}

impl AtomAst {
    pub fn new<S: Into<String>>(predicate: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        AtomAst { predicate: predicate.into(), args: args.into_iter().map(Into::into).collect() }
    }
}

impl std::fmt::Display for AtomAst {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// Static `(= ?x ?y)` or `(not (= ?x ?y))` precondition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Equality {
    pub left: String,
    pub right: String,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaAst {
    pub name: String,
    pub parameters: Vec<TypedName>,
    pub precondition: Vec<AtomAst>,
    pub equalities: Vec<Equality>,
    pub add_effects: Vec<AtomAst>,
    pub del_effects: Vec<AtomAst>,
    /// Explicit `(increase (total-cost) k)`; `None` means the default of 1.
    pub cost: Option<Cost>,
}

impl SchemaAst {
    pub fn cost(&self) -> Cost {
        self.cost.unwrap_or(Cost::ONE)
    }

    pub fn predicates_used(&self) -> impl Iterator<Item = &str> {
        self.precondition.iter().chain(&self.add_effects).chain(&self.del_effects).map(|a| a.predicate.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemAst {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedName>,
    pub init: Vec<AtomAst>,
    /// `(= (total-cost) k)` in the initial state.
    pub initial_total_cost: Option<Cost>,
    pub goal: Vec<AtomAst>,
    /// `(:metric minimize (total-cost))`.
    pub minimize_total_cost: bool,
}
