use thiserror::Error;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unsupported PDDL feature: {feature}")]
    UnsupportedFeature { feature: String, line: usize, column: usize },
    #[error("predicate '{predicate}' expects {expected} argument(s), got {got}")]
    ArityMismatch { predicate: String, expected: usize, got: usize },
    #[error("unknown predicate '{name}'")]
    UnknownPredicate { name: String },
    #[error("action '{schema}' uses undeclared predicate '{predicate}'")]
    UndeclaredPredicateInSchema { schema: String, predicate: String },
    #[error("object '{object}' has undeclared type '{ty}'")]
    UnknownObjectType { object: String, ty: String },
    #[error("undeclared type '{ty}'")]
    UnknownType { ty: String },
    #[error("unknown object '{name}'")]
    UnknownObject { name: String },
    #[error("action '{schema}' uses undeclared variable '{variable}'")]
    UndeclaredVariable { schema: String, variable: String },
    #[error("argument '{object}' of '{predicate}' is not of type '{expected}'")]
    TypeMismatch { predicate: String, object: String, expected: String },
    #[error("duplicate {what} '{name}'")]
    Duplicate { what: &'static str, name: String },
}

impl PddlError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        PddlError::Syntax { line: pos.line, column: pos.column, message: message.into() }
    }

    pub(crate) fn unsupported(pos: Pos, feature: impl Into<String>) -> Self {
        PddlError::UnsupportedFeature { feature: feature.into(), line: pos.line, column: pos.column }
    }

    /// Source position, when the error is tied to one.
    pub fn position(&self) -> Option<Pos> {
        match self {
            PddlError::Syntax { line, column, .. } | PddlError::UnsupportedFeature { line, column, .. } => {
                Some(Pos { line: *line, column: *column })
            }
            _ => None,
        }
    }
}
