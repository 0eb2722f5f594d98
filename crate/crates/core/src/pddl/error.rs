use super::sexpr::Pos;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PddlError {
    #[error("{line}:{column}: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },

    #[error("{line}:{column}: unsupported requirement `{requirement}`")]
    UnknownRequirement { line: usize, column: usize, requirement: String },

    #[error("{line}:{column}: undeclared {kind} `{name}`")]
    Undeclared { line: usize, column: usize, kind: &'static str, name: String },

    #[error("{line}:{column}: duplicate {kind} `{name}`")]
    Duplicate { line: usize, column: usize, kind: &'static str, name: String },

    #[error("{line}:{column}: `{predicate}` takes {expected} argument(s), found {found}")]
    Arity { line: usize, column: usize, predicate: String, expected: usize, found: usize },

    #[error("{line}:{column}: `{term}` has type `{found}`, expected `{expected}`")]
    TypeMismatch { line: usize, column: usize, term: String, expected: String, found: String },

    #[error("{line}:{column}: {what} is not supported here")]
    Unsupported { line: usize, column: usize, what: String },

    #[error("problem is for domain `{found}`, expected `{expected}`")]
    DomainMismatch { expected: String, found: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("action {0} is not applicable")]
    Inapplicable(String),
}

impl PddlError {
    pub(crate) fn syntax(pos: Pos, expected: &str, found: &str) -> Self {
        PddlError::Syntax { line: pos.line, column: pos.column, expected: expected.into(), found: found.into() }
    }

    pub(crate) fn undeclared(pos: Pos, kind: &'static str, name: &str) -> Self {
        PddlError::Undeclared { line: pos.line, column: pos.column, kind, name: name.into() }
    }

    pub(crate) fn duplicate(pos: Pos, kind: &'static str, name: &str) -> Self {
        PddlError::Duplicate { line: pos.line, column: pos.column, kind, name: name.into() }
    }

    pub(crate) fn unsupported(pos: Pos, what: impl Into<String>) -> Self {
        PddlError::Unsupported { line: pos.line, column: pos.column, what: what.into() }
    }
}
