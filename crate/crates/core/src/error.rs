use std::fmt;

use thiserror::Error;

/// Syntax error reported by the formula parser, positioned at a 1-based line
/// and column (columns count characters, not bytes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Which enumeration a resource cap guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    /// Variables in a two-valued model enumeration.
    BooleanVariables,
    /// Variables in a three-valued (LP_m) scan.
    LpmVariables,
    /// Occurrences in a relation-lattice enumeration.
    Occurrences,
    /// Relations visited by an exhaustive sweep.
    Relations,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::BooleanVariables => "boolean variables",
            Resource::LpmVariables => "LP_m variables",
            Resource::Occurrences => "occurrences",
            Resource::Relations => "relations",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("resource cap exceeded: {actual} {resource} > limit {limit}")]
    CapExceeded {
        resource: Resource,
        limit: u64,
        actual: u64,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` is not in the declared variable set")]
    UndeclaredVariable(String),

    #[error("occurrence {index} of `{var}` does not exist in the formula")]
    OccurrenceOutOfRange { var: String, index: usize },

    #[error("relation is not a maximal consistency relation of the base")]
    NotAnMcr,

    #[error("interpretation is not an LP_m model of the base")]
    NotALpmModel,

    #[error("target set {0} is empty, no hitting set exists")]
    EmptyTargetSet(usize),

    #[error("relation does not cover the occurrences of the base")]
    RelationShape,

    #[error("interpretation assigns {actual} occurrences, the base has {expected}")]
    InterpretationShape { expected: usize, actual: usize },
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(resource: Resource, limit: usize, actual: usize) -> Result<()> {
    if actual > limit {
        Err(Error::CapExceeded {
            resource,
            limit: limit as u64,
            actual: actual as u64,
        })
    } else {
        Ok(())
    }
}
