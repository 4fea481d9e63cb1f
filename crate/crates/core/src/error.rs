use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable {index} out of range for {var_count} variables")]
    VarOutOfRange { index: usize, var_count: usize },
    #[error("and/or needs at least one child")]
    EmptyConnective,
    #[error("assignment has {found} values, formula has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{var_count} variables exceeds the enumeration limit of {limit}")]
    TooManyVariables { var_count: usize, limit: usize },
}

impl FormulaError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        FormulaError::Parse {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node {node} references child {child} which is not defined before it")]
    ForwardReference { node: usize, child: usize },
    #[error("literal on variable {var} out of range for {var_count} variables")]
    VarOutOfRange { var: usize, var_count: usize },
    #[error("circuit has no nodes")]
    Empty,
    #[error("circuit is not {property}: node {node}: {detail}")]
    Structure {
        property: &'static str,
        node: usize,
        detail: String,
    },
    #[error("determinism cannot be verified: not decision-guarded and {var_count} variables exceeds the brute-force limit of {limit}")]
    Unverifiable { var_count: usize, limit: usize },
    #[error("{var_count} variables exceeds the enumeration limit of {limit}")]
    TooManyVariables { var_count: usize, limit: usize },
    #[error("assignment has {found} values, circuit has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("compilation exceeded the node cap of {cap}")]
    ResourceCap { cap: usize },
    #[error("variable order is not a permutation of 0..{var_count}")]
    BadOrder { var_count: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("probability vector has {found} entries, circuit has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },
    #[error("probability {value} at index {index} is not in [0, 1]")]
    BadProbability { index: usize, value: f64 },
    #[error("entropy undefined on empty support")]
    EmptySupport,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("{0}")]
    Invalid(String),
    #[error("more than {cap} simple paths")]
    PathCap { cap: usize },
}
