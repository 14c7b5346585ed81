use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("instruction sequence must contain at least one instruction")]
    EmptySequence,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("variable v{0} is not bound by the assignment")]
    UnboundVariable(u32),

    #[error("circuit contains a cycle through gate g{0}")]
    CyclicCircuit(usize),

    #[error("gate g{gate} refers to missing node {node}")]
    DanglingPredecessor { gate: usize, node: String },

    #[error("clause {0} is empty")]
    EmptyClause(usize),

    #[error("invalid clause {index}: {reason}")]
    InvalidClause { index: usize, reason: String },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("resource bound exceeded: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
