use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid game form: {0}")]
    InvalidForm(String),
    #[error("index out of range: {what} {index} (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("hypergraphs live on different ground sets ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("NE guarantee violated: {0}")]
    NeGuaranteeViolated(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid vector form: {0}")]
    InvalidVectorForm(String),
    #[error("invalid costs: {0}")]
    InvalidCosts(String),
    #[error("instance has no s-t path")]
    NoPath,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
