use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown {kind} `{id}`")]
    Lookup { kind: &'static str, id: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("criterion index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("{n} criteria exceed the supported maximum of {max} for {what}")]
    Capacity { what: &'static str, n: usize, max: usize },

    #[error("malformed linear program: {0}")]
    MalformedModel(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("cannot linearize statement: {0}")]
    Linearization(String),

    #[error("no compatible bicapacity: the preference statements are inconsistent")]
    EmptyCompatibleSet,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
