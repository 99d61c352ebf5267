use thiserror::Error;

/// Errors surfaced by the library. Caps and budgets are hard errors by
/// design: nothing in this crate silently approximates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern has {got} vertices, exceeding the cap of {cap}")]
    PatternTooLarge { got: usize, cap: usize },

    #[error("graph has {got} vertices, exceeding the supported maximum of {cap}")]
    GraphTooLarge { got: usize, cap: usize },

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("operation requires a connected input: {0}")]
    Disconnected(String),

    #[error("conditional component has {vars} variables, exceeding the cap of {cap}")]
    ComponentTooLarge { vars: usize, cap: usize },

    #[error("brute-force scope has {vars} variables, exceeding the cap of {cap}")]
    ScopeTooLarge { vars: usize, cap: usize },

    #[error("conditioning event has probability zero")]
    ZeroProbabilityCondition,

    #[error("invalid constants: {0}")]
    InvalidConstants(String),

    #[error("schedule value out of range: {0}")]
    OutOfRange(String),

    #[error("{count} is not divisible by {divisor}")]
    Divisibility { count: usize, divisor: usize },

    #[error("search budget of {budget} nodes exceeded in {what}")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to: 2 for configuration
    /// and parse problems, 3 for budget/cap exhaustion, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidPattern(_)
            | Error::PatternTooLarge { .. }
            | Error::GraphTooLarge { .. }
            | Error::InvalidHypergraph(_)
            | Error::InvalidConstants(_)
            | Error::OutOfRange(_)
            | Error::Divisibility { .. }
            | Error::InvalidConfig(_)
            | Error::Parse(_) => 2,
            Error::ComponentTooLarge { .. }
            | Error::ScopeTooLarge { .. }
            | Error::BudgetExceeded { .. } => 3,
            _ => 1,
        }
    }
}
