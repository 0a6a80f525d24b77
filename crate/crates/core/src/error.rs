use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(q)")]
    DivisionByZero,

    #[error("pole: {0}")]
    Pole(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("rule {lhs} -> {rhs}: right-hand side is not smaller in the termination order")]
    Orientation { lhs: String, rhs: String },

    #[error("duplicate rule for {0}")]
    DuplicateRule(String),

    #[error("rewriting does not terminate: cycle through `{0}`")]
    NonTerminating(String),

    #[error("rewrite step budget of {budget} exceeded while reducing `{word}`")]
    BudgetExceeded { budget: u64, word: String },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{0}")]
    Inconsistent(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
