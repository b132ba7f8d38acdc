use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("malformed set: {0}")]
    InvalidSet(String),

    #[error("enumeration budget exceeded: {what} is {value}, limit {limit}")]
    BudgetExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("{line}:{col}: undeclared variable `{name}`")]
    UndeclaredVariable { name: String, line: usize, col: usize },

    #[error("{line}: width mismatch in update of `{target}`: {detail}")]
    WidthMismatch {
        target: String,
        line: usize,
        detail: String,
    },

    #[error("{line}: duplicate update for `{name}`")]
    DuplicateUpdate { name: String, line: usize },

    #[error("{line}: duplicate declaration of `{name}`")]
    DuplicateDeclaration { name: String, line: usize },

    #[error("no update given for state `{0}`")]
    MissingUpdate(String),

    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A result failed a soundness self-check.
    #[error("internal check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_set(msg: impl Into<String>) -> Self {
        Error::InvalidSet(msg.into())
    }
}
