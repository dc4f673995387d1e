use thiserror::Error;

/// Errors raised by the library. Each variant maps onto a distinct CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid presentation: {0}")]
    Invalid(String),

    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("LP solver failure: {0}")]
    Solver(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the `relhyp` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Invalid(_) => 2,
            Error::Oracle(_) => 3,
            Error::Resource(_) => 4,
            Error::Solver(_) => 5,
            Error::Precondition(_) | Error::NotFound(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
