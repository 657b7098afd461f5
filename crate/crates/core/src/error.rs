use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: unexpected token `{token}`")]
    Malformed { token: String },

    #[error("family mismatch: {left} vs {right}")]
    FamilyMismatch { left: String, right: String },

    #[error("size cap exceeded: {required} elements required, cap is {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("no level-1 decomposition of {element} against the transversal")]
    SearchExhausted { element: String },

    #[error("invalid endomorphism data: {0}")]
    InvalidInput(String),

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("word is not balanced (a monomial has {isometries} S and {coisometries} S*)")]
    Unbalanced { isometries: usize, coisometries: usize },

    #[error("connecting matrix is not injective (determinant 0)")]
    NotInjective,

    #[error("inductive limit did not stabilize within {stages} stages")]
    NotStabilized { stages: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
