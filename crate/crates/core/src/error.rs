use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("series live in different variable contexts")]
    ContextMismatch,

    #[error("substitution for `{variable}` has a nonzero constant term")]
    NonZeroConstantTerm { variable: String },

    #[error("series has zero constant term and is not a unit")]
    NotAUnit,

    #[error("linear part is singular (rank {rank} of {expected}){hint}")]
    SingularLinearPart {
        rank: usize,
        expected: usize,
        hint: String,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("truncation order {available} is too small: at least {required} is needed")]
    TruncationTooSmall { required: u32, available: u32 },

    #[error("not a formal real submanifold: {0}")]
    NotReal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
