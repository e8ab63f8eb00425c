use thiserror::Error;

use crate::parse::ParseError;

/// Problems with the input; the binary exits with status 1 on any of them.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: {error}\n{}", error.annotate(input))]
    Expression {
        path: String,
        input: String,
        error: ParseError,
    },

    #[error("{path}: {error}")]
    Core {
        path: String,
        error: crformal_core::error::Error,
    },

    #[error("nothing to do: give a scenario file or --fixtures")]
    NothingToDo,
}
