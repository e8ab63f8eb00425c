//! Formal generic submanifolds of `C^N` and formal holomorphic maps between
//! them, computed at finite truncation order with exact Gaussian-rational
//! coefficients.

pub mod coeff;
pub mod context;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod linalg;
pub mod local;
pub mod manifold;
pub mod mapping;
pub mod matrix;
pub mod series;
pub mod verdict;

pub use coeff::Coeff;
pub use context::{Coords, Ctx, Role, VariableContext};
pub use error::{Error, Result};
pub use series::{Monomial, Precision, Series};
pub use verdict::{Truth, Verdict};
