pub mod curvetopo;
pub mod ensembles;
pub mod error;
pub mod kernel;
pub mod polynomial;
pub mod quadrature;

pub use error::{DegenerateReason, Error, Result};
