//! File formats and command-line front end for the `geomoment-core`
//! invariant workbench.

pub mod commands;
pub mod error;
pub mod input;
pub mod json;
pub mod text;

pub use error::{AppError, Result};
