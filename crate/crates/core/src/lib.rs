//! Classes of configuration hypersurface complements modulo the torus class.
//!
//! The [`engine`] reduces a matroid by a fixed table of rules to an integer
//! `n` with `[Y] = n mod T`, and the [`oracle`] checks such values by counting
//! points over small prime fields.

pub mod bits;
pub mod builders;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod field;
pub mod graph;
pub mod linalg;
pub mod matroid;
pub mod oracle;
pub mod table;

pub use error::{Error, Result};
