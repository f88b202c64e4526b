//! Compatibility-driven grouping: objectives over partitions of items into
//! equal-size groups, exact and approximate solvers, an oblivious-feedback
//! simulation environment, and a score-learning pipeline on top of it.

pub mod core;
pub mod error;
pub mod general_solvers;
pub mod ingest;
pub mod io;
pub mod learner;
pub mod score_solvers;
pub mod simenv;

pub use error::{Error, Result};
