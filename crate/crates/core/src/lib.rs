pub mod axioms;
pub mod cli;
pub mod config;
pub mod continuity;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod rng;
pub mod special;
pub mod transform;

pub use error::{Error, Result};

/// Crate version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
