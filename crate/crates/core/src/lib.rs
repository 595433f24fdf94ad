//! Symbolic dynamics toolkit for beta-shifts.
//!
//! Builds particularly non-normal sequences by the recursive block
//! construction and checks the frequency dichotomy and the dimension lower
//! bound machinery on finite prefixes.

pub mod analysis;
pub mod beta;
pub mod construction;
pub mod error;
mod instance;
pub mod measures;
pub mod shift;
pub mod specification;

pub use error::{Error, Result};
pub use instance::Instance;
