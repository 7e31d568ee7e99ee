//! Reductions of rational points and of elements of `Q^*` modulo primes:
//! order profiles, per-prime implication tests and recovery of global
//! relations.

pub mod arith;
pub mod cli;
pub mod dependence;
pub mod elliptic;
pub mod error;
pub mod group;
pub mod mulgroup;
pub mod order_search;
pub mod relation;
pub mod system;

pub use error::{Error, Result};
