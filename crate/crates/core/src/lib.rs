//! Exact enumeration of commuting tuples of permutations by number of orbits.
//!
//! `A(p, n, k)` counts the `p`-tuples of pairwise commuting permutations of
//! `n` points whose generated group has exactly `k` orbits. This crate
//! computes it two ways ([`counting`]), checks it against brute force
//! ([`oracle`]), against the product-form generating function and the
//! hook-length polynomials ([`series`]), implements the block-cycle bijection
//! behind the transitive recursion ([`bijection`]), and sweeps log-concavity in
//! `k` ([`conjecture`]).

pub mod bijection;
pub mod check;
pub mod conjecture;
pub mod counting;
pub mod error;
pub mod numtheory;
pub mod oracle;
pub mod perm;
pub mod records;
pub mod series;

pub use error::{Error, Result};
