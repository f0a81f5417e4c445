//! Exact enumeration and verification toolkit for minimal factorizations of
//! the long cycle `(1 2 … n)`, the chains of noncrossing partitions they
//! correspond to, and the multivariate weight polynomials attached to both.
//!
//! Modules, bottom-up:
//!
//! - [`perm`]: permutations, lengths and geodesic predicates.
//! - [`ncpart`]: noncrossing partitions, interval and near-interval shapes.
//! - [`poly`]: exact sparse polynomials and the closed-form products.
//! - [`chains`]: chains, factorizations, weights and final chains.
//! - [`psi`]: the map merging the last two steps of a chain, with its bar
//!   statistic and inverse.
//! - [`trees`]: André trees and Cayley trees with their weights.
//! - [`verify`]: every identity as a named check producing a report.
//! - [`cli`]: the `minfact` command line front end.

pub mod chains;
pub mod cli;
pub mod error;
pub mod ncpart;
pub mod perm;
pub mod poly;
pub mod psi;
pub mod trees;
pub mod verify;

pub use chains::{Chain, Factorization, FactorizationType, FinalChain};
pub use error::{Error, Result};
pub use ncpart::{GroundSet, NCPartition, Shape};
pub use perm::Permutation;
pub use poly::{Monomial, Polynomial};
