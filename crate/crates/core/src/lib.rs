//! Exact-arithmetic cutting-plane laboratory for small mixed-integer programs.
//!
//! Everything is computed over [`Rational`]s: LP relaxations, cut
//! generators, cut scoring and selection, sparse and aggregation closures,
//! and the brute-force oracles used to check them.

pub mod aggregation;
pub mod caps;
pub mod cuts;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod rational;
pub mod report;
pub mod selection;
pub mod sparsity;
pub mod verify;

pub use caps::Caps;
pub use error::{Error, Result};
pub use rational::Rational;
