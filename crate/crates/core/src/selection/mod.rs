//! Cut quality measures and the filter-rank-select pipeline.

mod measures;
mod select;

pub use measures::{dynamism, sq_cosine, sq_depth, sq_parallelism};
pub use select::{score, select, CutPool, Policy, ScoredCut};
