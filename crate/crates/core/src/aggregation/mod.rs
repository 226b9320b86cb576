//! Aggregation closures: single-row integer hulls, sampled aggregation
//! closures, approximation ratios and the CG comparison experiment.

mod alpha;
mod cg_compare;
mod closure;
mod experiments;
mod knapsack;

pub use alpha::{alpha_ratio, objective_sample, AlphaReport, Ratio};
pub use cg_compare::{cg_1row_vs_aggregated, small_fractions, CgGapReport};
pub use closure::{
    aggregation_closure_outer, aggregation_closure_with, one_row_closure, sample_multipliers, ClosureApprox,
    Exactness, MultiplierParams,
};
pub use experiments::{one_row_gap_demo, sign_pattern_experiment, verify_aggregation_bound, AggRow, GapDemoRow};
pub use knapsack::{implied_by_bounds, knapsack_hull_cuts};
