//! Sparse cuts: `k`-sparse closures and their distance to the polytope, the
//! randomized sparsifier, interaction graphs and block-sparse closures.

mod blocks;
mod bound;
mod chromatic;
mod closure;
mod graph;
mod sparsify;

pub use blocks::{
    block_closure, block_sparse_closure_value, two_stage_split, verify_eta_bound, BlockClosure, BlockValue,
    EtaReport, EtaRow, StageSplit, SupportList,
};
pub use bound::{sparse_distance_bound, DistanceBound};
pub use chromatic::{fractional_chromatic, maximal_stable_sets};
pub use closure::{dist_pk, lifted_projection_rows, sparse_closure, DistPk};
pub use graph::{check_absent_edges, interaction_graph, InteractionGraph};
pub use sparsify::{
    check_properties, cmp_sqrt_form, lambda_star_sq, sparsify_cut, Separation, SparseDirection,
    SparsifierInput, SparsifyOutcome, SparsifyStats,
};
