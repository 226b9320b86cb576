//! MILP instances: data model, classification, preprocessing, generators
//! and JSON I/O.

mod classify;
pub mod generate;
pub mod io;
mod model;
mod preprocess;

pub use classify::{classify, is_sign_pattern};
pub use model::{MilpInstance, Partition, Tag, VarKind, Variable};
pub use preprocess::{expand_point, is_preprocessed, preprocess_packing};
