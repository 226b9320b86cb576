//! Cut families: aggregation, Chvátal-Gomory, MIR, GMIC, subadditive, and a
//! Gomory cutting-plane loop.

mod aggregate;
mod cg;
mod cut;
pub mod gmic;
pub mod gomory;
pub mod mir;
pub mod subadditive;

pub use aggregate::{aggregate, row_as_cut, AggregateOptions};
pub use cg::{cg_cut, is_integral_row};
pub use cut::{Cut, Provenance};
pub use gmic::{gmic, gmic_from_tableau, TableauRow};
pub use gomory::{gomory_loop, GomoryOutcome, GomoryReport};
pub use mir::{embed, mir_cut, Embedding, MirForm};
pub use subadditive::{check_subadditive, subadditive_cut, SubadditiveFn};
