//! Exact polyhedral computation: LP, vertex and facet enumeration,
//! projection, distances, and brute-force integer hulls.

pub mod dd;
pub mod distance;
pub mod hull;
pub mod integer_hull;
pub mod interval;
pub mod ip;
pub mod linalg;
pub mod lp;
pub mod polytope;

pub use distance::{sq_distance, sq_distance_by_faces, Distance};
pub use hull::{canonicalize, enumerate_vertices, enumerate_vertices_by_bases, facets, project_polytope};
pub use integer_hull::{hull_generators, integer_hull};
pub use interval::Interval;
pub use lp::{solve_lp, Direction, LpResult, LpStatus, Tableau};
pub use polytope::{Constraint, HPolytope, Sense, VPolytope};
