use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::hull::{combinations, facets, lift_row};
use crate::geometry::polytope::{Constraint, HPolytope, VPolytope};
use crate::geometry::{enumerate_vertices, sq_distance};
use crate::rational::{self, Rational};

/// Valid inequalities of `conv(points)` projected onto `support`, lifted back
/// to dimension `dim` with zeros.
pub fn lifted_projection_rows(
    points: &[Vec<Rational>],
    support: &[usize],
    dim: usize,
    caps: &Caps,
) -> Result<Vec<Constraint>> {
    let mut projected: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| support.iter().map(|&j| p[j].clone()).collect())
        .collect();
    projected.sort();
    projected.dedup();
    let h = facets(&projected, support.len(), caps)?;
    Ok(h.rows.iter().map(|r| lift_row(r, support, dim)).collect())
}

/// `P^k`: the unit cube intersected with every valid inequality of `P`
/// supported on at most `k` coordinates (facets of every `k`-coordinate
/// projection, lifted).
pub fn sparse_closure(p: &VPolytope, k: usize, caps: &Caps) -> Result<HPolytope> {
    let n = p.dim;
    if p.is_empty() {
        return Err(Error::Empty);
    }
    if !p.within_unit_cube() {
        return Err(Error::Invalid("polytope is not inside the unit cube".into()));
    }
    caps.check_dim(n)?;
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("sparsity k={k} outside 1..={n}")));
    }
    let subsets = combinations(n, k);
    let blocks: Vec<Vec<Constraint>> = subsets
        .par_iter()
        .map(|s| lifted_projection_rows(&p.vertices, s, n, caps))
        .collect::<Result<_>>()?;
    let mut h = HPolytope::cube(n, Rational::from_integer(0.into()), Rational::from_integer(1.into()));
    h.rows.extend(blocks.into_iter().flatten());
    h.dedup_rows();
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistPk {
    #[serde(with = "rational::serde_str")]
    pub sq_dist: Rational,
    /// Vertex of `P^k` farthest from `P`.
    #[serde(with = "rational::serde_str::vec")]
    pub witness: Vec<Rational>,
    pub closure_vertices: usize,
}

/// Squared `dist(P, P^k)`: the largest squared distance to `P` over the
/// vertices of `P^k`. Ties go to the lexicographically largest vertex.
pub fn dist_pk(p: &VPolytope, k: usize, caps: &Caps) -> Result<DistPk> {
    let closure = sparse_closure(p, k, caps)?;
    let verts = enumerate_vertices(&closure, caps)?;
    let dists: Vec<Rational> = verts
        .vertices
        .par_iter()
        .map(|v| sq_distance(v, p).map(|d| d.sq_dist))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, d) in dists.iter().enumerate() {
        if *d >= dists[best] {
            best = i;
        }
    }
    Ok(DistPk {
        sq_dist: dists[best].clone(),
        witness: verts.vertices[best].clone(),
        closure_vertices: verts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn point_is_pinned() {
        let p = VPolytope::new(2, vec![vec![rat(1, 2), rat(1, 2)]]).unwrap();
        let h = sparse_closure(&p, 1, &caps()).unwrap();
        let v = enumerate_vertices(&h, &caps()).unwrap();
        assert_eq!(v.vertices, p.vertices);
    }

    #[test]
    fn antidiagonal_one_sparse_is_box() {
        let p = VPolytope::new(2, vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let h = sparse_closure(&p, 1, &caps()).unwrap();
        let v = enumerate_vertices(&h, &caps()).unwrap();
        assert_eq!(v.len(), 4);
        let d = dist_pk(&p, 1, &caps()).unwrap();
        assert_eq!(d.sq_dist, rat(1, 2));
        assert_eq!(d.witness, vec![int(1), int(1)]);
        assert_eq!(dist_pk(&p, 2, &caps()).unwrap().sq_dist, int(0));
    }

    #[test]
    fn full_box_has_zero_distance() {
        let p = VPolytope::new(
            2,
            vec![
                vec![int(0), int(0)],
                vec![int(0), int(1)],
                vec![int(1), int(0)],
                vec![int(1), int(1)],
            ],
        )
        .unwrap();
        assert_eq!(dist_pk(&p, 1, &caps()).unwrap().sq_dist, int(0));
    }

    #[test]
    fn rejects_outside_cube() {
        let p = VPolytope::new(1, vec![vec![int(2)]]).unwrap();
        assert!(sparse_closure(&p, 1, &caps()).is_err());
    }
}
