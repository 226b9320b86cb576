//! Conversions between inequality and vertex descriptions.
//!
//! [`enumerate_vertices`] and [`facets`] both run the double description
//! method on a homogenized cone; [`enumerate_vertices_by_bases`] is the
//! independent brute-force route (every `n`-subset of rows) kept for
//! cross-checking on small inputs.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};

use super::dd;
use super::linalg;
use super::lp;
use super::polytope::{Constraint, HPolytope, Sense, VPolytope};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// All vertices of a bounded polyhedron. Empty input yields an empty
/// [`VPolytope`]; unbounded input is an error.
pub fn enumerate_vertices(poly: &HPolytope, caps: &Caps) -> Result<VPolytope> {
    let n = poly.dim;
    caps.check_dim(n)?;
    // Homogenize: z = (x, t) with  b t - a x >= 0  for every `<=` row.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for r in &poly.rows {
        for (a, b) in r.as_le_rows() {
            let mut h: Vec<Rational> = a.iter().map(|x| -x).collect();
            h.push(b);
            rows.push(h);
        }
    }
    let mut t_row = rational::zeros(n + 1);
    t_row[n] = Rational::one();
    rows.push(t_row);

    let rays = match dd::extreme_rays(&rows, n + 1) {
        Ok(r) => r,
        Err(dd::NotPointed) => {
            return if lp::is_feasible(poly, false)? {
                Err(Error::Unbounded)
            } else {
                Ok(VPolytope::empty(n))
            };
        }
    };
    let mut vertices = Vec::new();
    let mut has_direction = false;
    for ray in rays {
        let t = Rational::from_integer(ray[n].clone());
        if t.is_zero() {
            has_direction = true;
        } else {
            vertices.push(
                ray[..n]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()) / &t)
                    .collect::<Vec<_>>(),
            );
        }
    }
    if vertices.is_empty() {
        return Ok(VPolytope::empty(n));
    }
    if has_direction {
        return Err(Error::Unbounded);
    }
    vertices.sort();
    vertices.dedup();
    Ok(VPolytope { dim: n, vertices })
}

/// Brute-force vertex enumeration: solve every `n`-subset of rows at
/// equality and keep the feasible, rank-`n` solutions.
pub fn enumerate_vertices_by_bases(poly: &HPolytope, caps: &Caps) -> Result<VPolytope> {
    let n = poly.dim;
    caps.check_dim(n)?;
    let mut found = BTreeSet::new();
    let m = poly.rows.len();
    if n == 0 {
        return Ok(VPolytope {
            dim: 0,
            vertices: if poly.contains(&[]) { vec![vec![]] } else { vec![] },
        });
    }
    let mut subset: Vec<usize> = (0..n).collect();
    if m >= n {
        loop {
            let a: Vec<Vec<Rational>> = subset.iter().map(|&i| poly.rows[i].coeffs.clone()).collect();
            let b: Vec<Rational> = subset.iter().map(|&i| poly.rows[i].rhs.clone()).collect();
            if let Some(x) = linalg::solve(&a, &b) {
                if poly.contains(&x) {
                    found.insert(x);
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    let vertices: Vec<Vec<Rational>> = found.into_iter().collect();
    if !vertices.is_empty() {
        // A bounded polyhedron has no recession direction.
        for j in 0..n {
            for s in [Rational::one(), -Rational::one()] {
                let mut c = rational::zeros(n);
                c[j] = s;
                let r = lp::solve_lp(poly, false, &c, lp::Direction::Maximize)?;
                if r.status == lp::LpStatus::Unbounded {
                    return Err(Error::Unbounded);
                }
            }
        }
    } else if lp::is_feasible(poly, false)? {
        return Err(Error::Unbounded);
    }
    Ok(VPolytope { dim: n, vertices })
}

/// Advance `c` to the next `k`-combination of `0..m` in lexicographic order.
pub fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k > m {
        return Vec::new();
    }
    let mut c: Vec<usize> = (0..k).collect();
    let mut out = vec![c.clone()];
    if k == 0 {
        return out;
    }
    while next_combination(&mut c, m) {
        out.push(c.clone());
    }
    out
}

/// Affine structure of a point set: its dimension, coordinates spanning the
/// affine hull, and the equations cutting it out.
struct AffineFrame {
    dim: usize,
    coords: Vec<usize>,
    equations: Vec<(Vec<Rational>, Rational)>,
}

fn affine_frame(points: &[Vec<Rational>], n: usize) -> AffineFrame {
    let p0 = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| rational::sub(p, p0)).collect();
    let (_, pivots) = linalg::rref(diffs, n);
    let lifted: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(-Rational::one());
            r
        })
        .collect();
    let equations = linalg::nullspace(&lifted, n + 1)
        .into_iter()
        .map(|z| {
            let ints = rational::from_ints(&rational::primitive_integer(&z));
            (ints[..n].to_vec(), ints[n].clone())
        })
        .collect();
    AffineFrame {
        dim: pivots.len(),
        coords: pivots,
        equations,
    }
}

/// Facet normals `(a, beta)` of the affinely full-dimensional point set
/// `ys` in `R^d`, via extreme rays of `{ (a, beta) : a·y <= beta }`.
fn full_dim_facets(ys: &[Vec<Rational>], d: usize) -> Vec<(Vec<Rational>, Rational)> {
    let rows: Vec<Vec<Rational>> = ys
        .iter()
        .map(|y| {
            let mut r: Vec<Rational> = y.iter().map(|v| -v).collect();
            r.push(Rational::one());
            r
        })
        .collect();
    let rays = dd::extreme_rays(&rows, d + 1).expect("affinely spanning points give a pointed cone");
    rays.into_iter()
        .filter(|r| r[..d].iter().any(|x| !x.is_zero()))
        .map(|r| {
            let r = rational::from_ints(&r);
            (r[..d].to_vec(), r[d].clone())
        })
        .collect()
}

/// Irredundant-ish inequality description of `conv(points)`: the affine hull
/// equations plus one inequality per facet. An empty point set yields the
/// infeasible system `0 <= -1`.
pub fn facets(points: &[Vec<Rational>], dim: usize, caps: &Caps) -> Result<HPolytope> {
    let mut pts: Vec<Vec<Rational>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return Ok(HPolytope {
            dim,
            rows: vec![Constraint::le(rational::zeros(dim), -Rational::one())],
        });
    }
    let frame = affine_frame(&pts, dim);
    caps.check_dim(frame.dim)?;
    let mut rows: Vec<Constraint> = frame
        .equations
        .iter()
        .map(|(a, b)| Constraint::new(a.clone(), Sense::Eq, b.clone()))
        .collect();
    if frame.dim > 0 {
        let ys: Vec<Vec<Rational>> = pts
            .iter()
            .map(|p| frame.coords.iter().map(|&j| p[j].clone()).collect())
            .collect();
        for (a, b) in full_dim_facets(&ys, frame.dim) {
            let mut coeffs = rational::zeros(dim);
            for (k, &j) in frame.coords.iter().enumerate() {
                coeffs[j] = a[k].clone();
            }
            rows.push(Constraint::le(coeffs, b));
        }
    }
    Ok(HPolytope { dim, rows })
}

/// Points that are the midpoint of two others along a coordinate axis are
/// never vertices; dropping them first keeps facet enumeration small.
fn drop_axis_midpoints(points: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if points.len() < 16 {
        return points;
    }
    let set: HashSet<&Vec<Rational>> = points.iter().collect();
    let n = points.first().map_or(0, |p| p.len());
    let keep: Vec<bool> = points
        .iter()
        .map(|p| {
            !(0..n).any(|j| {
                let mut up = p.clone();
                up[j] += Rational::one();
                let mut down = p.clone();
                down[j] -= Rational::one();
                set.contains(&up) && set.contains(&down)
            })
        })
        .collect();
    points
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect()
}

/// Remove every point lying in the convex hull of the others. Output is
/// sorted lexicographically.
pub fn canonicalize(points: &[Vec<Rational>], dim: usize, caps: &Caps) -> Result<VPolytope> {
    let mut pts: Vec<Vec<Rational>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 1 {
        return Ok(VPolytope { dim, vertices: pts });
    }
    let pts = drop_axis_midpoints(pts);
    let frame = affine_frame(&pts, dim);
    caps.check_dim(frame.dim)?;
    if frame.dim == 0 {
        return Ok(VPolytope {
            dim,
            vertices: vec![pts[0].clone()],
        });
    }
    let d = frame.dim;
    let ys: Vec<Vec<Rational>> = pts
        .iter()
        .map(|p| frame.coords.iter().map(|&j| p[j].clone()).collect())
        .collect();
    let normals = full_dim_facets(&ys, d);
    let vertices = pts
        .iter()
        .zip(&ys)
        .filter(|(_, y)| {
            let tight: Vec<Vec<Rational>> = normals
                .iter()
                .filter(|(a, b)| rational::dot(a, y) == *b)
                .map(|(a, _)| a.clone())
                .collect();
            tight.len() >= d && linalg::rank(&tight, d) == d
        })
        .map(|(p, _)| p.clone())
        .collect();
    Ok(VPolytope { dim, vertices })
}

/// `proj_S(P)` for a nonempty index set `S`, coordinates in the order given.
pub fn project_polytope(poly: &VPolytope, support: &[usize], caps: &Caps) -> Result<VPolytope> {
    if support.is_empty() {
        return Err(Error::Invalid("projection onto an empty index set".into()));
    }
    if let Some(&j) = support.iter().find(|&&j| j >= poly.dim) {
        return Err(Error::Invalid(format!("projection index {j} out of range")));
    }
    let projected: Vec<Vec<Rational>> = poly
        .vertices
        .iter()
        .map(|v| support.iter().map(|&j| v[j].clone()).collect())
        .collect();
    canonicalize(&projected, support.len(), caps)
}

/// Exact membership `x in conv(points)` via a feasibility LP.
pub fn in_hull(points: &[Vec<Rational>], x: &[Rational]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let t = points.len();
    let n = x.len();
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..n {
        let coeffs: Vec<Rational> = points.iter().map(|p| p[j].clone()).collect();
        rows.push(Constraint::new(coeffs, Sense::Eq, x[j].clone()));
    }
    rows.push(Constraint::new(
        vec![Rational::one(); t],
        Sense::Eq,
        Rational::one(),
    ));
    lp::is_feasible(&HPolytope { dim: t, rows }, true)
}

/// True when every vertex of `inner` satisfies every row of `outer`.
pub fn vertices_inside(inner: &VPolytope, outer: &HPolytope) -> bool {
    inner.vertices.iter().all(|v| outer.contains(v))
}

/// Lift an inequality on coordinates `support` to dimension `dim` by
/// zero-padding.
pub fn lift_row(row: &Constraint, support: &[usize], dim: usize) -> Constraint {
    let mut coeffs = rational::zeros(dim);
    for (k, &j) in support.iter().enumerate() {
        coeffs[j] = row.coeffs[k].clone();
    }
    Constraint::new(coeffs, row.sense, row.rhs.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn caps() -> Caps {
        Caps::default()
    }

    fn pt(v: &[Rational]) -> Vec<Rational> {
        v.to_vec()
    }

    #[test]
    fn unit_square_vertices() {
        let sq = HPolytope::cube(2, int(0), int(1));
        let v = enumerate_vertices(&sq, &caps()).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                pt(&[int(0), int(0)]),
                pt(&[int(0), int(1)]),
                pt(&[int(1), int(0)]),
                pt(&[int(1), int(1)])
            ]
        );
        assert_eq!(enumerate_vertices_by_bases(&sq, &caps()).unwrap(), v);
    }

    #[test]
    fn triangle_vertices() {
        let p = HPolytope::new(
            2,
            vec![
                Constraint::le(vec![int(2), int(2)], int(3)),
                Constraint::ge(vec![int(1), int(0)], int(0)),
                Constraint::ge(vec![int(0), int(1)], int(0)),
            ],
        )
        .unwrap();
        let v = enumerate_vertices(&p, &caps()).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                pt(&[int(0), int(0)]),
                pt(&[int(0), rat(3, 2)]),
                pt(&[rat(3, 2), int(0)])
            ]
        );
    }

    #[test]
    fn infeasible_gives_empty() {
        let p = HPolytope::new(
            1,
            vec![
                Constraint::ge(vec![int(1)], int(2)),
                Constraint::le(vec![int(1)], int(1)),
            ],
        )
        .unwrap();
        assert!(enumerate_vertices(&p, &caps()).unwrap().is_empty());
        assert!(enumerate_vertices_by_bases(&p, &caps()).unwrap().is_empty());
    }

    #[test]
    fn unbounded_is_error() {
        let p = HPolytope::new(2, vec![Constraint::ge(vec![int(1), int(0)], int(0))]).unwrap();
        assert_eq!(enumerate_vertices(&p, &caps()), Err(Error::Unbounded));
        let q = HPolytope::new(
            2,
            vec![
                Constraint::ge(vec![int(1), int(0)], int(0)),
                Constraint::ge(vec![int(0), int(1)], int(0)),
            ],
        )
        .unwrap();
        assert_eq!(enumerate_vertices(&q, &caps()), Err(Error::Unbounded));
    }

    #[test]
    fn dimension_cap_enforced() {
        let big = HPolytope::cube(11, int(0), int(1));
        assert!(matches!(
            enumerate_vertices(&big, &caps()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn canonicalize_drops_interior_points() {
        let pts = vec![
            pt(&[int(0), int(0)]),
            pt(&[int(2), int(0)]),
            pt(&[int(0), int(2)]),
            pt(&[int(1), int(0)]),
            pt(&[rat(1, 2), rat(1, 2)]),
        ];
        let v = canonicalize(&pts, 2, &caps()).unwrap();
        assert_eq!(
            v.vertices,
            vec![pt(&[int(0), int(0)]), pt(&[int(0), int(2)]), pt(&[int(2), int(0)])]
        );
    }

    #[test]
    fn canonicalize_lower_dimensional() {
        // Collinear points in R^3.
        let pts = vec![
            pt(&[int(0), int(0), int(1)]),
            pt(&[int(1), int(1), int(1)]),
            pt(&[int(3), int(3), int(1)]),
        ];
        let v = canonicalize(&pts, 3, &caps()).unwrap();
        assert_eq!(v.vertices, vec![pts[0].clone(), pts[2].clone()]);
    }

    #[test]
    fn facets_of_segment_in_plane() {
        let pts = vec![pt(&[int(0), int(1)]), pt(&[int(1), int(0)])];
        let h = facets(&pts, 2, &caps()).unwrap();
        assert!(h.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(!h.contains(&[int(1), int(1)]));
        assert!(!h.contains(&[int(2), int(-1)]));
        let v = enumerate_vertices(&h, &caps()).unwrap();
        assert_eq!(v.vertices, vec![pts[0].clone(), pts[1].clone()]);
    }

    #[test]
    fn projection_examples() {
        let seg = VPolytope::new(2, vec![pt(&[int(0), int(1)]), pt(&[int(1), int(0)])]).unwrap();
        let p = project_polytope(&seg, &[0], &caps()).unwrap();
        assert_eq!(p.vertices, vec![vec![int(0)], vec![int(1)]]);
        let full = project_polytope(&seg, &[0, 1], &caps()).unwrap();
        assert_eq!(full.vertices, seg.vertices);
        let single = VPolytope::new(2, vec![pt(&[rat(1, 2), rat(1, 2)])]).unwrap();
        let p = project_polytope(&single, &[1], &caps()).unwrap();
        assert_eq!(p.vertices, vec![vec![rat(1, 2)]]);
        assert!(project_polytope(&seg, &[], &caps()).is_err());
    }

    #[test]
    fn hull_membership() {
        let pts = vec![pt(&[int(0), int(0)]), pt(&[int(2), int(0)]), pt(&[int(0), int(2)])];
        assert!(in_hull(&pts, &[int(1), int(1)]).unwrap());
        assert!(!in_hull(&pts, &[int(1), rat(3, 2)]).unwrap());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    }
}
