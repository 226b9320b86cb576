//! Exact squared Euclidean distance from a point to a V-polytope.
//!
//! The main route is Wolfe's minimum-norm-point algorithm run in exact
//! arithmetic; every answer carries a certificate that can be re-checked
//! independently. [`sq_distance_by_faces`] minimizes over every face spanned
//! by affinely independent vertex subsets and serves as a cross-check.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::hull::combinations;
use super::linalg;
use super::polytope::VPolytope;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `sq_dist = ‖x − y‖²` with `y = Σ weights[i] · vertices[i]` the closest
/// point of the polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distance {
    #[serde(with = "rational::serde_str")]
    pub sq_dist: Rational,
    #[serde(with = "rational::serde_str::vec")]
    pub witness: Vec<Rational>,
    /// `(vertex index, convex weight)` pairs with positive weight.
    #[serde(skip)]
    pub weights: Vec<(usize, Rational)>,
}

impl Distance {
    /// Re-check optimality exactly: `y` is a convex combination of the
    /// vertices, `‖x − y‖² = sq_dist`, and `(x − y)·(p − y) <= 0` for every
    /// vertex `p`, so the hyperplane through `y` normal to `x − y` separates
    /// `x` from the polytope.
    pub fn certify(&self, x: &[Rational], poly: &VPolytope) -> bool {
        let mut total = Rational::zero();
        let mut y = rational::zeros(poly.dim);
        for (i, w) in &self.weights {
            if w.is_negative() || *i >= poly.len() {
                return false;
            }
            total += w;
            for (yj, pj) in y.iter_mut().zip(&poly.vertices[*i]) {
                *yj += w * pj;
            }
        }
        if !total.is_one() || y != self.witness {
            return false;
        }
        let d = rational::sub(x, &y);
        if rational::sq_norm(&d) != self.sq_dist {
            return false;
        }
        poly.vertices
            .iter()
            .all(|p| !rational::dot(&d, &rational::sub(p, &y)).is_positive())
    }
}

/// Minimizer of `‖Σ v_i q_i‖²` subject to `Σ v_i = 1` (no sign constraint);
/// `None` when the points are affinely dependent.
fn affine_minimizer(qs: &[&Vec<Rational>]) -> Option<Vec<Rational>> {
    let s = qs.len();
    let mut a = vec![rational::zeros(s + 1); s + 1];
    for i in 0..s {
        for j in i..s {
            let g = rational::dot(qs[i], qs[j]);
            a[i][j] = g.clone();
            a[j][i] = g;
        }
        a[i][s] = Rational::one();
        a[s][i] = Rational::one();
    }
    let mut b = rational::zeros(s + 1);
    b[s] = Rational::one();
    let sol = linalg::solve(&a, &b)?;
    Some(sol[..s].to_vec())
}

fn combine(qs: &[&Vec<Rational>], w: &[Rational], dim: usize) -> Vec<Rational> {
    let mut y = rational::zeros(dim);
    for (q, wi) in qs.iter().zip(w) {
        if wi.is_zero() {
            continue;
        }
        for (yj, qj) in y.iter_mut().zip(q.iter()) {
            *yj += wi * qj;
        }
    }
    y
}

/// Exact `min_{y in P} ‖x − y‖²` with a certificate.
pub fn sq_distance(x: &[Rational], poly: &VPolytope) -> Result<Distance> {
    if poly.is_empty() {
        return Err(Error::Empty);
    }
    if x.len() != poly.dim {
        return Err(Error::DimensionMismatch {
            expected: poly.dim,
            got: x.len(),
        });
    }
    let n = poly.dim;
    let qs: Vec<Vec<Rational>> = poly.vertices.iter().map(|p| rational::sub(p, x)).collect();

    let start = (0..qs.len())
        .min_by(|&a, &b| rational::sq_norm(&qs[a]).cmp(&rational::sq_norm(&qs[b])))
        .expect("nonempty");
    let mut active = vec![start];
    let mut weights = vec![Rational::one()];
    let mut y = qs[start].clone();

    loop {
        let yy = rational::sq_norm(&y);
        let (j, best) = qs
            .iter()
            .enumerate()
            .map(|(j, q)| (j, rational::dot(&y, q)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("nonempty");
        if best >= yy || active.contains(&j) {
            break;
        }
        active.push(j);
        weights.push(Rational::zero());

        loop {
            let refs: Vec<&Vec<Rational>> = active.iter().map(|&i| &qs[i]).collect();
            let v = affine_minimizer(&refs).ok_or_else(|| {
                Error::Invalid("affinely dependent active set in min-norm search".into())
            })?;
            if v.iter().all(|vi| vi.is_positive()) {
                weights = v;
                y = combine(&refs, &weights, n);
                break;
            }
            // Step from the current weights toward v until a weight hits zero.
            let mut theta: Option<Rational> = None;
            for (wi, vi) in weights.iter().zip(&v) {
                if !vi.is_positive() {
                    let t = wi / (wi - vi);
                    if theta.as_ref().map_or(true, |b| t < *b) {
                        theta = Some(t);
                    }
                }
            }
            let theta = theta.expect("some weight is nonpositive");
            let one_minus = Rational::one() - &theta;
            for (wi, vi) in weights.iter_mut().zip(&v) {
                *wi = &theta * vi + &one_minus * &*wi;
            }
            let mut k = 0;
            while k < active.len() {
                if weights[k].is_positive() {
                    k += 1;
                } else {
                    active.remove(k);
                    weights.remove(k);
                }
            }
        }
    }

    let witness = rational::add(x, &y);
    Ok(Distance {
        sq_dist: rational::sq_norm(&y),
        witness,
        weights: active.into_iter().zip(weights).collect(),
    })
}

/// Squared distance by exhaustive minimization over all faces spanned by
/// affinely independent vertex subsets. Limited to `caps.max_distance_vertices`
/// vertices.
pub fn sq_distance_by_faces(x: &[Rational], poly: &VPolytope, caps: &Caps) -> Result<Rational> {
    if poly.is_empty() {
        return Err(Error::Empty);
    }
    let t = poly.len();
    if t > caps.max_distance_vertices {
        return Err(Error::CapExceeded {
            what: "distance vertices",
            value: t as u128,
            cap: caps.max_distance_vertices as u128,
        });
    }
    let qs: Vec<Vec<Rational>> = poly.vertices.iter().map(|p| rational::sub(p, x)).collect();
    let mut best: Option<Rational> = None;
    for size in 1..=t.min(poly.dim + 1) {
        for subset in combinations(t, size) {
            let refs: Vec<&Vec<Rational>> = subset.iter().map(|&i| &qs[i]).collect();
            let Some(v) = affine_minimizer(&refs) else {
                continue;
            };
            if v.iter().any(|vi| vi.is_negative()) {
                continue;
            }
            let d = rational::sq_norm(&combine(&refs, &v, poly.dim));
            if best.as_ref().map_or(true, |b| d < *b) {
                best = Some(d);
            }
        }
    }
    Ok(best.expect("singletons are always feasible"))
}
