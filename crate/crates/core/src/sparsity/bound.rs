use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Interval;
use crate::rational::{self, Rational};

/// Enclosures of the two terms of the sparse-closure distance bound
/// `min{ 8 sqrt(n/k) sqrt(2 ln(4tn)), 2 sqrt(n) (n/k - 1) }` and of their
/// minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceBound {
    pub term1: Interval,
    pub term2: Interval,
    pub bound: Interval,
}

impl DistanceBound {
    /// Certified upper value: every real in the enclosure is at most this.
    pub fn upper(&self) -> f64 {
        self.bound.hi
    }

    /// Certified `sqrt(sq_dist) <= bound`: checks `sq_dist <= lo^2` exactly.
    pub fn certifies(&self, sq_dist: &Rational) -> bool {
        let lo = self.bound.lo.max(0.0);
        let lo = rational::from_f64(lo);
        *sq_dist <= &lo * &lo
    }
}

fn u(n: usize) -> Interval {
    Interval::from_u64(n as u64)
}

/// Bound on `dist(P, P^k)` for a polytope in `[0,1]^n` with `t` vertices,
/// natural logarithm.
pub fn sparse_distance_bound(n: usize, k: usize, t: usize) -> Result<DistanceBound> {
    if n < 2 {
        return Err(Error::Invalid("the bound needs n >= 2".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("sparsity k={k} outside 1..={n}")));
    }
    if t == 0 {
        return Err(Error::Invalid("the bound needs t >= 1".into()));
    }
    let (ni, ki, ti) = (u(n), u(k), u(t));
    let log = u(4).mul(ti).mul(ni).ln();
    let term1 = u(8)
        .mul(ni.sqrt())
        .div(ki.sqrt())
        .mul(u(2).mul(log).sqrt());
    let term2 = if k == n {
        Interval::point(0.0)
    } else {
        u(2).mul(ni.sqrt()).mul(ni.div(ki).sub(Interval::point(1.0)))
    };
    Ok(DistanceBound {
        term1,
        term2,
        bound: term1.min(term2),
    })
}
