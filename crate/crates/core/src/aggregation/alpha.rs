use std::fmt;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

use super::closure::ClosureApprox;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::lp::Direction;
use crate::instance::generate::rng;
use crate::rational::{self, Rational};

/// Ratio of two optimal values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ratio {
    Finite(Rational),
    /// Positive over zero.
    Unbounded,
    /// Not meaningful, e.g. negative optimal values.
    Undefined,
}

impl Ratio {
    /// `num / den` for nonnegative values with `0/0 = 1`.
    pub fn of(num: &Rational, den: &Rational) -> Ratio {
        if num.is_negative() || den.is_negative() {
            Ratio::Undefined
        } else if den.is_zero() {
            if num.is_zero() {
                Ratio::Finite(Rational::from_integer(1.into()))
            } else {
                Ratio::Unbounded
            }
        } else {
            Ratio::Finite(num / den)
        }
    }

    pub fn at_most(&self, bound: &Rational) -> bool {
        match self {
            Ratio::Finite(r) => r <= bound,
            Ratio::Unbounded => false,
            Ratio::Undefined => true,
        }
    }

    /// Ordering for taking a maximum: undefined < finite < unbounded.
    fn rank(&self) -> (u8, Option<&Rational>) {
        match self {
            Ratio::Undefined => (0, None),
            Ratio::Finite(r) => (1, Some(r)),
            Ratio::Unbounded => (2, None),
        }
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(r) => write!(f, "{}", rational::format(r)),
            Ratio::Unbounded => write!(f, "inf"),
            Ratio::Undefined => write!(f, "n/a"),
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Unit vectors, the all-ones vector, then `budget` random vectors with
/// entries in `0..=10`.
pub fn objective_sample(n: usize, budget: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = (0..n).map(|j| rational::unit(n, j)).collect();
    out.push(vec![Rational::from_integer(1.into()); n]);
    let mut r = rng(seed);
    for _ in 0..budget {
        out.push((0..n).map(|_| rational::int(r.gen_range(0..=10))).collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaReport {
    pub ratio: Ratio,
    /// Index of the objective attaining the ratio.
    pub worst: usize,
    pub objectives: usize,
}

/// Largest sampled ratio between optimal values over `u ⊇ v`: `max_U/max_V`
/// for packing-type sets, `min_V/min_U` for covering-type sets. Containment
/// is checked on the vertices of `v`.
pub fn alpha_ratio(
    u: &ClosureApprox,
    v: &ClosureApprox,
    direction: Direction,
    budget: usize,
    seed: u64,
    caps: &Caps,
) -> Result<AlphaReport> {
    let dim = u.base.dim;
    if v.base.dim != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.base.dim,
        });
    }
    if let Some(x) = v.vertices(caps)?.into_iter().find(|x| !u.contains(x)) {
        return Err(Error::Invalid(format!(
            "first set does not contain the second: vertex {:?} is outside",
            x.iter().map(rational::format).collect::<Vec<_>>()
        )));
    }
    let objectives = objective_sample(dim, budget, seed);
    let mut best = (Ratio::Undefined, 0);
    for (i, c) in objectives.iter().enumerate() {
        let (Some(zu), Some(zv)) = (u.optimum(c, direction)?, v.optimum(c, direction)?) else {
            continue;
        };
        let r = match direction {
            Direction::Maximize => Ratio::of(&zu, &zv),
            Direction::Minimize => Ratio::of(&zv, &zu),
        };
        if r.rank() > best.0.rank() {
            best = (r, i);
        }
    }
    Ok(AlphaReport {
        ratio: best.0,
        worst: best.1,
        objectives: objectives.len(),
    })
}
