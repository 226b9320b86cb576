use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Sense {
    pub fn token(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    pub fn from_token(s: &str) -> Option<Sense> {
        match s {
            "<=" => Some(Sense::Le),
            ">=" => Some(Sense::Ge),
            "=" | "==" => Some(Sense::Eq),
            _ => None,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// One linear row `coeffs · x  sense  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Constraint { coeffs, sense, rhs }
    }

    pub fn le(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Sense::Le, rhs)
    }

    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self::new(coeffs, Sense::Ge, rhs)
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        rational::dot(&self.coeffs, x)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.sense.holds(&self.lhs(x), &self.rhs)
    }

    /// The row as one or two `<=` rows.
    pub fn as_le_rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        let neg = || {
            (
                self.coeffs.iter().map(|a| -a).collect::<Vec<_>>(),
                -self.rhs.clone(),
            )
        };
        match self.sense {
            Sense::Le => vec![(self.coeffs.clone(), self.rhs.clone())],
            Sense::Ge => vec![neg()],
            Sense::Eq => vec![(self.coeffs.clone(), self.rhs.clone()), neg()],
        }
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Inequality description `{ x : rows }` in dimension `dim`. May be empty or
/// unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub rows: Vec<Constraint>,
}

impl HPolytope {
    pub fn new(dim: usize, rows: Vec<Constraint>) -> Result<Self> {
        for r in &rows {
            if r.coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.coeffs.len(),
                });
            }
        }
        Ok(HPolytope { dim, rows })
    }

    /// `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: Rational, hi: Rational) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for j in 0..dim {
            rows.push(Constraint::ge(rational::unit(dim, j), lo.clone()));
            rows.push(Constraint::le(rational::unit(dim, j), hi.clone()));
        }
        HPolytope { dim, rows }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    pub fn push(&mut self, row: Constraint) -> Result<()> {
        if row.coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: row.coeffs.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn intersect(&self, other: &HPolytope) -> Result<HPolytope> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(HPolytope {
            dim: self.dim,
            rows,
        })
    }

    /// Drop rows that are positive multiples of an earlier row.
    pub fn dedup_rows(&mut self) {
        let mut seen = std::collections::HashSet::new();
        self.rows.retain(|r| {
            let mut key_vec = r.coeffs.clone();
            key_vec.push(r.rhs.clone());
            let (key_vec, sense) = match r.sense {
                Sense::Ge => (key_vec.iter().map(|q| -q).collect(), Sense::Le),
                s => (key_vec, s),
            };
            seen.insert((rational::primitive_integer(&key_vec), sense))
        });
    }
}

/// Vertex description `conv{p^1, …, p^t}`. An empty list is the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPolytope {
    pub dim: usize,
    #[serde(with = "rational::serde_str::nested")]
    pub vertices: Vec<Vec<Rational>>,
}

impl VPolytope {
    pub fn new(dim: usize, vertices: Vec<Vec<Rational>>) -> Result<Self> {
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
        }
        Ok(VPolytope { dim, vertices })
    }

    pub fn empty(dim: usize) -> Self {
        VPolytope {
            dim,
            vertices: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Largest `c·x` over the vertices, with the first maximizer.
    pub fn maximize(&self, c: &[Rational]) -> Option<(Rational, &[Rational])> {
        let mut best: Option<(Rational, &[Rational])> = None;
        for v in &self.vertices {
            let val = rational::dot(c, v);
            if best.as_ref().map_or(true, |(b, _)| val > *b) {
                best = Some((val, v));
            }
        }
        best
    }

    pub fn within_unit_cube(&self) -> bool {
        let one = Rational::from_integer(1.into());
        self.vertices
            .iter()
            .flatten()
            .all(|q| !q.is_negative() && *q <= one)
    }
}
