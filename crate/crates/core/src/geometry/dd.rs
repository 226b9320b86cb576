//! Double description method for pointed polyhedral cones `{ z : H z >= 0 }`.
//!
//! Rows and rays are kept as primitive integer vectors. Adjacency uses the
//! combinatorial test: two rays are adjacent iff no third ray is tight on
//! every row both of them are tight on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset_of(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: BitSet,
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn normalize(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// The cone has a nontrivial lineality space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotPointed;

/// Extreme rays of `{ z in R^dim : row · z >= 0 for every row }`, each as a
/// primitive integer vector. Fails when the cone is not pointed.
pub fn extreme_rays(rows: &[Vec<Rational>], dim: usize) -> Result<Vec<Vec<BigInt>>, NotPointed> {
    if dim == 0 {
        return Ok(Vec::new());
    }
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| rational::primitive_integer(r)).collect();
    let as_rat: Vec<Vec<Rational>> = int_rows.iter().map(|r| rational::from_ints(r)).collect();
    let initial = linalg::independent_rows(&as_rat, dim);
    if initial.len() < dim {
        return Err(NotPointed);
    }

    // Initial simplicial cone: columns of the inverse of the chosen rows.
    let basis_rows: Vec<Vec<Rational>> = initial.iter().map(|&i| as_rat[i].clone()).collect();
    let nrows = rows.len();
    let mut rays: Vec<Ray> = Vec::with_capacity(dim);
    for k in 0..dim {
        let rhs = rational::unit(dim, k);
        let col = linalg::solve(&basis_rows, &rhs).expect("independent rows");
        let coords = normalize(rational::primitive_integer(&col));
        let mut zeros = BitSet::new(nrows);
        for (kk, &i) in initial.iter().enumerate() {
            if kk != k {
                zeros.insert(i);
            }
        }
        rays.push(Ray { coords, zeros });
    }

    let mut done = vec![false; nrows];
    for &i in &initial {
        done[i] = true;
    }

    for (i, h) in int_rows.iter().enumerate() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(h, &r.coords)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_negative()).collect();
        for (r, v) in vals.iter().enumerate() {
            if v.is_zero() {
                rays[r].zeros.insert(i);
            }
        }
        if neg.is_empty() {
            continue;
        }

        let mut new_rays = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| {
                    r == p || r == q || !common.is_subset_of(&rays[r].zeros)
                });
                if !adjacent {
                    continue;
                }
                let a = &vals[p];
                let b = -&vals[q];
                let coords: Vec<BigInt> = rays[p]
                    .coords
                    .iter()
                    .zip(&rays[q].coords)
                    .map(|(x, y)| &b * x + a * y)
                    .collect();
                let mut zeros = common;
                zeros.insert(i);
                new_rays.push(Ray {
                    coords: normalize(coords),
                    zeros,
                });
            }
        }
        let keep: Vec<bool> = vals.iter().map(|v| !v.is_negative()).collect();
        let mut idx = 0;
        rays.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        rays.extend(new_rays);
    }

    Ok(rays.into_iter().map(|r| r.coords).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sorted(mut v: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        v.sort();
        v
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn orthant_rays_are_units() {
        let rows = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let rays = sorted(extreme_rays(&rows, 2).unwrap());
        assert_eq!(rays, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn square_pyramid_cone() {
        // Homogenized unit square: 0 <= x <= t, 0 <= y <= t.
        let rows = vec![
            vec![int(1), int(0), int(0)],
            vec![int(-1), int(0), int(1)],
            vec![int(0), int(1), int(0)],
            vec![int(0), int(-1), int(1)],
        ];
        let rays = sorted(extreme_rays(&rows, 3).unwrap());
        assert_eq!(
            rays,
            vec![
                ints(&[0, 0, 1]),
                ints(&[0, 1, 1]),
                ints(&[1, 0, 1]),
                ints(&[1, 1, 1])
            ]
        );
    }

    #[test]
    fn half_space_is_not_pointed() {
        let rows = vec![vec![int(1), int(0)]];
        assert_eq!(extreme_rays(&rows, 2), Err(NotPointed));
    }
}
