//! Dense exact Gaussian elimination.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref(mut m: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(m: &[Vec<Rational>], ncols: usize) -> usize {
    rref(m.to_vec(), ncols).1.len()
}

/// Basis of `{ z : M z = 0 }`.
pub fn nullspace(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m.to_vec(), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut z = vec![Rational::zero(); ncols];
            z[f] = Rational::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                z[pc] = -row[f].clone();
            }
            z
        })
        .collect()
}

/// Solve the square system `A x = b`; `None` when `A` is singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(aug, n + 1);
    if pivots.len() != n || pivots.iter().any(|&p| p == n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Indices of a maximal linearly independent prefix-greedy subset of rows.
pub fn independent_rows(m: &[Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut trial = basis.clone();
        trial.push(row.clone());
        if rank(&trial, ncols) == trial.len() {
            basis = rref(trial, ncols).0;
            chosen.push(i);
            if chosen.len() == ncols {
                break;
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn solve_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let x = solve(&a, &[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(&singular, &[int(1), int(2)]).is_none());
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = vec![vec![int(1), int(1), int(1)], vec![int(0), int(1), rat(1, 2)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            assert!(crate::rational::dot(row, &ns[0]).is_zero());
        }
    }

    #[test]
    fn independent_rows_skips_dependent() {
        let m = vec![
            vec![int(1), int(0)],
            vec![int(2), int(0)],
            vec![int(1), int(1)],
        ];
        assert_eq!(independent_rows(&m, 2), vec![0, 2]);
    }
}
