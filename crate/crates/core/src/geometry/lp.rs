//! Dense two-phase primal simplex over the rationals.
//!
//! Pivoting follows Bland's rule: the entering column is the lowest-index
//! improving column, and ratio-test ties go to the lowest-index basic
//! variable. The rule cannot cycle, so every call terminates.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polytope::{HPolytope, Sense};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// What a tableau column stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnRole {
    /// Original variable `x_j` (its nonnegative part when variables are free).
    Structural(usize),
    /// Negative part `x_j^-` of a free variable.
    NegativePart(usize),
    /// Slack of row `i`: `s_i = b_i - a_i x` for `<=`, `a_i x - b_i` for `>=`.
    Slack(usize),
}

/// Optimal simplex tableau. Row `r` reads
/// `sum_c rows[r][c] * col_c = rhs[r]`, with column `basis[r]` basic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    pub columns: Vec<ColumnRole>,
    pub basis: Vec<usize>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl Tableau {
    /// Value of every column at the basic solution.
    pub fn column_values(&self) -> Vec<Rational> {
        let mut v = rational::zeros(self.columns.len());
        for (r, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs[r].clone();
        }
        v
    }

    pub fn is_basic(&self, col: usize) -> bool {
        self.basis.contains(&col)
    }

    /// Rewrite `sum_c coeffs[c] * col_c  sense  rhs` over the structural
    /// variables of `poly` by substituting slack definitions.
    pub fn to_structural(
        &self,
        poly: &HPolytope,
        coeffs: &[Rational],
        rhs: &Rational,
    ) -> (Vec<Rational>, Rational) {
        let mut a = rational::zeros(poly.dim);
        let mut b = rhs.clone();
        for (c, g) in coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            match self.columns[c] {
                ColumnRole::Structural(j) => a[j] += g,
                ColumnRole::NegativePart(j) => a[j] -= g,
                ColumnRole::Slack(i) => {
                    let row = &poly.rows[i];
                    let sigma = if row.sense == Sense::Ge {
                        -Rational::one()
                    } else {
                        Rational::one()
                    };
                    // g * s = g * sigma * (b_i - a_i x)
                    let f = g * &sigma;
                    for (aj, rij) in a.iter_mut().zip(&row.coeffs) {
                        if !rij.is_zero() {
                            *aj -= &f * rij;
                        }
                    }
                    b -= &f * &row.rhs;
                }
            }
        }
        (a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Rational,
    pub vertex: Vec<Rational>,
    pub tableau: Option<Tableau>,
}

impl LpResult {
    fn without_solution(status: LpStatus, dim: usize) -> Self {
        LpResult {
            status,
            value: Rational::zero(),
            vertex: rational::zeros(dim),
            tableau: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

struct Simplex {
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Simplex {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.t[r][c];
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.t[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.t.len() {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for (x, p) in self.t[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }

    /// Maximize `cost · x` over the allowed columns.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Outcome {
        let ncols = allowed.len();
        loop {
            let mut is_basic = vec![false; ncols];
            for &b in &self.basis {
                is_basic[b] = true;
            }
            let entering = (0..ncols).find(|&j| {
                if !allowed[j] || is_basic[j] {
                    return false;
                }
                let mut d = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[r][j].is_zero() {
                        d -= &cost[b] * &self.t[r][j];
                    }
                }
                d.is_positive()
            });
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                if !self.t[r][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Outcome::Unbounded,
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }
}

/// Solve `max/min objective · x` over `poly`, with `x >= 0` when `nonneg`.
pub fn solve_lp(
    poly: &HPolytope,
    nonneg: bool,
    objective: &[Rational],
    direction: Direction,
) -> Result<LpResult> {
    let n = poly.dim;
    if objective.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: objective.len(),
        });
    }

    let mut columns: Vec<ColumnRole> = (0..n).map(ColumnRole::Structural).collect();
    if !nonneg {
        columns.extend((0..n).map(ColumnRole::NegativePart));
    }
    let mut slack_col = vec![None; poly.rows.len()];
    for (i, row) in poly.rows.iter().enumerate() {
        if row.sense != Sense::Eq {
            slack_col[i] = Some(columns.len());
            columns.push(ColumnRole::Slack(i));
        }
    }
    let nreal = columns.len();

    let m = poly.rows.len();
    let mut t = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    for (i, row) in poly.rows.iter().enumerate() {
        let mut r = rational::zeros(nreal);
        for (j, a) in row.coeffs.iter().enumerate() {
            r[j] = a.clone();
            if !nonneg {
                r[n + j] = -a.clone();
            }
        }
        if let Some(s) = slack_col[i] {
            r[s] = if row.sense == Sense::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
        }
        let mut b = row.rhs.clone();
        if b.is_negative() {
            for x in r.iter_mut() {
                *x = -x.clone();
            }
            b = -b;
        }
        match slack_col[i] {
            Some(s) if r[s].is_one() => basis.push(s),
            _ => {
                basis.push(usize::MAX);
                artificial_rows.push(i);
            }
        }
        t.push(r);
        rhs.push(b);
    }

    let nart = artificial_rows.len();
    let ncols = nreal + nart;
    for r in t.iter_mut() {
        r.resize(ncols, Rational::zero());
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        t[i][nreal + k] = Rational::one();
        basis[i] = nreal + k;
    }
    let mut sx = Simplex { t, rhs, basis };

    if nart > 0 {
        let mut cost = rational::zeros(ncols);
        for c in cost.iter_mut().skip(nreal) {
            *c = -Rational::one();
        }
        let allowed = vec![true; ncols];
        sx.optimize(&cost, &allowed);
        if sx.objective(&cost).is_negative() {
            return Ok(LpResult::without_solution(LpStatus::Infeasible, n));
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < sx.t.len() {
            if sx.basis[r] >= nreal {
                match (0..nreal).find(|&j| !sx.t[r][j].is_zero()) {
                    Some(j) => {
                        sx.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        sx.t.remove(r);
                        sx.rhs.remove(r);
                        sx.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }

    let sign = match direction {
        Direction::Maximize => Rational::one(),
        Direction::Minimize => -Rational::one(),
    };
    let mut cost = rational::zeros(ncols);
    for j in 0..n {
        cost[j] = &sign * &objective[j];
        if !nonneg {
            cost[n + j] = -cost[j].clone();
        }
    }
    let mut allowed = vec![true; ncols];
    for a in allowed.iter_mut().skip(nreal) {
        *a = false;
    }
    if let Outcome::Unbounded = sx.optimize(&cost, &allowed) {
        return Ok(LpResult::without_solution(LpStatus::Unbounded, n));
    }

    let mut values = rational::zeros(nreal);
    for (r, &b) in sx.basis.iter().enumerate() {
        values[b] = sx.rhs[r].clone();
    }
    let mut vertex = values[..n].to_vec();
    if !nonneg {
        for j in 0..n {
            vertex[j] -= &values[n + j];
        }
    }
    let value = rational::dot(objective, &vertex);
    let tableau = Tableau {
        columns,
        basis: sx.basis.clone(),
        rows: sx.t.iter().map(|r| r[..nreal].to_vec()).collect(),
        rhs: sx.rhs.clone(),
    };
    Ok(LpResult {
        status: LpStatus::Optimal,
        value,
        vertex,
        tableau: Some(tableau),
    })
}

/// True when `poly` has a point (with `x >= 0` when `nonneg`).
pub fn is_feasible(poly: &HPolytope, nonneg: bool) -> Result<bool> {
    let zero = rational::zeros(poly.dim);
    Ok(solve_lp(poly, nonneg, &zero, Direction::Maximize)?.status == LpStatus::Optimal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::rational::{int, rat};

    fn poly(dim: usize, rows: Vec<Constraint>) -> HPolytope {
        HPolytope::new(dim, rows).unwrap()
    }

    #[test]
    fn two_by_two_relaxation() {
        let p = poly(2, vec![Constraint::le(vec![int(2), int(2)], int(3))]);
        let r = solve_lp(&p, true, &[int(1), int(1)], Direction::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, rat(3, 2));
        assert!(p.contains(&r.vertex));
    }

    #[test]
    fn forced_point() {
        let p = poly(
            1,
            vec![
                Constraint::le(vec![int(1)], int(0)),
                Constraint::ge(vec![int(1)], int(0)),
            ],
        );
        let r = solve_lp(&p, false, &[int(1)], Direction::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, int(0));
    }

    #[test]
    fn unbounded_ray() {
        let p = poly(1, vec![Constraint::ge(vec![int(1)], int(1))]);
        let r = solve_lp(&p, false, &[int(1)], Direction::Maximize).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let p = poly(
            1,
            vec![
                Constraint::ge(vec![int(1)], int(2)),
                Constraint::le(vec![int(1)], int(1)),
            ],
        );
        let r = solve_lp(&p, true, &[int(1)], Direction::Minimize).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_minimize() {
        // min x s.t. x >= -3/2
        let p = poly(1, vec![Constraint::ge(vec![int(1)], rat(-3, 2))]);
        let r = solve_lp(&p, false, &[int(1)], Direction::Minimize).unwrap();
        assert_eq!(r.value, rat(-3, 2));
        assert_eq!(r.vertex, vec![rat(-3, 2)]);
    }

    #[test]
    fn redundant_equalities() {
        let p = poly(
            2,
            vec![
                Constraint::new(vec![int(1), int(1)], Sense::Eq, int(1)),
                Constraint::new(vec![int(2), int(2)], Sense::Eq, int(2)),
            ],
        );
        let r = solve_lp(&p, true, &[int(1), int(0)], Direction::Maximize).unwrap();
        assert_eq!(r.value, int(1));
        let tab = r.tableau.unwrap();
        assert_eq!(tab.rows.len(), 1);
    }

    #[test]
    fn tableau_rows_hold_at_solution() {
        let p = poly(
            2,
            vec![
                Constraint::le(vec![int(1), int(2)], int(2)),
                Constraint::le(vec![int(2), int(1)], int(2)),
            ],
        );
        let r = solve_lp(&p, true, &[int(1), int(1)], Direction::Maximize).unwrap();
        assert_eq!(r.value, rat(4, 3));
        let tab = r.tableau.unwrap();
        let vals = tab.column_values();
        for (row, b) in tab.rows.iter().zip(&tab.rhs) {
            assert_eq!(rational::dot(row, &vals), *b);
        }
        // A tableau row, rewritten over x, is implied by the original rows.
        let (a, b) = tab.to_structural(&p, &tab.rows[0], &tab.rhs[0]);
        assert_eq!(rational::dot(&a, &r.vertex), b);
    }
}
