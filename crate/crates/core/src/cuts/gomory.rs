//! Pure-integer cutting-plane loop with Gomory fractional cuts.

use serde::Serialize;

use super::cut::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::lp::{self, ColumnRole, Direction, LpStatus};
use crate::geometry::polytope::{Constraint, HPolytope};
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum GomoryOutcome {
    Solved {
        #[serde(with = "rational::serde_str")]
        value: Rational,
        #[serde(with = "rational::serde_str::vec")]
        point: Vec<Rational>,
    },
    /// The LP became infeasible, so the integer program is infeasible.
    Infeasible,
    /// The iteration cap was hit; the last LP bound is reported.
    CapHit {
        #[serde(with = "rational::serde_str")]
        bound: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GomoryReport {
    pub outcome: GomoryOutcome,
    pub cuts: Vec<Cut>,
    pub iterations: usize,
}

/// Row scaled by a positive factor to coprime integer data, so its slack is
/// integer-valued on integer points.
fn integer_row(row: &Constraint) -> Constraint {
    let mut v = row.coeffs.clone();
    v.push(row.rhs.clone());
    let ints = rational::from_ints(&rational::primitive_integer(&v));
    let n = row.coeffs.len();
    Constraint::new(ints[..n].to_vec(), row.sense, ints[n].clone())
}

/// Solve `max c·x` over the integer points of `inst` by repeatedly adding
/// the Chvátal-Gomory cut of the tableau row of the lowest-index fractional
/// structural variable. Stops after `max_iters` cuts.
pub fn gomory_loop(inst: &MilpInstance, max_iters: usize) -> Result<GomoryReport> {
    if !inst.is_pure_integer() {
        return Err(Error::WrongClass("pure-integer"));
    }
    if !inst.is_bounded() {
        return Err(Error::Invalid("the cutting-plane loop needs bounded variables".into()));
    }
    if !inst.lower_bounds_nonneg() {
        return Err(Error::Invalid("the cutting-plane loop needs x >= 0".into()));
    }
    let (base, _) = inst.simplex_relaxation();
    let mut poly = HPolytope {
        dim: inst.n,
        rows: base.rows.iter().map(integer_row).collect(),
    };
    let mut cuts = Vec::new();
    let mut iterations = 0;
    loop {
        let res = lp::solve_lp(&poly, true, &inst.objective, Direction::Maximize)?;
        match res.status {
            LpStatus::Infeasible => {
                return Ok(GomoryReport {
                    outcome: GomoryOutcome::Infeasible,
                    cuts,
                    iterations,
                })
            }
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Optimal => {}
        }
        let Some(j) = (0..inst.n).find(|&j| !res.vertex[j].is_integer()) else {
            return Ok(GomoryReport {
                outcome: GomoryOutcome::Solved {
                    value: res.value,
                    point: res.vertex,
                },
                cuts,
                iterations,
            });
        };
        if iterations >= max_iters {
            return Ok(GomoryReport {
                outcome: GomoryOutcome::CapHit { bound: res.value },
                cuts,
                iterations,
            });
        }
        let tab = res.tableau.as_ref().expect("optimal results carry a tableau");
        let col = tab
            .columns
            .iter()
            .position(|r| *r == ColumnRole::Structural(j))
            .expect("structural column present");
        let r = tab
            .basis
            .iter()
            .position(|&b| b == col)
            .expect("fractional variable is basic");
        let floor_coeffs: Vec<Rational> = tab.rows[r].iter().map(|a| a.floor()).collect();
        let (a, b) = tab.to_structural(&poly, &floor_coeffs, &tab.rhs[r].floor());
        let row = integer_row(&Constraint::le(a, b));
        let mut prov = Provenance::new("gomory-cg").with_rows(vec![r]);
        prov.basic_var = Some(col);
        cuts.push(Cut::le(row.coeffs.clone(), row.rhs.clone(), prov));
        poly.rows.push(row);
        iterations += 1;
    }
}

/// Default iteration cap for the loop.
pub const DEFAULT_MAX_ITERS: usize = 200;
