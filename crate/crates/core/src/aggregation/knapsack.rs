use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::cuts::{Cut, Provenance};
use crate::error::Result;
use crate::geometry::hull::facets;
use crate::geometry::integer_hull::integer_hull;
use crate::geometry::polytope::{Constraint, Sense};
use crate::instance::{MilpInstance, Variable};
use crate::rational::{self, Rational};

/// True when the bounds alone imply the cut.
pub fn implied_by_bounds(cut: &Cut, vars: &[Variable]) -> bool {
    let (a, b) = cut.as_le();
    let mut max = Rational::zero();
    for (aj, v) in a.iter().zip(vars) {
        if aj.is_positive() {
            match &v.ub {
                Some(u) => max += aj * u,
                None => return false,
            }
        } else if aj.is_negative() {
            max += aj * &v.lb;
        }
    }
    max <= b
}

fn as_cuts(row: &Constraint, prov: &Provenance) -> Vec<Cut> {
    match row.sense {
        Sense::Le => vec![Cut::le(row.coeffs.clone(), row.rhs.clone(), prov.clone())],
        Sense::Ge => vec![Cut::ge(row.coeffs.clone(), row.rhs.clone(), prov.clone())],
        Sense::Eq => vec![
            Cut::le(row.coeffs.clone(), row.rhs.clone(), prov.clone()),
            Cut::ge(row.coeffs.clone(), row.rhs.clone(), prov.clone()),
        ],
    }
}

/// Facets of the integer hull of `{x : row, bounds, integrality}` that are
/// neither implied by the bounds nor a positive multiple of the row itself.
/// An empty hull yields the single cut `0 <= -1`.
pub fn knapsack_hull_cuts(row: &Constraint, vars: &[Variable], caps: &Caps) -> Result<Vec<Cut>> {
    let n = vars.len();
    let inst = MilpInstance::new("knapsack", vars.to_vec(), vec![row.clone()], rational::zeros(n))?;
    let hull = integer_hull(&inst, caps)?;
    let h = facets(&hull.vertices, n, caps)?;
    let prov = Provenance::new("knapsack-hull");
    let own: BTreeSet<_> = as_cuts(row, &prov).iter().map(Cut::normalized_key).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for f in &h.rows {
        for cut in as_cuts(f, &prov) {
            let key = cut.normalized_key();
            if own.contains(&key) || implied_by_bounds(&cut, vars) || !seen.insert(key) {
                continue;
            }
            out.push(cut);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(n: usize, ub: i64) -> Vec<Variable> {
        vec![Variable::int(int(0), int(ub)); n]
    }

    #[test]
    fn three_three_four() {
        let row = Constraint::le(vec![int(3), int(3)], int(4));
        let cuts = knapsack_hull_cuts(&row, &ints(2, 5), &Caps::default()).unwrap();
        let target = Cut::le(vec![int(1), int(1)], int(1), Provenance::new("t")).normalized_key();
        assert!(cuts.iter().any(|c| c.normalized_key() == target));
        assert_eq!(cuts.len(), 1);
    }

    #[test]
    fn integral_row_has_no_cuts() {
        let row = Constraint::le(vec![int(1), int(1)], int(2));
        assert!(knapsack_hull_cuts(&row, &ints(2, 5), &Caps::default()).unwrap().is_empty());
    }

    #[test]
    fn covering_row() {
        let row = Constraint::ge(vec![int(2), int(3)], int(4));
        let vars = ints(2, 3);
        let cuts = knapsack_hull_cuts(&row, &vars, &Caps::default()).unwrap();
        assert!(!cuts.is_empty());
        // Every cut holds at every integer point of the row and cuts off
        // some point of its LP relaxation.
        for x0 in 0..=3 {
            for x1 in 0..=3 {
                let x = [int(x0), int(x1)];
                if row.is_satisfied(&x) {
                    assert!(cuts.iter().all(|c| c.is_satisfied(&x)));
                }
            }
        }
        let lp_point = [int(2), int(0)];
        assert!(row.is_satisfied(&lp_point));
        let frac = [int(0), rational::rat(4, 3)];
        assert!(cuts.iter().any(|c| c.separates(&frac)));
    }

    #[test]
    fn infeasible_row() {
        let row = Constraint::ge(vec![int(1)], int(5));
        let cuts = knapsack_hull_cuts(&row, &ints(1, 3), &Caps::default()).unwrap();
        assert_eq!(cuts.len(), 1);
        assert!(!cuts[0].is_satisfied(&[int(0)]));
    }
}
