//! Depth-first branch and bound over the exact simplex. An exact integer
//! optimizer that does not enumerate assignments, used where the assignment
//! space is too large for the brute-force hull.

use super::lp::LpStatus;
use super::polytope::Constraint;
use crate::error::{Error, Result};
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpSolution {
    pub value: Rational,
    pub point: Vec<Rational>,
    pub nodes: usize,
}

/// `max c·x` over the mixed-integer points of `inst` intersected with
/// `extra`; `Ok(None)` when infeasible. Integer variables must be bounded.
pub fn solve_ip(inst: &MilpInstance, c: &[Rational], extra: &[Constraint]) -> Result<Option<IpSolution>> {
    if !inst.integer_indices().iter().all(|&j| inst.vars[j].ub.is_some()) {
        return Err(Error::Invalid("branch and bound needs bounded integer variables".into()));
    }
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut stack: Vec<Vec<Constraint>> = vec![extra.to_vec()];
    let mut nodes = 0;
    while let Some(cuts) = stack.pop() {
        nodes += 1;
        let r = inst.solve_relaxation(c, &cuts)?;
        match r.status {
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded => return Err(Error::Unbounded),
            LpStatus::Optimal => {}
        }
        if best.as_ref().is_some_and(|(b, _)| r.value <= *b) {
            continue;
        }
        let frac = inst
            .integer_indices()
            .into_iter()
            .find(|&j| !r.vertex[j].is_integer());
        match frac {
            None => best = Some((r.value, r.vertex)),
            Some(j) => {
                let v = &r.vertex[j];
                let mut down = cuts.clone();
                down.push(Constraint::le(rational::unit(inst.n, j), v.floor()));
                let mut up = cuts;
                up.push(Constraint::ge(rational::unit(inst.n, j), v.ceil()));
                stack.push(down);
                stack.push(up);
            }
        }
    }
    Ok(best.map(|(value, point)| IpSolution { value, point, nodes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::geometry::integer_hull::integer_optimum;
    use crate::rational::int;

    #[test]
    fn knapsack_optimum() {
        let inst = MilpInstance::pure_integer(
            "k",
            vec![Constraint::le(vec![int(2), int(2)], int(3))],
            vec![int(1), int(1)],
            int(3),
        )
        .unwrap();
        let s = solve_ip(&inst, &inst.objective, &[]).unwrap().unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(
            Some(s.value),
            integer_optimum(&inst, &inst.objective, &Caps::default()).unwrap()
        );
    }

    #[test]
    fn infeasible_returns_none() {
        let inst = MilpInstance::pure_integer(
            "e",
            vec![Constraint::ge(vec![int(2)], int(1)), Constraint::le(vec![int(2)], int(1))],
            vec![int(1)],
            int(3),
        )
        .unwrap();
        assert!(solve_ip(&inst, &inst.objective, &[]).unwrap().is_none());
    }
}
