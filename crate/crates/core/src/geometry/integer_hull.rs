//! Brute-force integer hull by enumerating every integer assignment.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::hull::{canonicalize, enumerate_vertices};
use super::polytope::{Constraint, HPolytope, VPolytope};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

/// Integer ranges `[ceil lb, floor ub]` of the integer variables, checked
/// against the point cap.
fn integer_ranges(inst: &MilpInstance, caps: &Caps) -> Result<Vec<(usize, BigInt, BigInt)>> {
    let mut ranges = Vec::new();
    let mut product: u128 = 1;
    for j in inst.integer_indices() {
        let v = &inst.vars[j];
        let ub = v
            .ub
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("integer variable {j} has no upper bound")))?;
        let lo = v.lb.ceil().to_integer();
        let hi = ub.floor().to_integer();
        if hi < lo {
            // Empty range: nothing to enumerate.
            return Ok(vec![(j, lo, hi)]);
        }
        let size = (&hi - &lo + 1u32).to_u128().unwrap_or(u128::MAX);
        product = product.saturating_mul(size);
        if product > caps.max_points as u128 {
            return Err(Error::CapExceeded {
                what: "integer assignments",
                value: product,
                cap: caps.max_points as u128,
            });
        }
        ranges.push((j, lo, hi));
    }
    Ok(ranges)
}

/// Visit every integer assignment in lexicographic order.
fn for_each_assignment(
    ranges: &[(usize, BigInt, BigInt)],
    mut visit: impl FnMut(&[Rational]) -> Result<()>,
) -> Result<()> {
    if ranges.iter().any(|(_, lo, hi)| hi < lo) {
        return Ok(());
    }
    let mut cur: Vec<BigInt> = ranges.iter().map(|(_, lo, _)| lo.clone()).collect();
    let mut vals: Vec<Rational> = cur.iter().map(|c| Rational::from_integer(c.clone())).collect();
    loop {
        visit(&vals)?;
        let mut k = ranges.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if cur[k] < ranges[k].2 {
                cur[k] += 1;
                vals[k] = Rational::from_integer(cur[k].clone());
                break;
            }
            cur[k] = ranges[k].1.clone();
            vals[k] = Rational::from_integer(cur[k].clone());
        }
    }
}

/// A finite set whose convex hull is the (mixed-)integer hull: all feasible
/// integer points for pure-integer instances, otherwise the vertices of the
/// continuous slice for every feasible integer assignment. Not reduced.
pub fn hull_generators(inst: &MilpInstance, caps: &Caps) -> Result<Vec<Vec<Rational>>> {
    let ranges = integer_ranges(inst, caps)?;
    let n = inst.n;
    let cont: Vec<usize> = (0..n).filter(|&j| !inst.vars[j].is_integer()).collect();
    let mut out = Vec::new();

    if cont.is_empty() {
        let mut x = rational::zeros(n);
        for_each_assignment(&ranges, |vals| {
            for ((j, _, _), v) in ranges.iter().zip(vals) {
                x[*j] = v.clone();
            }
            if inst.rows.iter().all(|r| r.is_satisfied(&x)) {
                out.push(x.clone());
            }
            Ok(())
        })?;
        return Ok(out);
    }

    caps.check_dim(cont.len())?;
    let mut fixed = rational::zeros(n);
    for_each_assignment(&ranges, |vals| {
        for ((j, _, _), v) in ranges.iter().zip(vals) {
            fixed[*j] = v.clone();
        }
        let mut rows = Vec::with_capacity(inst.rows.len() + 2 * cont.len());
        for r in &inst.rows {
            let rest: Rational = ranges
                .iter()
                .map(|(j, _, _)| &r.coeffs[*j] * &fixed[*j])
                .fold(Rational::zero(), |a, b| a + b);
            let coeffs: Vec<Rational> = cont.iter().map(|&j| r.coeffs[j].clone()).collect();
            rows.push(Constraint::new(coeffs, r.sense, &r.rhs - rest));
        }
        for (k, &j) in cont.iter().enumerate() {
            let v = &inst.vars[j];
            rows.push(Constraint::ge(rational::unit(cont.len(), k), v.lb.clone()));
            if let Some(ub) = &v.ub {
                rows.push(Constraint::le(rational::unit(cont.len(), k), ub.clone()));
            }
        }
        let slice = enumerate_vertices(&HPolytope { dim: cont.len(), rows }, caps)?;
        for y in slice.vertices {
            let mut x = fixed.clone();
            for (k, &j) in cont.iter().enumerate() {
                x[j] = y[k].clone();
            }
            out.push(x);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Vertices of the (mixed-)integer hull. Empty when infeasible.
pub fn integer_hull(inst: &MilpInstance, caps: &Caps) -> Result<VPolytope> {
    let pts = hull_generators(inst, caps)?;
    canonicalize(&pts, inst.n, caps)
}

/// `max c·x` over a generating set; `None` when empty.
pub fn max_over(points: &[Vec<Rational>], c: &[Rational]) -> Option<Rational> {
    points.iter().map(|p| rational::dot(c, p)).max()
}

/// Convenience: optimal integer value of `inst` for objective `c`.
pub fn integer_optimum(inst: &MilpInstance, c: &[Rational], caps: &Caps) -> Result<Option<Rational>> {
    Ok(max_over(&hull_generators(inst, caps)?, c))
}

/// Number of integer assignments the enumeration would visit.
pub fn assignment_count(inst: &MilpInstance) -> Option<BigInt> {
    let mut total = BigInt::one();
    for j in inst.integer_indices() {
        let v = &inst.vars[j];
        let ub = v.ub.as_ref()?;
        let size = ub.floor().to_integer() - v.lb.ceil().to_integer() + 1;
        if size <= BigInt::zero() {
            return Some(BigInt::zero());
        }
        total *= size;
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull;
    use crate::instance::{MilpInstance, Variable};
    use crate::rational::{int, rat};

    #[test]
    fn triangle_knapsack() {
        let inst = MilpInstance::pure_integer(
            "k",
            vec![Constraint::le(vec![int(2), int(2)], int(3))],
            vec![int(1), int(1)],
            int(3),
        )
        .unwrap();
        let h = integer_hull(&inst, &Caps::default()).unwrap();
        assert_eq!(
            h.vertices,
            vec![vec![int(0), int(0)], vec![int(0), int(1)], vec![int(1), int(0)]]
        );
    }

    #[test]
    fn integral_box_matches_vertices() {
        let inst = MilpInstance::pure_integer("b", vec![], vec![int(1), int(1)], int(1)).unwrap();
        let h = integer_hull(&inst, &Caps::default()).unwrap();
        let v = hull::enumerate_vertices(&inst.lp_polytope(), &Caps::default()).unwrap();
        assert_eq!(h, v);
    }

    #[test]
    fn mir_slice() {
        let inst = MilpInstance::new(
            "mir",
            vec![Variable::int(int(0), int(3)), Variable::cont(int(0), int(3))],
            vec![Constraint::ge(vec![int(1), int(1)], rat(5, 2))],
            vec![int(0), int(0)],
        )
        .unwrap();
        let h = integer_hull(&inst, &Caps::default()).unwrap();
        assert_eq!(
            h.vertices,
            vec![
                vec![int(0), rat(5, 2)],
                vec![int(0), int(3)],
                vec![int(2), rat(1, 2)],
                vec![int(3), int(0)],
                vec![int(3), int(3)],
            ]
        );
    }

    #[test]
    fn infeasible_is_empty() {
        let inst = MilpInstance::pure_integer(
            "e",
            vec![Constraint::ge(vec![int(2)], int(1)), Constraint::le(vec![int(2)], int(1))],
            vec![int(1)],
            int(3),
        )
        .unwrap();
        assert!(integer_hull(&inst, &Caps::default()).unwrap().is_empty());
    }

    #[test]
    fn point_cap() {
        let inst = MilpInstance::pure_integer("big", vec![], vec![int(1); 4], int(99)).unwrap();
        let caps = Caps {
            max_points: 1000,
            ..Caps::default()
        };
        assert!(matches!(
            hull_generators(&inst, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }
}
