use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::knapsack::knapsack_hull_cuts;
use crate::caps::Caps;
use crate::cuts::{aggregate, AggregateOptions, Cut};
use crate::error::{Error, Result};
use crate::geometry::enumerate_vertices;
use crate::geometry::lp::{solve_lp, Direction, LpStatus};
use crate::geometry::polytope::{HPolytope, Sense};
use crate::instance::generate::rng;
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    /// Equal to the closure it names.
    Exact,
    /// Contains the closure it names.
    Outer,
}

/// A relaxation `base ∩ cuts`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureApprox {
    pub base: HPolytope,
    /// Sign constraints `x >= 0` implicit in `base`.
    pub nonneg: bool,
    pub cuts: Vec<Cut>,
    pub exactness: Exactness,
    /// Multipliers whose single-row hulls were intersected.
    pub multipliers: Vec<Vec<Rational>>,
}

impl ClosureApprox {
    pub fn from_polytope(base: HPolytope, nonneg: bool, exactness: Exactness) -> Self {
        ClosureApprox {
            base,
            nonneg,
            cuts: Vec::new(),
            exactness,
            multipliers: Vec::new(),
        }
    }

    /// The LP relaxation of `inst` with no cuts.
    pub fn lp(inst: &MilpInstance) -> Self {
        let (base, nonneg) = inst.simplex_relaxation();
        Self::from_polytope(base, nonneg, Exactness::Exact)
    }

    pub fn polytope(&self) -> HPolytope {
        let mut h = self.base.clone();
        if self.nonneg {
            for j in 0..h.dim {
                h.rows.push(crate::geometry::Constraint::ge(rational::unit(h.dim, j), Rational::zero()));
            }
        }
        h.rows.extend(self.cuts.iter().map(Cut::to_constraint));
        h
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (!self.nonneg || x.iter().all(|v| *v >= Rational::zero()))
            && self.base.contains(x)
            && self.cuts.iter().all(|c| c.is_satisfied(x))
    }

    /// Optimal value, `None` when empty.
    pub fn optimum(&self, c: &[Rational], direction: Direction) -> Result<Option<Rational>> {
        let mut h = self.base.clone();
        h.rows.extend(self.cuts.iter().map(Cut::to_constraint));
        let r = solve_lp(&h, self.nonneg, c, direction)?;
        match r.status {
            LpStatus::Optimal => Ok(Some(r.value)),
            LpStatus::Infeasible => Ok(None),
            LpStatus::Unbounded => Err(Error::Unbounded),
        }
    }

    pub fn max_value(&self, c: &[Rational]) -> Result<Rational> {
        self.optimum(c, Direction::Maximize)?.ok_or(Error::Empty)
    }

    pub fn vertices(&self, caps: &Caps) -> Result<Vec<Vec<Rational>>> {
        Ok(enumerate_vertices(&self.polytope(), caps)?.vertices)
    }
}

/// Intersection of the integer hulls of every single row (bounds and
/// integrality included) with the LP relaxation.
pub fn one_row_closure(inst: &MilpInstance, caps: &Caps) -> Result<ClosureApprox> {
    let per_row: Vec<Vec<Cut>> = inst
        .rows
        .par_iter()
        .map(|r| knapsack_hull_cuts(r, &inst.vars, caps))
        .collect::<Result<_>>()?;
    let mut out = ClosureApprox::lp(inst);
    let mut seen = BTreeSet::new();
    for (i, cuts) in per_row.into_iter().enumerate() {
        let lambda = rational::unit(inst.m(), i);
        for mut c in cuts {
            if seen.insert(c.normalized_key()) {
                c.provenance = c.provenance.with_rows(vec![i]).with_multipliers(lambda.clone());
                out.cuts.push(c);
            }
        }
        out.multipliers.push(lambda);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MultiplierParams {
    pub max_entry: i64,
    pub max_support: usize,
    pub units: bool,
}

impl Default for MultiplierParams {
    fn default() -> Self {
        MultiplierParams {
            max_entry: 10,
            max_support: 3,
            units: true,
        }
    }
}

/// Unit multipliers (both signs for equality rows) followed by `budget`
/// random sparse integer multipliers. Entries on inequality rows are
/// positive, entries on equality rows carry a random sign. The random part
/// is a prefix-stable stream: a larger budget only appends.
pub fn sample_multipliers(inst: &MilpInstance, params: &MultiplierParams, budget: usize, seed: u64) -> Vec<Vec<Rational>> {
    let m = inst.m();
    let mut out = Vec::new();
    if params.units {
        for i in 0..m {
            out.push(rational::unit(m, i));
            if inst.rows[i].sense == Sense::Eq {
                out.push(rational::scale(&rational::unit(m, i), &rational::int(-1)));
            }
        }
    }
    if m == 0 {
        return out;
    }
    let mut r = rng(seed);
    let cap = params.max_support.clamp(1, m);
    for _ in 0..budget {
        let size = r.gen_range(1..=cap);
        let mut lambda = rational::zeros(m);
        for i in sample(&mut r, m, size) {
            let mut v = r.gen_range(1..=params.max_entry.max(1));
            if inst.rows[i].sense == Sense::Eq && r.gen_bool(0.5) {
                v = -v;
            }
            lambda[i] = rational::int(v);
        }
        out.push(lambda);
    }
    out
}

/// Intersect the LP relaxation with the integer hulls of the aggregated
/// rows `λᵀA x <= λᵀb` (rows oriented as `<=`).
pub fn aggregation_closure_with(inst: &MilpInstance, multipliers: &[Vec<Rational>], caps: &Caps) -> Result<ClosureApprox> {
    let opts = AggregateOptions {
        orientation: Some(Sense::Le),
        free_equalities: true,
    };
    let per: Vec<Vec<Cut>> = multipliers
        .par_iter()
        .map(|lambda| {
            let row = aggregate(inst, lambda, opts)?;
            let prov = row.provenance.clone();
            let cuts = knapsack_hull_cuts(&row.to_constraint(), &inst.vars, caps)?;
            Ok(cuts
                .into_iter()
                .map(|mut c| {
                    c.provenance = prov.derived("knapsack-hull");
                    c
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut out = ClosureApprox::lp(inst);
    out.exactness = Exactness::Outer;
    out.multipliers = multipliers.to_vec();
    let mut seen = BTreeSet::new();
    for c in per.into_iter().flatten() {
        if seen.insert(c.normalized_key()) {
            out.cuts.push(c);
        }
    }
    Ok(out)
}

/// Outer approximation of the aggregation closure from sampled multipliers.
pub fn aggregation_closure_outer(
    inst: &MilpInstance,
    params: &MultiplierParams,
    budget: usize,
    seed: u64,
    caps: &Caps,
) -> Result<ClosureApprox> {
    if budget == 0 && !params.units {
        return Err(Error::Invalid("no multipliers: budget is 0 and unit multipliers are off".into()));
    }
    let lambdas = sample_multipliers(inst, params, budget, seed);
    aggregation_closure_with(inst, &lambdas, caps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::Provenance;
    use crate::geometry::polytope::Constraint;
    use crate::rational::{int, rat};

    pub(crate) fn two_row() -> MilpInstance {
        MilpInstance::pure_integer(
            "two-row",
            vec![
                Constraint::le(vec![int(1), int(2)], int(2)),
                Constraint::le(vec![int(2), int(1)], int(2)),
            ],
            vec![int(1), int(1)],
            int(2),
        )
        .unwrap()
    }

    #[test]
    fn one_row_of_two_row_is_lp() {
        let inst = two_row();
        let one = one_row_closure(&inst, &Caps::default()).unwrap();
        assert!(one.cuts.is_empty());
        assert_eq!(one.max_value(&inst.objective).unwrap(), rat(4, 3));
        assert_eq!(one.exactness, Exactness::Exact);
    }

    #[test]
    fn sum_multiplier_gives_x1_plus_x2() {
        let inst = two_row();
        let agg = aggregation_closure_with(&inst, &[vec![int(1), int(1)]], &Caps::default()).unwrap();
        let key = Cut::le(vec![int(1), int(1)], int(1), Provenance::new("t")).normalized_key();
        assert!(agg.cuts.iter().any(|c| c.normalized_key() == key));
        assert_eq!(agg.max_value(&inst.objective).unwrap(), int(1));
        assert_eq!(agg.exactness, Exactness::Outer);
    }

    #[test]
    fn units_only_equals_one_row() {
        let inst = two_row();
        let params = MultiplierParams::default();
        let agg = aggregation_closure_outer(&inst, &params, 0, 1, &Caps::default()).unwrap();
        let one = one_row_closure(&inst, &Caps::default()).unwrap();
        let keys = |c: &ClosureApprox| c.cuts.iter().map(Cut::normalized_key).collect::<BTreeSet<_>>();
        assert_eq!(keys(&agg), keys(&one));
    }

    #[test]
    fn budget_tightens() {
        let inst = two_row();
        let params = MultiplierParams::default();
        let mut last = None;
        for budget in [0, 2, 5, 20] {
            let v = aggregation_closure_outer(&inst, &params, budget, 3, &Caps::default())
                .unwrap()
                .max_value(&inst.objective)
                .unwrap();
            if let Some(l) = last {
                assert!(v <= l);
            }
            last = Some(v);
        }
    }

    #[test]
    fn prefix_stable_multipliers() {
        let inst = two_row();
        let p = MultiplierParams::default();
        let a = sample_multipliers(&inst, &p, 5, 9);
        let b = sample_multipliers(&inst, &p, 8, 9);
        assert_eq!(a[..], b[..a.len()]);
    }

    #[test]
    fn empty_budget_rejected() {
        let p = MultiplierParams {
            units: false,
            ..MultiplierParams::default()
        };
        assert!(aggregation_closure_outer(&two_row(), &p, 0, 0, &Caps::default()).is_err());
    }
}
