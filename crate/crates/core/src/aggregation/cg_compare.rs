use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::cuts::{aggregate, cg_cut, is_integral_row, AggregateOptions, Cut};
use crate::error::{Error, Result};
use crate::geometry::ip::solve_ip;
use crate::geometry::lp::LpStatus;
use crate::geometry::polytope::Sense;
use crate::instance::generate::rng;
use crate::instance::MilpInstance;
use crate::rational::{self, Rational};

/// Gap closed by one round of CG cuts from single rows versus from sampled
/// aggregations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CgGapReport {
    pub instance: String,
    #[serde(with = "rational::serde_str")]
    pub z_lp: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_i: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_1row: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_agg: Rational,
    pub cuts_1row: usize,
    pub cuts_agg: usize,
    pub already_integral: bool,
}

impl CgGapReport {
    /// `(z_LP − z_cut) / (z_LP − z_I)`, `None` when the LP is integral.
    pub fn gap_closed(&self, z_cut: &Rational) -> Option<Rational> {
        if self.already_integral {
            None
        } else {
            Some((&self.z_lp - z_cut) / (&self.z_lp - &self.z_i))
        }
    }

    pub fn gap_1row(&self) -> Option<Rational> {
        self.gap_closed(&self.z_1row)
    }

    pub fn gap_agg(&self) -> Option<Rational> {
        self.gap_closed(&self.z_agg)
    }

    pub const CSV_HEADER: &'static str = "instance,z_lp,z_i,z_1row,z_agg,gap_1row,gap_agg,cuts_1row,cuts_agg";

    pub fn csv_row(&self) -> String {
        let pct = |g: Option<Rational>| {
            g.map_or_else(|| "already integral".to_string(), |g| format!("{:.2}", 100.0 * rational::to_f64(&g)))
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            rational::format(&self.z_lp),
            rational::format(&self.z_i),
            rational::format(&self.z_1row),
            rational::format(&self.z_agg),
            pct(self.gap_1row()),
            pct(self.gap_agg()),
            self.cuts_1row,
            self.cuts_agg
        )
    }
}

/// Positive rationals `p/d` with `1 <= p <= d <= max_den`, reduced and
/// sorted.
pub fn small_fractions(max_den: i64) -> Vec<Rational> {
    let set: BTreeSet<Rational> = (1..=max_den.max(1))
        .flat_map(|d| (1..=d).map(move |p| rational::rat(p, d)))
        .collect();
    set.into_iter().collect()
}

const MAX_DEN: i64 = 7;
/// Cuts added per separation round.
const PER_ROUND: usize = 10;

fn opts() -> AggregateOptions {
    AggregateOptions {
        orientation: Some(Sense::Le),
        free_equalities: true,
    }
}

type Key = Vec<num_bigint::BigInt>;

fn lp_point(inst: &MilpInstance, cuts: &[Cut]) -> Result<(Rational, Vec<Rational>)> {
    let extra: Vec<_> = cuts.iter().map(Cut::to_constraint).collect();
    let r = inst.solve_relaxation(&inst.objective, &extra)?;
    match r.status {
        LpStatus::Optimal => Ok((r.value, r.vertex)),
        LpStatus::Infeasible => Err(Error::Empty),
        LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

/// CG cut from `λᵀA x <= λᵀb` plus `μ_j (x_j <= u_j)`, where `μ_j` lifts the
/// coefficient of `x_j` to the next integer whenever that is no weaker at
/// `x`. With `x = None` no bound rows are used.
fn cg_from(inst: &MilpInstance, lambda: &[Rational], x: Option<&[Rational]>) -> Result<Option<Cut>> {
    let mut row = aggregate(inst, lambda, opts())?;
    if let Some(x) = x {
        let mut mu = rational::zeros(inst.n);
        for j in 0..inst.n {
            let a = &row.coeffs[j];
            let Some(u) = &inst.vars[j].ub else { continue };
            if a.is_integer() {
                continue;
            }
            let lift = a.ceil() - a;
            // gain x_j on the left against lift·u_j on the right
            if x[j] >= &lift * u {
                mu[j] = lift;
            }
        }
        for j in 0..inst.n {
            if let Some(u) = &inst.vars[j].ub {
                row.coeffs[j] += &mu[j];
                row.rhs += &mu[j] * u;
            }
        }
        if mu.iter().any(|m| !m.is_zero()) {
            row.provenance = row.provenance.with_note("upper-bound rows lifted");
        }
    }
    if is_integral_row(&row) {
        return Ok(None);
    }
    cg_cut(&row, &inst.vars).map(Some)
}

fn random_lambda(inst: &MilpInstance, r: &mut impl Rng) -> Vec<Rational> {
    inst.rows
        .iter()
        .map(|row| {
            let d = r.gen_range(1..=MAX_DEN);
            let v = rational::rat(r.gen_range(0..d), d);
            if row.sense == Sense::Eq && r.gen_bool(0.5) {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// Gap closed by CG cuts from scaled single rows (`u·row`, `u` a small
/// fraction, both signs for equality rows; all such cuts at once) against
/// CG cuts from arbitrary aggregations: starting from the single-row cuts,
/// `rounds` separation rounds each sample `budget` multipliers over all
/// rows, lift with upper-bound rows at the current LP point and add the
/// most violated cuts.
pub fn cg_1row_vs_aggregated(inst: &MilpInstance, budget: usize, rounds: usize, seed: u64) -> Result<CgGapReport> {
    if !inst.is_pure_integer() || !inst.lower_bounds_nonneg() {
        return Err(Error::WrongClass("pure integer with nonnegative variables"));
    }
    let m = inst.m();
    let fracs = small_fractions(MAX_DEN);
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let mut one = Vec::new();
    for i in 0..m {
        let signs: &[i64] = if inst.rows[i].sense == Sense::Eq { &[1, -1] } else { &[1] };
        for &s in signs {
            for u in &fracs {
                let mut lambda = rational::zeros(m);
                lambda[i] = u * Rational::from_integer(s.into());
                if let Some(c) = cg_from(inst, &lambda, None)? {
                    if seen.insert(c.normalized_key()) {
                        one.push(c);
                    }
                }
            }
        }
    }
    let (z_lp, _) = lp_point(inst, &[])?;
    let (z_1row, mut x) = lp_point(inst, &one)?;

    let mut agg = one.clone();
    let mut z_agg = z_1row.clone();
    let mut r = rng(seed);
    for _ in 0..rounds {
        let mut found: Vec<(Rational, Cut)> = Vec::new();
        for _ in 0..budget {
            let lambda = random_lambda(inst, &mut r);
            if lambda.iter().all(num_traits::Zero::is_zero) {
                continue;
            }
            if let Some(c) = cg_from(inst, &lambda, Some(&x))? {
                let v = c.violation(&x);
                if v > Rational::zero() && seen.insert(c.normalized_key()) {
                    found.push((v, c));
                }
            }
        }
        if found.is_empty() {
            break;
        }
        found.sort_by(|a, b| b.0.cmp(&a.0));
        agg.extend(found.into_iter().take(PER_ROUND).map(|(_, c)| c));
        let next = lp_point(inst, &agg)?;
        z_agg = next.0;
        x = next.1;
    }

    let z_i = solve_ip(inst, &inst.objective, &[])?
        .ok_or(Error::Empty)?
        .value;
    Ok(CgGapReport {
        instance: inst.name.clone(),
        already_integral: z_lp == z_i,
        cuts_1row: one.len(),
        cuts_agg: agg.len(),
        z_lp,
        z_i,
        z_1row,
        z_agg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::instance::generate::{generate, GenSpec};
    use crate::rational::int;

    #[test]
    fn integral_lp() {
        let inst = MilpInstance::pure_integer(
            "box",
            vec![Constraint::le(vec![int(1), int(1)], int(1))],
            vec![int(1), int(1)],
            int(1),
        )
        .unwrap();
        let r = cg_1row_vs_aggregated(&inst, 5, 2, 0).unwrap();
        assert!(r.already_integral);
        assert!(r.csv_row().contains("already integral"));
    }

    #[test]
    fn aggregated_dominates() {
        let spec = GenSpec::MarketSplit { rows: 2, cols: 6 };
        for seed in 0..3 {
            let inst = generate(&spec, seed).unwrap();
            let r = cg_1row_vs_aggregated(&inst, 30, 3, seed).unwrap();
            assert!(r.z_agg <= r.z_1row);
            assert!(r.z_i <= r.z_agg);
            assert!(r.z_1row <= r.z_lp);
        }
    }

    #[test]
    fn fractions() {
        let f = small_fractions(3);
        assert_eq!(f, vec![rational::rat(1, 3), rational::rat(1, 2), rational::rat(2, 3), int(1)]);
    }
}
