use num_traits::Signed;
use serde::Serialize;

use super::alpha::{objective_sample, Ratio};
use super::closure::{aggregation_closure_outer, one_row_closure, MultiplierParams};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::integer_hull::{hull_generators, max_over};
use crate::instance::generate::one_row_gap;
use crate::instance::{is_preprocessed, MilpInstance, Tag};
use crate::rational::{self, Rational};

/// One objective's values across the relaxation chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AggRow {
    pub instance: String,
    pub objective: usize,
    #[serde(with = "rational::serde_str")]
    pub z_lp: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_1row: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_agg_outer: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_i: Rational,
    pub ratio: Ratio,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub pass: bool,
}

impl AggRow {
    pub const CSV_HEADER: &'static str = "instance,objective,z_lp,z_1row,z_agg_outer,z_i,ratio,bound,pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.objective,
            rational::format(&self.z_lp),
            rational::format(&self.z_1row),
            rational::format(&self.z_agg_outer),
            rational::format(&self.z_i),
            self.ratio,
            rational::format(&self.bound),
            self.pass
        )
    }
}

struct Chain {
    z_lp: Rational,
    z_1row: Rational,
    z_agg: Rational,
    z_i: Rational,
}

impl Chain {
    fn monotone(&self) -> bool {
        self.z_lp >= self.z_1row && self.z_1row >= self.z_agg && self.z_agg >= self.z_i
    }
}

fn chains(
    inst: &MilpInstance,
    objectives: &[Vec<Rational>],
    budget: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Vec<Chain>> {
    if objectives.iter().flatten().any(Signed::is_negative) {
        return Err(Error::Invalid("objectives must be nonnegative".into()));
    }
    let one = one_row_closure(inst, caps)?;
    let agg = aggregation_closure_outer(inst, &MultiplierParams::default(), budget, seed, caps)?;
    let gens = hull_generators(inst, caps)?;
    objectives
        .iter()
        .map(|c| {
            Ok(Chain {
                z_lp: one_lp(inst, c)?,
                z_1row: one.max_value(c)?,
                z_agg: agg.max_value(c)?,
                z_i: max_over(&gens, c).ok_or(Error::Empty)?,
            })
        })
        .collect()
}

fn one_lp(inst: &MilpInstance, c: &[Rational]) -> Result<Rational> {
    let r = inst.solve_relaxation(c, &[])?;
    match r.status {
        crate::geometry::LpStatus::Optimal => Ok(r.value),
        crate::geometry::LpStatus::Infeasible => Err(Error::Empty),
        crate::geometry::LpStatus::Unbounded => Err(Error::Unbounded),
    }
}

/// For a pre-processed packing instance: `z_LP <= 2 z_I` and
/// `z_LP >= z_1row >= z_agg_outer >= z_I` for every objective.
pub fn verify_aggregation_bound(
    inst: &MilpInstance,
    objectives: &[Vec<Rational>],
    budget: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Vec<AggRow>> {
    if !is_preprocessed(inst) {
        return Err(Error::WrongClass("pre-processed packing"));
    }
    let two = rational::int(2);
    Ok(chains(inst, objectives, budget, seed, caps)?
        .into_iter()
        .enumerate()
        .map(|(i, ch)| AggRow {
            instance: inst.name.clone(),
            objective: i,
            ratio: Ratio::of(&ch.z_lp, &ch.z_i),
            bound: two.clone(),
            pass: ch.monotone() && ch.z_lp <= &two * &ch.z_i,
            z_lp: ch.z_lp,
            z_1row: ch.z_1row,
            z_agg_outer: ch.z_agg,
            z_i: ch.z_i,
        })
        .collect())
}

/// For a sign-pattern instance: `z_1row <= 2 z_agg_outer` for every sampled
/// nonnegative objective, plus the monotone chain. Objectives with a
/// negative integer optimum get ratio `n/a` and are judged on the chain only.
pub fn sign_pattern_experiment(inst: &MilpInstance, budget: usize, seed: u64, caps: &Caps) -> Result<Vec<AggRow>> {
    if !inst.has_tag(Tag::SignPattern) {
        return Err(Error::WrongClass("sign-pattern"));
    }
    let objectives = objective_sample(inst.n, budget, seed);
    let two = rational::int(2);
    Ok(chains(inst, &objectives, budget, seed, caps)?
        .into_iter()
        .enumerate()
        .map(|(i, ch)| {
            let ratio = if ch.z_i.is_negative() {
                Ratio::Undefined
            } else {
                Ratio::of(&ch.z_1row, &ch.z_agg)
            };
            AggRow {
                instance: inst.name.clone(),
                objective: i,
                pass: ch.monotone() && ratio.at_most(&two),
                ratio,
                bound: two.clone(),
                z_lp: ch.z_lp,
                z_1row: ch.z_1row,
                z_agg_outer: ch.z_agg,
                z_i: ch.z_i,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapDemoRow {
    pub q: i64,
    #[serde(with = "rational::serde_str")]
    pub z_1row: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_agg_outer: Rational,
    pub ratio: Ratio,
}

/// Ratio between the 1-row closure and the sampled aggregation closure on
/// the one-row-gap family, per parameter `q`. The family is
/// `x <= y, y <= 1/2` with `x` binary and `y` continuous in `[0, 1]`,
/// maximizing `q x + y`: each row alone allows `x = y = 1/2`, any
/// aggregation with weight on the first row at least that on the second
/// forces `x = 0`.
pub fn one_row_gap_demo(qs: &[i64], budget: usize, seed: u64, caps: &Caps) -> Result<Vec<GapDemoRow>> {
    qs.iter()
        .map(|&q| {
            let inst = one_row_gap(q)?;
            let one = one_row_closure(&inst, caps)?.max_value(&inst.objective)?;
            let agg = aggregation_closure_outer(&inst, &MultiplierParams::default(), budget, seed, caps)?
                .max_value(&inst.objective)?;
            Ok(GapDemoRow {
                q,
                ratio: Ratio::of(&one, &agg),
                z_1row: one,
                z_agg_outer: agg,
            })
        })
        .collect()
}
