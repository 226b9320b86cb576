//! The acceptance checks. Each check builds its own seeded batch, runs the
//! library routine under test and compares it with an independent oracle
//! (plain enumeration of integer points, direct evaluation of inequalities).
//! The `acceptance` test target and `cutlab verify-all` both call [`run`].

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::aggregation::{cg_1row_vs_aggregated, knapsack_hull_cuts, objective_sample, small_fractions, verify_aggregation_bound};
use crate::caps::Caps;
use crate::cuts::gomory::{gomory_loop, GomoryOutcome, DEFAULT_MAX_ITERS};
use crate::cuts::{
    aggregate, cg_cut, embed, gmic, gmic_from_tableau, mir_cut, subadditive_cut, AggregateOptions, Cut, Embedding,
    Provenance, SubadditiveFn, TableauRow,
};
use crate::error::{Error, Result};
use crate::cuts::gmic::column_integrality;
use crate::geometry::{solve_lp, Constraint, Direction, Sense, VPolytope};
use crate::instance::generate::{derive_seed, generate, generate_polytope, rng, GenSpec};
use crate::instance::{is_preprocessed, preprocess_packing, MilpInstance, VarKind, Variable};
use crate::rational::{self, int, rat, Rational};
use crate::selection::{select, CutPool, Policy};
use crate::sparsity::{
    check_properties, dist_pk, fractional_chromatic, interaction_graph, lambda_star_sq, sparse_distance_bound,
    sparsify_cut, two_stage_split, block_closure, check_absent_edges, verify_eta_bound, InteractionGraph, Separation,
    SparsifierInput, SupportList,
};
use crate::geometry::Interval;

pub const IDS: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "cut-validity",
        2 => "gmic-separation",
        3 => "sparse-distance-bound",
        4 => "sparsifier",
        5 => "two-stage-sparse-closure",
        6 => "block-sparse-eta",
        7 => "aggregation-lp-bound",
        8 => "cg-gap-comparison",
        9 => "selection-properties",
        10 => "gomory-loop",
        _ => "unknown",
    }
}

/// Run one check. Errors inside a check become a failing result.
pub fn run(id: u8, seed: u64, caps: &Caps) -> Criterion {
    let out = match id {
        1 => cut_validity(seed, caps),
        2 => gmic_separation(seed),
        3 => sparse_distance(seed, caps),
        4 => sparsifier(seed),
        5 => two_stage(seed, caps),
        6 => block_eta(seed, caps),
        7 => aggregation_bound(seed, caps),
        8 => cg_gap(seed),
        9 => selection_properties(seed),
        10 => gomory(seed, caps),
        _ => Err(Error::Invalid(format!("no acceptance check with id {id}"))),
    };
    let (pass, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion {
        id,
        name: name(id),
        pass,
        detail,
    }
}

pub fn run_all(seed: u64, caps: &Caps) -> Vec<Criterion> {
    IDS.iter().map(|&id| run(id, seed, caps)).collect()
}

type Outcome = Result<(bool, String)>;

/// Every integer point of a bounded pure-integer instance, by plain
/// odometer enumeration.
pub fn integer_points(inst: &MilpInstance) -> Result<Vec<Vec<Rational>>> {
    let mut ranges = Vec::with_capacity(inst.n);
    for v in &inst.vars {
        if !v.is_integer() {
            return Err(Error::WrongClass("pure-integer"));
        }
        let ub = v.ub.as_ref().ok_or_else(|| Error::Invalid("unbounded variable".into()))?;
        ranges.push((v.lb.ceil(), ub.floor()));
    }
    let mut out = Vec::new();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Ok(out);
    }
    let mut x: Vec<Rational> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    loop {
        if inst.rows.iter().all(|r| r.is_satisfied(&x)) {
            out.push(x.clone());
        }
        let mut j = 0;
        loop {
            if j == inst.n {
                return Ok(out);
            }
            if x[j] < ranges[j].1 {
                x[j] += Rational::one();
                break;
            }
            x[j] = ranges[j].0.clone();
            j += 1;
        }
    }
}

/// Pure-integer instance with mixed-sign rows built around a random box
/// point, so it is feasible; right-hand sides are sometimes fractional.
fn mixed_ip(n: usize, m: usize, ub: i64, seed: u64) -> Result<MilpInstance> {
    let mut r = rng(seed);
    let x0: Vec<i64> = (0..n).map(|_| r.gen_range(0..=ub)).collect();
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(-4..=6)).collect();
        let ax: i64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
        let slack = rat(r.gen_range(0..=5), if r.gen_bool(0.5) { 1 } else { 2 });
        let coeffs = a.iter().map(|&v| int(v)).collect();
        rows.push(if r.gen_bool(0.7) {
            Constraint::le(coeffs, int(ax) + slack)
        } else {
            Constraint::ge(coeffs, int(ax) - slack)
        });
    }
    let c = (0..n).map(|_| int(r.gen_range(-2..=6))).collect();
    MilpInstance::pure_integer(format!("mixed-ip-s{seed}"), rows, c, int(ub))
}

fn batch_instance(i: u64, seed: u64) -> Result<MilpInstance> {
    let s = derive_seed(seed, i);
    let n = 2 + (i % 4) as usize;
    let m = 1 + (i % 3) as usize;
    match i % 3 {
        0 => generate(&GenSpec::RandomPacking { n, m, coeff_max: 6, ub: 3 }, s),
        1 => generate(&GenSpec::SignPattern { n, m, coeff_max: 5, ub: 2 }, s),
        _ => mixed_ip(n, m, 3, s),
    }
}

fn random_multiplier(r: &mut ChaCha8Rng, m: usize, fracs: &[Rational]) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..m)
            .map(|_| if r.gen_bool(0.6) { fracs[r.gen_range(0..fracs.len())].clone() } else { Rational::zero() })
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// CG, MIR, GMIC, subadditive and knapsack-hull cuts of one instance.
fn cuts_of(inst: &MilpInstance, seed: u64, caps: &Caps) -> Result<Vec<Cut>> {
    let mut r = rng(seed);
    let fracs = small_fractions(4);
    let m = inst.m();
    let mut out = Vec::new();
    let le = AggregateOptions {
        orientation: Some(Sense::Le),
        free_equalities: true,
    };
    let ge = AggregateOptions {
        orientation: Some(Sense::Ge),
        free_equalities: true,
    };
    for _ in 0..3 {
        let lambda = random_multiplier(&mut r, m, &fracs);
        out.push(cg_cut(&aggregate(inst, &lambda, le)?, &inst.vars)?);
    }
    for _ in 0..3 {
        let lambda = random_multiplier(&mut r, m, &fracs);
        let row = aggregate(inst, &lambda, ge)?;
        for e in [Embedding::Direct, Embedding::SlackComplement] {
            match mir_cut(&embed(&row, &inst.vars, e)?, &inst.vars, Provenance::new("mir")) {
                Ok(c) => out.push(c),
                Err(Error::MirIntegralRhs) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let (poly, nonneg) = inst.simplex_relaxation();
    let lp = solve_lp(&poly, nonneg, &inst.objective, Direction::Maximize)?;
    if let Some(tab) = &lp.tableau {
        for row in 0..tab.rows.len() {
            match gmic_from_tableau(&poly, &inst.vars, tab, row) {
                Ok(c) => out.push(c),
                Err(Error::Gmic(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let oriented = inst.rows.iter().map(|r| if r.sense == Sense::Eq { 2 } else { 1 }).sum();
    for _ in 0..2 {
        let w = (0..oriented).map(|_| fracs[r.gen_range(0..fracs.len())].clone()).collect();
        out.push(subadditive_cut(&SubadditiveFn::ceil_linear(w), inst, r.gen())?);
    }
    for row in &inst.rows {
        out.extend(knapsack_hull_cuts(row, &inst.vars, caps)?);
    }
    Ok(out)
}

fn family(c: &Cut) -> &str {
    match c.provenance.generator.as_str() {
        "cg" => "cg",
        "mir" => "mir",
        "gmic" => "gmic",
        "subadditive" => "subadditive",
        "knapsack-hull" => "knapsack-hull",
        _ => "other",
    }
}

fn cut_validity(seed: u64, caps: &Caps) -> Outcome {
    let per: Vec<(usize, Vec<(String, usize)>, usize)> = (0..120u64)
        .into_par_iter()
        .map(|i| {
            let inst = batch_instance(i, seed)?;
            let pts = integer_points(&inst)?;
            let cuts = cuts_of(&inst, derive_seed(seed ^ 0xC075, i), caps)?;
            let bad = cuts.iter().filter(|c| pts.iter().any(|p| !c.is_satisfied(p))).count();
            let fams = cuts.iter().map(|c| (family(c).to_string(), 1)).collect();
            Ok((cuts.len(), fams, bad))
        })
        .collect::<Result<_>>()?;
    let total: usize = per.iter().map(|p| p.0).sum();
    let bad: usize = per.iter().map(|p| p.2).sum();
    let mut counts = std::collections::BTreeMap::new();
    for (f, k) in per.iter().flat_map(|p| p.1.iter()) {
        *counts.entry(f.clone()).or_insert(0usize) += k;
    }
    let all_families = ["cg", "mir", "gmic", "subadditive", "knapsack-hull"]
        .iter()
        .all(|f| counts.get(*f).copied().unwrap_or(0) > 0);
    let pass = per.len() >= 100 && total >= 500 && bad == 0 && all_families;
    Ok((
        pass,
        format!("{} instances, {total} cuts {counts:?}, {bad} violated by an integer point", per.len()),
    ))
}

fn with_last_continuous(inst: &MilpInstance) -> Result<MilpInstance> {
    let mut vars = inst.vars.clone();
    if let Some(v) = vars.last_mut() {
        *v = Variable {
            kind: VarKind::Continuous,
            ..v.clone()
        };
    }
    MilpInstance::new(format!("{}-mixed", inst.name), vars, inst.rows.clone(), inst.objective.clone())
}

/// Per instance: (rows with fractional rhs and integer basic, exceptions).
fn gmic_rows(inst: &MilpInstance) -> Result<(usize, usize)> {
    let (poly, nonneg) = inst.simplex_relaxation();
    let lp = solve_lp(&poly, nonneg, &inst.objective, Direction::Maximize)?;
    let Some(tab) = &lp.tableau else {
        return Ok((0, 0));
    };
    let integer = column_integrality(&poly, &inst.vars, tab);
    let values = tab.column_values();
    let (mut seen, mut bad) = (0, 0);
    for r in 0..tab.rows.len() {
        if tab.rhs[r].is_integer() || !integer[tab.basis[r]] {
            continue;
        }
        seen += 1;
        let row = TableauRow {
            coeffs: tab.rows[r].clone(),
            integer: integer.clone(),
            rhs: tab.rhs[r].clone(),
            basic: tab.basis[r],
        };
        let c = gmic(&row)?;
        let column_ok = c.sense == Sense::Ge && rational::dot(&c.coeffs, &values).is_zero() && c.rhs.is_one();
        let s = gmic_from_tableau(&poly, &inst.vars, tab, r)?;
        let structural_ok = s.sense == Sense::Ge && &s.rhs - rational::dot(&s.coeffs, &lp.vertex) == Rational::one();
        if !(column_ok && structural_ok) {
            bad += 1;
        }
    }
    Ok((seen, bad))
}

fn gmic_separation(seed: u64) -> Outcome {
    let per: Vec<(usize, usize)> = (0..150u64)
        .into_par_iter()
        .map(|i| {
            let inst = batch_instance(i, seed)?;
            let (a, b) = gmic_rows(&inst)?;
            let (c, d) = gmic_rows(&with_last_continuous(&inst)?)?;
            Ok((a + c, b + d))
        })
        .collect::<Result<_>>()?;
    let rows: usize = per.iter().map(|p| p.0).sum();
    let bad: usize = per.iter().map(|p| p.1).sum();
    Ok((
        rows > 0 && bad == 0,
        format!("{rows} fractional tableau rows on 300 LPs, {bad} cuts not violated by exactly 1"),
    ))
}

fn sparse_distance(seed: u64, caps: &Caps) -> Outcome {
    let p = VPolytope::new(2, vec![vec![int(0), int(1)], vec![int(1), int(0)]])?;
    let d = dist_pk(&p, 1, caps)?;
    let b = sparse_distance_bound(2, 1, 2)?;
    let sq = |i: Interval| (i.lo * i.lo, i.hi * i.hi);
    let (lo8, hi8) = sq(b.bound);
    let fixture_ok = d.sq_dist == rat(1, 2) && lo8 <= 8.0 && 8.0 <= hi8 && b.certifies(&d.sq_dist);

    let per: Vec<(usize, usize)> = (0..56u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let n = 2 + (i % 7) as usize;
            let t = rng(s).gen_range(1..=10.min(1usize << n));
            let p = generate_polytope(n, t, s)?;
            let mut bad = 0;
            for k in 1..=n {
                let d = dist_pk(&p, k, caps)?;
                if !sparse_distance_bound(n, k, t)?.certifies(&d.sq_dist) {
                    bad += 1;
                }
            }
            Ok((n, bad))
        })
        .collect::<Result<_>>()?;
    let pairs: usize = per.iter().map(|p| p.0).sum();
    let bad: usize = per.iter().map(|p| p.1).sum();
    Ok((
        fixture_ok && per.len() >= 50 && bad == 0,
        format!(
            "fixture sq_dist {} with bound^2 in [{lo8:.6}, {hi8:.6}]; {} polytopes, {pairs} (P, k) pairs, {bad} uncertified",
            rational::format(&d.sq_dist),
            per.len()
        ),
    ))
}

/// Deep target point: `t` random 0/1 vertices in dimension 16, `u` with
/// integer entries in `8..=12`, sparsity 12.
pub fn sparsifier_input(i: u64, seed: u64) -> Result<SparsifierInput> {
    let s = derive_seed(seed, i);
    let t = 1 + (i % 3) as usize;
    let p = generate_polytope(16, t, s)?;
    let mut r = rng(s ^ 0x5EED);
    let u = (0..16).map(|_| int(r.gen_range(8..=12))).collect();
    SparsifierInput::new(p, u, 12)
}

fn sparsifier(seed: u64) -> Outcome {
    const INPUTS: u64 = 20;
    const TRIALS: u64 = 5;
    let per: Vec<(bool, usize, usize, usize)> = (0..INPUTS)
        .into_par_iter()
        .map(|i| {
            let inp = sparsifier_input(i, seed)?;
            let sep = Separation::of(&inp)?;
            let pre = lambda_star_sq(inp.n(), inp.k, inp.t())
                .mul(Interval::from_u64(16))
                .certainly_lt(&sep.lambda_sq);
            let (mut ok, mut invalid) = (0, 0);
            for trial in 0..TRIALS {
                let out = sparsify_cut(&inp, derive_seed(seed ^ 0xD4A3, i * TRIALS + trial), 1000)?;
                if let (Some(dir), Some(cut)) = (&out.direction, &out.cut) {
                    ok += 1;
                    let valid = check_properties(&inp, &sep, dir) == [true; 3]
                        && cut.nnz() <= inp.k
                        && inp.polytope.vertices.iter().all(|p| cut.is_satisfied(p))
                        && cut.separates(&inp.u);
                    if !valid {
                        invalid += 1;
                    }
                }
            }
            Ok((pre, ok, invalid, TRIALS as usize))
        })
        .collect::<Result<_>>()?;
    let pre = per.iter().all(|p| p.0);
    let ok: usize = per.iter().map(|p| p.1).sum();
    let invalid: usize = per.iter().map(|p| p.2).sum();
    let trials: usize = per.iter().map(|p| p.3).sum();
    Ok((
        pre && 100 * ok >= 95 * trials && invalid == 0,
        format!(
            "{INPUTS} inputs (precondition certified: {pre}), {ok}/{trials} trials accepted within 1000 draws, {invalid} invalid cuts"
        ),
    ))
}

fn two_stage(seed: u64, caps: &Caps) -> Outcome {
    let stars = (1..=5).all(|q| fractional_chromatic(&InteractionGraph::star(q), caps) == Ok(int(2)));
    let per: Vec<(usize, usize, bool)> = (0..30u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let mut r = rng(s);
            let scenarios = r.gen_range(1..=3);
            let sizes = (0..=scenarios).map(|_| r.gen_range(1..=3)).collect();
            let spec = GenSpec::TwoStage {
                sizes,
                rows_per_scenario: r.gen_range(1..=2),
                coeff_max: 5,
                ub: 1,
            };
            let inst = generate(&spec, s)?;
            let part = inst.partition.clone().ok_or_else(|| Error::Invalid("no partition".into()))?;
            let g = interaction_graph(&inst, &part)?;
            let supports = SupportList::single_nodes(part.len());
            let mut objectives = vec![inst.objective.clone()];
            objectives.extend(objective_sample(inst.n, 3, s));
            let rep = verify_eta_bound(&inst, &part, &supports, &int(2), &objectives, caps)?;
            let closure = block_closure(&inst, &part, &supports, caps)?;
            let split = two_stage_split(&inst, &part, &closure, &inst.objective)?.holds();
            Ok((rep.rows.len(), rep.violations().len(), g.is_star(0) && split))
        })
        .collect::<Result<_>>()?;
    let rows: usize = per.iter().map(|p| p.0).sum();
    let bad: usize = per.iter().map(|p| p.1).sum();
    let structure = per.iter().all(|p| p.2);
    Ok((
        stars && structure && bad == 0 && per.len() >= 30,
        format!(
            "chromatic(star) = 2: {stars}; {} instances, {rows} objectives, {bad} with z_sparse > 2 z_I; star graphs and stage split: {structure}",
            per.len()
        ),
    ))
}

fn block_eta(seed: u64, caps: &Caps) -> Outcome {
    let per: Vec<(usize, usize, bool, Rational)> = (0..30u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let mut r = rng(s);
            let spec = GenSpec::PartitionedPacking {
                blocks: r.gen_range(2..=4),
                block_size: r.gen_range(1..=2),
                rows: r.gen_range(2..=4),
                coeff_max: 5,
                ub: r.gen_range(1..=2),
            };
            let inst = generate(&spec, s)?;
            let part = inst.partition.clone().ok_or_else(|| Error::Invalid("no partition".into()))?;
            let g = interaction_graph(&inst, &part)?;
            let graph_ok = check_absent_edges(&inst, &part, &g).is_none();
            let eta = fractional_chromatic(&g, caps)?;
            let mut objectives = vec![inst.objective.clone()];
            objectives.extend(objective_sample(inst.n, 3, s));
            let rep = verify_eta_bound(&inst, &part, &SupportList::single_nodes(part.len()), &eta, &objectives, caps)?;
            Ok((rep.rows.len(), rep.violations().len(), graph_ok, eta))
        })
        .collect::<Result<_>>()?;
    let rows: usize = per.iter().map(|p| p.0).sum();
    let bad: usize = per.iter().map(|p| p.1).sum();
    let graphs = per.iter().all(|p| p.2);
    let max_eta = per.iter().map(|p| p.3.clone()).max().unwrap_or_else(Rational::zero);
    Ok((
        graphs && bad == 0 && per.len() >= 30,
        format!(
            "{} instances, {rows} objectives, eta up to {}, {bad} with z_sparse > eta z_I; graphs consistent: {graphs}",
            per.len(),
            rational::format(&max_eta)
        ),
    ))
}

/// Totals of the aggregation check over its batch.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AggregationTally {
    pub instances: usize,
    pub objectives: usize,
    /// Objectives with `z_LP > 2 z_I`.
    pub above_twice_integer: usize,
    /// Objectives breaking `z_LP >= z_1row >= z_agg_outer >= z_I`.
    pub sandwich_failures: usize,
    /// Objectives with `z_LP > 2 z_agg_outer`.
    pub above_twice_outer: usize,
    pub first_example: Option<String>,
}

/// 200 pre-processed random packing instances (`n, m <= 5`), each with its
/// own objective and the all-ones objective.
pub fn aggregation_tally(seed: u64, caps: &Caps) -> Result<AggregationTally> {
    let mut instances = Vec::new();
    let mut i = 0u64;
    while instances.len() < 200 {
        let s = derive_seed(seed, i);
        i += 1;
        let mut r = rng(s);
        let spec = GenSpec::RandomPacking {
            n: r.gen_range(2..=5),
            m: r.gen_range(2..=5),
            coeff_max: 6,
            ub: 2,
        };
        let (inst, _) = preprocess_packing(&generate(&spec, s)?)?;
        if inst.n > 0 && is_preprocessed(&inst) {
            instances.push(inst);
        }
    }
    let two = int(2);
    let parts: Vec<AggregationTally> = instances
        .par_iter()
        .map(|inst| {
            let objectives = vec![inst.objective.clone(), vec![Rational::one(); inst.n]];
            let mut t = AggregationTally {
                instances: 1,
                ..Default::default()
            };
            for row in verify_aggregation_bound(inst, &objectives, 20, seed, caps)? {
                t.objectives += 1;
                if row.z_lp > &two * &row.z_i {
                    t.above_twice_integer += 1;
                    t.first_example.get_or_insert_with(|| {
                        format!(
                            "{} objective {}: z_LP = {}, z_I = {}",
                            row.instance,
                            row.objective,
                            rational::format(&row.z_lp),
                            rational::format(&row.z_i)
                        )
                    });
                }
                if !(row.z_lp >= row.z_1row && row.z_1row >= row.z_agg_outer && row.z_agg_outer >= row.z_i) {
                    t.sandwich_failures += 1;
                }
                if row.z_lp > &two * &row.z_agg_outer {
                    t.above_twice_outer += 1;
                }
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut total = AggregationTally::default();
    for p in parts {
        total.instances += p.instances;
        total.objectives += p.objectives;
        total.above_twice_integer += p.above_twice_integer;
        total.sandwich_failures += p.sandwich_failures;
        total.above_twice_outer += p.above_twice_outer;
        if total.first_example.is_none() {
            total.first_example = p.first_example;
        }
    }
    Ok(total)
}

fn aggregation_bound(seed: u64, caps: &Caps) -> Outcome {
    let t = aggregation_tally(seed, caps)?;
    Ok((
        t.above_twice_integer == 0 && t.sandwich_failures == 0 && t.above_twice_outer == 0,
        format!(
            "{} instances, {} objectives: z_LP > 2 z_I on {} (first: {}); sandwich failures {}; z_LP > 2 z_agg_outer on {}",
            t.instances,
            t.objectives,
            t.above_twice_integer,
            t.first_example.as_deref().unwrap_or("none"),
            t.sandwich_failures,
            t.above_twice_outer
        ),
    ))
}

fn cg_gap(seed: u64) -> Outcome {
    let reports = (0..12u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let inst = generate(&GenSpec::MarketSplit { rows: 2, cols: 6 }, s)?;
            cg_1row_vs_aggregated(&inst, 60, 8, s)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut one = Vec::new();
    let mut agg = Vec::new();
    let mut dominated = true;
    for r in &reports {
        if let (Some(a), Some(b)) = (r.gap_1row(), r.gap_agg()) {
            dominated &= b >= a;
            one.push(a);
            agg.push(b);
        }
    }
    let mean = |v: &[Rational]| {
        if v.is_empty() {
            Rational::zero()
        } else {
            v.iter().fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(v.len().into())
        }
    };
    let (m1, ma) = (mean(&one), mean(&agg));
    Ok((
        one.len() >= 10 && ma > m1 && dominated,
        format!(
            "{} market-split instances with a gap: mean gap closed 1-row {:.4}, aggregated {:.4}; aggregated >= 1-row on each: {dominated}",
            one.len(),
            rational::to_f64(&m1),
            rational::to_f64(&ma)
        ),
    ))
}

fn sq_cos(a: &[Rational], b: &[Rational]) -> Rational {
    let d = rational::dot(a, b);
    &d * &d / (rational::sq_norm(a) * rational::sq_norm(b))
}

fn random_pool(r: &mut ChaCha8Rng) -> (CutPool, Vec<Rational>, Policy) {
    let n = r.gen_range(2..=5);
    let x: Vec<Rational> = (0..n).map(|_| rat(r.gen_range(0..=12), 4)).collect();
    let mut pool = CutPool::new(vec![x.clone()]);
    for _ in 0..r.gen_range(3..=12) {
        let a: Vec<Rational> = loop {
            let a: Vec<Rational> = (0..n)
                .map(|_| if r.gen_bool(0.7) { int(r.gen_range(-5..=5)) } else { Rational::zero() })
                .collect();
            if a.iter().any(|v| !v.is_zero()) {
                break a;
            }
        };
        let rhs = rational::dot(&a, &x) - rat(r.gen_range(-2..=6), 2);
        pool.push(Cut::le(a, rhs, Provenance::new("random")));
    }
    let policy = Policy {
        w_depth: Rational::one(),
        w_sparsity: rat(r.gen_range(0..=4), 4 * n as i64),
        w_dynamism: rat(r.gen_range(0..=2), 10),
        w_objective: Rational::zero(),
        tau: [rat(1, 2), rat(3, 4), rat(9, 10), Rational::one()][r.gen_range(0..4)].clone(),
        k: r.gen_range(1..=5),
        d: int(10_000),
    };
    (pool, x, policy)
}

/// Depth ranks `x1 <= 1/2` above `x1 + x2 <= 1/2` at `(1, 0)` even though
/// the second dominates the first on `x >= 0`.
pub fn dominance_inversion() -> Result<bool> {
    let x = vec![int(1), int(0)];
    let weak = Cut::le(vec![int(1), int(0)], rat(1, 2), Provenance::new("weak"));
    let strong = Cut::le(vec![int(1), int(1)], rat(1, 2), Provenance::new("strong"));
    let mut pool = CutPool::new(vec![x.clone()]);
    pool.push(strong);
    pool.push(weak);
    let policy = Policy {
        w_depth: Rational::one(),
        w_sparsity: Rational::zero(),
        w_dynamism: Rational::zero(),
        w_objective: Rational::zero(),
        tau: Rational::one(),
        k: 1,
        d: int(100),
    };
    let out = select(&pool, &x, &policy, None)?;
    Ok(out.len() == 1 && out[0].cut.provenance.generator == "weak" && out[0].sq_depth == rat(1, 4))
}

fn selection_properties(seed: u64) -> Outcome {
    let mut r = rng(seed ^ 0x5E1E);
    let (mut size_bad, mut par_bad, mut scale_bad, mut sep_bad, mut nonempty) = (0, 0, 0, 0, 0);
    const POOLS: usize = 1000;
    for _ in 0..POOLS {
        let (pool, x, policy) = random_pool(&mut r);
        let out = select(&pool, &x, &policy, None)?;
        if !out.is_empty() {
            nonempty += 1;
        }
        if out.len() > policy.k {
            size_bad += 1;
        }
        let tau_sq = &policy.tau * &policy.tau;
        for (i, a) in out.iter().enumerate() {
            if !a.cut.separates(&x) {
                sep_bad += 1;
            }
            for b in &out[i + 1..] {
                if sq_cos(&a.cut.coeffs, &b.cut.coeffs) > tau_sq {
                    par_bad += 1;
                }
            }
        }
        let mut scaled = CutPool::new(vec![x.clone()]);
        for c in &pool.cuts {
            let s = rat(r.gen_range(1..=9), r.gen_range(1..=9));
            scaled.cuts.push(c.scaled(&s)?);
        }
        let again = select(&scaled, &x, &policy, None)?;
        let idx = |v: &[crate::selection::ScoredCut]| v.iter().map(|s| s.index).collect::<Vec<_>>();
        if idx(&out) != idx(&again) {
            scale_bad += 1;
        }
    }
    let inversion = dominance_inversion()?;
    Ok((
        size_bad + par_bad + scale_bad + sep_bad == 0 && inversion,
        format!(
            "{POOLS} pools ({nonempty} with a selection): size violations {size_bad}, parallel pairs above tau^2 {par_bad}, scale changes {scale_bad}, non-separating picks {sep_bad}; dominance inversion reproduced: {inversion}"
        ),
    ))
}

fn gomory(seed: u64, _caps: &Caps) -> Outcome {
    let per: Vec<(u8, bool)> = (0..60u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(seed, i);
            let n = 2 + (i % 3) as usize;
            let m = 1 + (i % 2) as usize;
            let inst = if i % 2 == 0 {
                generate(&GenSpec::RandomPacking { n, m, coeff_max: 7, ub: 3 }, s)?
            } else {
                mixed_ip(n, m, 3, s)?
            };
            let best = integer_points(&inst)?
                .iter()
                .map(|p| inst.objective_value(p))
                .max();
            let rep = gomory_loop(&inst, DEFAULT_MAX_ITERS)?;
            Ok(match (&rep.outcome, &best) {
                (GomoryOutcome::Solved { value, point }, Some(b)) => {
                    (0, value == b && inst.is_feasible(point) && inst.objective_value(point) == *value)
                }
                (GomoryOutcome::Infeasible, None) => (0, true),
                (GomoryOutcome::CapHit { bound }, b) => (1, b.as_ref().map_or(true, |b| bound >= b)),
                _ => (0, false),
            })
        })
        .collect::<Result<_>>()?;
    let caps_hit = per.iter().filter(|p| p.0 == 1).count();
    let wrong = per.iter().filter(|p| !p.1).count();
    Ok((
        wrong == 0 && 10 * caps_hit <= per.len() && per.len() >= 50,
        format!("{} pure IPs, {wrong} disagreements with enumeration, {caps_hit} cap hits", per.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odometer_matches_hull_generators() {
        for i in 0..12 {
            let inst = batch_instance(i, 3).unwrap();
            let mut a = integer_points(&inst).unwrap();
            let mut b = crate::geometry::hull_generators(&inst, &Caps::default()).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn inversion_case() {
        assert!(dominance_inversion().unwrap());
    }

    #[test]
    fn unknown_id_fails() {
        let c = run(11, 0, &Caps::default());
        assert!(!c.pass);
        assert!(c.to_string().starts_with("[FAIL] 11"));
    }
}
