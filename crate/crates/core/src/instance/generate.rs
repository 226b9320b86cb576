//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed (ChaCha8 stream).

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{MilpInstance, Partition, Variable};
use crate::error::{Error, Result};
use crate::geometry::polytope::{Constraint, Sense, VPolytope};
use crate::rational::{int, rat, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-task seed derived from a master seed (splitmix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator family and its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    /// Two-stage stochastic packing program: a first-stage block and one block
    /// per scenario; each scenario row couples the first stage with its own
    /// block only. `sizes[0]` is the first-stage size.
    #[serde(rename = "2ssp")]
    TwoStage {
        sizes: Vec<usize>,
        rows_per_scenario: usize,
        coeff_max: i64,
        ub: i64,
    },
    /// Rows `a x + s+ - s- = floor(sum(a) / 2)`, `a` uniform in `0..=99`,
    /// binary `x`, integer slacks; maximize `-sum(s+ + s-)`.
    MarketSplit { rows: usize, cols: usize },
    /// Equality rows with coefficients in `0..=coeff_max`, `x` in `[0, ub]`,
    /// rhs uniform in `[0, sum(a) * ub]`, penalized slacks as in market split.
    RandomEquality {
        rows: usize,
        cols: usize,
        coeff_max: i64,
        ub: i64,
    },
    /// Packing rows with coefficients in `0..=coeff_max`, rhs uniform in
    /// `[1, max(1, row sum)]`, objective in `1..=coeff_max`.
    RandomPacking {
        n: usize,
        m: usize,
        coeff_max: i64,
        ub: i64,
    },
    /// Packing instance over `blocks` blocks of `block_size` variables; each
    /// row touches one or two random blocks.
    PartitionedPacking {
        blocks: usize,
        block_size: usize,
        rows: usize,
        coeff_max: i64,
        ub: i64,
    },
    /// `<=` rows where column `j` has a fixed random sign.
    SignPattern {
        n: usize,
        m: usize,
        coeff_max: i64,
        ub: i64,
    },
    /// `x` integer in `[0,1]`, `y` continuous in `[0,1]`, rows `x - y <= 0`,
    /// `y <= 1/2`, objective `q x + y`.
    OneRowGap { q: i64 },
}

impl GenSpec {
    /// Spec from a kind name and `key=value` overrides on documented defaults.
    pub fn from_kind(kind: &str, params: &[(String, String)]) -> Result<GenSpec> {
        let mut spec = match kind {
            "2ssp" => GenSpec::TwoStage {
                sizes: vec![2, 2, 2],
                rows_per_scenario: 2,
                coeff_max: 5,
                ub: 1,
            },
            "market-split" => GenSpec::MarketSplit { rows: 2, cols: 6 },
            "random-equality" => GenSpec::RandomEquality {
                rows: 2,
                cols: 5,
                coeff_max: 20,
                ub: 3,
            },
            "random-packing" => GenSpec::RandomPacking {
                n: 3,
                m: 2,
                coeff_max: 5,
                ub: 3,
            },
            "partitioned-packing" => GenSpec::PartitionedPacking {
                blocks: 3,
                block_size: 2,
                rows: 3,
                coeff_max: 5,
                ub: 2,
            },
            "sign-pattern" => GenSpec::SignPattern {
                n: 3,
                m: 2,
                coeff_max: 5,
                ub: 3,
            },
            "one-row-gap" => GenSpec::OneRowGap { q: 3 },
            other => return Err(Error::Invalid(format!("unknown generator kind {other:?}"))),
        };
        for (key, value) in params {
            spec.set(key, value)?;
        }
        spec.check()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Invalid(format!("bad value {value:?} for parameter {key:?}"));
        let num = || value.trim().parse::<i64>().map_err(|_| bad());
        let size = || value.trim().parse::<usize>().map_err(|_| bad());
        let unknown = || Error::Invalid(format!("unknown parameter {key:?}"));
        match self {
            GenSpec::TwoStage {
                sizes,
                rows_per_scenario,
                coeff_max,
                ub,
            } => match key {
                "sizes" => {
                    *sizes = value
                        .split([',', 'x', ' '])
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<usize>().map_err(|_| bad()))
                        .collect::<Result<_>>()?
                }
                "k" => {
                    let k = size()?;
                    let s = sizes.get(1).copied().unwrap_or(2);
                    sizes.resize(k + 1, s);
                }
                "rows" => *rows_per_scenario = size()?,
                "coeff_max" => *coeff_max = num()?,
                "ub" => *ub = num()?,
                _ => return Err(unknown()),
            },
            GenSpec::MarketSplit { rows, cols } => match key {
                "rows" | "m" => *rows = size()?,
                "cols" | "n" => *cols = size()?,
                _ => return Err(unknown()),
            },
            GenSpec::RandomEquality {
                rows,
                cols,
                coeff_max,
                ub,
            } => match key {
                "rows" | "m" => *rows = size()?,
                "cols" | "n" => *cols = size()?,
                "coeff_max" => *coeff_max = num()?,
                "ub" => *ub = num()?,
                _ => return Err(unknown()),
            },
            GenSpec::RandomPacking {
                n,
                m,
                coeff_max,
                ub,
            }
            | GenSpec::SignPattern {
                n,
                m,
                coeff_max,
                ub,
            } => match key {
                "n" => *n = size()?,
                "m" => *m = size()?,
                "coeff_max" => *coeff_max = num()?,
                "ub" => *ub = num()?,
                _ => return Err(unknown()),
            },
            GenSpec::PartitionedPacking {
                blocks,
                block_size,
                rows,
                coeff_max,
                ub,
            } => match key {
                "blocks" | "q" => *blocks = size()?,
                "block_size" => *block_size = size()?,
                "rows" | "m" => *rows = size()?,
                "coeff_max" => *coeff_max = num()?,
                "ub" => *ub = num()?,
                _ => return Err(unknown()),
            },
            GenSpec::OneRowGap { q } => match key {
                "q" => *q = num()?,
                _ => return Err(unknown()),
            },
        }
        Ok(())
    }

    fn check(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Invalid(msg.to_string()));
        match self {
            GenSpec::TwoStage {
                sizes,
                rows_per_scenario,
                coeff_max,
                ub,
            } => {
                if sizes.len() < 2 || sizes.len() > 7 {
                    return fail("2ssp needs between 1 and 6 scenarios");
                }
                if sizes.iter().any(|&s| s == 0 || s > 4) {
                    return fail("2ssp block sizes must lie in 1..=4");
                }
                if *rows_per_scenario == 0 || *coeff_max < 1 || *ub < 1 {
                    return fail("2ssp needs rows >= 1, coeff_max >= 1, ub >= 1");
                }
            }
            GenSpec::MarketSplit { rows, cols } => {
                if *rows == 0 || *cols == 0 || *cols > 12 {
                    return fail("market split needs rows >= 1 and 1 <= cols <= 12");
                }
            }
            GenSpec::RandomEquality {
                rows,
                cols,
                coeff_max,
                ub,
            } => {
                if *rows == 0 || *cols == 0 || *coeff_max < 1 || *ub < 1 {
                    return fail("random equality needs positive rows, cols, coeff_max, ub");
                }
            }
            GenSpec::RandomPacking {
                n,
                m,
                coeff_max,
                ub,
            }
            | GenSpec::SignPattern {
                n,
                m,
                coeff_max,
                ub,
            } => {
                if *n == 0 || *m == 0 || *coeff_max < 1 || *ub < 1 {
                    return fail("n, m, coeff_max and ub must be positive");
                }
            }
            GenSpec::PartitionedPacking {
                blocks,
                block_size,
                rows,
                coeff_max,
                ub,
            } => {
                if *blocks == 0 || *block_size == 0 || *rows == 0 || *coeff_max < 1 || *ub < 1 {
                    return fail("partitioned packing parameters must be positive");
                }
            }
            GenSpec::OneRowGap { q } => {
                if *q < 0 {
                    return fail("one-row-gap needs q >= 0");
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GenSpec::TwoStage { .. } => "2ssp",
            GenSpec::MarketSplit { .. } => "market-split",
            GenSpec::RandomEquality { .. } => "random-equality",
            GenSpec::RandomPacking { .. } => "random-packing",
            GenSpec::PartitionedPacking { .. } => "partitioned-packing",
            GenSpec::SignPattern { .. } => "sign-pattern",
            GenSpec::OneRowGap { .. } => "one-row-gap",
        }
    }
}

fn nonzero_coeff(rng: &mut ChaCha8Rng, max: i64) -> Rational {
    int(rng.gen_range(1..=max))
}

fn int_vars(n: usize, ub: i64) -> Vec<Variable> {
    vec![Variable::int(int(0), int(ub)); n]
}

pub fn generate(spec: &GenSpec, seed: u64) -> Result<MilpInstance> {
    spec.check()?;
    let mut r = rng(seed);
    let name = format!("{}-s{seed}", spec.kind());
    match spec {
        GenSpec::TwoStage {
            sizes,
            rows_per_scenario,
            coeff_max,
            ub,
        } => two_stage(&mut r, name, sizes, *rows_per_scenario, *coeff_max, *ub),
        GenSpec::MarketSplit { rows, cols } => {
            let a: Vec<Vec<i64>> = (0..*rows)
                .map(|_| (0..*cols).map(|_| r.gen_range(0..=99)).collect())
                .collect();
            let d: Vec<i64> = a.iter().map(|row| row.iter().sum::<i64>() / 2).collect();
            slack_equalities(name, &a, &d, 1)
        }
        GenSpec::RandomEquality {
            rows,
            cols,
            coeff_max,
            ub,
        } => {
            let a: Vec<Vec<i64>> = (0..*rows)
                .map(|_| (0..*cols).map(|_| r.gen_range(0..=*coeff_max)).collect())
                .collect();
            let d: Vec<i64> = a
                .iter()
                .map(|row| r.gen_range(0..=row.iter().sum::<i64>() * ub))
                .collect();
            slack_equalities(name, &a, &d, *ub)
        }
        GenSpec::RandomPacking {
            n,
            m,
            coeff_max,
            ub,
        } => {
            let rows: Vec<Constraint> = (0..*m)
                .map(|_| {
                    let coeffs: Vec<i64> = (0..*n).map(|_| r.gen_range(0..=*coeff_max)).collect();
                    let sum: i64 = coeffs.iter().sum();
                    let b = r.gen_range(1..=sum.max(1));
                    Constraint::le(coeffs.into_iter().map(int).collect(), int(b))
                })
                .collect();
            let c = (0..*n).map(|_| nonzero_coeff(&mut r, *coeff_max)).collect();
            MilpInstance::new(name, int_vars(*n, *ub), rows, c)
        }
        GenSpec::PartitionedPacking {
            blocks,
            block_size,
            rows,
            coeff_max,
            ub,
        } => {
            let n = blocks * block_size;
            let mut out = Vec::with_capacity(*rows);
            for _ in 0..*rows {
                let touch = if *blocks > 1 && r.gen_bool(0.5) { 2 } else { 1 };
                let mut chosen: Vec<usize> = (0..*blocks).collect();
                chosen.shuffle(&mut r);
                chosen.truncate(touch);
                let mut coeffs = vec![int(0); n];
                let mut sum = 0;
                for &b in &chosen {
                    let anchor = b * block_size + r.gen_range(0..*block_size);
                    for j in b * block_size..(b + 1) * block_size {
                        let v = if j == anchor {
                            r.gen_range(1..=*coeff_max)
                        } else {
                            r.gen_range(0..=*coeff_max)
                        };
                        sum += v;
                        coeffs[j] = int(v);
                    }
                }
                let b = r.gen_range(1..=sum.max(1));
                out.push(Constraint::le(coeffs, int(b)));
            }
            let c = (0..n).map(|_| nonzero_coeff(&mut r, *coeff_max)).collect();
            let partition = Partition {
                blocks: (0..*blocks)
                    .map(|b| (b * block_size..(b + 1) * block_size).collect())
                    .collect(),
            };
            MilpInstance::new(name, int_vars(n, *ub), out, c)?.with_partition(partition)
        }
        GenSpec::SignPattern {
            n,
            m,
            coeff_max,
            ub,
        } => {
            let signs: Vec<i64> = (0..*n).map(|_| if r.gen_bool(0.5) { 1 } else { -1 }).collect();
            let rows: Vec<Constraint> = (0..*m)
                .map(|_| {
                    let coeffs: Vec<i64> = signs
                        .iter()
                        .map(|s| s * r.gen_range(0..=*coeff_max))
                        .collect();
                    let pos: i64 = coeffs.iter().filter(|&&a| a > 0).sum();
                    let b = r.gen_range(0..=pos.max(1));
                    Constraint::le(coeffs.into_iter().map(int).collect(), int(b))
                })
                .collect();
            let c = (0..*n).map(|_| int(r.gen_range(0..=*coeff_max))).collect();
            MilpInstance::new(name, int_vars(*n, *ub), rows, c)
        }
        GenSpec::OneRowGap { q } => one_row_gap(*q),
    }
}

fn two_stage(
    r: &mut ChaCha8Rng,
    name: String,
    sizes: &[usize],
    rows_per_scenario: usize,
    coeff_max: i64,
    ub: i64,
) -> Result<MilpInstance> {
    let n: usize = sizes.iter().sum();
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        offsets.push(acc);
        acc += s;
    }
    let blocks: Vec<Vec<usize>> = sizes
        .iter()
        .zip(&offsets)
        .map(|(&s, &o)| (o..o + s).collect())
        .collect();
    let mut rows = Vec::new();
    for scenario in 1..sizes.len() {
        for k in 0..rows_per_scenario {
            let mut coeffs = vec![int(0); n];
            let mut sum = 0;
            for block in [&blocks[0], &blocks[scenario]] {
                // The first row of every scenario touches both blocks so the
                // star structure is always present.
                let anchor = if k == 0 { Some(block[r.gen_range(0..block.len())]) } else { None };
                for &j in block {
                    let v = if Some(j) == anchor {
                        r.gen_range(1..=coeff_max)
                    } else {
                        r.gen_range(0..=coeff_max)
                    };
                    sum += v;
                    coeffs[j] = int(v);
                }
            }
            let rhs = r.gen_range(1..=sum.max(1));
            rows.push(Constraint::le(coeffs, int(rhs)));
        }
    }
    let c = (0..n).map(|_| nonzero_coeff(r, coeff_max)).collect();
    MilpInstance::new(name, int_vars(n, ub), rows, c)?.with_partition(Partition { blocks })
}

/// Rows `a_i x + s+_i - s-_i = d_i` with `x` in `[0, ub]`, slacks in
/// `[0, max(d_i, sum(a_i) ub - d_i)]`; maximize `-sum(s+ + s-)`.
fn slack_equalities(name: String, a: &[Vec<i64>], d: &[i64], ub: i64) -> Result<MilpInstance> {
    let m = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let n = cols + 2 * m;
    let mut vars = int_vars(cols, ub);
    let mut rows = Vec::with_capacity(m);
    for (row, &di) in a.iter().zip(d) {
        let span = (row.iter().sum::<i64>() * ub - di).max(di).max(0);
        vars.push(Variable::int(int(0), int(span)));
        vars.push(Variable::int(int(0), int(span)));
    }
    for (i, (row, &di)) in a.iter().zip(d).enumerate() {
        let mut coeffs: Vec<Rational> = row.iter().map(|&v| int(v)).collect();
        coeffs.resize(n, int(0));
        coeffs[cols + 2 * i] = int(1);
        coeffs[cols + 2 * i + 1] = int(-1);
        rows.push(Constraint::new(coeffs, Sense::Eq, int(di)));
    }
    let mut c = vec![int(0); cols];
    c.resize(n, int(-1));
    MilpInstance::new(name, vars, rows, c)
}

pub fn one_row_gap(q: i64) -> Result<MilpInstance> {
    MilpInstance::new(
        format!("one-row-gap-q{q}"),
        vec![Variable::int(int(0), int(1)), Variable::cont(int(0), int(1))],
        vec![
            Constraint::le(vec![int(1), int(-1)], int(0)),
            Constraint::le(vec![int(0), int(1)], rat(1, 2)),
        ],
        vec![int(q), int(1)],
    )
}

/// `t` distinct random 0/1 points in dimension `n` (`t <= 2^n`).
pub fn generate_polytope(n: usize, t: usize, seed: u64) -> Result<VPolytope> {
    if n == 0 || n > 20 || t == 0 || (t as u64) > (1u64 << n) {
        return Err(Error::Invalid(format!(
            "need 1 <= n <= 20 and 1 <= t <= 2^n (n={n}, t={t})"
        )));
    }
    let mut r = rng(seed);
    let mut seen = BTreeSet::new();
    let mut vertices = Vec::with_capacity(t);
    while vertices.len() < t {
        let bits: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        if seen.insert(bits.clone()) {
            vertices.push(bits.into_iter().map(|b| int(b as i64)).collect());
        }
    }
    VPolytope::new(n, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{io, preprocess_packing, Tag};

    #[test]
    fn deterministic() {
        for kind in [
            "2ssp",
            "market-split",
            "random-equality",
            "random-packing",
            "partitioned-packing",
            "sign-pattern",
            "one-row-gap",
        ] {
            let spec = GenSpec::from_kind(kind, &[]).unwrap();
            let a = io::to_json(&generate(&spec, 7).unwrap());
            let b = io::to_json(&generate(&spec, 7).unwrap());
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn packing_preprocess_postcondition() {
        let spec = GenSpec::from_kind(
            "random-packing",
            &[("n".into(), "3".into()), ("m".into(), "2".into())],
        )
        .unwrap();
        for seed in 0..20 {
            let inst = generate(&spec, seed).unwrap();
            assert!(inst.has_tag(Tag::Packing));
            let (p, _) = preprocess_packing(&inst).unwrap();
            assert!(crate::instance::is_preprocessed(&p));
        }
    }

    #[test]
    fn generated_tags() {
        let sp = generate(&GenSpec::from_kind("sign-pattern", &[]).unwrap(), 3).unwrap();
        assert!(sp.has_tag(Tag::SignPattern));
        let ms = generate(&GenSpec::from_kind("market-split", &[]).unwrap(), 3).unwrap();
        assert!(ms.has_tag(Tag::General) && ms.has_tag(Tag::PureInteger));
        let ts = generate(&GenSpec::from_kind("2ssp", &[]).unwrap(), 3).unwrap();
        assert!(ts.has_tag(Tag::Packing));
        assert_eq!(ts.partition.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn params_validated() {
        assert!(GenSpec::from_kind("2ssp", &[("k".into(), "7".into())]).is_err());
        assert!(GenSpec::from_kind("nope", &[]).is_err());
        assert!(GenSpec::from_kind("random-packing", &[("zz".into(), "1".into())]).is_err());
    }

    #[test]
    fn polytope_points_distinct() {
        let p = generate_polytope(4, 10, 1).unwrap();
        let set: BTreeSet<_> = p.vertices.iter().collect();
        assert_eq!(set.len(), 10);
        assert!(generate_polytope(2, 5, 1).is_err());
    }
}
