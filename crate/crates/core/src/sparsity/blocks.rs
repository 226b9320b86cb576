//! Column block-sparse closures of packing instances.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::closure::lifted_projection_rows;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::hull::in_hull;
use crate::geometry::integer_hull::{hull_generators, max_over};
use crate::geometry::lp::LpStatus;
use crate::geometry::polytope::Constraint;
use crate::instance::{MilpInstance, Partition, Tag};
use crate::rational::{self, Rational};

/// Allowed cut supports, as sets of partition blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportList {
    pub sets: Vec<Vec<usize>>,
}

impl SupportList {
    pub fn new(sets: Vec<Vec<usize>>, nodes: usize) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Invalid("support list is empty".into()));
        }
        let mut out = Vec::with_capacity(sets.len());
        for mut s in sets {
            if s.is_empty() {
                return Err(Error::Invalid("support set is empty".into()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= nodes) {
                return Err(Error::Invalid(format!("support node {v} out of range")));
            }
            s.sort_unstable();
            s.dedup();
            out.push(s);
        }
        Ok(SupportList { sets: out })
    }

    pub fn single_nodes(nodes: usize) -> Self {
        SupportList {
            sets: (0..nodes).map(|v| vec![v]).collect(),
        }
    }

    pub fn full(nodes: usize) -> Self {
        SupportList {
            sets: vec![(0..nodes).collect()],
        }
    }

    pub fn is_single_node(&self) -> bool {
        self.sets.iter().all(|s| s.len() == 1)
    }
}

/// The closure as extra rows on top of the LP relaxation, plus the integer
/// hull generators used to build it.
#[derive(Debug, Clone)]
pub struct BlockClosure {
    pub rows: Vec<Constraint>,
    pub generators: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockValue {
    #[serde(with = "rational::serde_str")]
    pub z_sparse: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_i: Rational,
    /// Optimal point of the sparse closure.
    #[serde(with = "rational::serde_str::vec")]
    pub point: Vec<Rational>,
}

/// For each support `S`, lift the valid inequalities of the integer hull
/// projected onto the union of the blocks in `S`.
pub fn block_closure(
    inst: &MilpInstance,
    partition: &Partition,
    supports: &SupportList,
    caps: &Caps,
) -> Result<BlockClosure> {
    if !inst.has_tag(Tag::Packing) {
        return Err(Error::WrongClass("packing"));
    }
    if !inst.is_bounded() {
        return Err(Error::Invalid("block closures need bounded variables".into()));
    }
    let partition = Partition::new(partition.blocks.clone(), inst.n)?;
    let supports = SupportList::new(supports.sets.clone(), partition.len())?;
    let generators = hull_generators(inst, caps)?;
    if generators.is_empty() {
        return Err(Error::Empty);
    }
    let mut rows = Vec::new();
    for s in &supports.sets {
        let cols = partition.union(s);
        caps.check_dim(cols.len())?;
        rows.extend(lifted_projection_rows(&generators, &cols, inst.n, caps)?);
    }
    Ok(BlockClosure { rows, generators })
}

impl BlockClosure {
    pub fn value(&self, inst: &MilpInstance, c: &[Rational]) -> Result<BlockValue> {
        if c.len() != inst.n {
            return Err(Error::DimensionMismatch {
                expected: inst.n,
                got: c.len(),
            });
        }
        if c.iter().any(Signed::is_negative) {
            return Err(Error::Invalid("objective must be nonnegative".into()));
        }
        let lp = inst.solve_relaxation(c, &self.rows)?;
        if lp.status != LpStatus::Optimal {
            return Err(Error::Invalid(format!("sparse closure LP ended {:?}", lp.status)));
        }
        Ok(BlockValue {
            z_sparse: lp.value,
            z_i: max_over(&self.generators, c).expect("nonempty"),
            point: lp.vertex,
        })
    }
}

pub fn block_sparse_closure_value(
    inst: &MilpInstance,
    partition: &Partition,
    supports: &SupportList,
    c: &[Rational],
    caps: &Caps,
) -> Result<BlockValue> {
    block_closure(inst, partition, supports, caps)?.value(inst, c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaRow {
    pub objective: usize,
    #[serde(with = "rational::serde_str")]
    pub z_sparse: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_i: Rational,
    #[serde(with = "rational::serde_str")]
    pub eta: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaReport {
    pub instance: String,
    pub rows: Vec<EtaRow>,
}

impl EtaReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn violations(&self) -> Vec<&EtaRow> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }
}

/// Check `z_sparse <= eta · z_I` for every objective.
pub fn verify_eta_bound(
    inst: &MilpInstance,
    partition: &Partition,
    supports: &SupportList,
    eta: &Rational,
    objectives: &[Vec<Rational>],
    caps: &Caps,
) -> Result<EtaReport> {
    let closure = block_closure(inst, partition, supports, caps)?;
    let mut rows = Vec::with_capacity(objectives.len());
    for (i, c) in objectives.iter().enumerate() {
        let v = closure.value(inst, c)?;
        rows.push(EtaRow {
            objective: i,
            pass: v.z_sparse <= eta * &v.z_i,
            z_sparse: v.z_sparse,
            z_i: v.z_i,
            eta: eta.clone(),
        });
    }
    Ok(EtaReport {
        instance: inst.name.clone(),
        rows,
    })
}

/// Split of the sparse-closure optimum of a two-stage instance into its
/// first-stage part `(x0, 0, …, 0)` and second-stage part `(0, x1, …, xk)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageSplit {
    pub first_feasible: bool,
    pub second_feasible: bool,
    #[serde(with = "rational::serde_str")]
    pub first_value: Rational,
    #[serde(with = "rational::serde_str")]
    pub second_value: Rational,
    #[serde(with = "rational::serde_str")]
    pub z_sparse: Rational,
}

impl StageSplit {
    pub fn holds(&self) -> bool {
        self.first_feasible && self.second_feasible && &self.first_value + &self.second_value >= self.z_sparse
    }
}

/// Both halves are checked for membership in the integer hull; the
/// generators with the other half zero suffice since a point with a zero
/// half can only be a combination of such generators.
pub fn two_stage_split(
    inst: &MilpInstance,
    partition: &Partition,
    closure: &BlockClosure,
    c: &[Rational],
) -> Result<StageSplit> {
    let v = closure.value(inst, c)?;
    let first: Vec<bool> = {
        let mut f = vec![false; inst.n];
        for &j in &partition.blocks[0] {
            f[j] = true;
        }
        f
    };
    let part = |keep_first: bool| -> Vec<Rational> {
        v.point
            .iter()
            .enumerate()
            .map(|(j, x)| if first[j] == keep_first { x.clone() } else { Rational::zero() })
            .collect()
    };
    let zero_outside = |keep_first: bool| -> Vec<Vec<Rational>> {
        closure
            .generators
            .iter()
            .filter(|g| (0..inst.n).all(|j| first[j] == keep_first || g[j].is_zero()))
            .cloned()
            .collect()
    };
    let (a, b) = (part(true), part(false));
    Ok(StageSplit {
        first_feasible: in_hull(&zero_outside(true), &a)?,
        second_feasible: in_hull(&zero_outside(false), &b)?,
        first_value: rational::dot(c, &a),
        second_value: rational::dot(c, &b),
        z_sparse: v.z_sparse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::instance::generate::{generate, GenSpec};
    use crate::rational::int;
    use crate::sparsity::{fractional_chromatic, interaction_graph};

    fn separable() -> MilpInstance {
        MilpInstance::pure_integer(
            "sep",
            vec![
                Constraint::le(vec![int(2), int(2), int(0), int(0)], int(3)),
                Constraint::le(vec![int(0), int(0), int(2), int(3)], int(4)),
            ],
            vec![int(1), int(1), int(1), int(1)],
            int(1),
        )
        .unwrap()
    }

    #[test]
    fn separable_blocks_close_the_gap() {
        let inst = separable();
        let p = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        let v = block_sparse_closure_value(&inst, &p, &SupportList::single_nodes(2), &inst.objective, &Caps::default())
            .unwrap();
        assert_eq!(v.z_sparse, v.z_i);
        assert_eq!(v.z_i, int(2));
    }

    #[test]
    fn full_support_closes_the_gap() {
        let inst = separable();
        let p = Partition::new(vec![vec![0], vec![1], vec![2], vec![3]], 4).unwrap();
        let c = vec![int(3), int(1), int(2), int(5)];
        let v = block_sparse_closure_value(&inst, &p, &SupportList::full(4), &c, &Caps::default()).unwrap();
        assert_eq!(v.z_sparse, v.z_i);
    }

    #[test]
    fn two_stage_within_factor_two() {
        let spec = GenSpec::TwoStage {
            sizes: vec![2, 2, 2],
            rows_per_scenario: 2,
            coeff_max: 5,
            ub: 1,
        };
        for seed in 0..4 {
            let inst = generate(&spec, seed).unwrap();
            let p = inst.partition.clone().unwrap();
            let g = interaction_graph(&inst, &p).unwrap();
            assert!(g.is_star(0));
            let eta = fractional_chromatic(&g, &Caps::default()).unwrap();
            assert_eq!(eta, int(2));
            let supports = SupportList::single_nodes(p.len());
            let c: Vec<Rational> = inst.objective.iter().map(|x| x.abs()).collect();
            let report =
                verify_eta_bound(&inst, &p, &supports, &eta, &[c.clone(), rational::zeros(inst.n)], &Caps::default())
                    .unwrap();
            assert!(report.all_pass(), "{report:?}");
            let closure = block_closure(&inst, &p, &supports, &Caps::default()).unwrap();
            assert!(two_stage_split(&inst, &p, &closure, &c).unwrap().holds());
        }
    }

    #[test]
    fn negative_objective_rejected() {
        let inst = separable();
        let p = Partition::single_block(4);
        let c = vec![int(-1), int(0), int(0), int(0)];
        assert!(block_sparse_closure_value(&inst, &p, &SupportList::full(1), &c, &Caps::default()).is_err());
    }

    #[test]
    fn support_validation() {
        assert!(SupportList::new(vec![], 2).is_err());
        assert!(SupportList::new(vec![vec![]], 2).is_err());
        assert!(SupportList::new(vec![vec![2]], 2).is_err());
    }
}
