use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lp::{self, Direction, LpResult};
use crate::geometry::polytope::{Constraint, HPolytope, Sense};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    #[serde(rename = "int")]
    Integer,
    #[serde(rename = "cont")]
    Continuous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub kind: VarKind,
    pub lb: Rational,
    /// `None` is `+inf`.
    pub ub: Option<Rational>,
}

impl Variable {
    pub fn int(lb: Rational, ub: Rational) -> Self {
        Variable {
            kind: VarKind::Integer,
            lb,
            ub: Some(ub),
        }
    }

    pub fn cont(lb: Rational, ub: Rational) -> Self {
        Variable {
            kind: VarKind::Continuous,
            lb,
            ub: Some(ub),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.kind == VarKind::Integer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Packing,
    Covering,
    SignPattern,
    PureInteger,
    General,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Packing => "packing",
            Tag::Covering => "covering",
            Tag::SignPattern => "sign-pattern",
            Tag::PureInteger => "pure-integer",
            Tag::General => "general",
        }
    }

    pub fn from_name(s: &str) -> Option<Tag> {
        [
            Tag::Packing,
            Tag::Covering,
            Tag::SignPattern,
            Tag::PureInteger,
            Tag::General,
        ]
        .into_iter()
        .find(|t| t.name() == s)
    }
}

/// `max c·x  s.t.  rows,  lb <= x <= ub,  x_j integer for integer-kind j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilpInstance {
    pub name: String,
    pub n: usize,
    pub vars: Vec<Variable>,
    pub rows: Vec<Constraint>,
    pub objective: Vec<Rational>,
    pub tags: BTreeSet<Tag>,
    /// Natural block structure, when the generator knows one.
    pub partition: Option<Partition>,
}

impl MilpInstance {
    /// Build and validate; tags are computed by [`classify`](super::classify).
    pub fn new(
        name: impl Into<String>,
        vars: Vec<Variable>,
        rows: Vec<Constraint>,
        objective: Vec<Rational>,
    ) -> Result<Self> {
        let mut inst = MilpInstance {
            name: name.into(),
            n: vars.len(),
            vars,
            rows,
            objective,
            tags: BTreeSet::new(),
            partition: None,
        };
        inst.tags = super::classify(&inst);
        inst.validate()?;
        Ok(inst)
    }

    /// Pure-integer instance with every variable in `[0, ub]`.
    pub fn pure_integer(
        name: impl Into<String>,
        rows: Vec<Constraint>,
        objective: Vec<Rational>,
        ub: Rational,
    ) -> Result<Self> {
        let n = objective.len();
        let vars = vec![Variable::int(Rational::zero(), ub); n];
        Self::new(name, vars, rows, objective)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vars.len() != self.n {
            return Err(Error::Field {
                field: "vars".into(),
                msg: format!("expected {} variables, found {}", self.n, self.vars.len()),
            });
        }
        if self.objective.len() != self.n {
            return Err(Error::Field {
                field: "objective".into(),
                msg: format!("expected {} entries, found {}", self.n, self.objective.len()),
            });
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.coeffs.len() != self.n {
                return Err(Error::Field {
                    field: format!("rows[{i}].coeffs"),
                    msg: format!("expected {} entries, found {}", self.n, r.coeffs.len()),
                });
            }
        }
        for (j, v) in self.vars.iter().enumerate() {
            if let Some(ub) = &v.ub {
                if *ub < v.lb {
                    return Err(Error::Field {
                        field: format!("vars[{j}]"),
                        msg: "lower bound exceeds upper bound".into(),
                    });
                }
            }
        }
        if let Some(p) = &self.partition {
            Partition::new(p.blocks.clone(), self.n).map_err(|e| Error::Field {
                field: "partition".into(),
                msg: e.to_string(),
            })?;
        }
        let actual = super::classify(self);
        for tag in [Tag::Packing, Tag::Covering, Tag::SignPattern, Tag::PureInteger] {
            if self.tags.contains(&tag) && !actual.contains(&tag) {
                return Err(Error::Field {
                    field: "tags".into(),
                    msg: format!("tag {:?} does not hold for the data", tag.name()),
                });
            }
        }
        Ok(())
    }

    pub fn with_partition(mut self, p: Partition) -> Result<Self> {
        self.partition = Some(p);
        self.validate()?;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn has_tag(&self, tag: Tag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn is_pure_integer(&self) -> bool {
        self.vars.iter().all(Variable::is_integer)
    }

    pub fn integer_indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.vars[j].is_integer()).collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.vars.iter().all(|v| v.ub.is_some())
    }

    pub fn lower_bounds_nonneg(&self) -> bool {
        self.vars.iter().all(|v| !v.lb.is_negative())
    }

    /// Bound rows `x_j >= lb_j` (skipping zero lower bounds when `skip_zero_lb`)
    /// and `x_j <= ub_j`.
    pub fn bound_rows(&self, skip_zero_lb: bool) -> Vec<Constraint> {
        let mut out = Vec::new();
        for (j, v) in self.vars.iter().enumerate() {
            if !(skip_zero_lb && v.lb.is_zero()) {
                out.push(Constraint::ge(rational::unit(self.n, j), v.lb.clone()));
            }
            if let Some(ub) = &v.ub {
                out.push(Constraint::le(rational::unit(self.n, j), ub.clone()));
            }
        }
        out
    }

    /// The LP relaxation with every bound written as an explicit row.
    pub fn lp_polytope(&self) -> HPolytope {
        let mut rows = self.rows.clone();
        rows.extend(self.bound_rows(false));
        HPolytope { dim: self.n, rows }
    }

    /// Relaxation used with the simplex: original rows, then bound rows. When
    /// all lower bounds are nonnegative the sign constraints are implicit and
    /// zero lower bounds are omitted.
    pub fn simplex_relaxation(&self) -> (HPolytope, bool) {
        let nonneg = self.lower_bounds_nonneg();
        let mut rows = self.rows.clone();
        rows.extend(self.bound_rows(nonneg));
        (HPolytope { dim: self.n, rows }, nonneg)
    }

    /// `max c·x` over the LP relaxation intersected with `extra` rows.
    pub fn solve_relaxation(&self, c: &[Rational], extra: &[Constraint]) -> Result<LpResult> {
        let (mut poly, nonneg) = self.simplex_relaxation();
        poly.rows.extend(extra.iter().cloned());
        lp::solve_lp(&poly, nonneg, c, Direction::Maximize)
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n
            && self.vars.iter().zip(x).all(|(v, xj)| {
                *xj >= v.lb
                    && v.ub.as_ref().map_or(true, |u| xj <= u)
                    && (!v.is_integer() || xj.is_integer())
            })
            && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    /// Rows as `<=` rows; equality rows give two.
    pub fn le_rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        self.rows.iter().flat_map(|r| r.as_le_rows()).collect()
    }

    pub fn has_equality(&self) -> bool {
        self.rows.iter().any(|r| r.sense == Sense::Eq)
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        rational::dot(&self.objective, x)
    }
}

/// Disjoint nonempty blocks covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invalid(format!("partition block {b} is empty")));
            }
            for &j in block {
                if j >= n {
                    return Err(Error::Invalid(format!("partition index {j} out of range")));
                }
                if seen[j] {
                    return Err(Error::Invalid(format!("partition index {j} repeated")));
                }
                seen[j] = true;
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("partition misses index {j}")));
        }
        Ok(Partition { blocks })
    }

    pub fn single_block(n: usize) -> Self {
        Partition {
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every variable.
    pub fn owner(&self, n: usize) -> Vec<usize> {
        let mut o = vec![0; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &j in block {
                o[j] = b;
            }
        }
        o
    }

    /// Sorted union of the given blocks.
    pub fn union(&self, nodes: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = nodes.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}
