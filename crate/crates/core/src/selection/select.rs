use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::measures::{dynamism, sq_cosine, sq_depth, sq_parallelism};
use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Selection policy. JSON keys: `w_depth`, `w_sparsity`, `w_dynamism`, `tau`,
/// `K`, `D`, and optionally `w_objective` (default 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    #[serde(with = "rational::serde_str")]
    pub w_depth: Rational,
    #[serde(with = "rational::serde_str")]
    pub w_sparsity: Rational,
    #[serde(with = "rational::serde_str")]
    pub w_dynamism: Rational,
    /// Weight of the squared parallelism with the objective.
    #[serde(with = "rational::serde_str", default = "Rational::zero")]
    pub w_objective: Rational,
    #[serde(with = "rational::serde_str")]
    pub tau: Rational,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "D", with = "rational::serde_str")]
    pub d: Rational,
}

impl Policy {
    /// Weights `(1, 1/n, 0)`, `tau = 9/10`, `K = 10`, `D = 10^4`.
    pub fn default_for(n: usize) -> Policy {
        Policy {
            w_depth: Rational::one(),
            w_sparsity: rational::rat(1, n.max(1) as i64),
            w_dynamism: Rational::zero(),
            w_objective: Rational::zero(),
            tau: rational::rat(9, 10),
            k: 10,
            d: rational::int(10_000),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Invalid("policy K must be at least 1".into()));
        }
        if self.tau.is_negative() || self.tau > Rational::one() {
            return Err(Error::Invalid("policy tau must lie in [0, 1]".into()));
        }
        if self.d < Rational::one() {
            return Err(Error::Invalid("policy D must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Policy> {
        let p: Policy = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }
}

/// Cuts plus the fractional points they were generated against. Every cut
/// separates at least one recorded point.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutPool {
    pub cuts: Vec<Cut>,
    pub points: Vec<Vec<Rational>>,
}

impl CutPool {
    pub fn new(points: Vec<Vec<Rational>>) -> Self {
        CutPool {
            cuts: Vec::new(),
            points,
        }
    }

    /// Add `cut` if it separates some recorded point; returns whether added.
    pub fn push(&mut self, cut: Cut) -> bool {
        if self.points.iter().any(|x| cut.separates(x)) {
            self.cuts.push(cut);
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoredCut {
    pub cut: Cut,
    /// Position in the pool, the tie-breaker.
    pub index: usize,
    #[serde(with = "rational::serde_str")]
    pub sq_depth: Rational,
    #[serde(with = "rational::serde_str")]
    pub max_sq_parallelism_to_selected: Rational,
    #[serde(with = "rational::serde_str")]
    pub dynamism: Rational,
    pub sparsity: usize,
    #[serde(with = "rational::serde_str")]
    pub composite: Rational,
}

/// Score one cut against `x`.
pub fn score(
    cut: &Cut,
    index: usize,
    x: &[Rational],
    policy: &Policy,
    objective: Option<&[Rational]>,
) -> Result<ScoredCut> {
    let depth = sq_depth(cut, x)?;
    let dyn_ = dynamism(cut)?;
    let sparsity = cut.nnz();
    let mut composite = &policy.w_depth * &depth
        - &policy.w_sparsity * Rational::from_integer(sparsity.into())
        - &policy.w_dynamism * (&dyn_ - Rational::one());
    if !policy.w_objective.is_zero() {
        if let Some(c) = objective {
            if !rational::sq_norm(c).is_zero() {
                composite += &policy.w_objective * sq_cosine(&cut.coeffs, c)?;
            }
        }
    }
    Ok(ScoredCut {
        cut: cut.clone(),
        index,
        sq_depth: depth,
        max_sq_parallelism_to_selected: Rational::zero(),
        dynamism: dyn_,
        sparsity,
        composite,
    })
}

/// Filter, rank and pick cuts:
/// 1. keep cuts separating `x`;
/// 2. drop cuts with dynamism above `D`;
/// 3. scan by decreasing composite score (ties by pool order), skipping any
///    cut whose squared parallelism with an already chosen cut exceeds
///    `tau^2`, until `K` cuts are chosen.
pub fn select(
    pool: &CutPool,
    x: &[Rational],
    policy: &Policy,
    objective: Option<&[Rational]>,
) -> Result<Vec<ScoredCut>> {
    policy.validate()?;
    let mut candidates = Vec::new();
    for (i, cut) in pool.cuts.iter().enumerate() {
        if !cut.separates(x) {
            continue;
        }
        let s = score(cut, i, x, policy, objective)?;
        if s.dynamism > policy.d {
            continue;
        }
        candidates.push(s);
    }
    candidates.sort_by(|a, b| b.composite.cmp(&a.composite).then(a.index.cmp(&b.index)));
    let tau_sq = &policy.tau * &policy.tau;
    let mut chosen: Vec<ScoredCut> = Vec::new();
    for mut s in candidates {
        if chosen.len() == policy.k {
            break;
        }
        let mut worst = Rational::zero();
        for c in &chosen {
            let p = sq_parallelism(&s.cut, &c.cut)?;
            if p > worst {
                worst = p;
            }
        }
        if worst > tau_sq {
            continue;
        }
        s.max_sq_parallelism_to_selected = worst;
        chosen.push(s);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::Provenance;
    use crate::rational::{int, rat};

    fn cut(a: &[i64], b: i64) -> Cut {
        Cut::le(a.iter().map(|&v| int(v)).collect(), int(b), Provenance::new("t"))
    }

    fn depth_only(k: usize) -> Policy {
        Policy {
            w_depth: int(1),
            w_sparsity: int(0),
            w_dynamism: int(0),
            w_objective: int(0),
            tau: rat(99, 100),
            k,
            d: int(100),
        }
    }

    #[test]
    fn single_cut() {
        let x = vec![int(1), int(1)];
        let mut pool = CutPool::new(vec![x.clone()]);
        assert!(pool.push(cut(&[1, 1], 1)));
        let out = select(&pool, &x, &Policy::default_for(2), None).unwrap();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn duplicates_filtered() {
        let x = vec![int(1), int(1)];
        let mut pool = CutPool::new(vec![x.clone()]);
        pool.push(cut(&[1, 1], 1));
        pool.push(cut(&[1, 1], 1));
        let out = select(&pool, &x, &depth_only(5), None).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].index, 0);
    }

    #[test]
    fn top_two_by_depth() {
        // Orthogonal cuts -sum_{j in S} x_j <= -1 at the origin have squared
        // depth 1/|S|: supports of size 4, 2, 3 give 1/4, 1/2, 1/3.
        let block = |range: std::ops::Range<usize>| {
            let mut a = vec![int(0); 9];
            for j in range {
                a[j] = int(-1);
            }
            Cut::le(a, int(-1), Provenance::new("t"))
        };
        let x = vec![int(0); 9];
        let mut pool = CutPool::new(vec![x.clone()]);
        pool.push(block(5..9));
        pool.push(block(0..2));
        pool.push(block(2..5));
        let out = select(&pool, &x, &depth_only(2), None).unwrap();
        let depths: Vec<Rational> = out.iter().map(|s| s.sq_depth.clone()).collect();
        assert_eq!(depths, vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(out.iter().map(|s| s.index).collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn empty_pool() {
        let pool = CutPool::new(vec![vec![int(0)]]);
        assert!(select(&pool, &[int(0)], &depth_only(1), None).unwrap().is_empty());
    }

    #[test]
    fn policy_json() {
        let p = Policy::from_json(
            r#"{"w_depth":"1","w_sparsity":"1/3","w_dynamism":"0","tau":"9/10","K":2,"D":"10"}"#,
        )
        .unwrap();
        assert_eq!(p.w_sparsity, rat(1, 3));
        assert_eq!(p.k, 2);
        assert!(Policy::from_json(r#"{"w_depth":"1","w_sparsity":"0","w_dynamism":"0","tau":"2","K":2,"D":"10"}"#).is_err());
    }
}
