//! Randomized sparsification of a separating direction.
//!
//! With `v` the closest point of `P` to `u`, `w = u − v`, `λ² = ‖w‖²` and
//! `d = w/λ`, a random vector `D` takes `sign(d_i)/α` with probability
//! `α|d_i|` and `0` otherwise, `α = k/(2√n)`. Coordinates with `α|d_i| > 1`
//! are kept at `d_i`. A draw is accepted when it is `k`-sparse, keeps every
//! vertex of `P` below `D·v + λ/2`, and puts `u` above it.
//!
//! `D` is stored as a sign vector on the sampled coordinates plus the set of
//! kept coordinates, so `λ·D·z = (2/k)·√(nλ²)·σ·z + κ·z` with `κ = w` on the
//! kept coordinates. Every property then has the form `c·√R + B ⋚ T` with
//! rationals `c, R, B, T` and is decided exactly.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cuts::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::{sq_distance, Interval, VPolytope};
use crate::instance::generate::rng;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifierInput {
    pub polytope: VPolytope,
    pub u: Vec<Rational>,
    pub k: usize,
}

impl SparsifierInput {
    pub fn new(polytope: VPolytope, u: Vec<Rational>, k: usize) -> Result<Self> {
        if polytope.is_empty() {
            return Err(Error::Empty);
        }
        if !polytope.within_unit_cube() {
            return Err(Error::Invalid("polytope is not inside the unit cube".into()));
        }
        if u.len() != polytope.dim {
            return Err(Error::DimensionMismatch {
                expected: polytope.dim,
                got: u.len(),
            });
        }
        if k == 0 || k > polytope.dim {
            return Err(Error::Invalid(format!("sparsity k={k} outside 1..={}", polytope.dim)));
        }
        Ok(SparsifierInput { polytope, u, k })
    }

    pub fn n(&self) -> usize {
        self.polytope.dim
    }

    pub fn t(&self) -> usize {
        self.polytope.len()
    }
}

/// Quantities derived from the input: closest point, `w = u − v`, `λ²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub v: Vec<Rational>,
    pub w: Vec<Rational>,
    pub lambda_sq: Rational,
}

impl Separation {
    pub fn of(inp: &SparsifierInput) -> Result<Self> {
        let dist = sq_distance(&inp.u, &inp.polytope)?;
        if dist.sq_dist.is_zero() {
            return Err(Error::Invalid("target point lies in the polytope".into()));
        }
        Ok(Separation {
            w: rational::sub(&inp.u, &dist.witness),
            v: dist.witness,
            lambda_sq: dist.sq_dist,
        })
    }
}

/// Enclosure of `λ*² = 8 n ln(4tn) / k`.
pub fn lambda_star_sq(n: usize, k: usize, t: usize) -> Interval {
    let (n, k, t) = (
        Interval::from_u64(n as u64),
        Interval::from_u64(k as u64),
        Interval::from_u64(t as u64),
    );
    Interval::from_u64(8)
        .mul(n)
        .mul(Interval::from_u64(4).mul(t).mul(n).ln())
        .div(k)
}

/// Sparse direction `D`: `sign[i] ∈ {-1, 0, 1}` on sampled coordinates
/// (value `sign/α`), and `kept` coordinates carrying `d_i` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseDirection {
    pub sign: Vec<i8>,
    pub kept: Vec<usize>,
}

impl SparseDirection {
    pub fn nnz(&self) -> usize {
        self.sign.iter().filter(|s| **s != 0).count() + self.kept.len()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.sign.len())
            .filter(|&i| self.sign[i] != 0)
            .chain(self.kept.iter().copied())
            .collect();
        s.sort_unstable();
        s
    }

    /// `(c, B)` with `λ·D·z = c·√(nλ²) + B`.
    fn split(&self, sep: &Separation, k: usize, z: &[Rational]) -> (Rational, Rational) {
        let mut s = Rational::zero();
        for (i, sg) in self.sign.iter().enumerate() {
            match sg {
                1 => s += &z[i],
                -1 => s -= &z[i],
                _ => {}
            }
        }
        let c = s * rational::rat(2, k as i64);
        let b = self
            .kept
            .iter()
            .map(|&i| &sep.w[i] * &z[i])
            .fold(Rational::zero(), |a, x| a + x);
        (c, b)
    }
}

/// Exact sign of `c·√r + b − t` for `r >= 0`.
pub fn cmp_sqrt_form(c: &Rational, r: &Rational, b: &Rational, t: &Rational) -> Ordering {
    let d = t - b;
    if c.is_zero() || r.is_zero() {
        return Rational::zero().cmp(&d);
    }
    let lhs = c * c * r;
    let rhs = &d * &d;
    match (c.is_positive(), d.is_negative()) {
        // positive left side against a negative bound
        (true, true) => Ordering::Greater,
        (true, false) => lhs.cmp(&rhs),
        (false, false) => Ordering::Less,
        (false, true) => rhs.cmp(&lhs),
    }
}

/// The three acceptance properties, each decided exactly.
pub fn check_properties(inp: &SparsifierInput, sep: &Separation, dir: &SparseDirection) -> [bool; 3] {
    let r = &sep.lambda_sq * Rational::from_integer(inp.n().into());
    let half = &sep.lambda_sq / Rational::from_integer(2.into());
    let sparse = dir.nnz() <= inp.k;
    let below = inp.polytope.vertices.iter().all(|p| {
        let (c, b) = dir.split(sep, inp.k, &rational::sub(p, &sep.v));
        cmp_sqrt_form(&c, &r, &b, &half) != Ordering::Greater
    });
    let (c, b) = dir.split(sep, inp.k, &sep.w);
    let above = cmp_sqrt_form(&c, &r, &b, &half) == Ordering::Greater;
    [sparse, below, above]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsifyStats {
    pub seed: u64,
    pub draws: u64,
    pub accepted: bool,
    /// Per-property failure counts over all draws.
    pub failures: [u64; 3],
    /// Accepted without sampling because `d` was already sparse.
    pub deterministic: bool,
}

impl SparsifyStats {
    pub const CSV_HEADER: &'static str =
        "seed,draws,accepted,property1_failures,property2_failures,property3_failures";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.seed, self.draws, self.accepted, self.failures[0], self.failures[1], self.failures[2]
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifyOutcome {
    pub stats: SparsifyStats,
    pub direction: Option<SparseDirection>,
    pub cut: Option<Cut>,
}

/// Rational cut with the support of `dir`: `g·x <= max_i g·p^i` where `g`
/// approximates `λ·D` (√(nλ²) replaced by a rational refined until the cut
/// separates `u`). Valid for `P` by construction.
fn rational_cut(inp: &SparsifierInput, sep: &Separation, dir: &SparseDirection, prov: Provenance) -> Result<Cut> {
    let n = inp.n();
    let r = &sep.lambda_sq * Rational::from_integer(n.into());
    let mut root = rational::from_f64(rational::to_f64(&r).sqrt());
    let two_over_k = rational::rat(2, inp.k as i64);
    for _ in 0..16 {
        let mut g = rational::zeros(n);
        for (i, sg) in dir.sign.iter().enumerate() {
            if *sg != 0 {
                g[i] = &two_over_k * &root * Rational::from_integer((*sg as i64).into());
            }
        }
        for &i in &dir.kept {
            g[i] = sep.w[i].clone();
        }
        let rhs = inp
            .polytope
            .vertices
            .iter()
            .map(|p| rational::dot(&g, p))
            .max()
            .expect("nonempty");
        if rational::dot(&g, &inp.u) > rhs {
            return Ok(Cut::le(g, rhs, prov));
        }
        if root.is_zero() {
            break;
        }
        root = (&root + &r / &root) / Rational::from_integer(2.into());
    }
    Err(Error::Invalid("could not round the sparse direction to a separating cut".into()))
}

/// Sample sparse directions until one satisfies all three properties or
/// `max_draws` is reached.
pub fn sparsify_cut(inp: &SparsifierInput, seed: u64, max_draws: u64) -> Result<SparsifyOutcome> {
    let sep = Separation::of(inp)?;
    let n = inp.n();
    let k = inp.k;
    let mut stats = SparsifyStats {
        seed,
        draws: 0,
        accepted: false,
        failures: [0; 3],
        deterministic: false,
    };

    if rational::nnz(&sep.w) <= k {
        let dir = SparseDirection {
            sign: vec![0; n],
            kept: (0..n).filter(|&i| !sep.w[i].is_zero()).collect(),
        };
        debug_assert_eq!(check_properties(inp, &sep, &dir), [true; 3]);
        let prov = Provenance::new("sparsifier").with_note("direction already k-sparse");
        let cut = rational_cut(inp, &sep, &dir, prov)?;
        stats.accepted = true;
        stats.deterministic = true;
        return Ok(SparsifyOutcome {
            stats,
            direction: Some(dir),
            cut: Some(cut),
        });
    }

    let star = lambda_star_sq(n, k, inp.t()).mul(Interval::from_u64(16));
    if !star.certainly_lt(&sep.lambda_sq) {
        return Err(Error::SparsifierPrecondition {
            lambda_sq: rational::to_f64(&sep.lambda_sq),
            bound_sq: star.hi,
        });
    }

    // keep i iff α|d_i| > 1, i.e. k² w_i² > 4 n λ²
    let four_n_lsq = &sep.lambda_sq * Rational::from_integer((4 * n).into());
    let k_sq = Rational::from_integer((k * k).into());
    let kept: Vec<usize> = (0..n)
        .filter(|&i| &k_sq * &sep.w[i] * &sep.w[i] > four_n_lsq)
        .collect();
    let scale = k as f64 / (2.0 * (n as f64 * rational::to_f64(&sep.lambda_sq)).sqrt());
    let probs: Vec<f64> = sep
        .w
        .iter()
        .enumerate()
        .map(|(i, wi)| if kept.contains(&i) { 0.0 } else { scale * rational::to_f64(wi).abs() })
        .collect();

    let mut rng = rng(seed);
    while stats.draws < max_draws {
        stats.draws += 1;
        let sign: Vec<i8> = (0..n)
            .map(|i| {
                let hit = probs[i] > 0.0 && rng.gen::<f64>() < probs[i];
                if hit {
                    if sep.w[i].is_positive() { 1 } else { -1 }
                } else {
                    0
                }
            })
            .collect();
        let dir = SparseDirection { sign, kept: kept.clone() };
        let ok = check_properties(inp, &sep, &dir);
        for (f, good) in stats.failures.iter_mut().zip(ok) {
            if !good {
                *f += 1;
            }
        }
        if ok == [true; 3] {
            stats.accepted = true;
            let prov = Provenance::new("sparsifier")
                .with_note(format!("seed {seed}, draw {}, support {:?}", stats.draws, dir.support()));
            let cut = rational_cut(inp, &sep, &dir, prov)?;
            return Ok(SparsifyOutcome {
                stats,
                direction: Some(dir),
                cut: Some(cut),
            });
        }
    }
    Ok(SparsifyOutcome {
        stats,
        direction: None,
        cut: None,
    })
}
