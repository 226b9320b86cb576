use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::cut::{Cut, Provenance};
use crate::error::{Error, Result};
use crate::geometry::polytope::Sense;
use crate::instance::{generate::rng, MilpInstance};
use crate::rational::{self, Rational};

type Eval = dyn Fn(&[Rational]) -> Rational + Send + Sync;

/// A function `R^m -> R` proposed as a subadditive, nondecreasing function
/// with `f(0) = 0`. None of these properties is assumed; see
/// [`check_subadditive`].
#[derive(Clone)]
pub struct SubadditiveFn {
    pub m: usize,
    pub name: String,
    eval: Arc<Eval>,
}

impl fmt::Debug for SubadditiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubadditiveFn({}, m={})", self.name, self.m)
    }
}

impl SubadditiveFn {
    pub fn new(
        m: usize,
        name: impl Into<String>,
        eval: impl Fn(&[Rational]) -> Rational + Send + Sync + 'static,
    ) -> Self {
        SubadditiveFn {
            m,
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        (self.eval)(u)
    }

    /// `u -> w · u`.
    pub fn linear(w: Vec<Rational>) -> Self {
        let m = w.len();
        SubadditiveFn::new(m, "linear", move |u| rational::dot(&w, u))
    }

    /// `u -> ceil(w · u)`; subadditive and nondecreasing for `w >= 0`.
    pub fn ceil_linear(w: Vec<Rational>) -> Self {
        let m = w.len();
        SubadditiveFn::new(m, "ceil-linear", move |u| rational::dot(&w, u).ceil())
    }

    /// `u -> u^2` on `R^1`.
    pub fn square() -> Self {
        SubadditiveFn::new(1, "square", |u| &u[0] * &u[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    ZeroAtOrigin,
    Subadditive,
    Nondecreasing,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::ZeroAtOrigin => "f(0) = 0",
            Condition::Subadditive => "subadditivity",
            Condition::Nondecreasing => "monotonicity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl Violation {
    pub fn to_error(&self) -> Error {
        Error::NotSubadditive {
            condition: self.condition.name().to_string(),
            u: self.u.iter().map(rational::format).collect(),
            v: self.v.iter().map(rational::format).collect(),
        }
    }
}

/// Pass, or the first violation found: `f(0) = 0` first, then for every
/// probe pair `(u_i, u_j)` with `i <= j` in order, `f(u) + f(v) >= f(u + v)`
/// and, where `v - u >= 0` or `u - v >= 0`, monotonicity.
pub fn check_subadditive(f: &SubadditiveFn, probes: &[Vec<Rational>]) -> Option<Violation> {
    let zero = rational::zeros(f.m);
    if !f.eval(&zero).is_zero() {
        return Some(Violation {
            condition: Condition::ZeroAtOrigin,
            u: zero.clone(),
            v: zero,
        });
    }
    let values: Vec<Rational> = probes.iter().map(|p| f.eval(p)).collect();
    let ge = |a: &[Rational], b: &[Rational]| a.iter().zip(b).all(|(x, y)| x >= y);
    for i in 0..probes.len() {
        for j in i..probes.len() {
            let (u, v) = (&probes[i], &probes[j]);
            let sum = rational::add(u, v);
            if &values[i] + &values[j] < f.eval(&sum) {
                return Some(Violation {
                    condition: Condition::Subadditive,
                    u: u.clone(),
                    v: v.clone(),
                });
            }
            let bad_up = ge(v, u) && values[i] > values[j];
            let bad_down = ge(u, v) && values[j] > values[i];
            if bad_up || bad_down {
                return Some(Violation {
                    condition: Condition::Nondecreasing,
                    u: u.clone(),
                    v: v.clone(),
                });
            }
        }
    }
    None
}

/// Rows of `inst` as `>=` rows (equalities give two rows), over nonnegative
/// integer variables.
pub fn ge_system(inst: &MilpInstance) -> Result<Vec<(Vec<Rational>, Rational, usize)>> {
    if !inst.is_pure_integer() || !inst.vars.iter().all(|v| v.lb.is_zero()) {
        return Err(Error::WrongClass("a pure-integer program over x >= 0"));
    }
    let mut out = Vec::new();
    for (i, r) in inst.rows.iter().enumerate() {
        let neg = || (r.coeffs.iter().map(|a| -a).collect::<Vec<_>>(), -r.rhs.clone(), i);
        match r.sense {
            Sense::Ge => out.push((r.coeffs.clone(), r.rhs.clone(), i)),
            Sense::Le => out.push(neg()),
            Sense::Eq => {
                out.push((r.coeffs.clone(), r.rhs.clone(), i));
                out.push(neg());
            }
        }
    }
    Ok(out)
}

/// Origin, columns, right-hand side, and `samples` seeded sums of up to three
/// columns.
pub fn probe_points(
    columns: &[Vec<Rational>],
    rhs: &[Rational],
    samples: usize,
    seed: u64,
) -> Vec<Vec<Rational>> {
    let m = rhs.len();
    let mut probes = vec![rational::zeros(m)];
    probes.extend(columns.iter().cloned());
    probes.push(rhs.to_vec());
    let mut r = rng(seed);
    if !columns.is_empty() {
        for _ in 0..samples {
            let mut p = rational::zeros(m);
            for _ in 0..r.gen_range(1..=3) {
                p = rational::add(&p, &columns[r.gen_range(0..columns.len())]);
            }
            probes.push(p);
        }
    }
    probes.sort();
    probes.dedup();
    probes
}

/// `sum_j f(A^j) x_j >= f(b)` for `{x in Z^n_+ : A x >= b}`, after checking
/// `f` on the columns, `b`, and seeded sample points.
pub fn subadditive_cut(f: &SubadditiveFn, inst: &MilpInstance, seed: u64) -> Result<Cut> {
    let system = ge_system(inst)?;
    if system.len() != f.m {
        return Err(Error::DimensionMismatch {
            expected: system.len(),
            got: f.m,
        });
    }
    let columns: Vec<Vec<Rational>> = (0..inst.n)
        .map(|j| system.iter().map(|(a, _, _)| a[j].clone()).collect())
        .collect();
    let b: Vec<Rational> = system.iter().map(|(_, b, _)| b.clone()).collect();
    let probes = probe_points(&columns, &b, 32, seed);
    if let Some(v) = check_subadditive(f, &probes) {
        return Err(v.to_error());
    }
    let coeffs = columns.iter().map(|c| f.eval(c)).collect();
    let mut rows: Vec<usize> = system.iter().map(|(_, _, i)| *i).collect();
    rows.dedup();
    Ok(Cut::ge(
        coeffs,
        f.eval(&b),
        Provenance::new("subadditive")
            .with_rows(rows)
            .with_note(format!("f={}", f.name)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::rational::{int, rat};

    fn covering() -> MilpInstance {
        MilpInstance::pure_integer(
            "cov",
            vec![Constraint::ge(vec![int(2), int(3)], int(4))],
            vec![int(-1), int(-1)],
            int(4),
        )
        .unwrap()
    }

    #[test]
    fn identity_returns_row() {
        let c = subadditive_cut(&SubadditiveFn::linear(vec![int(1)]), &covering(), 0).unwrap();
        assert_eq!(c.coeffs, vec![int(2), int(3)]);
        assert_eq!(c.rhs, int(4));
    }

    #[test]
    fn ceil_half() {
        let f = SubadditiveFn::ceil_linear(vec![rat(1, 2)]);
        let c = subadditive_cut(&f, &covering(), 0).unwrap();
        assert_eq!(c.coeffs, vec![int(1), int(2)]);
        assert_eq!(c.rhs, int(2));
    }

    #[test]
    fn square_fails_with_witness() {
        match subadditive_cut(&SubadditiveFn::square(), &covering(), 0) {
            Err(Error::NotSubadditive { condition, .. }) => assert_eq!(condition, "subadditivity"),
            other => panic!("unexpected {other:?}"),
        }
        let probes = vec![vec![int(0)], vec![int(1)], vec![int(2)]];
        let v = check_subadditive(&SubadditiveFn::square(), &probes).unwrap();
        assert_eq!((v.u, v.v), (vec![int(1)], vec![int(1)]));
    }

    #[test]
    fn ceiling_passes() {
        let f = SubadditiveFn::ceil_linear(vec![int(1)]);
        let probes: Vec<_> = [0, 1, 2, 3].iter().map(|&k| vec![rat(k, 2)]).collect();
        assert!(check_subadditive(&f, &probes).is_none());
    }

    #[test]
    fn nonzero_origin_fails() {
        let f = SubadditiveFn::new(1, "shifted", |u| &u[0] + int(1));
        let v = check_subadditive(&f, &[vec![int(1)]]).unwrap();
        assert_eq!(v.condition, Condition::ZeroAtOrigin);
    }
}
