//! Report envelopes. Every persisted report carries the artifact version,
//! the command, its configuration and the seed, so a run can be repeated
//! bit for bit.

use serde::Serialize;
use serde_json::Value;

use crate::geometry::VPolytope;
use crate::rational::{self, Rational};
use crate::sparsity::{DistPk, DistanceBound};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub artifact: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: Value,
}

impl RunInfo {
    pub fn new(command: impl Into<String>, seed: u64, config: Value) -> Self {
        RunInfo {
            artifact: "cutlab",
            version: VERSION,
            command: command.into(),
            seed,
            config,
        }
    }

    /// `{"run": {...}, "result": ...}`, pretty-printed with a trailing newline.
    pub fn json<T: Serialize>(&self, result: &T) -> String {
        let v = serde_json::json!({ "run": self, "result": result });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    /// CSV preceded by one `#` line holding the run info as JSON.
    pub fn csv<I, S>(&self, header: &str, rows: I) -> String
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out = format!("# {}\n{header}\n", serde_json::to_string(self).expect("serializable"));
        for r in rows {
            out.push_str(r.as_ref());
            out.push('\n');
        }
        out
    }
}

/// One line of the sparse-distance experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SparsityRow {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    #[serde(with = "rational::serde_str")]
    pub sq_dist: Rational,
    /// Certified upper end of the bound enclosure.
    pub bound: f64,
    pub bound_term1: f64,
    pub bound_term2: f64,
    pub pass: bool,
}

impl SparsityRow {
    pub const CSV_HEADER: &'static str = "instance,n,k,t,sq_dist,bound,bound_term1,bound_term2,pass";

    pub fn new(instance: &str, p: &VPolytope, k: usize, dist: &DistPk, bound: &DistanceBound) -> Self {
        SparsityRow {
            instance: instance.to_string(),
            n: p.dim,
            k,
            t: p.len(),
            sq_dist: dist.sq_dist.clone(),
            bound: bound.bound.hi,
            bound_term1: bound.term1.hi,
            bound_term2: bound.term2.hi,
            pass: bound.certifies(&dist.sq_dist),
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.n,
            self.k,
            self.t,
            rational::format(&self.sq_dist),
            self.bound,
            self.bound_term1,
            self.bound_term2,
            self.pass
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::rational::int;
    use crate::sparsity::{dist_pk, sparse_distance_bound};

    #[test]
    fn csv_carries_run_info() {
        let info = RunInfo::new("sparsity dist", 7, serde_json::json!({"k": 1}));
        let text = info.csv("a,b", ["1,2"]);
        let mut lines = text.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# "));
        let parsed: Value = serde_json::from_str(&first[2..]).unwrap();
        assert_eq!(parsed["seed"], 7);
        assert_eq!(parsed["version"], VERSION);
        assert_eq!(lines.next(), Some("a,b"));
        assert_eq!(lines.next(), Some("1,2"));
    }

    #[test]
    fn antidiagonal_row() {
        let p = VPolytope::new(2, vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        let d = dist_pk(&p, 1, &Caps::default()).unwrap();
        let b = sparse_distance_bound(2, 1, 2).unwrap();
        let row = SparsityRow::new("antidiagonal", &p, 1, &d, &b);
        assert!(row.pass);
        assert!(row.csv_row().starts_with("antidiagonal,2,1,2,1/2,"));
    }
}
