//! Enumeration limits shared by all brute-force routines.
//!
//! Caps are never exceeded silently: any routine that would cross one returns
//! [`Error::CapExceeded`](crate::Error::CapExceeded).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CAPS_ENV: &str = "CUTLAB_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest dimension handed to vertex or facet enumeration.
    pub max_dim: usize,
    /// Largest number of integer assignments enumerated for a hull.
    pub max_points: u64,
    /// Largest vertex count for face-enumeration distance.
    pub max_distance_vertices: usize,
    /// Largest graph handled by the stable-set LP.
    pub max_graph_nodes: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_dim: 10,
            max_points: 1_000_000,
            max_distance_vertices: 12,
            max_graph_nodes: 16,
        }
    }
}

impl Caps {
    /// Defaults overridden by `CUTLAB_CAPS`, e.g. `dim=12,points=2000000`.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(s) => Caps::default().with_overrides(&s),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("cap override {item:?} lacks '='")))?;
            let bad = || Error::Invalid(format!("cap override {item:?} has a bad value"));
            match key.trim() {
                "dim" => self.max_dim = value.trim().parse().map_err(|_| bad())?,
                "points" => self.max_points = value.trim().parse().map_err(|_| bad())?,
                "dist" => {
                    self.max_distance_vertices = value.trim().parse().map_err(|_| bad())?
                }
                "graph" => self.max_graph_nodes = value.trim().parse().map_err(|_| bad())?,
                other => return Err(Error::Invalid(format!("unknown cap {other:?}"))),
            }
        }
        Ok(self)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if dim > self.max_dim {
            return Err(Error::CapExceeded {
                what: "dimension",
                value: dim as u128,
                cap: self.max_dim as u128,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        let c = Caps::default().with_overrides("dim=12, points=50").unwrap();
        assert_eq!(c.max_dim, 12);
        assert_eq!(c.max_points, 50);
        assert_eq!(c.max_graph_nodes, 16);
        assert!(Caps::default().with_overrides("colour=3").is_err());
        assert!(Caps::default().with_overrides("dim").is_err());
    }
}
