use num_traits::One;

use super::graph::InteractionGraph;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::geometry::lp::{solve_lp, Direction, LpStatus};
use crate::geometry::polytope::{Constraint, HPolytope, Sense};
use crate::rational::Rational;

/// Maximal stable sets as bitmasks, in increasing mask order.
pub fn maximal_stable_sets(g: &InteractionGraph) -> Vec<u64> {
    let q = g.nodes;
    let adj = g.adjacency_masks();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << q) {
        let stable = (0..q).all(|v| mask & (1 << v) == 0 || adj[v] & mask == 0);
        if !stable {
            continue;
        }
        let maximal = (0..q).all(|v| mask & (1 << v) != 0 || adj[v] & mask != 0);
        if maximal {
            out.push(mask);
        }
    }
    out
}

/// Fractional chromatic number: `min Σ w_S` over maximal stable sets `S`
/// with every node covered by total weight at least one.
pub fn fractional_chromatic(g: &InteractionGraph, caps: &Caps) -> Result<Rational> {
    if g.nodes > caps.max_graph_nodes {
        return Err(Error::CapExceeded {
            what: "graph nodes",
            value: g.nodes as u128,
            cap: caps.max_graph_nodes as u128,
        });
    }
    if g.nodes == 0 {
        return Ok(Rational::from_integer(0.into()));
    }
    let sets = maximal_stable_sets(g);
    let rows = (0..g.nodes)
        .map(|v| {
            let coeffs = sets
                .iter()
                .map(|s| Rational::from_integer(((s >> v) & 1).into()))
                .collect();
            Constraint::new(coeffs, Sense::Ge, Rational::one())
        })
        .collect();
    let poly = HPolytope { dim: sets.len(), rows };
    let res = solve_lp(&poly, true, &vec![Rational::one(); sets.len()], Direction::Minimize)?;
    match res.status {
        LpStatus::Optimal => Ok(res.value),
        _ => Err(Error::Invalid("stable-set covering LP not optimal".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn chi(g: &InteractionGraph) -> Rational {
        fractional_chromatic(g, &Caps::default()).unwrap()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(chi(&InteractionGraph::new(1, []).unwrap()), int(1));
        assert_eq!(chi(&InteractionGraph::star(4)), int(2));
        assert_eq!(chi(&InteractionGraph::complete(3)), int(3));
        assert_eq!(chi(&InteractionGraph::new(3, []).unwrap()), int(1));
    }

    #[test]
    fn five_cycle() {
        let g = InteractionGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(chi(&g), rat(5, 2));
        assert_eq!(maximal_stable_sets(&g).len(), 5);
    }

    #[test]
    fn cap() {
        let caps = Caps {
            max_graph_nodes: 2,
            ..Caps::default()
        };
        assert!(fractional_chromatic(&InteractionGraph::complete(3), &caps).is_err());
    }
}
