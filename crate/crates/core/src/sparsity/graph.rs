use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{MilpInstance, Partition};

/// Graph on partition blocks; `{i, j}` is an edge when some row has nonzero
/// entries in both blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionGraph {
    pub nodes: usize,
    /// Sorted pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
}

impl InteractionGraph {
    pub fn new(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= nodes || b >= nodes || a == b {
                return Err(Error::Invalid(format!("bad edge ({a}, {b})")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(InteractionGraph {
            nodes,
            edges: set.into_iter().collect(),
        })
    }

    pub fn star(leaves: usize) -> Self {
        InteractionGraph {
            nodes: leaves + 1,
            edges: (1..=leaves).map(|j| (0, j)).collect(),
        }
    }

    pub fn complete(q: usize) -> Self {
        let edges = (0..q).flat_map(|i| (i + 1..q).map(move |j| (i, j))).collect();
        InteractionGraph { nodes: q, edges }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Neighbour bitmasks; requires `nodes <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.nodes];
        for &(a, b) in &self.edges {
            m[a] |= 1 << b;
            m[b] |= 1 << a;
        }
        m
    }

    /// True when every edge touches `center` and every other node is adjacent
    /// to it.
    pub fn is_star(&self, center: usize) -> bool {
        self.edges.len() + 1 == self.nodes && self.edges.iter().all(|&(a, b)| a == center || b == center)
    }
}

pub fn interaction_graph(inst: &MilpInstance, partition: &Partition) -> Result<InteractionGraph> {
    let partition = Partition::new(partition.blocks.clone(), inst.n)?;
    let owner = partition.owner(inst.n);
    let mut edges = BTreeSet::new();
    for row in &inst.rows {
        let touched: BTreeSet<usize> = row
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, _)| owner[j])
            .collect();
        let touched: Vec<usize> = touched.into_iter().collect();
        for (x, &a) in touched.iter().enumerate() {
            for &b in &touched[x + 1..] {
                edges.insert((a, b));
            }
        }
    }
    InteractionGraph::new(partition.len(), edges)
}

/// Rescan every row for every absent pair; the first coupling row found
/// for a non-edge is reported.
pub fn check_absent_edges(inst: &MilpInstance, partition: &Partition, g: &InteractionGraph) -> Option<(usize, usize, usize)> {
    let q = partition.len();
    for a in 0..q {
        for b in a + 1..q {
            if g.has_edge(a, b) {
                continue;
            }
            for (i, row) in inst.rows.iter().enumerate() {
                let hits = |blk: &Vec<usize>| blk.iter().any(|&j| !row.coeffs[j].is_zero());
                if hits(&partition.blocks[a]) && hits(&partition.blocks[b]) {
                    return Some((a, b, i));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Constraint;
    use crate::rational::int;

    fn separable() -> MilpInstance {
        MilpInstance::pure_integer(
            "sep",
            vec![
                Constraint::le(vec![int(1), int(1), int(0), int(0)], int(1)),
                Constraint::le(vec![int(0), int(0), int(2), int(1)], int(2)),
            ],
            vec![int(1); 4],
            int(1),
        )
        .unwrap()
    }

    #[test]
    fn separable_has_no_edges() {
        let p = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        let g = interaction_graph(&separable(), &p).unwrap();
        assert!(g.edges.is_empty());
        assert_eq!(check_absent_edges(&separable(), &p, &g), None);
    }

    #[test]
    fn coupling_row_gives_edge() {
        let p = Partition::new(vec![vec![0], vec![1], vec![2, 3]], 4).unwrap();
        let g = interaction_graph(&separable(), &p).unwrap();
        assert_eq!(g.edges, vec![(0, 1)]);
        let missing = InteractionGraph::new(3, []).unwrap();
        assert_eq!(check_absent_edges(&separable(), &p, &missing), Some((0, 1, 0)));
    }

    #[test]
    fn single_block() {
        let g = interaction_graph(&separable(), &Partition::single_block(4)).unwrap();
        assert_eq!((g.nodes, g.edges.len()), (1, 0));
    }

    #[test]
    fn invalid_partition() {
        let p = Partition { blocks: vec![vec![0, 1]] };
        assert!(interaction_graph(&separable(), &p).is_err());
    }

    #[test]
    fn star_shape() {
        assert!(InteractionGraph::star(3).is_star(0));
        assert!(!InteractionGraph::complete(3).is_star(0));
    }
}
