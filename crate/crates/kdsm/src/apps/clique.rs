//! Clique-detection instances: a (2k+1)-distant submodular function whose
//! minimum is -1 exactly when the graph has a k-clique. These witness
//! that the distance parameter cannot be traded for a fixed-parameter
//! algorithm, and serve as structured test instances here.

use crate::error::Error;
use crate::rational::{rat, Rational};
use crate::set_function::SetFunction;
use crate::subset::{all_subsets, GroundSet, Subset};

/// Simple undirected graph on {1..nv} with adjacency bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nv: usize,
    adjacency: Vec<u64>,
}

impl Graph {
    /// Graph from 1-based edge pairs; rejects loops and out-of-range ends.
    pub fn from_edges(nv: usize, edges: &[(usize, usize)]) -> Result<Graph, Error> {
        if nv == 0 || nv > 30 {
            return Err(Error::GroundSetSize(nv));
        }
        let mut adjacency = vec![0u64; nv];
        for &(a, b) in edges {
            if a == b || a == 0 || b == 0 || a > nv || b > nv {
                return Err(Error::Format(format!("invalid edge ({a}, {b})")));
            }
            adjacency[a - 1] |= 1 << (b - 1);
            adjacency[b - 1] |= 1 << (a - 1);
        }
        Ok(Graph { nv, adjacency })
    }

    /// Complete graph K_nv.
    pub fn complete(nv: usize) -> Result<Graph, Error> {
        let edges: Vec<(usize, usize)> = (1..=nv)
            .flat_map(|a| ((a + 1)..=nv).map(move |b| (a, b)))
            .collect();
        Graph::from_edges(nv, &edges)
    }

    /// Cycle 1-2-...-nv-1.
    pub fn cycle(nv: usize) -> Result<Graph, Error> {
        let mut edges: Vec<(usize, usize)> = (1..nv).map(|a| (a, a + 1)).collect();
        edges.push((nv, 1));
        Graph::from_edges(nv, &edges)
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] & (1 << b) != 0
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.nv {
            for b in (a + 1)..self.nv {
                if self.has_edge(a, b) {
                    out.push((a + 1, b + 1));
                }
            }
        }
        out
    }

    /// Whether the induced subgraph on `x` is a clique of exactly `size`
    /// vertices.
    pub fn induces_clique(&self, x: Subset, size: usize) -> bool {
        if x.len() != size {
            return false;
        }
        let members: Vec<usize> = x.iter().collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !self.has_edge(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Exhaustive search for any clique of the given size.
    pub fn has_clique(&self, size: usize) -> bool {
        all_subsets(self.nv).any(|x| self.induces_clique(x, size))
    }
}

/// The clique-detection function: -1 on kc-cliques, 0 on other sets of at
/// most kc vertices, and |V minus X| on larger sets. Declared
/// (2 kc + 1)-distant; requires |V| >= 2 kc + 1.
pub fn gen_clique_function(graph: &Graph, kc: usize) -> Result<SetFunction, Error> {
    let nv = graph.nv();
    if kc == 0 {
        return Err(Error::DistanceOutOfRange { k: 0, n: nv });
    }
    let declared = 2 * kc + 1;
    if nv < declared {
        return Err(Error::DistanceOutOfRange { k: declared, n: nv });
    }
    let values: Vec<Rational> = all_subsets(nv)
        .map(|x| {
            if graph.induces_clique(x, kc) {
                rat(-1)
            } else if x.len() <= kc {
                rat(0)
            } else {
                rat((nv - x.len()) as i64)
            }
        })
        .collect();
    SetFunction::from_dense(GroundSet::new(nv)?, declared, values)
}
