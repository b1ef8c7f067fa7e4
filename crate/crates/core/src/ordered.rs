//! Graphs endowed with an ordering: total orders on vertices and on edges,
//! plus an orientation (one directed representative per involution orbit).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    graph: Graph,
    vertex_order: Vec<usize>,
    edge_order: Vec<usize>,
}

/// Hashable description of an ordered graph up to its (unique) ordered
/// isomorphism: vertex count plus, for each edge in order,
/// `(tail rank, head rank, is_half_loop)` of its oriented representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderedKey {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, bool)>,
}

impl OrderedGraph {
    /// `vertex_order` lists every vertex once, smallest first; `edge_order`
    /// lists one directed representative of every orbit, smallest first.
    pub fn new(graph: Graph, vertex_order: Vec<usize>, edge_order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; graph.vertex_count()];
        if vertex_order.len() != graph.vertex_count() {
            return Err(Error::MalformedOrdering("vertex order is not a permutation"));
        }
        for &v in &vertex_order {
            if v >= graph.vertex_count() || core::mem::replace(&mut seen[v], true) {
                return Err(Error::MalformedOrdering("vertex order is not a permutation"));
            }
        }
        let mut covered = vec![false; graph.directed_edge_count()];
        for &e in &edge_order {
            if e >= graph.directed_edge_count() || covered[e] {
                return Err(Error::MalformedOrdering("orientation repeats an orbit"));
            }
            covered[e] = true;
            covered[graph.inv(e)] = true;
        }
        if edge_order.len() != graph.edge_count() {
            return Err(Error::MalformedOrdering("orientation misses an orbit"));
        }
        Ok(OrderedGraph {
            graph,
            vertex_order,
            edge_order,
        })
    }

    /// Orders vertices by id and orients each orbit by its lowest id.
    pub fn natural(graph: Graph) -> Self {
        let vertex_order = (0..graph.vertex_count()).collect();
        let edge_order = graph.orbit_representatives();
        OrderedGraph {
            graph,
            vertex_order,
            edge_order,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn vertex_order(&self) -> &[usize] {
        &self.vertex_order
    }

    /// Oriented representatives, in edge order.
    pub fn edge_order(&self) -> &[usize] {
        &self.edge_order
    }

    /// `rank[v]` is the position of vertex `v` in the vertex order.
    pub fn vertex_ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.vertex_order.len()];
        for (i, &v) in self.vertex_order.iter().enumerate() {
            rank[v] = i;
        }
        rank
    }

    /// For each directed edge: the rank of its orbit and whether it is the
    /// oriented representative.
    pub fn edge_ranks(&self) -> Vec<(usize, bool)> {
        let mut rank = vec![(0, false); self.graph.directed_edge_count()];
        for (i, &e) in self.edge_order.iter().enumerate() {
            rank[self.graph.inv(e)] = (i, false);
            rank[e] = (i, true);
        }
        rank
    }

    pub fn key(&self) -> OrderedKey {
        let rank = self.vertex_ranks();
        OrderedKey {
            vertices: self.graph.vertex_count(),
            edges: self
                .edge_order
                .iter()
                .map(|&e| {
                    (
                        rank[self.graph.tail(e)],
                        rank[self.graph.head(e)],
                        self.graph.is_half_loop(e),
                    )
                })
                .collect(),
        }
    }

    /// Relabels so that vertex `i` is the `i`-th vertex in order and the
    /// `j`-th orbit consists of the next one or two ids, representative
    /// first.
    pub fn canonical(&self) -> OrderedGraph {
        from_key(&self.key())
    }
}

/// Rebuilds the canonical ordered graph described by a key.
pub fn from_key(key: &OrderedKey) -> OrderedGraph {
    let mut tail = Vec::new();
    let mut head = Vec::new();
    let mut inv = Vec::new();
    let mut edge_order = Vec::new();
    for &(t, h, half) in &key.edges {
        let e = tail.len();
        edge_order.push(e);
        if half {
            tail.push(t);
            head.push(h);
            inv.push(e);
        } else {
            tail.extend([t, h]);
            head.extend([h, t]);
            inv.extend([e + 1, e]);
        }
    }
    let graph = Graph::from_parts(key.vertices, tail, head, inv)
        .expect("ordered keys describe valid graphs");
    OrderedGraph {
        graph,
        vertex_order: (0..key.vertices).collect(),
        edge_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn rejects_bad_orientations() {
        let c3 = families::cycle(3);
        assert!(OrderedGraph::new(c3.clone(), vec![0, 1, 2], vec![0, 2, 4]).is_ok());
        assert!(OrderedGraph::new(c3.clone(), vec![0, 1, 2], vec![0, 1, 4]).is_err());
        assert!(OrderedGraph::new(c3.clone(), vec![0, 1, 2], vec![0, 2]).is_err());
        assert!(OrderedGraph::new(c3, vec![0, 0, 2], vec![0, 2, 4]).is_err());
    }

    #[test]
    fn canonical_relabeling_is_stable() {
        let c3 = families::cycle(3);
        let o = OrderedGraph::new(c3, vec![2, 0, 1], vec![5, 1, 2]).unwrap();
        let c = o.canonical();
        assert_eq!(c.key(), o.key());
        assert_eq!(c.canonical(), c);
        assert_eq!(c.vertex_order(), &[0, 1, 2]);
    }
}
