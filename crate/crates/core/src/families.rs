//! Small named graphs used as bases, fixtures and witnesses.

use crate::graph::{Graph, GraphBuilder};

/// One vertex with `whole` whole-loops and `half` half-loops.
pub fn bouquet(whole: usize, half: usize) -> Graph {
    let mut b = GraphBuilder::new(1);
    for _ in 0..whole {
        b.whole_loop(0);
    }
    for _ in 0..half {
        b.half_loop(0);
    }
    b.build()
}

/// The cycle on `k` vertices (`k = 1` is a whole-loop, `k = 2` a double edge).
pub fn cycle(k: usize) -> Graph {
    assert!(k >= 1);
    let mut b = GraphBuilder::new(k);
    for i in 0..k {
        b.edge(i, (i + 1) % k);
    }
    b.build()
}

/// The path with `k` vertices.
pub fn path(k: usize) -> Graph {
    let mut b = GraphBuilder::new(k);
    for i in 1..k {
        b.edge(i - 1, i);
    }
    b.build()
}

pub fn complete(k: usize) -> Graph {
    let mut b = GraphBuilder::new(k);
    for i in 0..k {
        for j in i + 1..k {
            b.edge(i, j);
        }
    }
    b.build()
}

pub fn complete_bipartite(a: usize, c: usize) -> Graph {
    let mut b = GraphBuilder::new(a + c);
    for i in 0..a {
        for j in 0..c {
            b.edge(i, a + j);
        }
    }
    b.build()
}

/// Two vertices joined by `m` parallel edges.
pub fn multi_edge(m: usize) -> Graph {
    let mut b = GraphBuilder::new(2);
    b.edges(0, 1, m);
    b.build()
}

/// Vertices `0..multiplicities.len()` in a chain, with `multiplicities[i]`
/// parallel edges between `i` and `i + 1`.
pub fn multi_chain(multiplicities: &[usize]) -> Graph {
    let mut b = GraphBuilder::new(multiplicities.len() + 1);
    for (i, &m) in multiplicities.iter().enumerate() {
        b.edges(i, i + 1, m);
    }
    b.build()
}

/// The Petersen graph (3-regular, girth 5).
pub fn petersen() -> Graph {
    let mut b = GraphBuilder::new(10);
    for i in 0..5 {
        b.edge(i, (i + 1) % 5);
        b.edge(i, i + 5);
        b.edge(5 + i, 5 + (i + 2) % 5);
    }
    b.build()
}

/// `k` copies of K4 minus an edge, joined in a ring through their degree-2
/// vertices. 3-regular; `lambda_2` approaches 3 as `k` grows.
pub fn diamond_ring(k: usize) -> Graph {
    let mut b = GraphBuilder::new(4 * k);
    for i in 0..k {
        let base = 4 * i;
        for (x, y) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            b.edge(base + x, base + y);
        }
        b.edge(base + 1, 4 * ((i + 1) % k));
    }
    b.build()
}
