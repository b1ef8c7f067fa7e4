//! Multigraphs with whole-loops and half-loops.
//!
//! A [`Graph`] is a set of vertices `0..vertex_count` and directed edges
//! `0..directed_edge_count` with tail/head maps and an involution `inv`
//! satisfying `tail(inv(e)) == head(e)`. The undirected edges are the orbits
//! of `inv`:
//!
//! - an ordinary edge or a *whole-loop* is a pair `{e, inv(e)}` with
//!   `e != inv(e)` (a whole-loop has `tail(e) == head(e)`),
//! - a *half-loop* is a single directed edge fixed by `inv`.
//!
//! A whole-loop adds 2 to the degree of its vertex and a half-loop adds 1.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// An immutable multigraph with half-loops and whole-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertex_count: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    inv: Vec<usize>,
    // CSR layout of directed edges grouped by tail.
    out_start: Vec<usize>,
    out_edges: Vec<usize>,
}

impl Graph {
    /// The graph with no vertices and no edges.
    pub fn empty() -> Self {
        Graph {
            vertex_count: 0,
            tail: Vec::new(),
            head: Vec::new(),
            inv: Vec::new(),
            out_start: vec![0],
            out_edges: Vec::new(),
        }
    }

    /// Builds a graph from raw arrays, checking every structural invariant.
    pub fn from_parts(
        vertex_count: usize,
        tail: Vec<usize>,
        head: Vec<usize>,
        inv: Vec<usize>,
    ) -> Result<Self> {
        if tail.len() != head.len() || tail.len() != inv.len() {
            return Err(Error::LengthMismatch);
        }
        let m = tail.len();
        for e in 0..m {
            if tail[e] >= vertex_count || head[e] >= vertex_count {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "endpoint out of range",
                });
            }
            let j = inv[e];
            if j >= m {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "involution partner out of range",
                });
            }
            if inv[j] != e {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "inv(inv(e)) != e",
                });
            }
            if tail[j] != head[e] {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "tail(inv(e)) != head(e)",
                });
            }
            if j == e && tail[e] != head[e] {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "fixed point of inv is not a self-loop",
                });
            }
        }
        Ok(Self::assemble(vertex_count, tail, head, inv))
    }

    fn assemble(vertex_count: usize, tail: Vec<usize>, head: Vec<usize>, inv: Vec<usize>) -> Self {
        let mut out_start = vec![0usize; vertex_count + 1];
        for &t in &tail {
            out_start[t + 1] += 1;
        }
        for v in 0..vertex_count {
            out_start[v + 1] += out_start[v];
        }
        let mut fill = out_start.clone();
        let mut out_edges = vec![0usize; tail.len()];
        for (e, &t) in tail.iter().enumerate() {
            out_edges[fill[t]] = e;
            fill[t] += 1;
        }
        Graph {
            vertex_count,
            tail,
            head,
            inv,
            out_start,
            out_edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of directed edges, `#E^dir`.
    pub fn directed_edge_count(&self) -> usize {
        self.tail.len()
    }

    /// Number of undirected edges (involution orbits), `#E`.
    pub fn edge_count(&self) -> usize {
        self.inv.iter().enumerate().filter(|&(e, &j)| e <= j).count()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    #[inline]
    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    #[inline]
    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    #[inline]
    pub fn inv(&self, e: usize) -> usize {
        self.inv[e]
    }

    pub fn tails(&self) -> &[usize] {
        &self.tail
    }

    pub fn heads(&self) -> &[usize] {
        &self.head
    }

    pub fn involution(&self) -> &[usize] {
        &self.inv
    }

    #[inline]
    pub fn is_half_loop(&self, e: usize) -> bool {
        self.inv[e] == e
    }

    #[inline]
    pub fn is_whole_loop(&self, e: usize) -> bool {
        self.inv[e] != e && self.tail[e] == self.head[e]
    }

    #[inline]
    pub fn is_loop(&self, e: usize) -> bool {
        self.tail[e] == self.head[e]
    }

    /// Directed edges whose tail is `v`.
    #[inline]
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[self.out_start[v]..self.out_start[v + 1]]
    }

    /// Degree of `v`: the number of directed edges with tail `v`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.vertex_count {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self.out_start[v + 1] - self.out_start[v])
    }

    #[inline]
    pub(crate) fn degree_unchecked(&self, v: usize) -> usize {
        self.out_start[v + 1] - self.out_start[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.degree_unchecked(v))
            .max()
            .unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`; `None` for irregular or
    /// empty graphs.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.vertex_count == 0 {
            return None;
        }
        let d = self.degree_unchecked(0);
        (1..self.vertex_count)
            .all(|v| self.degree_unchecked(v) == d)
            .then_some(d)
    }

    /// `#E - #V`, counting a half-loop and a whole-loop as one edge each.
    pub fn order(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count as i64
    }

    /// `#V - #E^dir / 2`; a half-integer when half-loops are present.
    pub fn euler_char(&self) -> Ratio<i64> {
        Ratio::new(
            2 * self.vertex_count as i64 - self.directed_edge_count() as i64,
            2,
        )
    }

    pub fn half_loop_count(&self) -> usize {
        (0..self.directed_edge_count())
            .filter(|&e| self.is_half_loop(e))
            .count()
    }

    /// Number of whole-loops (each counted once).
    pub fn whole_loop_count(&self) -> usize {
        (0..self.directed_edge_count())
            .filter(|&e| self.is_whole_loop(e) && e < self.inv[e])
            .count()
    }

    pub fn has_half_loops(&self) -> bool {
        (0..self.directed_edge_count()).any(|e| self.is_half_loop(e))
    }

    /// The lowest-id directed edge of every involution orbit, ascending.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        (0..self.directed_edge_count())
            .filter(|&e| e <= self.inv[e])
            .collect()
    }

    /// Component label per vertex plus the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.vertex_count {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &e in self.out_edges(v) {
                    let u = self.head[e];
                    if label[u] == usize::MAX {
                        label[u] = count;
                        queue.push_back(u);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// True for nonempty graphs with a single component.
    pub fn is_connected(&self) -> bool {
        self.vertex_count > 0 && self.components().1 == 1
    }

    /// All vertices have degree at least two.
    pub fn is_pruned(&self) -> bool {
        (0..self.vertex_count).all(|v| self.degree_unchecked(v) >= 2)
    }

    /// The maximal subgraph whose vertices all have degree at least two.
    ///
    /// This is the "minimum degree two" notion of pruned, which is stronger
    /// than "no leaves": isolated vertices and vertices whose only edge is a
    /// half-loop are removed as well.
    pub fn prune(&self) -> Graph {
        self.prune_with_map().graph
    }

    /// [`Graph::prune`], also returning the embedding into `self`.
    pub fn prune_with_map(&self) -> Subgraph {
        let n = self.vertex_count;
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree_unchecked(v)).collect();
        let mut vertex_alive = vec![true; n];
        let mut edge_alive = vec![true; self.directed_edge_count()];
        let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] < 2).collect();
        while let Some(v) = stack.pop() {
            if !vertex_alive[v] {
                continue;
            }
            vertex_alive[v] = false;
            for &e in self.out_edges(v) {
                if !edge_alive[e] {
                    continue;
                }
                edge_alive[e] = false;
                edge_alive[self.inv[e]] = false;
                let u = self.head[e];
                if u != v && vertex_alive[u] {
                    deg[u] -= 1;
                    if deg[u] < 2 {
                        stack.push(u);
                    }
                }
            }
        }
        let vertices: Vec<usize> = (0..n).filter(|&v| vertex_alive[v]).collect();
        let edges: Vec<usize> = (0..self.directed_edge_count())
            .filter(|&e| edge_alive[e])
            .collect();
        self.induced_by_edges(&vertices, &edges)
            .expect("pruning keeps edges closed under inv and endpoints alive")
    }

    /// Subgraph on the listed vertices and directed edges.
    ///
    /// `edges` must be closed under `inv` and have endpoints among
    /// `vertices`. New ids follow the order of the input slices.
    pub fn induced_by_edges(&self, vertices: &[usize], edges: &[usize]) -> Result<Subgraph> {
        let mut vnew = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.vertex_count {
                return Err(Error::UnknownVertex(v));
            }
            vnew[v] = i;
        }
        let mut enew = vec![usize::MAX; self.directed_edge_count()];
        for (i, &e) in edges.iter().enumerate() {
            if e >= self.directed_edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            enew[e] = i;
        }
        let mut tail = Vec::with_capacity(edges.len());
        let mut head = Vec::with_capacity(edges.len());
        let mut inv = Vec::with_capacity(edges.len());
        for &e in edges {
            let (t, h, j) = (vnew[self.tail[e]], vnew[self.head[e]], enew[self.inv[e]]);
            if t == usize::MAX || h == usize::MAX {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "endpoint not in the vertex subset",
                });
            }
            if j == usize::MAX {
                return Err(Error::MalformedEdge {
                    edge: e,
                    reason: "edge subset not closed under inv",
                });
            }
            tail.push(t);
            head.push(h);
            inv.push(j);
        }
        Ok(Subgraph {
            graph: Graph::assemble(vertices.len(), tail, head, inv),
            vertex_map: vertices.to_vec(),
            edge_map: edges.to_vec(),
        })
    }

    /// Subgraph spanned by a set of orbits, given by any directed edge of
    /// each orbit. Vertices are the endpoints, in ascending original id.
    pub fn spanned_by_orbits(&self, orbit_edges: &[usize]) -> Result<Subgraph> {
        let mut vmark = vec![false; self.vertex_count];
        let mut emark = vec![false; self.directed_edge_count()];
        for &e in orbit_edges {
            if e >= self.directed_edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            emark[e] = true;
            emark[self.inv[e]] = true;
            vmark[self.tail[e]] = true;
            vmark[self.head[e]] = true;
        }
        let vertices: Vec<usize> = (0..self.vertex_count).filter(|&v| vmark[v]).collect();
        let edges: Vec<usize> = (0..self.directed_edge_count())
            .filter(|&e| emark[e])
            .collect();
        self.induced_by_edges(&vertices, &edges)
    }

    /// Whether `(e1, e2)` is a non-backtracking step.
    #[inline]
    pub fn is_nb_step(&self, e1: usize, e2: usize) -> bool {
        self.head[e1] == self.tail[e2] && self.inv[e1] != e2
    }

    /// Length of the shortest strictly non-backtracking closed walk, or
    /// `None` when there is none (forests, graphs whose pruned core is
    /// empty).
    ///
    /// A whole-loop gives girth 1 and a pair of parallel edges girth 2. A
    /// half-loop alone never closes a walk of length 1.
    pub fn girth(&self) -> Option<usize> {
        let m = self.directed_edge_count();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; m];
        let mut queue = VecDeque::new();
        for start in 0..m {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            queue.clear();
            dist[start] = 0;
            queue.push_back(start);
            'bfs: while let Some(e) = queue.pop_front() {
                let de = dist[e];
                if best.is_some_and(|b| de + 1 >= b) {
                    break;
                }
                for &f in self.out_edges(self.head[e]) {
                    if self.inv[e] == f {
                        continue;
                    }
                    if f == start {
                        best = Some(de + 1);
                        break 'bfs;
                    }
                    if dist[f] == usize::MAX {
                        dist[f] = de + 1;
                        queue.push_back(f);
                    }
                }
            }
            if best == Some(1) {
                break;
            }
        }
        best
    }
}

/// A subgraph together with its embedding into the parent graph
/// (`vertex_map[new] = old`, `edge_map[new] = old`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Incremental constructor for [`Graph`].
///
/// Edges are numbered in insertion order; an ordinary edge or whole-loop
/// occupies two consecutive ids `e` and `e + 1 = inv(e)`.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    vertex_count: usize,
    tail: Vec<usize>,
    head: Vec<usize>,
    inv: Vec<usize>,
}

impl GraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        GraphBuilder {
            vertex_count,
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    /// Adds an edge from `u` to `v` and returns the directed edge `u -> v`.
    /// When `u == v` this is a whole-loop.
    pub fn edge(&mut self, u: usize, v: usize) -> usize {
        assert!(u < self.vertex_count && v < self.vertex_count, "vertex out of range");
        let e = self.tail.len();
        self.tail.extend([u, v]);
        self.head.extend([v, u]);
        self.inv.extend([e + 1, e]);
        e
    }

    pub fn whole_loop(&mut self, v: usize) -> usize {
        self.edge(v, v)
    }

    pub fn half_loop(&mut self, v: usize) -> usize {
        assert!(v < self.vertex_count, "vertex out of range");
        let e = self.tail.len();
        self.tail.push(v);
        self.head.push(v);
        self.inv.push(e);
        e
    }

    /// Adds `count` parallel edges between `u` and `v`.
    pub fn edges(&mut self, u: usize, v: usize, count: usize) -> &mut Self {
        for _ in 0..count {
            self.edge(u, v);
        }
        self
    }

    pub fn build(self) -> Graph {
        Graph::assemble(self.vertex_count, self.tail, self.head, self.inv)
    }
}

/// A morphism of graphs: vertex and directed-edge maps intertwining tails,
/// heads and involutions.
#[derive(Debug, Clone)]
pub struct GraphMorphism<'a> {
    source: &'a Graph,
    target: &'a Graph,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl<'a> GraphMorphism<'a> {
    pub fn new(
        source: &'a Graph,
        target: &'a Graph,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::MalformedMorphism("vertex map has wrong length"));
        }
        if edge_map.len() != source.directed_edge_count() {
            return Err(Error::MalformedMorphism("edge map has wrong length"));
        }
        if vertex_map.iter().any(|&v| v >= target.vertex_count())
            || edge_map.iter().any(|&e| e >= target.directed_edge_count())
        {
            return Err(Error::MalformedMorphism("image out of range"));
        }
        for e in 0..source.directed_edge_count() {
            let f = edge_map[e];
            if target.tail(f) != vertex_map[source.tail(e)]
                || target.head(f) != vertex_map[source.head(e)]
            {
                return Err(Error::MalformedMorphism("does not intertwine heads and tails"));
            }
            if edge_map[source.inv(e)] != target.inv(f) {
                return Err(Error::MalformedMorphism("does not intertwine involutions"));
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vertex_map,
            edge_map,
        })
    }

    /// The identity morphism of `g`.
    pub fn identity(g: &'a Graph) -> Self {
        GraphMorphism {
            source: g,
            target: g,
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.directed_edge_count()).collect(),
        }
    }

    pub fn source(&self) -> &'a Graph {
        self.source
    }

    pub fn target(&self) -> &'a Graph {
        self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    /// Locally injective on the tail fibre and on the head fibre of every
    /// vertex.
    pub fn is_etale(&self) -> bool {
        self.local_check(false)
    }

    /// Locally bijective on the tail fibre and on the head fibre of every
    /// vertex.
    pub fn is_covering(&self) -> bool {
        self.local_check(true)
    }

    fn local_check(&self, bijective: bool) -> bool {
        let src = self.source;
        let tgt = self.target;
        let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); src.vertex_count()];
        for e in 0..src.directed_edge_count() {
            in_edges[src.head(e)].push(e);
        }
        let mut tgt_in_deg = vec![0usize; tgt.vertex_count()];
        for f in 0..tgt.directed_edge_count() {
            tgt_in_deg[tgt.head(f)] += 1;
        }
        let mut seen = vec![usize::MAX; tgt.directed_edge_count()];
        let mut stamp = 0usize;
        for v in 0..src.vertex_count() {
            let w = self.vertex_map[v];
            for (fibre, target_size) in [
                (src.out_edges(v), tgt.degree_unchecked(w)),
                (in_edges[v].as_slice(), tgt_in_deg[w]),
            ] {
                for &e in fibre {
                    let f = self.edge_map[e];
                    if seen[f] == stamp {
                        return false;
                    }
                    seen[f] = stamp;
                }
                if bijective && fibre.len() != target_size {
                    return false;
                }
                stamp += 1;
            }
        }
        true
    }
}
