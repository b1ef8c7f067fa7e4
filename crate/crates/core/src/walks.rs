//! Strictly non-backtracking closed (SNBC) walks, visited subgraphs, bead
//! suppression and homotopy types.
//!
//! A walk `(v0, e1, v1, ..., ek, vk)` is stored by its edges; the vertices
//! are recovered from tails and heads. It is SNBC when it is closed,
//! `inv(e_i) != e_{i+1}` for all `i`, and `inv(e_k) != e_1`.
//!
//! The reduction of a walk suppresses every bead of its visited subgraph
//! except the first and last vertices of the walk. For closed walks this
//! keeps exactly `v0`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordered::{from_key, OrderedGraph, OrderedKey};

/// Default cap on the number of partial walks an enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Walk {
    /// Builds the walk traversing `edges` in order.
    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Result<Self> {
        let Some(&first) = edges.first() else {
            return Err(Error::ZeroLength);
        };
        if first >= g.directed_edge_count() {
            return Err(Error::UnknownEdge(first));
        }
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(g.tail(first));
        for (i, &e) in edges.iter().enumerate() {
            if e >= g.directed_edge_count() {
                return Err(Error::UnknownEdge(e));
            }
            if g.tail(e) != vertices[i] {
                return Err(Error::InvalidWalk("consecutive edges do not meet"));
            }
            vertices.push(g.head(e));
        }
        Ok(Walk { vertices, edges })
    }

    /// Checks `vertices` against the tails and heads of `edges`.
    pub fn new(g: &Graph, vertices: Vec<usize>, edges: Vec<usize>) -> Result<Self> {
        let w = Walk::from_edges(g, edges)?;
        if w.vertices != vertices {
            return Err(Error::InvalidWalk("vertices disagree with edges"));
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn is_non_backtracking(&self, g: &Graph) -> bool {
        self.edges.windows(2).all(|p| g.inv(p[0]) != p[1])
    }

    pub fn is_snbc(&self, g: &Graph) -> bool {
        self.is_closed()
            && self.is_non_backtracking(g)
            && g.inv(*self.edges.last().unwrap()) != self.edges[0]
    }
}

/// Non-backtracking successors of every directed edge.
fn successors(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.directed_edge_count())
        .map(|e| {
            g.out_edges(g.head(e))
                .iter()
                .copied()
                .filter(|&f| f != g.inv(e))
                .collect()
        })
        .collect()
}

struct Dfs<'a> {
    g: &'a Graph,
    succ: Vec<Vec<usize>>,
    k: usize,
    budget: u64,
    visited: u64,
}

impl Dfs<'_> {
    fn charge(&mut self, amount: u64) -> Result<()> {
        self.visited = self.visited.saturating_add(amount);
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn walk<F: FnMut(&[usize])>(&mut self, path: &mut Vec<usize>, f: &mut F) -> Result<()> {
        self.charge(1)?;
        let last = *path.last().unwrap();
        if path.len() == self.k {
            let first = path[0];
            if self.g.head(last) == self.g.tail(first) && self.g.inv(last) != first {
                f(path);
            }
            return Ok(());
        }
        for i in 0..self.succ[last].len() {
            path.push(self.succ[last][i]);
            self.walk(path, f)?;
            path.pop();
        }
        Ok(())
    }

    /// Completions of a path of `len` edges from `first` to `last`.
    fn count(&mut self, first: usize, last: usize, len: usize) -> Result<u64> {
        self.charge(1)?;
        let g = self.g;
        if len + 1 == self.k {
            // Closing step: land on the start vertex without backtracking
            // across the wrap-around.
            let target = g.tail(first);
            let bad = g.inv(first);
            return Ok(self.succ[last]
                .iter()
                .filter(|&&f| g.head(f) == target && f != bad)
                .count() as u64);
        }
        let mut total = 0;
        for i in 0..self.succ[last].len() {
            let next = self.succ[last][i];
            total += self.count(first, next, len + 1)?;
        }
        Ok(total)
    }
}

/// Calls `f` on the edge sequence of every SNBC walk of length `k`; each
/// starting edge gives a distinct walk. `budget` bounds the number of
/// partial walks visited. Returns the number of walks found.
pub fn for_each_snbc<F: FnMut(&[usize])>(g: &Graph, k: usize, budget: u64, mut f: F) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let mut dfs = Dfs {
        g,
        succ: successors(g),
        k,
        budget,
        visited: 0,
    };
    let mut found = 0u64;
    let mut path = Vec::with_capacity(k);
    for e in 0..g.directed_edge_count() {
        path.push(e);
        dfs.walk(&mut path, &mut |p: &[usize]| {
            found += 1;
            f(p)
        })?;
        path.pop();
    }
    Ok(found)
}

/// All SNBC walks of length `k`, under [`DEFAULT_BUDGET`].
pub fn enumerate_snbc(g: &Graph, k: usize) -> Result<Vec<Walk>> {
    enumerate_snbc_with_budget(g, k, DEFAULT_BUDGET)
}

pub fn enumerate_snbc_with_budget(g: &Graph, k: usize, budget: u64) -> Result<Vec<Walk>> {
    let mut out = Vec::new();
    for_each_snbc(g, k, budget, |edges| {
        out.push(Walk::from_edges(g, edges.to_vec()).expect("enumerated walks are valid"));
    })?;
    Ok(out)
}

/// Number of SNBC walks of length `k` by depth-first enumeration, without
/// materializing them. The last step is counted in bulk, so `budget`
/// bounds the walks of length `k - 1`.
pub fn count_snbc_brute(g: &Graph, k: usize, budget: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    if k == 1 {
        return Ok((0..g.directed_edge_count())
            .filter(|&e| g.is_whole_loop(e))
            .count() as u64);
    }
    let mut dfs = Dfs {
        g,
        succ: successors(g),
        k,
        budget,
        visited: 0,
    };
    let mut total = 0;
    for e in 0..g.directed_edge_count() {
        total += dfs.count(e, e, 1)?;
    }
    Ok(total)
}

/// `tr(H^k)`, the number of SNBC walks of length `k`, computed exactly by
/// propagating integer walk counts from each starting edge.
pub fn snbc_count(g: &Graph, k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::ZeroLength);
    }
    let m = g.directed_edge_count();
    let succ = successors(g);
    let mut total: u64 = 0;
    let mut cur = vec![0u64; m];
    let mut next = vec![0u64; m];
    for start in 0..m {
        cur.iter_mut().for_each(|x| *x = 0);
        cur[start] = 1;
        for _ in 0..k {
            next.iter_mut().for_each(|x| *x = 0);
            for e in 0..m {
                if cur[e] == 0 {
                    continue;
                }
                for &f in &succ[e] {
                    next[f] = next[f].checked_add(cur[e]).ok_or(Error::Overflow)?;
                }
            }
            core::mem::swap(&mut cur, &mut next);
        }
        // cur[start] counts walks e_1 = start, ..., e_k, e_{k+1} = start,
        // i.e. closed walks whose wrap-around step is non-backtracking.
        total = total.checked_add(cur[start]).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Visited subgraph of `w` in its first-encountered ordering, relabeled so
/// that vertex `i` is the `i`-th vertex visited and orbits are oriented by
/// their first traversal.
pub fn visited_subgraph(g: &Graph, w: &Walk) -> Result<OrderedGraph> {
    Ok(from_key(&visited_key(g, w)?))
}

fn visited_key(g: &Graph, w: &Walk) -> Result<OrderedKey> {
    if w.is_empty() {
        return Err(Error::ZeroLength);
    }
    Walk::new(g, w.vertices.clone(), w.edges.clone())?;
    let mut vrank = vec![usize::MAX; g.vertex_count()];
    let mut seen_orbit = vec![false; g.directed_edge_count()];
    let mut next = 0;
    let mut rank_of = |v: usize, vrank: &mut Vec<usize>| {
        if vrank[v] == usize::MAX {
            vrank[v] = next;
            next += 1;
        }
        vrank[v]
    };
    rank_of(w.vertices[0], &mut vrank);
    let mut edges = Vec::new();
    for &e in &w.edges {
        let t = rank_of(g.tail(e), &mut vrank);
        let h = rank_of(g.head(e), &mut vrank);
        if !seen_orbit[e] {
            seen_orbit[e] = true;
            seen_orbit[g.inv(e)] = true;
            edges.push((t, h, g.is_half_loop(e)));
        }
    }
    Ok(OrderedKey {
        vertices: next,
        edges,
    })
}

/// Degree two and not incident to a half-loop or whole-loop.
pub fn is_bead(g: &Graph, v: usize) -> bool {
    g.out_edges(v).len() == 2 && g.out_edges(v).iter().all(|&e| !g.is_loop(e))
}

pub fn beads(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| is_bead(g, v)).collect()
}

/// An ordered reduced graph together with the length of each of its edges,
/// listed in edge order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HomotopyType {
    pub key: OrderedKey,
    pub lengths: Vec<usize>,
}

impl HomotopyType {
    pub fn reduced_graph(&self) -> OrderedGraph {
        from_key(&self.key)
    }

    /// Number of edges of any graph of this type.
    pub fn total_length(&self) -> usize {
        self.lengths.iter().sum()
    }
}

/// The bead suppression `S / V'`. The reduced graph keeps the order of the
/// surviving vertices; each beaded path is ranked by the earliest edge on
/// it and oriented along that edge's representative.
pub fn suppress_beads(s: &OrderedGraph, suppressed: &[usize]) -> Result<HomotopyType> {
    let g = s.graph();
    let mut gone = vec![false; g.vertex_count()];
    for &v in suppressed {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        if !is_bead(g, v) {
            return Err(Error::InvalidBeadSet("contains a vertex that is not a bead"));
        }
        gone[v] = true;
    }
    let (comp, count) = g.components();
    let mut kept = vec![false; count];
    for v in 0..g.vertex_count() {
        kept[comp[v]] |= !gone[v];
    }
    if kept.iter().any(|&k| !k) {
        return Err(Error::InvalidBeadSet("swallows a connected component"));
    }

    let vrank = s.vertex_ranks();
    let erank = s.edge_ranks();
    // Beaded paths, keyed by their first directed edge.
    let mut path_of = vec![usize::MAX; g.directed_edge_count()];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for e in 0..g.directed_edge_count() {
        if gone[g.tail(e)] {
            continue;
        }
        let mut path = vec![e];
        let mut cur = e;
        while gone[g.head(cur)] {
            cur = *g
                .out_edges(g.head(cur))
                .iter()
                .find(|&&f| f != g.inv(cur))
                .expect("beads have two distinct exits");
            path.push(cur);
        }
        path_of[e] = paths.len();
        paths.push(path);
    }
    let inv_path = |p: &Vec<usize>| path_of[g.inv(*p.last().unwrap())];

    // One entry per orbit of beaded paths: (earliest edge rank, path id
    // traversing that edge along its orientation).
    let mut orbits = Vec::new();
    for (id, p) in paths.iter().enumerate() {
        if inv_path(p) < id {
            continue;
        }
        let best = *p.iter().min_by_key(|&&e| erank[e].0).unwrap();
        let rank = erank[best].0;
        let along = if erank[best].1 { id } else { inv_path(p) };
        orbits.push((rank, along));
    }
    orbits.sort_unstable();

    let mut new_rank = vec![usize::MAX; g.vertex_count()];
    let mut order: Vec<usize> = (0..g.vertex_count()).filter(|&v| !gone[v]).collect();
    order.sort_unstable_by_key(|&v| vrank[v]);
    for (i, &v) in order.iter().enumerate() {
        new_rank[v] = i;
    }
    let mut edges = Vec::with_capacity(orbits.len());
    let mut lengths = Vec::with_capacity(orbits.len());
    for &(_, id) in &orbits {
        let p = &paths[id];
        let t = new_rank[g.tail(p[0])];
        let h = new_rank[g.head(*p.last().unwrap())];
        edges.push((t, h, inv_path(p) == id));
        lengths.push(p.len());
    }
    Ok(HomotopyType {
        key: OrderedKey {
            vertices: order.len(),
            edges,
        },
        lengths,
    })
}

/// Reduction and edge lengths of a non-backtracking walk.
pub fn walk_homotopy_type(g: &Graph, w: &Walk) -> Result<HomotopyType> {
    let s = visited_subgraph(g, w)?;
    // Vertex `i` of `s` is the `i`-th distinct vertex of the walk.
    let target = *w.vertices.last().unwrap();
    let mut seen = Vec::new();
    for &v in &w.vertices {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    let last = seen.iter().position(|&v| v == target).unwrap();
    let suppressed: Vec<usize> = beads(s.graph())
        .into_iter()
        .filter(|&v| v != 0 && v != last)
        .collect();
    suppress_beads(&s, &suppressed)
}

/// A variable-length graph with the vertices that were glued in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableLengthGraph {
    pub graph: OrderedGraph,
    pub interior: Vec<usize>,
}

/// Replaces the `j`-th edge of `t` (in edge order) by a path of
/// `lengths[j]` edges, running along its orientation. Vertices of `t` keep
/// their relative order; the interior vertices of edge `j` are placed after
/// every vertex of `t` up to its tail and before its head when the head is
/// new. If `t` carries a first-encountered ordering, so does the result.
pub fn vlg(t: &OrderedGraph, lengths: &[usize]) -> Result<VariableLengthGraph> {
    let tg = t.graph();
    if lengths.len() != t.edge_order().len() {
        return Err(Error::LengthMismatch);
    }
    if let Some(j) = lengths.iter().position(|&l| l == 0) {
        return Err(Error::ZeroEdgeLength(j));
    }
    let trank = t.vertex_ranks();
    let tverts = t.vertex_order();
    let mut label = vec![usize::MAX; tg.vertex_count()];
    let mut placed = 0; // T-vertices emitted, by rank
    let mut next_id = 0;
    let mut interior = Vec::new();
    let mut edges = Vec::new();

    let emit_through = |rank: usize, label: &mut Vec<usize>, placed: &mut usize, next_id: &mut usize| {
        while *placed <= rank {
            label[tverts[*placed]] = *next_id;
            *next_id += 1;
            *placed += 1;
        }
    };

    for (j, &e) in t.edge_order().iter().enumerate() {
        let len = lengths[j];
        if tg.is_half_loop(e) {
            if len != 1 {
                return Err(Error::Precondition("half-loops have length 1"));
            }
            emit_through(trank[tg.tail(e)], &mut label, &mut placed, &mut next_id);
            let v = label[tg.tail(e)];
            edges.push((v, v, true));
            continue;
        }
        emit_through(trank[tg.tail(e)], &mut label, &mut placed, &mut next_id);
        let mut prev = label[tg.tail(e)];
        for _ in 1..len {
            let x = next_id;
            next_id += 1;
            interior.push(x);
            edges.push((prev, x, false));
            prev = x;
        }
        emit_through(trank[tg.head(e)], &mut label, &mut placed, &mut next_id);
        edges.push((prev, label[tg.head(e)], false));
    }
    emit_through(tverts.len().wrapping_sub(1), &mut label, &mut placed, &mut next_id);
    Ok(VariableLengthGraph {
        graph: from_key(&OrderedKey {
            vertices: next_id,
            edges,
        }),
        interior,
    })
}

/// SNBC walks of length `k` grouped by homotopy type.
pub fn snbc_by_type(g: &Graph, k: usize, budget: u64) -> Result<BTreeMap<HomotopyType, u64>> {
    let mut out = BTreeMap::new();
    let mut failure = None;
    for_each_snbc(g, k, budget, |edges| {
        if failure.is_some() {
            return;
        }
        let w = Walk::from_edges(g, edges.to_vec()).expect("enumerated walks are valid");
        match walk_homotopy_type(g, &w) {
            Ok(ty) => *out.entry(ty).or_insert(0) += 1,
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
