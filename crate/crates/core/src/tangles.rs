//! Tangles: connected graphs of small order whose Hashimoto spectral radius
//! `mu_1` is large.
//!
//! Besides the predicate and the bounded subgraph scan, this module holds
//! the two order-preserving, `mu_1`-non-decreasing reductions used to bound
//! the tangle power, and the closed forms `m(d)`, `m'(d)` they lead to.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::canon::{canonical_key, CanonKey};
use crate::error::{Error, Result};
use crate::families;
use crate::graph::{Graph, GraphBuilder};
use crate::spectral::mu1;

/// Tolerance band around `nu` inside which `mu_1` is reported as boundary.
pub const MU1_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangleQuery {
    pub nu: f64,
    /// Tangles have order strictly below `r`.
    pub r: i64,
    /// `mu_1 > nu` when set, `mu_1 >= nu` otherwise.
    pub strict: bool,
}

impl TangleQuery {
    /// Whether `mu_1` satisfies the threshold. Values within [`MU1_TOL`] of
    /// `nu` count for `>=` and not for `>`.
    pub fn accepts(&self, mu1: f64) -> bool {
        if self.strict {
            mu1 > self.nu + MU1_TOL
        } else {
            mu1 >= self.nu - MU1_TOL
        }
    }

    pub fn on_boundary(&self, mu1: f64) -> bool {
        (mu1 - self.nu).abs() <= MU1_TOL
    }
}

/// `psi` is connected, `ord(psi) < r`, and `mu_1(psi)` clears `nu`.
pub fn is_tangle(psi: &Graph, q: &TangleQuery) -> Result<bool> {
    if psi.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !psi.is_connected() || psi.order() >= q.r {
        return Ok(false);
    }
    Ok(q.accepts(mu1(psi)?))
}

/// Identifies the endpoints of the non-loop edge `e` and discards its orbit.
/// The merged vertex keeps the smaller id; ids above the removed vertex
/// shift down by one. Other edges between the two endpoints become
/// whole-loops.
pub fn contract_nonloop_edge(psi: &Graph, e: usize) -> Result<Graph> {
    if e >= psi.directed_edge_count() {
        return Err(Error::UnknownEdge(e));
    }
    if psi.is_loop(e) {
        return Err(Error::LoopEdge(e));
    }
    let (a, b) = (psi.tail(e), psi.head(e));
    let keep = a.min(b);
    let gone = a.max(b);
    let relabel = |v: usize| {
        let v = if v == gone { keep } else { v };
        if v > gone {
            v - 1
        } else {
            v
        }
    };
    rebuild(psi, psi.vertex_count() - 1, relabel, &[e, psi.inv(e)])
}

/// Identifies `u` and `v`, two non-adjacent vertices with a common
/// neighbour `w`, and discards one edge between `w` and `u`.
pub fn identify_distance_two(psi: &Graph, u: usize, v: usize, w: usize) -> Result<Graph> {
    let n = psi.vertex_count();
    for x in [u, v, w] {
        if x >= n {
            return Err(Error::UnknownVertex(x));
        }
    }
    if u == v || w == u || w == v {
        return Err(Error::Precondition("u, v, w must be distinct"));
    }
    let joins = |x: usize, y: usize| psi.out_edges(x).iter().find(|&&f| psi.head(f) == y).copied();
    if joins(u, v).is_some() {
        return Err(Error::Precondition("u and v are adjacent"));
    }
    let (Some(wu), Some(_)) = (joins(w, u), joins(w, v)) else {
        return Err(Error::Precondition("u and v must both be adjacent to w"));
    };
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel = |x: usize| {
        let x = if x == gone { keep } else { x };
        if x > gone {
            x - 1
        } else {
            x
        }
    };
    rebuild(psi, n - 1, relabel, &[wu, psi.inv(wu)])
}

fn rebuild(psi: &Graph, n: usize, relabel: impl Fn(usize) -> usize, drop: &[usize]) -> Result<Graph> {
    let kept: Vec<usize> = (0..psi.directed_edge_count()).filter(|e| !drop.contains(e)).collect();
    let mut new_id = vec![usize::MAX; psi.directed_edge_count()];
    for (i, &e) in kept.iter().enumerate() {
        new_id[e] = i;
    }
    let tail = kept.iter().map(|&e| relabel(psi.tail(e))).collect();
    let head = kept.iter().map(|&e| relabel(psi.head(e))).collect();
    let inv = kept.iter().map(|&e| new_id[psi.inv(e)]).collect();
    Graph::from_parts(n, tail, head, inv)
}

fn check_degree(d: u64) -> Result<()> {
    if d < 3 {
        return Err(Error::DegreeTooSmall(d as usize));
    }
    Ok(())
}

/// `m(d) = floor((sqrt(d-1) + 1) / 2) + 1`, the least `m` with
/// `2m - 1 > sqrt(d-1)`.
pub fn m_whole(d: u64) -> Result<u64> {
    check_degree(d)?;
    Ok((d - 1).isqrt().div_ceil(2) + 1)
}

/// Lower bound `m(d) - 1` on the tangle power of `d`-regular bases.
pub fn tau_tang_lower_whole(d: u64) -> Result<u64> {
    Ok(m_whole(d)? - 1)
}

/// `m'(d) = floor(sqrt(d-1)) + 2`, the least `m'` with `m' - 1 > sqrt(d-1)`.
pub fn m_no_whole(d: u64) -> Result<u64> {
    check_degree(d)?;
    Ok((d - 1).isqrt() + 2)
}

/// Lower bound `m'(d) - 2` for models in which no whole-loop occurs.
pub fn tau_tang_lower_no_whole(d: u64) -> Result<u64> {
    Ok(m_no_whole(d)? - 2)
}

/// A graph from the literature with its claimed order and `mu_1` bound.
#[derive(Debug, Clone)]
pub struct NamedTangle {
    pub name: String,
    pub graph: Graph,
    pub order: i64,
    /// Claimed `mu_1`, as a bound or an exact value per `claim`.
    pub mu1: f64,
    pub claim: Claim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    AtLeast,
    Greater,
    Exact,
}

/// The three-vertex and four-vertex witnesses and bouquets of `m` whole-loops
/// for `m = 1..=4`.
pub fn example_tangles() -> Vec<NamedTangle> {
    let mut out = vec![
        NamedTangle {
            name: "three-vertex witness (3 and 2 parallel edges)".into(),
            graph: families::multi_chain(&[3, 2]),
            order: 2,
            mu1: libm::sqrt(6.0),
            claim: Claim::AtLeast,
        },
        NamedTangle {
            name: "four-vertex chain of double edges".into(),
            graph: families::multi_chain(&[2, 2, 2]),
            order: 2,
            mu1: libm::sqrt(3.0),
            claim: Claim::Greater,
        },
    ];
    for m in 1..=4usize {
        out.push(NamedTangle {
            name: alloc::format!("bouquet of {m} whole-loops"),
            graph: families::bouquet(m, 0),
            order: m as i64 - 1,
            mu1: (2 * m - 1) as f64,
            claim: Claim::Exact,
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScanCaps {
    pub max_vertices: usize,
    pub max_subgraphs: usize,
}

impl Default for ScanCaps {
    fn default() -> Self {
        ScanCaps {
            max_vertices: 12,
            max_subgraphs: 20_000,
        }
    }
}

/// A subgraph met by the scan, in the ids of the scanned graph.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoundSubgraph {
    pub vertices: Vec<usize>,
    /// One directed edge per orbit.
    pub edges: Vec<usize>,
    pub mu1: f64,
    pub order: i64,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangleReport {
    /// Subgraphs satisfying the query.
    pub found: Vec<FoundSubgraph>,
    /// Subgraphs of order below `r` whose `mu_1` is within [`MU1_TOL`] of
    /// `nu`.
    pub boundary: Vec<FoundSubgraph>,
    /// Distinct subgraphs examined.
    pub scanned: usize,
    /// Either cap cut the search short; an empty `found` then means "none
    /// within caps".
    pub caps_hit: bool,
    pub vertex_cap_hit: bool,
    pub subgraph_cap_hit: bool,
}

impl TangleReport {
    pub fn has_tangles(&self) -> bool {
        !self.found.is_empty()
    }
}

struct Scanner<'a> {
    p: &'a Graph,
    caps: ScanCaps,
    vertex_cap_hit: bool,
}

/// A connected pruned subgraph under construction.
#[derive(Clone)]
struct State {
    edges: Vec<usize>, // orbit representatives, sorted
    in_v: Vec<bool>,
    in_e: Vec<bool>,
    nv: usize,
}

impl State {
    fn order(&self) -> i64 {
        self.edges.len() as i64 - self.nv as i64
    }
}

impl Scanner<'_> {
    fn rep(&self, e: usize) -> usize {
        e.min(self.p.inv(e))
    }

    fn extend(&self, s: &State, ear: &[usize]) -> State {
        let mut t = s.clone();
        for &e in ear {
            let r = self.rep(e);
            if !t.in_e[r] {
                t.in_e[r] = true;
                t.edges.push(r);
            }
            for x in [self.p.tail(e), self.p.head(e)] {
                if !t.in_v[x] {
                    t.in_v[x] = true;
                    t.nv += 1;
                }
            }
        }
        t.edges.sort_unstable();
        t
    }

    /// Ears of `s` starting at `x`: paths of new edges through new vertices
    /// ending in `s`, at a half-loop, or on an earlier vertex of the path.
    fn ears_from(&mut self, s: &State, x: usize, out: &mut Vec<Vec<usize>>) {
        let mut path = Vec::new();
        let mut on_path = vec![x];
        for &f in self.p.out_edges(x) {
            if s.in_e[self.rep(f)] {
                continue;
            }
            if self.p.is_half_loop(f) {
                out.push(vec![f]);
                continue;
            }
            path.push(f);
            self.follow(s, &mut path, &mut on_path, out);
            path.pop();
        }
    }

    fn follow(&mut self, s: &State, path: &mut Vec<usize>, on_path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        let y = self.p.head(last);
        if s.in_v[y] || on_path.contains(&y) {
            out.push(path.clone());
            return;
        }
        if s.nv + on_path.len() > self.caps.max_vertices {
            // `y` would be one vertex too many.
            self.vertex_cap_hit = true;
            return;
        }
        on_path.push(y);
        for &f in self.p.out_edges(y) {
            if f == self.p.inv(last) || s.in_e[self.rep(f)] || path.iter().any(|&g| self.rep(g) == self.rep(f)) {
                continue;
            }
            if self.p.is_half_loop(f) {
                path.push(f);
                out.push(path.clone());
                path.pop();
                continue;
            }
            path.push(f);
            self.follow(s, path, on_path, out);
            path.pop();
        }
        on_path.pop();
    }

    fn empty_state(&self) -> State {
        State {
            edges: Vec::new(),
            in_v: vec![false; self.p.vertex_count()],
            in_e: vec![false; self.p.directed_edge_count()],
            nv: 0,
        }
    }

    /// Cycles through `x`, and paths from a half-loop at `x` to another
    /// half-loop (possibly followed by a cycle instead).
    fn seeds_at(&mut self, x: usize, out: &mut Vec<State>) {
        let mut base = self.empty_state();
        base.in_v[x] = true;
        base.nv = 1;
        let mut ears = Vec::new();
        self.ears_from(&base, x, &mut ears);
        for ear in ears {
            let closes = self.p.head(*ear.last().unwrap()) == x && !self.p.is_half_loop(*ear.last().unwrap());
            if closes {
                out.push(self.extend(&base, &ear));
            }
        }
        for &h in self.p.out_edges(x) {
            if !self.p.is_half_loop(h) {
                continue;
            }
            let with_h = self.extend(&base, &[h]);
            let mut ears = Vec::new();
            self.ears_from(&with_h, x, &mut ears);
            for ear in ears {
                out.push(self.extend(&with_h, &ear));
            }
        }
    }
}

/// Searches the connected subgraphs of `prune(g)` for tangles.
///
/// Every connected graph has the same `mu_1` and order as its pruned core,
/// so only connected pruned subgraphs are examined. They are grown from
/// cycles and half-loop paths by adding one ear at a time, which raises the
/// order by one; growth stops at order `r` or at `caps.max_vertices`
/// vertices. At most `caps.max_subgraphs` distinct subgraphs are examined.
pub fn scan_tangles(g: &Graph, q: &TangleQuery, caps: ScanCaps) -> TangleReport {
    let pruned = g.prune_with_map();
    let p = &pruned.graph;
    let mut sc = Scanner {
        p,
        caps,
        vertex_cap_hit: false,
    };
    let mut report = TangleReport::default();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cache: BTreeMap<CanonKey, f64> = BTreeMap::new();
    let mut queue = VecDeque::new();

    let mut seeds = Vec::new();
    for x in 0..p.vertex_count() {
        sc.seeds_at(x, &mut seeds);
    }
    queue.extend(seeds);

    while let Some(s) = queue.pop_front() {
        if s.order() >= q.r || seen.contains(&s.edges) {
            continue;
        }
        if report.scanned >= caps.max_subgraphs {
            report.subgraph_cap_hit = true;
            break;
        }
        seen.insert(s.edges.clone());
        report.scanned += 1;

        let sub = p.spanned_by_orbits(&s.edges).expect("scan states are subgraphs");
        let key = canonical_key(&sub.graph);
        let value = match cache.get(&key) {
            Some(&v) => v,
            None => {
                let v = mu1(&sub.graph).expect("scan states are nonempty");
                cache.insert(key, v);
                v
            }
        };
        let found = || FoundSubgraph {
            vertices: sub.vertex_map.iter().map(|&v| pruned.vertex_map[v]).collect(),
            edges: s.edges.iter().map(|&e| pruned.edge_map[e]).collect(),
            mu1: value,
            order: s.order(),
            boundary: q.on_boundary(value),
        };
        if q.accepts(value) {
            report.found.push(found());
        }
        if q.on_boundary(value) {
            report.boundary.push(found());
        }

        if s.order() + 1 >= q.r {
            continue;
        }
        let mut ears = Vec::new();
        for x in 0..p.vertex_count() {
            if s.in_v[x] {
                sc.ears_from(&s, x, &mut ears);
            }
        }
        for ear in ears {
            let t = sc.extend(&s, &ear);
            if !seen.contains(&t.edges) {
                queue.push_back(t);
            }
        }
    }
    report.vertex_cap_hit = sc.vertex_cap_hit;
    report.caps_hit = report.vertex_cap_hit || report.subgraph_cap_hit;
    report
}

/// `n` vertices with `k` parallel edges between every pair and no loops.
pub fn all_pairs_multigraph(n: usize, k: usize) -> Graph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.edges(u, v, k);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{build_lift, sample_assignment, ModelSpec};
    use libm::sqrt;
    use proptest::prelude::*;

    fn q(nu: f64, r: i64, strict: bool) -> TangleQuery {
        TangleQuery { nu, r, strict }
    }

    #[test]
    fn predicate_examples() {
        assert_eq!(is_tangle(&families::bouquet(2, 0), &q(sqrt(3.0), 2, true)), Ok(true));
        assert_eq!(is_tangle(&families::cycle(5), &q(1.1, 10, false)), Ok(false));
        let mut b = GraphBuilder::new(2);
        b.whole_loop(0);
        b.whole_loop(0);
        b.whole_loop(1);
        b.whole_loop(1);
        assert_eq!(is_tangle(&b.build(), &q(1.5, 10, false)), Ok(false));
        assert_eq!(is_tangle(&Graph::empty(), &q(1.5, 10, false)), Err(Error::EmptyGraph));
        // Order bound is strict.
        assert_eq!(is_tangle(&families::bouquet(2, 0), &q(sqrt(3.0), 1, true)), Ok(false));
        // mu_1 = 1 on a cycle: boundary for nu = 1.
        assert_eq!(is_tangle(&families::cycle(4), &q(1.0, 5, false)), Ok(true));
        assert_eq!(is_tangle(&families::cycle(4), &q(1.0, 5, true)), Ok(false));
    }

    #[test]
    fn contraction_examples() {
        let c = contract_nonloop_edge(&families::multi_edge(3), 0).unwrap();
        assert!(crate::canon::is_isomorphic(&c, &families::bouquet(2, 0)));
        let c3 = families::cycle(3);
        let c = contract_nonloop_edge(&c3, 0).unwrap();
        assert!(crate::canon::is_isomorphic(&c, &families::multi_edge(2)));
        assert_eq!(c.order(), 0);
        assert_eq!(contract_nonloop_edge(&families::bouquet(1, 0), 0), Err(Error::LoopEdge(0)));

        let mut g = families::petersen();
        let ord = g.order();
        while g.vertex_count() > 1 {
            let e = (0..g.directed_edge_count()).find(|&e| !g.is_loop(e)).unwrap();
            g = contract_nonloop_edge(&g, e).unwrap();
            assert_eq!(g.order(), ord);
        }
        assert_eq!(g.whole_loop_count(), (ord + 1) as usize);
    }

    #[test]
    fn distance_two_examples() {
        let c4 = families::cycle(4);
        let g = identify_distance_two(&c4, 0, 2, 1).unwrap();
        assert_eq!(g.order(), c4.order());
        assert_eq!(g.whole_loop_count(), 0);
        // 1 - {0,2} = 3: one pendant edge and a double edge.
        let mut b = GraphBuilder::new(3);
        b.edge(0, 1);
        b.edges(1, 2, 2);
        assert!(crate::canon::is_isomorphic(&g, &b.build()));

        let star = families::complete_bipartite(1, 3);
        let g = identify_distance_two(&star, 1, 2, 0).unwrap();
        assert_eq!(g.order(), star.order());
        assert_eq!(g.whole_loop_count() + g.half_loop_count(), 0);

        assert!(identify_distance_two(&families::cycle(3), 0, 1, 2).is_err());
    }

    #[test]
    fn formula_examples() {
        assert_eq!((m_whole(10), tau_tang_lower_whole(10)), (Ok(3), Ok(2)));
        assert_eq!((m_whole(3), tau_tang_lower_whole(3)), (Ok(2), Ok(1)));
        assert_eq!((m_no_whole(10), tau_tang_lower_no_whole(10)), (Ok(5), Ok(3)));
        assert_eq!((m_no_whole(5), tau_tang_lower_no_whole(5)), (Ok(4), Ok(2)));
        assert_eq!((m_no_whole(3), tau_tang_lower_no_whole(3)), (Ok(3), Ok(1)));
        assert_eq!(m_whole(2), Err(Error::DegreeTooSmall(2)));
        for d in 3..=1000u64 {
            // Minimality in exact integer arithmetic: a > sqrt(d-1) iff a^2 > d-1.
            let m = m_whole(d).unwrap();
            assert!((2 * m - 1).pow(2) > d - 1 && (2 * m - 3).pow(2) <= d - 1);
            let mp = m_no_whole(d).unwrap();
            assert!((mp - 1).pow(2) > d - 1 && (mp - 2).pow(2) <= d - 1);
        }
    }

    #[test]
    fn catalog_claims_hold() {
        for t in example_tangles() {
            assert_eq!(t.graph.order(), t.order, "{}", t.name);
            let v = mu1(&t.graph).unwrap();
            match t.claim {
                Claim::AtLeast => assert!(v >= t.mu1 - 1e-9, "{}: {v}", t.name),
                Claim::Greater => assert!(v > t.mu1 + 1e-9, "{}: {v}", t.name),
                Claim::Exact => assert!((v - t.mu1).abs() <= 1e-9, "{}: {v}", t.name),
            }
        }
    }

    #[test]
    fn closed_form_mu1() {
        for whole in 0..4 {
            for half in 0..4 {
                if 2 * whole + half < 2 {
                    continue;
                }
                let g = families::bouquet(whole, half);
                assert!((mu1(&g).unwrap() - (2 * whole + half) as f64 + 1.0).abs() < 1e-9);
                assert_eq!(g.order(), (whole + half) as i64 - 1);
            }
        }
        for m in 2..7 {
            let g = families::multi_edge(m);
            assert!((mu1(&g).unwrap() - (m as f64 - 1.0)).abs() < 1e-9);
            assert_eq!(g.order() + 1, m as i64 - 1);
        }
        for n in 3..6 {
            for k in 2..4 {
                let g = all_pairs_multigraph(n, k);
                let bound = g.order() as f64 + 1.0 - ((n - 2) * (n - 2)) as f64;
                assert!(mu1(&g).unwrap() <= bound + 1e-9);
            }
        }
    }

    #[test]
    fn scan_examples() {
        let caps = ScanCaps::default();
        let r = scan_tangles(&families::path(6), &q(1.5, 3, false), caps);
        assert!(r.found.is_empty() && !r.caps_hit && r.scanned == 0);

        // A figure eight hanging off a cycle.
        let mut b = GraphBuilder::new(5);
        for i in 0..4 {
            b.edge(i, (i + 1) % 4);
        }
        b.edge(0, 4);
        b.whole_loop(4);
        b.whole_loop(4);
        let r = scan_tangles(&b.build(), &q(sqrt(3.0), 2, true), caps);
        assert!(r.has_tangles());
        assert!(r.found.iter().all(|f| f.order < 2 && f.mu1 > sqrt(3.0)));

        let r = scan_tangles(&families::cycle(7), &q(1.5, 5, false), caps);
        assert!(!r.has_tangles() && !r.caps_hit && r.scanned == 1);
    }

    /// Every subset of orbits of a small graph, filtered to connected pruned
    /// nonempty subgraphs.
    fn brute_force(g: &Graph, qq: &TangleQuery) -> BTreeSet<Vec<usize>> {
        let reps = g.orbit_representatives();
        let mut out = BTreeSet::new();
        for mask in 1u32..(1 << reps.len()) {
            let chosen: Vec<usize> = (0..reps.len()).filter(|i| mask >> i & 1 == 1).map(|i| reps[i]).collect();
            let sub = g.spanned_by_orbits(&chosen).unwrap().graph;
            if sub.is_connected() && sub.is_pruned() && sub.order() < qq.r && qq.accepts(mu1(&sub).unwrap()) {
                out.insert(chosen);
            }
        }
        out
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..5, proptest::collection::vec((0usize..5, 0usize..5, 0u8..4), 1..9)).prop_map(|(n, specs)| {
            let mut b = GraphBuilder::new(n);
            for (u, v, kind) in specs {
                let (u, v) = (u % n, v % n);
                match kind {
                    0 => {
                        b.half_loop(u);
                    }
                    1 => {
                        b.whole_loop(u);
                    }
                    _ => {
                        b.edge(u, v);
                    }
                }
            }
            b.build()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scan_matches_brute_force(g in arb_graph(), nu in 0.5f64..3.0, r in 0i64..4, strict in any::<bool>()) {
            let qq = q(nu, r, strict);
            let caps = ScanCaps { max_vertices: 8, max_subgraphs: 1_000_000 };
            let report = scan_tangles(&g, &qq, caps);
            prop_assert!(!report.caps_hit);
            let mut got: BTreeSet<Vec<usize>> = BTreeSet::new();
            for f in &report.found {
                let mut e: Vec<usize> = f.edges.iter().map(|&x| x.min(g.inv(x))).collect();
                e.sort_unstable();
                got.insert(e);
            }
            prop_assert_eq!(got, brute_force(&g, &qq));
        }

        #[test]
        fn reductions_preserve_order_and_raise_mu1(g in arb_graph(), pick in any::<prop::sample::Index>()) {
            prop_assume!(g.is_connected());
            let before = mu1(&g).unwrap();
            let nonloops: Vec<usize> = (0..g.directed_edge_count()).filter(|&e| !g.is_loop(e)).collect();
            if !nonloops.is_empty() {
                let c = contract_nonloop_edge(&g, nonloops[pick.index(nonloops.len())]).unwrap();
                prop_assert_eq!(c.order(), g.order());
                prop_assert!(mu1(&c).unwrap() >= before - 1e-8);
            }
            let n = g.vertex_count();
            for u in 0..n {
                for v in 0..n {
                    for w in 0..n {
                        if let Ok(h) = identify_distance_two(&g, u, v, w) {
                            prop_assert_eq!(h.order(), g.order());
                            prop_assert_eq!(h.whole_loop_count(), g.whole_loop_count());
                            prop_assert_eq!(h.half_loop_count(), g.half_loop_count());
                            prop_assert!(mu1(&h).unwrap() >= before - 1e-8);
                        }
                    }
                }
            }
        }

        #[test]
        fn tangles_in_lifts_respect_base_girth(seed in 0u64..200) {
            let base = families::complete(4);
            let a = sample_assignment(&base, 3, &ModelSpec::permutation(), seed).unwrap();
            let lift = build_lift(&base, a).unwrap();
            let report = scan_tangles(lift.cover(), &q(1.2, 2, false), ScanCaps { max_vertices: 8, max_subgraphs: 2000 });
            let girth = base.girth().unwrap();
            for f in &report.found {
                let sub = lift.cover().spanned_by_orbits(&f.edges).unwrap().graph;
                prop_assert!(sub.girth().unwrap() >= girth);
            }
        }
    }
}
