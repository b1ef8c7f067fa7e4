//! Canonical forms of multigraphs with half-loops and whole-loops, up to
//! isomorphism.
//!
//! A graph is determined up to isomorphism by its vertex count, the number
//! of orbits joining each pair of distinct vertices, and the numbers of
//! whole-loops and half-loops at each vertex. The canonical form is the
//! lexicographically smallest encoding of that data over the vertex orders
//! reached by colour refinement with individualization.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

/// Isomorphism-invariant encoding; equal keys mean isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey(Vec<u32>);

impl CanonKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

struct Counts {
    n: usize,
    // mult[u * n + v]: orbits between u != v; diagonal unused.
    mult: Vec<u32>,
    whole: Vec<u32>,
    half: Vec<u32>,
}

impl Counts {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut c = Counts {
            n,
            mult: vec![0; n * n],
            whole: vec![0; n],
            half: vec![0; n],
        };
        for e in g.orbit_representatives() {
            let (t, h) = (g.tail(e), g.head(e));
            if g.is_half_loop(e) {
                c.half[t] += 1;
            } else if t == h {
                c.whole[t] += 1;
            } else {
                c.mult[t * n + h] += 1;
                c.mult[h * n + t] += 1;
            }
        }
        c
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut key = Vec::with_capacity(1 + 2 * n + n * (n - 1) / 2);
        key.push(n as u32);
        for &v in order {
            key.push(self.whole[v]);
            key.push(self.half[v]);
        }
        for i in 0..n {
            for j in i + 1..n {
                key.push(self.mult[order[i] * n + order[j]]);
            }
        }
        key
    }

    /// Refines `colour` to the coarsest equitable partition below it.
    /// Colours are ranks of label-independent signatures.
    fn refine(&self, colour: &mut [u32]) {
        let n = self.n;
        let mut classes = distinct(colour);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..n)
                        .filter(|&u| u != v && self.mult[v * n + u] > 0)
                        .map(|u| (colour[u], self.mult[v * n + u]))
                        .collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let mut ranked: BTreeMap<&(u32, Vec<(u32, u32)>), u32> = BTreeMap::new();
            for s in &sigs {
                ranked.insert(s, 0);
            }
            for (i, r) in ranked.values_mut().enumerate() {
                *r = i as u32;
            }
            for v in 0..n {
                colour[v] = ranked[&sigs[v]];
            }
            let now = ranked.len();
            if now == classes {
                return;
            }
            classes = now;
        }
    }

    fn search(&self, colour: Vec<u32>, best: &mut Option<Vec<u32>>) {
        let n = self.n;
        let mut colour = colour;
        self.refine(&mut colour);
        // First non-singleton cell, by colour.
        let mut size = BTreeMap::new();
        for &c in &colour {
            *size.entry(c).or_insert(0usize) += 1;
        }
        match size.iter().find(|(_, &s)| s > 1) {
            None => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_unstable_by_key(|&v| colour[v]);
                let key = self.encode(&order);
                if best.as_ref().is_none_or(|b| key < *b) {
                    *best = Some(key);
                }
            }
            Some((&cell, _)) => {
                for v in 0..n {
                    if colour[v] != cell {
                        continue;
                    }
                    let next = colour
                        .iter()
                        .enumerate()
                        .map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 })
                        .collect();
                    self.search(next, best);
                }
            }
        }
    }
}

fn distinct(colour: &[u32]) -> usize {
    let mut c = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Canonical form of `g`.
pub fn canonical_key(g: &Graph) -> CanonKey {
    let counts = Counts::new(g);
    let n = counts.n;
    if n == 0 {
        return CanonKey(vec![0]);
    }
    let initial: Vec<(u32, u32, usize)> = (0..n)
        .map(|v| (counts.whole[v], counts.half[v], g.out_edges(v).len()))
        .collect();
    let mut sorted = initial.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let colour = initial
        .iter()
        .map(|x| sorted.binary_search(x).unwrap() as u32)
        .collect();
    let mut best = None;
    counts.search(colour, &mut best);
    CanonKey(best.unwrap())
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.directed_edge_count() == b.directed_edge_count()
        && canonical_key(a) == canonical_key(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::GraphBuilder;
    use proptest::prelude::*;

    fn relabel(g: &Graph, perm: &[usize]) -> Graph {
        let tail = g.tails().iter().map(|&v| perm[v]).collect();
        let head = g.heads().iter().map(|&v| perm[v]).collect();
        Graph::from_parts(g.vertex_count(), tail, head, g.involution().to_vec()).unwrap()
    }

    #[test]
    fn distinguishes_loop_types() {
        assert_ne!(
            canonical_key(&families::bouquet(1, 0)),
            canonical_key(&families::bouquet(0, 2))
        );
        assert_ne!(
            canonical_key(&families::multi_chain(&[3, 2])),
            canonical_key(&families::multi_chain(&[2, 3, 1])),
        );
        assert!(is_isomorphic(&families::multi_chain(&[3, 2]), &families::multi_chain(&[2, 3])));
        assert!(!is_isomorphic(&families::cycle(6), &{
            let mut b = GraphBuilder::new(6);
            for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
                b.edge(u, v);
            }
            b.build()
        }));
        assert!(is_isomorphic(&families::petersen(), &relabel(&families::petersen(), &[3, 1, 4, 0, 5, 9, 2, 6, 8, 7])));
    }

    proptest! {
        #[test]
        fn invariant_under_relabeling(
            specs in proptest::collection::vec((0usize..6, 0usize..6, 0u8..3), 1..9),
            perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let mut b = GraphBuilder::new(6);
            for (u, v, kind) in specs {
                match kind {
                    0 => { b.half_loop(u); }
                    1 => { b.whole_loop(u); }
                    _ => { b.edge(u, v); }
                }
            }
            let g = b.build();
            prop_assert_eq!(canonical_key(&g), canonical_key(&relabel(&g, &perm)));
        }
    }
}
