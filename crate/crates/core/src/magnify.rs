//! Vertex expansion: `gamma`-magnifiers, `(R, gamma)`-pseudo-magnifiers,
//! and the fibre-imbalance expansion of subsets of covers.
//!
//! For `U` a set of vertices, `Gamma(U)` is the set of vertices joined by
//! an edge to a vertex of `U`; a vertex with a loop is its own neighbour.
//! `G` is an `(R, gamma)`-pseudo-magnifier if `#(Gamma(U) \ U) >= gamma #U`
//! whenever `R <= #U <= #V/2`, and a `gamma`-magnifier if this holds for
//! `R = 1`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lift::Lift;
use crate::rng::stream_rng;
use crate::spectral::second_eigenvalue;

/// Largest vertex count for exhaustive subset enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 20;

/// Sorted neighbourhood of `u`.
pub fn neighborhood(g: &Graph, u: &[usize]) -> Result<Vec<usize>> {
    let mut mark = vec![false; g.vertex_count()];
    for &v in u {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        for &e in g.out_edges(v) {
            mark[g.head(e)] = true;
        }
    }
    Ok((0..g.vertex_count()).filter(|&v| mark[v]).collect())
}

/// `#(Gamma(U) \ U)`.
pub fn outer_boundary(g: &Graph, u: &[usize]) -> Result<usize> {
    let mut inside = vec![false; g.vertex_count()];
    for &v in u {
        if v >= g.vertex_count() {
            return Err(Error::UnknownVertex(v));
        }
        inside[v] = true;
    }
    Ok(neighborhood(g, u)?.into_iter().filter(|&v| !inside[v]).count())
}

/// A set of cover vertices, with its fibres over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexSubset {
    pub members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSubset { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `U_v = { i : (v, i) in U }` for each base vertex `v`.
    pub fn fibres(&self, lift: &Lift) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); lift.base().vertex_count()];
        for &x in &self.members {
            let (v, i) = lift.split_vertex(x);
            out[v].push(i);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Mode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ModeKind {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MagnificationResult {
    pub holds: bool,
    /// A set in the size window with `#(Gamma(U) \ U) < gamma #U`.
    pub witness: Option<VertexSubset>,
    pub mode: ModeKind,
    /// Subsets checked.
    pub trials: u64,
}

fn neighbour_masks(g: &Graph) -> Vec<u32> {
    (0..g.vertex_count())
        .map(|v| g.out_edges(v).iter().fold(0u32, |m, &e| m | 1 << g.head(e)))
        .collect()
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Calls `f(U, #(Gamma(U) \ U))` for every nonempty `U` with
/// `#U <= #V/2`, as bitmasks. Stops early when `f` returns `false`.
fn for_each_small_subset(g: &Graph, mut f: impl FnMut(u32, u32) -> bool) -> Result<()> {
    let n = g.vertex_count();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLargeForExhaustive(n, EXHAUSTIVE_LIMIT));
    }
    let nbr = neighbour_masks(g);
    let half = (n / 2) as u32;
    // gamma[U] = gamma[U minus its lowest vertex] | nbr[lowest vertex].
    let mut gamma = vec![0u32; 1 << n];
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros();
        let g_mask = gamma[(mask & (mask - 1)) as usize] | nbr[low as usize];
        gamma[mask as usize] = g_mask;
        if mask.count_ones() <= half && !f(mask, (g_mask & !mask).count_ones()) {
            break;
        }
    }
    Ok(())
}

fn violates(size: usize, outside: usize, gamma: f64) -> bool {
    (outside as f64) < gamma * size as f64
}

/// Whether `g` is a `gamma`-magnifier.
pub fn is_magnifier(g: &Graph, gamma: f64, mode: Mode) -> Result<MagnificationResult> {
    is_pseudo_magnifier(g, 1, gamma, mode)
}

/// Whether `g` is an `(r, gamma)`-pseudo-magnifier.
pub fn is_pseudo_magnifier(g: &Graph, r: usize, gamma: f64, mode: Mode) -> Result<MagnificationResult> {
    check_params(r, gamma)?;
    match mode {
        Mode::Exhaustive => exhaustive(g, r, gamma),
        Mode::Sampled { trials, seed } => sampled(g, r, gamma, trials, seed, &[]),
    }
}

/// As [`is_pseudo_magnifier`] on the cover of `lift`; sampled mode also
/// tries subsets of single fibres.
pub fn is_pseudo_magnifier_cover(lift: &Lift, r: usize, gamma: f64, mode: Mode) -> Result<MagnificationResult> {
    check_params(r, gamma)?;
    match mode {
        Mode::Exhaustive => exhaustive(lift.cover(), r, gamma),
        Mode::Sampled { trials, seed } => {
            let fibres: Vec<Vec<usize>> = (0..lift.base().vertex_count())
                .map(|v| (0..lift.degree()).map(|i| lift.cover_vertex(v, i)).collect())
                .collect();
            sampled(lift.cover(), r, gamma, trials, seed, &fibres)
        }
    }
}

fn check_params(r: usize, gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::OutOfRange("gamma must be positive"));
    }
    if r == 0 {
        return Err(Error::OutOfRange("R must be at least 1"));
    }
    Ok(())
}

fn exhaustive(g: &Graph, r: usize, gamma: f64) -> Result<MagnificationResult> {
    let mut trials = 0;
    let mut witness = None;
    for_each_small_subset(g, |mask, outside| {
        let size = mask.count_ones() as usize;
        if size < r {
            return true;
        }
        trials += 1;
        if violates(size, outside as usize, gamma) {
            witness = Some(VertexSubset::new(members(mask)));
            return false;
        }
        true
    })?;
    Ok(MagnificationResult {
        holds: witness.is_none(),
        witness,
        mode: ModeKind::Exhaustive,
        trials,
    })
}

/// Draws, in rotation: a uniform subset of uniform size in the window, a
/// breadth-first ball around a random vertex, and a random part of one
/// block of `blocks` (when given).
fn sampled(g: &Graph, r: usize, gamma: f64, trials: u64, seed: u64, blocks: &[Vec<usize>]) -> Result<MagnificationResult> {
    let n = g.vertex_count();
    let hi = n / 2;
    let mut result = MagnificationResult {
        holds: true,
        witness: None,
        mode: ModeKind::Sampled,
        trials: 0,
    };
    if r > hi {
        return Ok(result);
    }
    let mut rng = stream_rng(seed, 0);
    let kinds = if blocks.is_empty() { 2 } else { 3 };
    let mut order: Vec<usize> = (0..n).collect();
    for t in 0..trials {
        let size = rng.random_range(r..=hi);
        let u: Vec<usize> = match t % kinds {
            0 => {
                for i in 0..size {
                    let j = rng.random_range(i..n);
                    order.swap(i, j);
                }
                order[..size].to_vec()
            }
            1 => bfs_ball(g, rng.random_range(0..n), size),
            _ => {
                let block = &blocks[rng.random_range(0..blocks.len())];
                let mut b = block.clone();
                let take = size.min(b.len());
                for i in 0..take {
                    let j = rng.random_range(i..b.len());
                    b.swap(i, j);
                }
                b.truncate(take);
                b
            }
        };
        if u.len() < r {
            continue;
        }
        result.trials += 1;
        let outside = outer_boundary(g, &u)?;
        if violates(u.len(), outside, gamma) {
            result.holds = false;
            result.witness = Some(VertexSubset::new(u));
            break;
        }
    }
    Ok(result)
}

/// The first `size` vertices of a breadth-first search from `start`,
/// continuing from the lowest unvisited vertex if the component runs out.
fn bfs_ball(g: &Graph, start: usize, size: usize) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(size);
    let mut queue = alloc::collections::VecDeque::new();
    let mut next_root = 0;
    seen[start] = true;
    queue.push_back(start);
    while out.len() < size {
        let v = match queue.pop_front() {
            Some(v) => v,
            None => {
                while seen[next_root] {
                    next_root += 1;
                }
                seen[next_root] = true;
                next_root
            }
        };
        out.push(v);
        for &e in g.out_edges(v) {
            let w = g.head(e);
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    out
}

/// `min #(Gamma(U) \ U) / #U` over `1 <= #U <= #V/2`, exactly, with a
/// minimizing set. `None` when `#V < 2`.
pub fn best_gamma(g: &Graph) -> Result<Option<(Ratio<u64>, VertexSubset)>> {
    let mut best: Option<(Ratio<u64>, u32)> = None;
    for_each_small_subset(g, |mask, outside| {
        let q = Ratio::new(outside as u64, mask.count_ones() as u64);
        if best.as_ref().is_none_or(|(b, _)| q < *b) {
            best = Some((q, mask));
        }
        true
    })?;
    Ok(best.map(|(q, m)| (q, VertexSubset::new(members(m)))))
}

/// `d - gamma^2 / (4 + 2 gamma^2)`.
pub fn alon_bound_for(d: usize, gamma: f64) -> f64 {
    d as f64 - gamma * gamma / (4.0 + 2.0 * gamma * gamma)
}

/// For `g` `d`-regular and an exhaustively verified `gamma`-magnifier:
/// whether `lambda_2(g) <= d - gamma^2/(4 + 2 gamma^2) + tol`.
pub fn alon_gap_check(g: &Graph, gamma: f64, tol: f64) -> Result<bool> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !is_magnifier(g, gamma, Mode::Exhaustive)?.holds {
        return Err(Error::Precondition("graph is not a gamma-magnifier"));
    }
    let Some(l2) = second_eigenvalue(g) else {
        return Ok(true);
    };
    Ok(l2 <= alon_bound_for(d, gamma) + tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FibreCheck {
    /// `min #U_v < (1 - eps) max #U_v`.
    pub applies: bool,
    /// `eps' (1 - eps) / m` with `(1 - eps')^(m-1) = 1 - eps`; zero when
    /// the base has one vertex.
    pub nu1: f64,
    /// `#(Gamma(U) \ U) >= nu1 #U`.
    pub satisfied: bool,
}

/// `eps'` solving `(1 - eps')^(m-1) = 1 - eps`.
pub fn eps_prime(eps: f64, m: usize) -> f64 {
    if m <= 1 {
        return 0.0;
    }
    1.0 - libm::pow(1.0 - eps, 1.0 / (m - 1) as f64)
}

/// Checks the almost-equal-fibre expansion for `U` in the cover of `lift`.
pub fn fibre_imbalance_expansion(lift: &Lift, u: &VertexSubset, eps: f64) -> Result<FibreCheck> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange("eps must lie in (0, 1)"));
    }
    if !lift.base().is_connected() {
        return Err(Error::Precondition("base graph must be connected"));
    }
    let sizes: Vec<usize> = u.fibres(lift).iter().map(Vec::len).collect();
    let min = *sizes.iter().min().unwrap_or(&0);
    let max = *sizes.iter().max().unwrap_or(&0);
    let m = lift.base().vertex_count();
    let applies = (min as f64) < (1.0 - eps) * max as f64;
    let nu1 = eps_prime(eps, m) * (1.0 - eps) / m as f64;
    let outside = outer_boundary(lift.cover(), &u.members)?;
    Ok(FibreCheck {
        applies,
        nu1,
        satisfied: outside as f64 >= nu1 * u.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::GraphBuilder;
    use crate::lift::{build_lift, sample_assignment, ModelSpec};
    use crate::spectral::adjacency_matrix;
    use proptest::prelude::*;

    #[test]
    fn neighbourhood_examples() {
        let k4 = families::complete(4);
        assert_eq!(neighborhood(&k4, &[0, 1, 2, 3]).unwrap(), vec![0, 1, 2, 3]);
        let p = families::path(2);
        assert_eq!(neighborhood(&p, &[0]).unwrap(), vec![1]);
        let mut b = GraphBuilder::new(5);
        b.edge(0, 1);
        b.edge(2, 3);
        b.whole_loop(4);
        let g = b.build();
        assert_eq!(neighborhood(&g, &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(neighborhood(&g, &[4]).unwrap(), vec![4]);
        assert_eq!(outer_boundary(&g, &[2, 3]).unwrap(), 0);
    }

    #[test]
    fn magnifier_examples() {
        assert!(is_magnifier(&families::complete(4), 1.0, Mode::Exhaustive).unwrap().holds);
        let mut b = GraphBuilder::new(6);
        for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            b.edge(u, v);
        }
        let two_triangles = b.build();
        let r = is_magnifier(&two_triangles, 0.1, Mode::Exhaustive).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(outer_boundary(&two_triangles, &w.members).unwrap(), 0);

        let c6 = is_magnifier(&families::cycle(6), 2.0, Mode::Exhaustive).unwrap();
        assert!(!c6.holds);
        assert!(is_magnifier(&families::cycle(30), 1.0, Mode::Exhaustive).is_err());
        assert!(is_magnifier(&families::cycle(6), 0.0, Mode::Exhaustive).is_err());
    }

    #[test]
    fn pseudo_magnifier_window() {
        let c = families::cycle(8);
        assert!(is_pseudo_magnifier(&c, 5, 100.0, Mode::Exhaustive).unwrap().holds);
        let sampled = is_pseudo_magnifier(&c, 5, 100.0, Mode::Sampled { trials: 10, seed: 1 }).unwrap();
        assert!(sampled.holds && sampled.trials == 0);
        // Isolated vertex plus K4: sets of size 1 fail, size 2 sets expand.
        let mut b = GraphBuilder::new(5);
        for u in 0..4 {
            for v in u + 1..4 {
                b.edge(u, v);
            }
        }
        let g = b.build();
        assert!(!is_pseudo_magnifier(&g, 1, 0.5, Mode::Exhaustive).unwrap().holds);
        assert!(is_pseudo_magnifier(&g, 2, 0.5, Mode::Exhaustive).unwrap().holds);
    }

    #[test]
    fn sampled_mode_finds_planted_cut() {
        let mut b = GraphBuilder::new(40);
        for i in 0..20 {
            b.edge(i, (i + 1) % 20);
            b.edge(20 + i, 20 + (i + 1) % 20);
        }
        let g = b.build();
        let r = is_magnifier(&g, 0.5, Mode::Sampled { trials: 200, seed: 3 }).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!((outer_boundary(&g, &w.members).unwrap() as f64) < 0.5 * w.len() as f64);
    }

    #[test]
    fn best_gamma_and_alon() {
        let (gamma, _) = best_gamma(&families::complete(4)).unwrap().unwrap();
        assert_eq!(gamma, Ratio::new(1, 1));
        assert_eq!(alon_gap_check(&families::complete(4), 1.0, 1e-8), Ok(true));
        let (pg, _) = best_gamma(&families::petersen()).unwrap().unwrap();
        let pg = *pg.numer() as f64 / *pg.denom() as f64;
        assert_eq!(alon_gap_check(&families::petersen(), pg, 1e-8), Ok(true));
        assert!(alon_gap_check(&families::petersen(), 5.0, 1e-8).is_err());
        assert_eq!(alon_gap_check(&families::path(3), 0.1, 1e-8), Err(Error::NotRegular));
        assert!(alon_bound_for(3, 1e-9) > 3.0 - 1e-12);
    }

    #[test]
    fn fibre_examples() {
        assert!((eps_prime(0.5, 2) - 0.5).abs() < 1e-15);
        let b = families::path(2);
        let lift = build_lift(&b, crate::lift::PermutationAssignment::identity(&b, 4)).unwrap();
        let balanced = VertexSubset::new(vec![lift.cover_vertex(0, 0), lift.cover_vertex(1, 0)]);
        let c = fibre_imbalance_expansion(&lift, &balanced, 0.5).unwrap();
        assert!(!c.applies);
        assert!((c.nu1 - 0.125).abs() < 1e-15);
        let lopsided = VertexSubset::new(vec![lift.cover_vertex(0, 0), lift.cover_vertex(0, 1)]);
        let c = fibre_imbalance_expansion(&lift, &lopsided, 0.5).unwrap();
        assert!(c.applies && c.satisfied);
        assert!(fibre_imbalance_expansion(&lift, &lopsided, 1.0).is_err());
        let one = families::bouquet(2, 0);
        let lift = build_lift(&one, crate::lift::PermutationAssignment::identity(&one, 4)).unwrap();
        let c = fibre_imbalance_expansion(&lift, &VertexSubset::new(vec![0]), 0.5).unwrap();
        assert!(!c.applies && c.nu1 == 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn neighbourhood_matches_matrix_support(seed in 0u64..500, mask in 0u32..(1 << 12)) {
            let base = families::complete(4);
            let a = sample_assignment(&base, 3, &ModelSpec::permutation(), seed).unwrap();
            let lift = build_lift(&base, a).unwrap();
            let g = lift.cover();
            let u = members(mask);
            let adj = adjacency_matrix(g);
            let support: Vec<usize> = (0..g.vertex_count())
                .filter(|&v| u.iter().any(|&x| adj[(x, v)] != 0.0))
                .collect();
            prop_assert_eq!(neighborhood(g, &u).unwrap(), support);
        }

        #[test]
        fn window_monotonicity(seed in 0u64..500, r in 1usize..6, gamma in 0.05f64..2.0) {
            let base = families::bouquet(1, 1);
            let spec = ModelSpec::with_involutions(crate::lift::ModelKind::Permutation, true);
            let a = sample_assignment(&base, 12, &spec, seed).unwrap();
            let lift = build_lift(&base, a).unwrap();
            let g = lift.cover();
            let here = is_pseudo_magnifier(g, r, gamma, Mode::Exhaustive).unwrap().holds;
            let larger_r = is_pseudo_magnifier(g, r + 1, gamma, Mode::Exhaustive).unwrap().holds;
            let smaller_gamma = is_pseudo_magnifier(g, r, gamma / 2.0, Mode::Exhaustive).unwrap().holds;
            prop_assert!(!here || larger_r);
            prop_assert!(!here || smaller_gamma);
        }

        #[test]
        fn alon_holds_on_small_lifts(seed in 0u64..500) {
            let base = families::complete(4);
            let a = sample_assignment(&base, 4, &ModelSpec::permutation(), seed).unwrap();
            let lift = build_lift(&base, a).unwrap();
            let (gamma, _) = best_gamma(lift.cover()).unwrap().unwrap();
            let gamma = *gamma.numer() as f64 / *gamma.denom() as f64;
            let l2 = second_eigenvalue(lift.cover()).unwrap();
            prop_assert!(l2 <= alon_bound_for(3, gamma) + 1e-8);
        }
    }
}
