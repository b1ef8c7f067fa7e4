//! Random permutation assignments and the coordinatized covers they define.
//!
//! A cover of degree `n` of a base graph `B` has vertices `V_B x [n]` and
//! directed edges `E^dir_B x [n]`, with
//!
//! ```text
//! tail(e, i) = (tail_B e, i)
//! head(e, i) = (head_B e, sigma(e) i)
//! inv(e, i)  = (inv_B e,  sigma(e) i)
//! ```
//!
//! which forces `sigma(inv_B e) = sigma(e)^-1`. Cover vertex `(v, i)` has id
//! `v * n + i` and cover edge `(e, i)` has id `e * n + i`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphMorphism};
use crate::rng::stream_rng;

/// A permutation of `[n] = {0, .., n-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<usize>", into = "Vec<usize>"))]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || core::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(n));
            }
        }
        Ok(Permutation(images))
    }

    /// The cyclic shift `i -> i + 1 mod n`.
    pub fn shift(n: usize) -> Self {
        Permutation((0..n).map(|i| (i + 1) % n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self` after `other`: `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_involution(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| self.0[x] == i)
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(i, &x)| i == x).count()
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lengths = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    /// Uniform random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        Permutation(p)
    }

    /// Uniform random permutation consisting of a single `n`-cycle.
    pub fn random_full_cycle<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut p = vec![0; n];
        for k in 0..n {
            p[order[k]] = order[(k + 1) % n];
        }
        Permutation(p)
    }

    /// Uniform random involution with no fixed point (`n` even) or exactly
    /// one fixed point (`n` odd).
    pub fn random_matching<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut p: Vec<usize> = (0..n).collect();
        let rest = if n % 2 == 1 { &order[1..] } else { &order[..] };
        for pair in rest.chunks_exact(2) {
            p[pair[0]] = pair[1];
            p[pair[1]] = pair[0];
        }
        Permutation(p)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Rule for edges that are not half-loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ModelKind {
    /// Uniform permutations on every edge.
    Permutation,
    /// Uniform `n`-cycles on whole-loops, uniform permutations elsewhere.
    #[cfg_attr(feature = "serde", serde(alias = "full-cycle", alias = "full_cycle"))]
    Cyclic,
}

/// Rule for half-loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum HalfLoopRule {
    /// Perfect matchings; requires `n` even.
    Matching,
    /// Involutions with exactly one fixed point; requires `n` odd.
    NearMatching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl Parity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
            Parity::Any => true,
        }
    }
}

/// One of the basic edge-independent models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelSpec {
    pub model: ModelKind,
    pub half_loop: Option<HalfLoopRule>,
    pub parity: Parity,
}

impl ModelSpec {
    pub const fn permutation() -> Self {
        ModelSpec {
            model: ModelKind::Permutation,
            half_loop: None,
            parity: Parity::Any,
        }
    }

    pub const fn cyclic() -> Self {
        ModelSpec {
            model: ModelKind::Cyclic,
            half_loop: None,
            parity: Parity::Any,
        }
    }

    /// The involution variant of `model` for even (`Matching`) or odd
    /// (`NearMatching`) degrees.
    pub const fn with_involutions(model: ModelKind, even: bool) -> Self {
        if even {
            ModelSpec {
                model,
                half_loop: Some(HalfLoopRule::Matching),
                parity: Parity::Even,
            }
        } else {
            ModelSpec {
                model,
                half_loop: Some(HalfLoopRule::NearMatching),
                parity: Parity::Odd,
            }
        }
    }

    /// Checks that `(base, self, n)` is a legal combination.
    pub fn check(&self, base: &Graph, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        if !self.parity.admits(n) {
            return Err(Error::ParityMismatch {
                n,
                reason: "degree parity excluded by the model",
            });
        }
        match self.half_loop {
            Some(HalfLoopRule::Matching) if n % 2 == 1 => Err(Error::ParityMismatch {
                n,
                reason: "perfect matchings need an even degree",
            }),
            Some(HalfLoopRule::NearMatching) if n.is_multiple_of(2) => Err(Error::ParityMismatch {
                n,
                reason: "near-perfect matchings need an odd degree",
            }),
            None if base.has_half_loops() => Err(Error::MissingHalfLoopRule),
            _ => Ok(()),
        }
    }
}

/// True iff `(base, spec, n)` is a legal combination.
pub fn validate_model(base: &Graph, spec: &ModelSpec, n: usize) -> bool {
    spec.check(base, n).is_ok()
}

/// A map from directed base edges to permutations of `[n]` with
/// `sigma(inv e) = sigma(e)^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PermutationAssignment {
    degree: usize,
    sigma: Vec<Permutation>,
}

impl PermutationAssignment {
    /// Validates the shape and the inverse constraint against `base`.
    pub fn new(base: &Graph, degree: usize, sigma: Vec<Permutation>) -> Result<Self> {
        let a = PermutationAssignment { degree, sigma };
        a.validate(base)?;
        Ok(a)
    }

    /// The assignment sending every edge to the identity.
    pub fn identity(base: &Graph, degree: usize) -> Self {
        PermutationAssignment {
            degree,
            sigma: vec![Permutation::identity(degree); base.directed_edge_count()],
        }
    }

    /// Builds an assignment from values on the lowest-id representative of
    /// each orbit; partners receive the inverse. `values[k]` is used for the
    /// `k`-th representative in ascending id order.
    pub fn from_orientation(base: &Graph, degree: usize, values: Vec<Permutation>) -> Result<Self> {
        let reps = base.orbit_representatives();
        if values.len() != reps.len() {
            return Err(Error::AssignmentShape("one permutation per orbit expected"));
        }
        let mut sigma = vec![Permutation::identity(degree); base.directed_edge_count()];
        for (&e, p) in reps.iter().zip(values) {
            sigma[base.inv(e)] = p.inverse();
            sigma[e] = p;
        }
        Self::new(base, degree, sigma)
    }

    pub fn validate(&self, base: &Graph) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::ZeroDegree);
        }
        if self.sigma.len() != base.directed_edge_count() {
            return Err(Error::AssignmentShape("one permutation per directed edge expected"));
        }
        if self.sigma.iter().any(|p| p.len() != self.degree) {
            return Err(Error::AssignmentShape("permutation size differs from the degree"));
        }
        for e in 0..self.sigma.len() {
            let back = &self.sigma[base.inv(e)];
            let fwd = &self.sigma[e];
            if (0..self.degree).any(|i| back.apply(fwd.apply(i)) != i) {
                return Err(Error::InverseConstraint(e));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn sigma(&self, e: usize) -> &Permutation {
        &self.sigma[e]
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.sigma
    }
}

/// Draws an assignment from `spec`.
///
/// Orbits are sampled independently on their lowest-id representative, each
/// from its own stream `(seed, edge id)`; the partner gets the inverse.
pub fn sample_assignment(
    base: &Graph,
    n: usize,
    spec: &ModelSpec,
    seed: u64,
) -> Result<PermutationAssignment> {
    spec.check(base, n)?;
    let mut sigma = vec![Permutation::identity(n); base.directed_edge_count()];
    for e in base.orbit_representatives() {
        let mut rng = stream_rng(seed, e as u64);
        let p = if base.is_half_loop(e) {
            Permutation::random_matching(n, &mut rng)
        } else if base.is_whole_loop(e) && spec.model == ModelKind::Cyclic {
            Permutation::random_full_cycle(n, &mut rng)
        } else {
            Permutation::random(n, &mut rng)
        };
        sigma[base.inv(e)] = p.inverse();
        sigma[e] = p;
    }
    Ok(PermutationAssignment { degree: n, sigma })
}

/// A coordinatized cover together with its base and assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lift {
    base: Graph,
    cover: Graph,
    assignment: PermutationAssignment,
}

/// Builds the cover of `base` defined by `assignment`.
pub fn build_lift(base: &Graph, assignment: PermutationAssignment) -> Result<Lift> {
    assignment.validate(base)?;
    let n = assignment.degree;
    let m = base.directed_edge_count();
    let mut tail = Vec::with_capacity(m * n);
    let mut head = Vec::with_capacity(m * n);
    let mut inv = Vec::with_capacity(m * n);
    for e in 0..m {
        let s = &assignment.sigma[e];
        let (t, h, j) = (base.tail(e), base.head(e), base.inv(e));
        for i in 0..n {
            let si = s.apply(i);
            tail.push(t * n + i);
            head.push(h * n + si);
            inv.push(j * n + si);
        }
    }
    let cover = Graph::from_parts(base.vertex_count() * n, tail, head, inv)?;
    Ok(Lift {
        base: base.clone(),
        cover,
        assignment,
    })
}

impl Lift {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn cover(&self) -> &Graph {
        &self.cover
    }

    pub fn assignment(&self) -> &PermutationAssignment {
        &self.assignment
    }

    pub fn degree(&self) -> usize {
        self.assignment.degree
    }

    pub fn cover_vertex(&self, v: usize, i: usize) -> usize {
        v * self.degree() + i
    }

    pub fn cover_edge(&self, e: usize, i: usize) -> usize {
        e * self.degree() + i
    }

    /// `(base vertex, sheet)` of a cover vertex.
    pub fn split_vertex(&self, x: usize) -> (usize, usize) {
        (x / self.degree(), x % self.degree())
    }

    /// Projection to the first coordinate.
    pub fn projection(&self) -> GraphMorphism<'_> {
        let n = self.degree();
        GraphMorphism::new(
            &self.cover,
            &self.base,
            (0..self.cover.vertex_count()).map(|x| x / n).collect(),
            (0..self.cover.directed_edge_count()).map(|x| x / n).collect(),
        )
        .expect("projection of a coordinatized cover is a morphism")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn degree_one_permutation_model_is_identity() {
        let k4 = families::complete(4);
        let a = sample_assignment(&k4, 1, &ModelSpec::permutation(), 3).unwrap();
        assert!(a.permutations().iter().all(Permutation::is_identity));
        let lift = build_lift(&k4, a).unwrap();
        assert_eq!(lift.cover(), &k4);
    }

    #[test]
    fn full_cycle_on_whole_loops() {
        let b = families::bouquet(2, 0);
        for seed in 0..20 {
            let a = sample_assignment(&b, 4, &ModelSpec::cyclic(), seed).unwrap();
            for e in 0..b.directed_edge_count() {
                assert_eq!(a.sigma(e).cycle_type(), vec![4]);
            }
        }
    }

    #[test]
    fn near_matching_on_half_loops() {
        let b = families::bouquet(0, 1);
        let spec = ModelSpec::with_involutions(ModelKind::Permutation, false);
        for seed in 0..20 {
            let a = sample_assignment(&b, 5, &spec, seed).unwrap();
            assert!(a.sigma(0).is_involution());
            assert_eq!(a.sigma(0).fixed_points(), 1);
        }
        let even = ModelSpec::with_involutions(ModelKind::Cyclic, true);
        let a = sample_assignment(&b, 6, &even, 1).unwrap();
        assert!(a.sigma(0).is_involution());
        assert_eq!(a.sigma(0).fixed_points(), 0);
    }

    #[test]
    fn model_validation() {
        let k4 = families::complete(4);
        let half = families::bouquet(1, 1);
        for n in 1..6 {
            assert!(validate_model(&k4, &ModelSpec::permutation(), n));
        }
        let matching = ModelSpec::with_involutions(ModelKind::Permutation, true);
        assert!(!validate_model(&half, &matching, 3));
        assert!(validate_model(&half, &matching, 4));
        assert!(validate_model(&k4, &ModelSpec::cyclic(), 1));
        assert!(!validate_model(&half, &ModelSpec::permutation(), 4));
        assert!(!validate_model(&k4, &ModelSpec::permutation(), 0));
        assert_eq!(
            sample_assignment(&half, 4, &ModelSpec::cyclic(), 0),
            Err(Error::MissingHalfLoopRule)
        );
        assert_eq!(
            sample_assignment(&k4, 0, &ModelSpec::cyclic(), 0),
            Err(Error::ZeroDegree)
        );
    }

    #[test]
    fn three_cycle_cover_of_a_whole_loop() {
        let b = families::bouquet(1, 0);
        let a = PermutationAssignment::from_orientation(&b, 3, vec![Permutation::shift(3)]).unwrap();
        let lift = build_lift(&b, a).unwrap();
        let c = lift.cover();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edge_count(), 3);
        assert!(c.is_connected());
        assert!((0..3).all(|v| c.degree(v) == Ok(2)));
        assert_eq!(c.girth(), Some(3));
        assert!(lift.projection().is_covering());
    }

    #[test]
    fn inverse_constraint_is_enforced() {
        let b = families::bouquet(1, 0);
        let bad = vec![Permutation::shift(3), Permutation::shift(3)];
        assert_eq!(
            PermutationAssignment::new(&b, 3, bad),
            Err(Error::InverseConstraint(0))
        );
        let half = families::bouquet(0, 1);
        assert!(PermutationAssignment::new(&half, 3, vec![Permutation::shift(3)]).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let k4 = families::complete(4);
        let a = sample_assignment(&k4, 9, &ModelSpec::permutation(), 11).unwrap();
        let b = sample_assignment(&k4, 9, &ModelSpec::permutation(), 11).unwrap();
        let c = sample_assignment(&k4, 9, &ModelSpec::permutation(), 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
