//! Random covering graphs of a fixed base graph and the spectral and
//! combinatorial tools used to study them.
//!
//! The crate is `no_std` (it needs `alloc`). It provides
//!
//! - [`graph`]: multigraphs with half-loops and whole-loops, order, Euler
//!   characteristic, pruning, girth and graph morphisms;
//! - [`lift`]: permutation assignments under the permutation, full-cycle
//!   and involution models and the coordinatized covers they define;
//! - [`spectral`]: adjacency and Hashimoto (non-backtracking) matrices,
//!   new spectra of covers, non-Alon counts, Ramanujan and Ihara checks;
//! - [`walks`]: strictly non-backtracking closed walks, visited subgraphs,
//!   bead suppression and homotopy types;
//! - [`tangles`]: tangle predicates, mu_1-monotone reductions, tangle-power
//!   bounds and bounded tangle scans;
//! - [`magnify`]: vertex expansion (magnifiers and pseudo-magnifiers);
//! - [`bounds`] and [`verify`]: binomial/entropy estimates and
//!   containment probabilities, with exhaustive cross-checks.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod canon;
pub mod error;
pub mod families;
pub mod graph;
pub mod lift;
pub mod magnify;
pub mod ordered;
pub mod rng;
pub mod spectral;
pub mod tangles;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, GraphMorphism, Subgraph};
pub use lift::{build_lift, sample_assignment, HalfLoopRule, Lift, ModelKind, ModelSpec, Parity, Permutation, PermutationAssignment};
pub use ordered::OrderedGraph;
