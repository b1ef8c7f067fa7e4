//! Adjacency and Hashimoto spectra, new spectra of covers and the checks
//! built on them.
//!
//! Dense eigensolves throughout: `SymmetricEigen` for the adjacency matrix
//! and a real Schur decomposition for the (non-symmetric) Hashimoto matrix.
//! Past [`DENSE_CAP`] directed edges only the Perron root of `H` is
//! available, via power iteration.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lift::Lift;

pub type C64 = Complex<f64>;

/// Largest Hashimoto matrix solved densely.
pub const DENSE_CAP: usize = 4000;

/// Default relative tolerance for matching eigenvalues: `|a - b| <= tol * (1 + |a|)`.
pub const DEFAULT_MATCH_TOL: f64 = 1e-7;

/// `A[v1][v2]` counts directed edges from `v1` to `v2`. A whole-loop puts 2
/// on the diagonal, a half-loop 1.
pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in 0..g.directed_edge_count() {
        a[(g.tail(e), g.head(e))] += 1.0;
    }
    a
}

/// `H[e1][e2] = 1` iff `head(e1) = tail(e2)` and `inv(e1) != e2`.
pub fn hashimoto_matrix(g: &Graph) -> DMatrix<f64> {
    let m = g.directed_edge_count();
    let mut h = DMatrix::zeros(m, m);
    for e in 0..m {
        for &f in g.out_edges(g.head(e)) {
            if f != g.inv(e) {
                h[(e, f)] = 1.0;
            }
        }
    }
    h
}

/// Adjacency eigenvalues in descending order.
pub fn adjacency_eigenvalues(g: &Graph) -> Vec<f64> {
    if g.vertex_count() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = adjacency_matrix(g).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Second largest adjacency eigenvalue (with multiplicity), or `None` for
/// graphs with fewer than two vertices.
pub fn second_eigenvalue(g: &Graph) -> Option<f64> {
    adjacency_eigenvalues(g).get(1).copied()
}

/// Eigenvalues of a general real matrix.
pub fn general_eigenvalues(m: DMatrix<f64>) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // QR stalls on matrices whose eigenvalues share a modulus (permutation
    // matrices, say); retrying on `m + cI` breaks the ties.
    const SHIFTS: [f64; 8] = [0.0, 0.312_739, -0.559_137, 1.397_351, 0.731_904, -1.183_517, 2.271_093, -0.097_231];
    for (k, c) in SHIFTS.into_iter().enumerate() {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] += c;
        }
        let eps = if k < 4 { f64::EPSILON } else { 4.0 * f64::EPSILON };
        if let Some(schur) = nalgebra::linalg::Schur::try_new(shifted, eps, 1000 * n.max(10)) {
            return Ok(schur.complex_eigenvalues().iter().map(|z| z - c).collect());
        }
    }
    Err(Error::Verification("Schur iteration did not converge".into()))
}

/// All Hashimoto eigenvalues, dense. Fails past [`DENSE_CAP`].
pub fn hashimoto_eigenvalues(g: &Graph) -> Result<Vec<C64>> {
    let m = g.directed_edge_count();
    if m > DENSE_CAP {
        return Err(Error::DenseCapExceeded(m));
    }
    general_eigenvalues(hashimoto_matrix(g))
}

/// Perron-Frobenius eigenvalue of the Hashimoto matrix.
///
/// The spectral radius only depends on the pruned core, so the core is
/// computed first; forests give 0 and components with `chi = 0` give 1.
pub fn mu1(g: &Graph) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let core = g.prune();
    let (label, count) = core.components();
    let mut best = 0.0f64;
    for c in 0..count {
        let vertices: Vec<usize> = (0..core.vertex_count()).filter(|&v| label[v] == c).collect();
        let edges: Vec<usize> = (0..core.directed_edge_count())
            .filter(|&e| label[core.tail(e)] == c)
            .collect();
        let comp = core.induced_by_edges(&vertices, &edges)?.graph;
        let r = if comp.directed_edge_count() == 2 * comp.vertex_count() {
            1.0
        } else if comp.directed_edge_count() <= DENSE_CAP {
            hashimoto_eigenvalues(&comp)?
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        } else {
            mu1_power(&comp, 1e-12, 1_000_000)?
        };
        best = best.max(r);
    }
    Ok(best)
}

/// Perron root of `H` for a connected pruned graph by power iteration on
/// `H + I`, stopped when the Collatz-Wielandt bounds agree to `rel_tol`.
pub fn mu1_power(g: &Graph, rel_tol: f64, max_iter: usize) -> Result<f64> {
    let m = g.directed_edge_count();
    if m == 0 {
        return Ok(0.0);
    }
    let mut x = DVector::from_element(m, 1.0);
    let mut y = DVector::zeros(m);
    let mut last = f64::NAN;
    for _ in 0..max_iter {
        for e in 0..m {
            let mut s = x[e];
            for &f in g.out_edges(g.head(e)) {
                if f != g.inv(e) {
                    s += x[f];
                }
            }
            y[e] = s;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for e in 0..m {
            let r = y[e] / x[e];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        last = 0.5 * (lo + hi) - 1.0;
        if hi - lo <= rel_tol * hi {
            return Ok(last);
        }
        let norm = y.max();
        x.copy_from(&y);
        x /= norm;
    }
    Err(Error::Verification(alloc::format!(
        "power iteration did not converge (last estimate {last})"
    )))
}

/// A multiset of eigenvalues compared under a relative tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    values: Vec<C64>,
    tolerance: f64,
}

fn cmp_c64(a: &C64, b: &C64) -> core::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl SpectrumMultiset {
    pub fn new(mut values: Vec<C64>, tolerance: f64) -> Self {
        values.sort_by(cmp_c64);
        SpectrumMultiset { values, tolerance }
    }

    pub fn real(values: &[f64], tolerance: f64) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect(), tolerance)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values sorted by real part, then imaginary part.
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    fn close(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.tolerance * (1.0 + a.norm())
    }

    /// Groups values closer than the tolerance: `(representative, multiplicity)`.
    pub fn multiplicities(&self) -> Vec<(C64, usize)> {
        let mut groups: Vec<(C64, usize)> = Vec::new();
        for &z in &self.values {
            match groups.iter_mut().find(|(r, _)| self.close(*r, z)) {
                Some(g) => g.1 += 1,
                None => groups.push((z, 1)),
            }
        }
        groups
    }

    /// `self \ sub`: each value of `sub`, in sorted order, removes its
    /// nearest unmatched value of `self`. Fails when that value is farther
    /// than the tolerance.
    pub fn difference(&self, sub: &SpectrumMultiset) -> Result<SpectrumMultiset> {
        let mut used = vec![false; self.values.len()];
        for &z in &sub.values {
            let nearest = self
                .values
                .iter()
                .enumerate()
                .filter(|&(i, _)| !used[i])
                .map(|(i, &w)| (i, (w - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match nearest {
                Some((i, dist)) if dist <= self.tolerance * (1.0 + z.norm()) => used[i] = true,
                _ => return Err(Error::UnmatchedEigenvalue { re: z.re, im: z.im }),
            }
        }
        Ok(SpectrumMultiset {
            values: self
                .values
                .iter()
                .zip(&used)
                .filter(|&(_, &u)| !u)
                .map(|(&z, _)| z)
                .collect(),
            tolerance: self.tolerance,
        })
    }

    /// Equal as multisets within tolerance.
    pub fn matches(&self, other: &SpectrumMultiset) -> bool {
        self.len() == other.len() && self.difference(other).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Adjacency,
    Hashimoto,
}

fn spectrum_of(g: &Graph, which: Operator, tol: f64) -> Result<SpectrumMultiset> {
    Ok(match which {
        Operator::Adjacency => SpectrumMultiset::real(&adjacency_eigenvalues(g), tol),
        Operator::Hashimoto => SpectrumMultiset::new(hashimoto_eigenvalues(g)?, tol),
    })
}

/// `Spec(G) \ Spec(B)` for a cover `G` of `B`.
pub fn new_spectrum(lift: &Lift, which: Operator, tol: f64) -> Result<SpectrumMultiset> {
    let cover = spectrum_of(lift.cover(), which, tol)?;
    let base = spectrum_of(lift.base(), which, tol)?;
    cover.difference(&base)
}

/// `||A_{B^}||_2 = 2 sqrt(d - 1)` for a `d`-regular base.
pub fn alon_bound(d: usize) -> f64 {
    2.0 * ((d as f64) - 1.0).sqrt()
}

/// Number of values with `|lambda| > 2 sqrt(d - 1) + eps`.
pub fn count_non_alon(new_adjacency: &SpectrumMultiset, d: usize, eps: f64) -> usize {
    let bound = alon_bound(d) + eps;
    new_adjacency.values().iter().filter(|z| z.norm() > bound).count()
}

/// epsilon-non-Alon multiplicity of a cover of a regular base.
pub fn non_alon_count(lift: &Lift, eps: f64, tol: f64) -> Result<usize> {
    let d = lift.base().regular_degree().ok_or(Error::NotRegular)?;
    let new = new_spectrum(lift, Operator::Adjacency, tol)?;
    Ok(count_non_alon(&new, d, eps))
}

/// Every adjacency eigenvalue lies in `{d, -d}` or in
/// `[-2 sqrt(d-1), 2 sqrt(d-1)]`, up to `tol`.
pub fn is_ramanujan(b: &Graph, tol: f64) -> Result<bool> {
    let d = b.regular_degree().ok_or(Error::NotRegular)?;
    let df = d as f64;
    let bound = alon_bound(d);
    Ok(adjacency_eigenvalues(b)
        .iter()
        .all(|&l| (l.abs() - df).abs() <= tol || l.abs() <= bound + tol))
}

/// Hashimoto spectrum predicted from the adjacency spectrum of a
/// `d`-regular graph without half-loops: the roots of
/// `mu^2 - lambda mu + (d - 1)` for each adjacency eigenvalue, plus
/// `#E - #V` copies each of `+1` and `-1`.
pub fn ihara_predicted_spectrum(g: &Graph) -> Result<Vec<C64>> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if g.has_half_loops() {
        return Err(Error::HasHalfLoops);
    }
    let q = d as f64 - 1.0;
    let mut out = Vec::with_capacity(g.directed_edge_count());
    for lambda in adjacency_eigenvalues(g) {
        let (r1, r2) = quadratic_roots(lambda, q);
        out.push(r1);
        out.push(r2);
    }
    let extra = g.edge_count() - g.vertex_count();
    for _ in 0..extra {
        out.push(C64::new(1.0, 0.0));
        out.push(C64::new(-1.0, 0.0));
    }
    Ok(out)
}

/// Roots of `mu^2 - lambda mu + q`.
pub fn quadratic_roots(lambda: f64, q: f64) -> (C64, C64) {
    let disc = lambda * lambda - 4.0 * q;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (C64::new((lambda + s) / 2.0, 0.0), C64::new((lambda - s) / 2.0, 0.0))
    } else {
        let s = (-disc).sqrt();
        (C64::new(lambda / 2.0, s / 2.0), C64::new(lambda / 2.0, -s / 2.0))
    }
}

/// Compares the dense Hashimoto spectrum with [`ihara_predicted_spectrum`].
pub fn ihara_check(g: &Graph, tol: f64) -> Result<bool> {
    let predicted = SpectrumMultiset::new(ihara_predicted_spectrum(g)?, tol);
    let computed = SpectrumMultiset::new(hashimoto_eigenvalues(g)?, tol);
    Ok(computed.matches(&predicted))
}

/// Largest modulus among new Hashimoto eigenvalues of a cover of a regular
/// base without half-loops, derived from the new adjacency spectrum.
pub fn new_mu1_from_adjacency(new_adjacency: &SpectrumMultiset, d: usize, has_extra_cycles: bool) -> f64 {
    let q = d as f64 - 1.0;
    let mut best: f64 = if has_extra_cycles { 1.0 } else { 0.0 };
    for z in new_adjacency.values() {
        let (r1, r2) = quadratic_roots(z.re, q);
        best = best.max(r1.norm()).max(r2.norm());
    }
    best
}

/// Old and new spectra of a cover.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub adjacency_spectrum: SpectrumMultiset,
    pub hashimoto_spectrum: Option<SpectrumMultiset>,
    pub new_adjacency: SpectrumMultiset,
    pub new_hashimoto: Option<SpectrumMultiset>,
    /// `None` when the base is not regular.
    pub non_alon_count: Option<usize>,
    pub epsilon: f64,
    pub base_is_ramanujan: Option<bool>,
    pub cover_is_ramanujan: Option<bool>,
}

/// Computes the report; Hashimoto spectra are omitted past [`DENSE_CAP`].
pub fn spectral_report(lift: &Lift, eps: f64, tol: f64) -> Result<SpectralReport> {
    let adjacency_spectrum = spectrum_of(lift.cover(), Operator::Adjacency, tol)?;
    let base_adj = spectrum_of(lift.base(), Operator::Adjacency, tol)?;
    let new_adjacency = adjacency_spectrum.difference(&base_adj)?;
    let (hashimoto_spectrum, new_hashimoto) =
        if lift.cover().directed_edge_count() <= DENSE_CAP {
            let cover_h = spectrum_of(lift.cover(), Operator::Hashimoto, tol)?;
            let base_h = spectrum_of(lift.base(), Operator::Hashimoto, tol)?;
            let new_h = cover_h.difference(&base_h)?;
            (Some(cover_h), Some(new_h))
        } else {
            (None, None)
        };
    let d = lift.base().regular_degree();
    Ok(SpectralReport {
        non_alon_count: d.map(|d| count_non_alon(&new_adjacency, d, eps)),
        base_is_ramanujan: d.map(|_| is_ramanujan(lift.base(), tol.max(1e-9)).unwrap_or(false)),
        cover_is_ramanujan: d.map(|_| is_ramanujan(lift.cover(), tol.max(1e-9)).unwrap_or(false)),
        adjacency_spectrum,
        hashimoto_spectrum,
        new_adjacency,
        new_hashimoto,
        epsilon: eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::lift::{build_lift, Permutation, PermutationAssignment};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(adjacency_matrix(&families::bouquet(1, 0))[(0, 0)], 2.0);
        assert_eq!(adjacency_matrix(&families::bouquet(0, 1))[(0, 0)], 1.0);
        let a = adjacency_matrix(&families::complete(4));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn hashimoto_examples() {
        let h = hashimoto_matrix(&families::bouquet(1, 0));
        assert_eq!(h, DMatrix::identity(2, 2));
        assert_eq!(hashimoto_matrix(&families::bouquet(0, 1))[(0, 0)], 0.0);
        let h3 = hashimoto_matrix(&families::cycle(3));
        assert_eq!(h3.shape(), (6, 6));
        for r in 0..6 {
            assert_eq!(h3.row(r).sum(), 1.0);
        }
    }

    #[test]
    fn mu1_examples() {
        assert!(close(mu1(&families::complete(4)).unwrap(), 2.0, 1e-10));
        assert!(close(mu1(&families::petersen()).unwrap(), 2.0, 1e-10));
        for k in 1..7 {
            assert!(close(mu1(&families::cycle(k)).unwrap(), 1.0, 1e-12));
        }
        for m in 2..7 {
            assert!(close(mu1(&families::multi_edge(m)).unwrap(), m as f64 - 1.0, 1e-10));
        }
        assert_eq!(mu1(&families::path(6)).unwrap(), 0.0);
        assert_eq!(mu1(&Graph::empty()), Err(Error::EmptyGraph));
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        for g in [families::complete(5), families::petersen(), families::multi_chain(&[3, 2])] {
            let dense = mu1(&g).unwrap();
            let power = mu1_power(&g, 1e-13, 1_000_000).unwrap();
            assert!(close(dense, power, 1e-9), "{dense} vs {power}");
        }
    }

    #[test]
    fn c3_cover_new_spectrum() {
        let b = families::bouquet(1, 0);
        let a = PermutationAssignment::from_orientation(&b, 3, vec![Permutation::shift(3)]).unwrap();
        let lift = build_lift(&b, a).unwrap();
        let new = new_spectrum(&lift, Operator::Adjacency, DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(new.len(), 2);
        assert!(new.values().iter().all(|z| close(z.re, -1.0, 1e-9)));
        assert_eq!(non_alon_count(&lift, 0.1, DEFAULT_MATCH_TOL), Ok(0));
        let newh = new_spectrum(&lift, Operator::Hashimoto, DEFAULT_MATCH_TOL).unwrap();
        assert_eq!(newh.len(), 4);
    }

    #[test]
    fn degree_one_lift_has_no_new_spectrum() {
        let k4 = families::complete(4);
        let lift = build_lift(&k4, PermutationAssignment::identity(&k4, 1)).unwrap();
        assert!(new_spectrum(&lift, Operator::Adjacency, DEFAULT_MATCH_TOL).unwrap().is_empty());
        assert_eq!(non_alon_count(&lift, 0.1, DEFAULT_MATCH_TOL), Ok(0));
    }

    #[test]
    fn disconnected_lift_is_non_alon() {
        // Block-diagonal sigma on two orbits {0,1}, {2,3}: two copies of K4.
        let k4 = families::complete(4);
        let swap = Permutation::from_images(vec![1, 0, 3, 2]).unwrap();
        let values = vec![swap; k4.edge_count()];
        let a = PermutationAssignment::from_orientation(&k4, 4, values).unwrap();
        let lift = build_lift(&k4, a).unwrap();
        assert_eq!(lift.cover().components().1, 2);
        assert!(non_alon_count(&lift, 0.01, DEFAULT_MATCH_TOL).unwrap() >= 1);
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(is_ramanujan(&families::complete(4), 1e-9), Ok(true));
        for k in 3..9 {
            assert_eq!(is_ramanujan(&families::cycle(k), 1e-9), Ok(true));
        }
        let bridged = families::diamond_ring(6);
        let l2 = second_eigenvalue(&bridged).unwrap();
        assert!(l2 > alon_bound(3), "lambda_2 = {l2}");
        assert_eq!(is_ramanujan(&bridged, 1e-9), Ok(false));
        assert_eq!(is_ramanujan(&families::path(3), 1e-9), Err(Error::NotRegular));
    }

    #[test]
    fn ihara_examples() {
        assert_eq!(ihara_check(&families::cycle(3), 1e-6), Ok(true));
        assert_eq!(ihara_check(&families::complete(4), 1e-6), Ok(true));
        assert_eq!(ihara_check(&families::bouquet(2, 0), 1e-6), Ok(true));
        assert_eq!(ihara_check(&families::petersen(), 1e-6), Ok(true));
        assert_eq!(ihara_check(&families::bouquet(1, 1), 1e-6), Err(Error::HasHalfLoops));
        assert_eq!(ihara_check(&families::path(3), 1e-6), Err(Error::NotRegular));
        assert_eq!(ihara_check(&families::bouquet(0, 3), 1e-6), Err(Error::HasHalfLoops));
    }

    #[test]
    fn multiset_difference_rejects_missing_values() {
        let a = SpectrumMultiset::real(&[1.0, 2.0, 2.0], 1e-9);
        let b = SpectrumMultiset::real(&[2.0, 2.0], 1e-9);
        assert_eq!(a.difference(&b).unwrap().values(), &[C64::new(1.0, 0.0)]);
        let c = SpectrumMultiset::real(&[2.0, 2.0, 2.0], 1e-9);
        assert!(a.difference(&c).is_err());
        assert_eq!(a.multiplicities().len(), 2);
    }
}
