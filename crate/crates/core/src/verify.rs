//! Exhaustive and Monte Carlo cross-checks of the estimates in [`bounds`].
//!
//! Containment probabilities are invariant under relabelling `[n]`, so
//! the enumerations use initial segments `W = {0, .., w-1}` (and for
//! permutations, every possible overlap of `W` with `W'`).
//!
//! [`bounds`]: crate::bounds

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::bounds;
use crate::error::{Error, Result};
use crate::lift::Permutation;
use crate::rng::stream_rng;

/// Steps `a` to the next permutation in lexicographic order; false after
/// the last one.
pub fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Calls `f` on every permutation of `[n]` (as an image table).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    loop {
        f(&a);
        if !next_permutation(&mut a) {
            break;
        }
    }
}

/// Calls `f` on every `n`-cycle of `[n]`.
pub fn for_each_full_cycle(n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    // Cycle 0 -> rest[0] -> rest[1] -> .. -> 0.
    let mut rest: Vec<usize> = (1..n).collect();
    let mut img = vec![0; n];
    loop {
        let mut prev = 0;
        for &x in &rest {
            img[prev] = x;
            prev = x;
        }
        img[prev] = 0;
        f(&img);
        if !next_permutation(&mut rest) {
            break;
        }
    }
}

/// Calls `f` on every perfect matching of `[n]` (n even) or every
/// matching with exactly one fixed point (n odd), as an involution.
pub fn for_each_matching(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(m: &mut [usize], f: &mut dyn FnMut(&[usize])) {
        let Some(a) = m.iter().position(|&x| x == usize::MAX) else {
            f(m);
            return;
        };
        for b in a + 1..m.len() {
            if m[b] == usize::MAX {
                m[a] = b;
                m[b] = a;
                rec(m, f);
                m[a] = usize::MAX;
                m[b] = usize::MAX;
            }
        }
    }
    let mut m = vec![usize::MAX; n];
    if n.is_multiple_of(2) {
        rec(&mut m, &mut f);
    } else {
        for fixed in 0..n {
            m[fixed] = fixed;
            rec(&mut m, &mut f);
            m[fixed] = usize::MAX;
        }
    }
}

/// `#{sigma : sigma(W) in W'}` over all `sigma` produced by `each`, with
/// `W = [w0, w0 + w)` and `W' = [0, w')`, plus the total count.
fn count_contained(
    each: impl FnOnce(&mut dyn FnMut(&[usize])),
    w_range: (usize, usize),
    w_prime: usize,
) -> (u128, u128) {
    let (mut hits, mut total) = (0u128, 0u128);
    each(&mut |s: &[usize]| {
        total += 1;
        if (w_range.0..w_range.0 + w_range.1).all(|i| s[i] < w_prime) {
            hits += 1;
        }
    });
    (hits, total)
}

/// Exact `P[sigma(W) in W']` for a uniform permutation of `[n]` with
/// `#(W n W') = overlap`, by enumeration.
pub fn perm_containment_enumerated(n: usize, w: usize, w_prime: usize, overlap: usize) -> Result<Ratio<u128>> {
    if !(w <= n && w_prime <= n && overlap <= w.min(w_prime) && w + w_prime - overlap <= n) {
        return Err(Error::SizeViolation("impossible set sizes"));
    }
    // W' = [0, w'), W = [w' - overlap, w' - overlap + w).
    let (hits, total) = count_contained(|f| for_each_permutation(n, f), (w_prime - overlap, w), w_prime);
    Ok(Ratio::new(hits, total))
}

/// Exact containment probability for a uniform `n`-cycle and nested
/// `W` in `W'`.
pub fn full_cycle_containment_enumerated(n: usize, w: usize, w_prime: usize) -> Result<Ratio<u128>> {
    if !(w <= w_prime && w_prime <= n) || n == 0 {
        return Err(Error::SizeViolation("need w <= w' <= n, n >= 1"));
    }
    let (hits, total) = count_contained(|f| for_each_full_cycle(n, f), (0, w), w_prime);
    Ok(Ratio::new(hits, total))
}

/// Exact containment probability for a uniform (near-)perfect matching
/// and nested `W` in `W'`.
pub fn matching_containment_enumerated(n: usize, w: usize, w_prime: usize) -> Result<Ratio<u128>> {
    if !(w <= w_prime && w_prime <= n) || n == 0 {
        return Err(Error::SizeViolation("need w <= w' <= n, n >= 1"));
    }
    let (hits, total) = count_contained(|f| for_each_matching(n, f), (0, w), w_prime);
    Ok(Ratio::new(hits, total))
}

/// Monte Carlo estimate and standard error of `P[sigma(W) in W']` for
/// nested initial segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl Estimate {
    fn from_hits(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Estimate {
            mean: p,
            std_err: libm::sqrt(p * (1.0 - p) / trials as f64),
            trials,
        }
    }

    /// Whether `value` lies within `k` standard errors (at least one
    /// count's worth of slack when the estimate is degenerate).
    pub fn agrees(&self, value: f64, k: f64) -> bool {
        let floor = 1.0 / self.trials as f64;
        (self.mean - value).abs() <= k * self.std_err.max(floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    Permutation,
    FullCycle,
    Matching,
}

pub fn containment_monte_carlo(
    sampler: Sampler,
    n: usize,
    w: usize,
    w_prime: usize,
    trials: u64,
    seed: u64,
) -> Estimate {
    let mut rng = stream_rng(seed, 0);
    let mut hits = 0;
    for _ in 0..trials {
        let s = match sampler {
            Sampler::Permutation => Permutation::random(n, &mut rng),
            Sampler::FullCycle => Permutation::random_full_cycle(n, &mut rng),
            Sampler::Matching => Permutation::random_matching(n, &mut rng),
        };
        if (0..w).all(|i| s.apply(i) < w_prime) {
            hits += 1;
        }
    }
    Estimate::from_hits(hits, trials)
}

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

impl LemmaCheck {
    fn new(name: &str, failures: Vec<String>, cases: u64) -> Self {
        let detail = match failures.first() {
            None => format!("{cases} cases"),
            Some(first) => format!("{} of {cases} cases failed; first: {first}", failures.len()),
        };
        LemmaCheck {
            name: name.into(),
            passed: failures.is_empty(),
            cases,
            detail,
        }
    }
}

/// Ranges used by [`verify_lemmas_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub perm_max_n: usize,
    pub cycle_max_n: usize,
    pub matching_max_n: usize,
    pub sandwich_max_n: u64,
    pub easy_max_n: u64,
    pub witness: (f64, u64),
    pub monte_carlo_trials: u64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            perm_max_n: 7,
            cycle_max_n: 8,
            matching_max_n: 12,
            sandwich_max_n: 200,
            easy_max_n: 60,
            witness: (2.0, 1),
            monte_carlo_trials: 20_000,
            seed: 0x5eed,
        }
    }
}

impl VerifyConfig {
    /// Defaults with every enumeration capped at `max_n`.
    pub fn capped(max_n: usize) -> Self {
        let d = Self::default();
        VerifyConfig {
            perm_max_n: d.perm_max_n.min(max_n),
            cycle_max_n: d.cycle_max_n.min(max_n),
            matching_max_n: d.matching_max_n.min(max_n),
            ..d
        }
    }
}

pub fn check_perm_containment(max_n: usize) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        for w in 0..=n {
            for wp in w..=n {
                let exact = bounds::perm_containment_prob(n as u64, w as u64, wp as u64).unwrap();
                let lo = (w + wp).saturating_sub(n);
                for overlap in lo..=w {
                    cases += 1;
                    let got = perm_containment_enumerated(n, w, wp, overlap).unwrap();
                    if got != exact {
                        failures.push(format!("n={n} w={w} w'={wp} overlap={overlap}: {got} != {exact}"));
                    }
                }
            }
        }
    }
    LemmaCheck::new("permutation containment (exact, S_n)", failures, cases)
}

pub fn check_full_cycle_bound(max_n: usize) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        for w in 0..=n {
            for wp in w..=n {
                cases += 1;
                let bound = bounds::full_cycle_containment_bound(n as u64, w as u64, wp as u64).unwrap();
                let got = full_cycle_containment_enumerated(n, w, wp).unwrap();
                if got > bound {
                    failures.push(format!("n={n} w={w} w'={wp}: {got} > {bound}"));
                }
            }
        }
    }
    LemmaCheck::new("full-cycle containment <= n x permutation value", failures, cases)
}

pub fn check_involution_bound(max_n: usize) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=max_n {
        for w in 0..=n {
            for wp in w..=n {
                cases += 1;
                let bound = bounds::involution_containment_bound_exact(n as u64, w as u64, wp as u64).unwrap();
                let got = matching_containment_enumerated(n, w, wp).unwrap();
                if got > bound {
                    failures.push(format!("n={n} w={w} w'={wp}: {got} > {bound}"));
                }
            }
        }
    }
    LemmaCheck::new("involution containment bound", failures, cases)
}

pub fn check_odd_sandwich(max_n: u64) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 2..=max_n {
        for t in (2..=n).step_by(2) {
            cases += 1;
            if bounds::odd_binom_sandwich(n, t) != Ok(true) {
                failures.push(format!("n={n} t={t}"));
            }
        }
    }
    LemmaCheck::new("odd binomial sandwich", failures, cases)
}

pub fn check_easy_estimates(max_n: u64) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 0..=max_n {
        for r in 0..=n {
            cases += 1;
            if !bounds::trivial_binom_estimate(n, r) {
                failures.push(format!("C(n, r+1), C(n, r+2) at n={n} r={r}"));
            }
            for rp in 0..=r {
                cases += 1;
                if bounds::easy_binom_estimate(n, r, rp) != Ok(true) {
                    failures.push(format!("n={n} r={r} r'={rp}"));
                }
            }
        }
    }
    LemmaCheck::new("easy binomial estimates", failures, cases)
}

pub fn check_binom_witness(c: f64, j: u64) -> LemmaCheck {
    match bounds::binom_estimate_witness(c, j) {
        Ok(w) => {
            let mut failures = Vec::new();
            let g2 = bounds::binom_g_max_second_difference(c, w.theta, 400);
            if g2 > 1e-6 {
                failures.push(format!("g'' reaches {g2}"));
            }
            if bounds::binom_endpoint(c, w.theta) <= 0.0 {
                failures.push("endpoint bound not positive".into());
            }
            let mut check = LemmaCheck::new("binomial-entropy estimate witness", failures, w.grid_points + 2);
            if check.passed {
                check.detail = format!(
                    "C={c} j={j}: theta={} S0={} n0={} ({} grid points)",
                    w.theta, w.s0, w.n0, w.grid_points
                );
            }
            check
        }
        Err(e) => LemmaCheck::new("binomial-entropy estimate witness", vec![format!("{e}")], 0),
    }
}

pub fn check_h2_second_derivative() -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for i in 0..=900 {
        let x = 0.05 + 0.001 * i as f64;
        cases += 1;
        let exact = bounds::h2_second_derivative(x).unwrap();
        let fd = bounds::h2_second_difference(x, 5e-5).unwrap();
        if ((fd - exact) / exact).abs() >= 1e-6 {
            failures.push(format!("x={x}: {fd} vs {exact}"));
        }
    }
    LemmaCheck::new("H2'' against finite differences", failures, cases)
}

pub fn check_monte_carlo(trials: u64, seed: u64) -> LemmaCheck {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (i, &(n, w, wp)) in [(10usize, 2usize, 5usize), (12, 3, 8), (20, 2, 10), (9, 4, 7)].iter().enumerate() {
        cases += 2;
        let exact = bounds::perm_containment_prob(n as u64, w as u64, wp as u64).unwrap();
        let exact = *exact.numer() as f64 / *exact.denom() as f64;
        let est = containment_monte_carlo(Sampler::Permutation, n, w, wp, trials, seed + i as u64);
        if !est.agrees(exact, 3.0) {
            failures.push(format!("permutation n={n} w={w} w'={wp}: {} vs {exact}", est.mean));
        }
        let cyc = containment_monte_carlo(Sampler::FullCycle, n, w, wp, trials, seed + 100 + i as u64);
        if cyc.mean > n as f64 * exact + 3.0 * cyc.std_err {
            failures.push(format!("full cycle n={n} w={w} w'={wp}: {}", cyc.mean));
        }
    }
    LemmaCheck::new("containment Monte Carlo", failures, cases)
}

/// Runs every check with the given ranges.
pub fn verify_lemmas_with(cfg: &VerifyConfig) -> Vec<LemmaCheck> {
    vec![
        check_perm_containment(cfg.perm_max_n),
        check_full_cycle_bound(cfg.cycle_max_n),
        check_involution_bound(cfg.matching_max_n),
        check_odd_sandwich(cfg.sandwich_max_n),
        check_easy_estimates(cfg.easy_max_n),
        check_binom_witness(cfg.witness.0, cfg.witness.1),
        check_h2_second_derivative(),
        check_monte_carlo(cfg.monte_carlo_trials, cfg.seed),
    ]
}

/// [`verify_lemmas_with`] using [`VerifyConfig::capped`].
pub fn verify_lemmas(max_n: usize) -> Vec<LemmaCheck> {
    verify_lemmas_with(&VerifyConfig::capped(max_n))
}
