//! Entropy, binomial and odd-binomial estimates, and the probabilities that
//! a random permutation or involution maps one set into another.
//!
//! Probabilities are exact rationals where they fit in `u128`; larger
//! quantities are handled in log space or with big integers.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::error::{Error, Result};

const LOG2_E: f64 = core::f64::consts::LOG2_E;

/// Binary entropy `-x log2 x - (1-x) log2 (1-x)`, zero at the endpoints.
pub fn h2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange("h2 needs 0 <= x <= 1"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * libm::log2(x) - (1.0 - x) * libm::log2(1.0 - x))
}

/// `H2''(x) = -log2(e) / (x (1 - x))` on the open interval.
pub fn h2_second_derivative(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange("H2'' needs 0 < x < 1"));
    }
    Ok(-LOG2_E / (x * (1.0 - x)))
}

/// `C(n, k)`, or `None` on overflow.
pub fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral: it is C(n, i+1) * ... .
        let num = (n - i) as u128;
        let g = gcd(acc, (i + 1) as u128);
        let (a, d) = (acc / g, (i + 1) as u128 / g);
        acc = a.checked_mul(num / d)?;
        debug_assert_eq!(num % d, 0);
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `log2 C(a, b)` via the log-gamma function.
pub fn log2_binom(a: u64, b: u64) -> f64 {
    if b > a {
        return f64::NEG_INFINITY;
    }
    let (a, b) = (a as f64, b as f64);
    (libm::lgamma(a + 1.0) - libm::lgamma(b + 1.0) - libm::lgamma(a - b + 1.0)) * LOG2_E
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyEstimate {
    pub a: u64,
    pub b: u64,
    pub h2_value: f64,
    pub log_binom: f64,
    /// `|log2 C(a, b) - a H2(b/a)|`.
    pub residual: f64,
}

pub fn entropy_estimate(a: u64, b: u64) -> Result<EntropyEstimate> {
    if a == 0 || b > a {
        return Err(Error::SizeViolation("need 0 <= b <= a and a >= 1"));
    }
    let h2_value = h2(b as f64 / a as f64)?;
    let log_binom = log2_binom(a, b);
    Ok(EntropyEstimate {
        a,
        b,
        h2_value,
        log_binom,
        residual: (log_binom - a as f64 * h2_value).abs(),
    })
}

/// Smallest `K` with `residual <= K log2 a` over the given `(a, b)` pairs
/// (`a >= 2`).
pub fn stirling_constant(pairs: &[(u64, u64)]) -> Result<f64> {
    let mut k: f64 = 0.0;
    for &(a, b) in pairs {
        if a < 2 {
            return Err(Error::SizeViolation("need a >= 2"));
        }
        let e = entropy_estimate(a, b)?;
        k = k.max(e.residual / libm::log2(a as f64));
    }
    Ok(k)
}

fn check_odd(n: u64, t: u64) -> Result<()> {
    if t % 2 == 1 {
        return Err(Error::OutOfRange("t must be even"));
    }
    if t > n {
        return Err(Error::SizeViolation("need t <= n"));
    }
    Ok(())
}

/// `(n-1)(n-3)...(n-t+1) / ((t-1)(t-3)...1)` for even `t <= n`: the
/// reciprocal of the probability that a random perfect matching pairs up a
/// fixed set of `t` points among themselves.
pub fn odd_binom(n: u64, t: u64) -> Result<f64> {
    Ok(libm::exp2(log2_odd_binom(n, t)?))
}

pub fn log2_odd_binom(n: u64, t: u64) -> Result<f64> {
    check_odd(n, t)?;
    Ok((0..t / 2)
        .map(|i| libm::log2((n - 1 - 2 * i) as f64) - libm::log2((t - 1 - 2 * i) as f64))
        .sum())
}

/// Numerator and denominator of [`odd_binom`], unreduced.
pub fn odd_binom_exact(n: u64, t: u64) -> Result<(BigUint, BigUint)> {
    check_odd(n, t)?;
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..t / 2 {
        num *= n - 1 - 2 * i;
        den *= t - 1 - 2 * i;
    }
    Ok((num, den))
}

/// `((n - t)/n) C(n, t) <= odd_binom(n, t)^2 <= t C(n, t)`, decided
/// exactly. Needs `2 <= t` (at `t = 0` the right side is zero).
pub fn odd_binom_sandwich(n: u64, t: u64) -> Result<bool> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be positive"));
    }
    let (num, den) = odd_binom_exact(n, t)?;
    let c = binom_big(n, t);
    let sq_num = &num * &num;
    let sq_den = &den * &den;
    let lower = BigUint::from(n - t) * &c * &sq_den <= BigUint::from(n) * &sq_num;
    let upper = sq_num <= BigUint::from(t) * &c * &sq_den;
    Ok(lower && upper)
}

fn check_sizes(n: u64, w: u64, w_prime: u64) -> Result<()> {
    if !(w <= w_prime && w_prime <= n) {
        return Err(Error::SizeViolation("need w <= w' <= n"));
    }
    Ok(())
}

/// `P[sigma(W) in W'] = C(w', w) / C(n, w)` for a uniform permutation.
pub fn perm_containment_prob(n: u64, w: u64, w_prime: u64) -> Result<Ratio<u128>> {
    check_sizes(n, w, w_prime)?;
    let num = binom_u128(w_prime, w).ok_or(Error::Overflow)?;
    let den = binom_u128(n, w).ok_or(Error::Overflow)?;
    Ok(Ratio::new(num, den))
}

/// `log2` of [`perm_containment_prob`], for sizes past `u128`.
pub fn log2_perm_containment_prob(n: u64, w: u64, w_prime: u64) -> Result<f64> {
    check_sizes(n, w, w_prime)?;
    Ok(log2_binom(w_prime, w) - log2_binom(n, w))
}

/// `n` times the permutation value; bounds the full-cycle probability.
pub fn full_cycle_containment_bound(n: u64, w: u64, w_prime: u64) -> Result<Ratio<u128>> {
    let p = perm_containment_prob(n, w, w_prime)?;
    p.numer()
        .checked_mul(n as u128)
        .map(|num| Ratio::new(num, *p.denom()))
        .ok_or(Error::Overflow)
}

/// Largest even `s'' >= 0` with `s'' <= 2w - w' - 1`.
pub fn s_double_prime(w: u64, w_prime: u64) -> u64 {
    let top = 2 * w as i64 - w_prime as i64 - 1;
    if top < 0 {
        0
    } else {
        (top as u64) & !1
    }
}

/// `C(w, s'') / odd_binom(n, s'')`, bounding `P[sigma(W) in W']` for a
/// uniform (near-)perfect matching and `W` inside `W'`.
pub fn involution_containment_bound(n: u64, w: u64, w_prime: u64) -> Result<f64> {
    check_sizes(n, w, w_prime)?;
    let s = s_double_prime(w, w_prime);
    Ok(libm::exp2(log2_binom(w, s) - log2_odd_binom(n, s)?))
}

/// Exact form of [`involution_containment_bound`].
pub fn involution_containment_bound_exact(n: u64, w: u64, w_prime: u64) -> Result<Ratio<u128>> {
    check_sizes(n, w, w_prime)?;
    let s = s_double_prime(w, w_prime);
    let (num, den) = odd_binom_exact(n, s)?;
    let to_u128 = |x: BigUint| -> Result<u128> { u128::try_from(x).map_err(|_| Error::Overflow) };
    let c = binom_u128(w, s).ok_or(Error::Overflow)?;
    let top = c.checked_mul(to_u128(den)?).ok_or(Error::Overflow)?;
    Ok(Ratio::new(top, to_u128(num)?))
}

/// `C(n, r) <= C(n, r') C(n, r - r')` for `r' <= r <= n`: the squared form
/// of `C(n,r')^(-1/2) <= C(n,r)^(-1/2) C(n,r-r')^(1/2)`.
pub fn easy_binom_estimate(n: u64, r: u64, r_prime: u64) -> Result<bool> {
    if !(r_prime <= r && r <= n) {
        return Err(Error::SizeViolation("need r' <= r <= n"));
    }
    Ok(binom_big(n, r) <= binom_big(n, r_prime) * binom_big(n, r - r_prime))
}

/// `C(n, r+1) <= n C(n, r)` and `C(n, r+2) <= n^2 C(n, r)`.
pub fn trivial_binom_estimate(n: u64, r: u64) -> bool {
    let c = binom_big(n, r);
    binom_big(n, r + 1) <= BigUint::from(n) * &c && binom_big(n, r + 2) <= BigUint::from(n * n) * &c
}

/// Parameters `(theta, S0, n0)` for `C(n, s') <= n^(-j) C(n, s)^(1/C)`
/// whenever `n >= n0`, `S0 <= s <= n(1/2 + theta)` and `s' <= theta s`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinomWitness {
    pub c: f64,
    pub j: u64,
    pub theta: f64,
    /// `j` plus the slack absorbing the `O(log n)` Stirling terms.
    pub j_prime: u64,
    pub s0: u64,
    pub n0: u64,
    /// `(n, s)` pairs checked.
    pub grid_points: u64,
}

/// `(1/C) H2(3/4) - H2(3 theta / 4)`, a lower bound for `g(1/2 + theta)`.
pub fn binom_endpoint(c: f64, theta: f64) -> f64 {
    h2(0.75).unwrap() / c - h2(0.75 * theta).unwrap_or(f64::INFINITY)
}

/// `g(x) = (1/C) H2(x) - H2(theta x)`.
pub fn binom_g(c: f64, theta: f64, x: f64) -> Result<f64> {
    Ok(h2(x)? / c - h2(theta * x)?)
}

/// Checks `log2 C(n, floor(theta s)) <= -j log2 n + (1/C) log2 C(n, s)` for
/// every `s` in `[s0, n(1/2 + theta)]`. `C(n, s')` increases in `s'` below
/// `n/2`, so the largest admissible `s'` is the binding one.
pub fn binom_grid_holds(c: f64, j: u64, theta: f64, s0: u64, n: u64) -> (bool, u64) {
    let top = libm::floor(n as f64 * (0.5 + theta)) as u64;
    let slack = -(j as f64) * libm::log2(n as f64);
    let mut points = 0;
    for s in s0..=top.min(n) {
        points += 1;
        let sp = libm::floor(theta * s as f64) as u64;
        if log2_binom(n, sp) > slack + log2_binom(n, s) / c + 1e-9 {
            return (false, points);
        }
    }
    (true, points)
}

/// Follows the construction: `theta <= min(1/(2C), 1/4)` halved until the
/// endpoint bound is positive, `S0 > j'/(1/C - theta)`, then `n0` doubled
/// until the inequality holds at `n0`, `2 n0` and `4 n0`. Not minimal.
pub fn binom_estimate_witness(c: f64, j: u64) -> Result<BinomWitness> {
    if !(c > 0.0) || j == 0 {
        return Err(Error::OutOfRange("need C > 0 and j >= 1"));
    }
    let mut theta = (1.0 / (2.0 * c)).min(0.25);
    while binom_endpoint(c, theta) <= 0.0 {
        theta /= 2.0;
        if theta < 1e-12 {
            return Err(Error::Verification("no theta makes the endpoint bound positive".into()));
        }
    }
    let j_prime = j + 2;
    let mut s0 = libm::floor(j_prime as f64 / (1.0 / c - theta)) as u64 + 1;
    for _ in 0..8 {
        let mut n0 = (4 * s0).max(16);
        while n0 <= 1 << 22 {
            let mut total = 0;
            let mut ok = true;
            for n in [n0, 2 * n0, 4 * n0] {
                let (holds, pts) = binom_grid_holds(c, j, theta, s0, n);
                total += pts;
                if !holds {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(BinomWitness {
                    c,
                    j,
                    theta,
                    j_prime,
                    s0,
                    n0,
                    grid_points: total,
                });
            }
            n0 *= 2;
        }
        s0 *= 2;
    }
    Err(Error::Verification("binomial estimate grid check failed".into()))
}

/// Evaluates `g''` by central differences at `samples` interior points
/// and returns the largest value seen.
pub fn binom_g_max_second_difference(c: f64, theta: f64, samples: usize) -> f64 {
    let h = 1e-4;
    (1..samples)
        .map(|i| {
            let x = 0.01 + 0.98 * i as f64 / samples as f64;
            let g = |y: f64| binom_g(c, theta, y).unwrap();
            (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Central second difference of `h2` with step `h`.
pub fn h2_second_difference(x: f64, h: f64) -> Result<f64> {
    Ok((h2(x + h)? - 2.0 * h2(x)? + h2(x - h)?) / (h * h))
}

/// Log-spaced `a` values in `[lo, hi]`, `per_decade` per factor of ten.
pub fn log_spaced(lo: u64, hi: u64, per_decade: usize) -> Vec<u64> {
    let (l, h) = (libm::log10(lo as f64), libm::log10(hi as f64));
    let steps = libm::ceil((h - l) * per_decade as f64) as usize;
    let mut out: Vec<u64> = (0..=steps)
        .map(|i| libm::round(libm::pow(10.0, l + (h - l) * i as f64 / steps.max(1) as f64)) as u64)
        .collect();
    out.dedup();
    out
}
