//! Binomial confidence intervals and log-log slope fits.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `k` successes in `n` trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wilson {
    pub center: f64,
    pub low: f64,
    pub high: f64,
}

pub fn wilson(k: u64, n: u64, z: f64) -> Wilson {
    if n == 0 {
        return Wilson { center: 0.5, low: 0.0, high: 1.0 };
    }
    let (k, n) = (k as f64, n as f64);
    let z2 = z * z;
    let p = k / n;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Wilson {
        center,
        low: (center - half).max(0.0),
        high: (center + half).min(1.0),
    }
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the regression residuals.
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Scaling {
    Fit(ScalingFit),
    Indeterminate { reason: String },
}

impl Scaling {
    pub fn fit(&self) -> Option<&ScalingFit> {
        match self {
            Scaling::Fit(f) => Some(f),
            Scaling::Indeterminate { .. } => None,
        }
    }
}

/// Fits `ln p = slope ln n + intercept` over rows `(n, positives, trials)`
/// with at least one positive, using the Wilson centre as `p`. Needs three
/// such rows.
pub fn fit_scaling(rows: &[(usize, u64, u64)]) -> Scaling {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|&&(_, k, t)| k > 0 && t > 0)
        .map(|&(n, k, t)| ((n as f64).ln(), wilson(k, t, Z95).center.ln()))
        .collect();
    if pts.len() < 3 {
        return Scaling::Indeterminate {
            reason: format!("{} degree(s) with positive counts; need 3", pts.len()),
        };
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Scaling::Indeterminate {
            reason: "all positive rows share one degree".into(),
        };
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (sse / (m - 2.0) / sxx).sqrt();
    Scaling::Fit(ScalingFit {
        slope,
        intercept,
        stderr,
        ci_low: slope - Z95 * stderr,
        ci_high: slope + Z95 * stderr,
        points: pts.len(),
    })
}

/// Each consecutive pair of intervals either overlaps or moves down.
pub fn non_increasing(intervals: &[Wilson]) -> bool {
    intervals
        .windows(2)
        .all(|w| w[1].center <= w[0].center || w[1].low <= w[0].high)
}
