//! Monte Carlo experiments over random lifts of a fixed base graph.
//!
//! Trial `t` at degree `n` draws its lift from seed
//! `derive_seed(derive_seed(seed, n), t)`, so results do not depend on the
//! thread count or scheduling. Trials run in parallel and are aggregated
//! in trial order.

use std::path::{Path, PathBuf};

use coverlab_core::magnify::{self, Mode};
use coverlab_core::rng::derive_seed;
use coverlab_core::spectral::{self, Operator, SpectrumMultiset};
use coverlab_core::tangles::{self, ScanCaps, TangleQuery};
use coverlab_core::{build_lift, sample_assignment, Graph, ModelSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::stats::{self, Scaling, Wilson, Z95};

fn default_tolerance() -> f64 {
    spectral::DEFAULT_MATCH_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangleConfig {
    pub nu: f64,
    pub r: i64,
    #[serde(default)]
    pub strict: bool,
    #[serde(default = "default_max_vertices")]
    pub max_vertices: usize,
    #[serde(default = "default_max_subgraphs")]
    pub max_subgraphs: usize,
}

fn default_max_vertices() -> usize {
    ScanCaps::default().max_vertices
}

fn default_max_subgraphs() -> usize {
    ScanCaps::default().max_subgraphs
}

impl TangleConfig {
    fn query(&self) -> TangleQuery {
        TangleQuery {
            nu: self.nu,
            r: self.r,
            strict: self.strict,
        }
    }

    fn caps(&self) -> ScanCaps {
        ScanCaps {
            max_vertices: self.max_vertices,
            max_subgraphs: self.max_subgraphs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnifierConfig {
    /// Smallest set size checked.
    pub r: usize,
    pub gamma: f64,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Graph file, or `family:<spec>` (see [`format::family`]).
    pub base: String,
    pub model: ModelSpec,
    pub degrees: Vec<usize>,
    pub trials: u64,
    pub epsilon: f64,
    #[serde(default)]
    pub tangle: Option<TangleConfig>,
    #[serde(default)]
    pub magnifier: Option<MagnifierConfig>,
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Output prefix; `<output>.json` and `<output>.csv` are written.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    /// Checks the invariants and returns the base graph.
    pub fn validate(&self) -> Result<Graph> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Config("epsilon must be positive".into()));
        }
        if self.degrees.is_empty() {
            return Err(Error::Config("no degrees given".into()));
        }
        if let Some(m) = &self.magnifier {
            if !(m.gamma > 0.0) {
                return Err(Error::Config("magnifier gamma must be positive".into()));
            }
        }
        let base = format::resolve_graph(&self.base).map_err(|e| Error::Config(format!("base graph: {e}")))?;
        if base.regular_degree().is_none() {
            return Err(Error::Config("base graph must be regular".into()));
        }
        for &n in &self.degrees {
            self.model
                .check(&base, n)
                .map_err(|e| Error::Config(format!("degree {n}: {e}")))?;
            let cover = n * base.vertex_count();
            if matches!(&self.magnifier, Some(m) if m.mode == Mode::Exhaustive) && cover > magnify::EXHAUSTIVE_LIMIT {
                return Err(Error::Config(format!(
                    "degree {n}: exhaustive magnifier check on {cover} vertices (limit {}); use sampled mode",
                    magnify::EXHAUSTIVE_LIMIT
                )));
            }
        }
        Ok(base)
    }
}

/// What one trial observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub non_alon: usize,
    pub has_tangles: Option<bool>,
    pub tangle_caps_hit: bool,
    pub magnifier: Option<bool>,
    pub lambda2: f64,
    /// Largest `|lambda|` over the new adjacency spectrum.
    pub rho_new: f64,
    pub mu1_new: Option<f64>,
    pub connected: bool,
    /// For a disconnected lift: some new eigenvalue is within tolerance of `d`.
    pub disconnection_flagged: bool,
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    base: &'a Graph,
    base_spectrum: SpectrumMultiset,
    d: usize,
}

impl Context<'_> {
    fn trial(&self, n: usize, t: u64) -> Result<TrialOutcome> {
        let seed = derive_seed(derive_seed(self.cfg.seed, n as u64), t);
        let lift = build_lift(self.base, sample_assignment(self.base, n, &self.cfg.model, seed)?)?;
        let cover = lift.cover();
        let tol = self.cfg.tolerance;
        let ev = spectral::adjacency_eigenvalues(cover);
        let new = SpectrumMultiset::real(&ev, tol).difference(&self.base_spectrum)?;
        let df = self.d as f64;
        let rho_new = new.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mu1_new = if !self.base.has_half_loops() {
            let extra = n > 1 && self.base.edge_count() > self.base.vertex_count();
            Some(spectral::new_mu1_from_adjacency(&new, self.d, extra))
        } else if cover.directed_edge_count() <= spectral::DENSE_CAP {
            let h = spectral::new_spectrum(&lift, Operator::Hashimoto, tol)?;
            Some(h.values().iter().map(|z| z.norm()).fold(0.0, f64::max))
        } else {
            None
        };
        let connected = cover.is_connected();
        let flag_tol = 1e-6 * (1.0 + df);
        let disconnection_flagged = !connected && new.values().iter().any(|z| (z.re - df).abs() <= flag_tol);
        let (has_tangles, tangle_caps_hit) = match &self.cfg.tangle {
            Some(tc) => {
                let rep = tangles::scan_tangles(cover, &tc.query(), tc.caps());
                (Some(rep.has_tangles()), rep.caps_hit)
            }
            None => (None, false),
        };
        let magnifier = match &self.cfg.magnifier {
            Some(m) => {
                let mode = match m.mode {
                    Mode::Sampled { trials, seed: s } => Mode::Sampled {
                        trials,
                        seed: derive_seed(s, seed),
                    },
                    Mode::Exhaustive => Mode::Exhaustive,
                };
                Some(magnify::is_pseudo_magnifier_cover(&lift, m.r, m.gamma, mode)?.holds)
            }
            None => None,
        };
        Ok(TrialOutcome {
            non_alon: spectral::count_non_alon(&new, self.d, self.cfg.epsilon),
            has_tangles,
            tangle_caps_hit,
            magnifier,
            lambda2: ev.get(1).copied().unwrap_or(f64::NAN),
            rho_new,
            mu1_new,
            connected,
            disconnection_flagged,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub trials: u64,
    pub completed: u64,
    pub failed: u64,
    pub nonalon_positive_count: u64,
    pub hastangles_count: u64,
    pub nonalon_and_tanglefree_count: u64,
    pub tangle_caps_hit_count: u64,
    pub magnifier_count: u64,
    pub disconnected_count: u64,
    /// Disconnected lifts without a new eigenvalue at `d`.
    pub disconnected_unflagged: u64,
    pub mean_lambda2: f64,
    pub mean_rho_new: f64,
    pub mean_mu1_new: Option<f64>,
    pub prob_nonalon: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl ExperimentRow {
    pub fn wilson(&self) -> Wilson {
        stats::wilson(self.nonalon_positive_count, self.completed, Z95)
    }
}

/// `NonAlon > 0` frequency among the tangle-free lifts at one degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionedRow {
    pub n: usize,
    pub tanglefree_trials: u64,
    pub nonalon_positive: u64,
    pub frequency: Option<f64>,
    pub wilson_low: Option<f64>,
    pub wilson_high: Option<f64>,
    /// No tangle-free lifts at this degree.
    pub empty: bool,
    /// Some scan hit its caps, so tangle-freeness is unverified there.
    pub caps_caveat: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub n: usize,
    pub trial: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub tool: String,
    pub version: String,
    pub rng: String,
    pub config: ExperimentConfig,
    pub base_degree: usize,
    pub alon_bound: f64,
    pub rows: Vec<ExperimentRow>,
    pub scaling: Scaling,
    pub conditioned: Option<Vec<ConditionedRow>>,
    pub failures: Vec<TrialFailure>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        crate::report::write_csv(&self.rows, &mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    /// Writes `<prefix>.json` and `<prefix>.csv`.
    pub fn write(&self, prefix: &Path) -> Result<()> {
        let json = prefix.with_extension("json");
        let csv = prefix.with_extension("csv");
        std::fs::write(&json, self.to_json()?).map_err(|e| Error::io(&json, e))?;
        std::fs::write(&csv, self.to_csv()?).map_err(|e| Error::io(&csv, e))
    }

    /// Invariants every report must satisfy.
    pub fn check_invariants(&self) -> Result<()> {
        for r in &self.rows {
            let bad = |what: &str| Err(Error::Invariant(format!("n = {}: {what}", r.n)));
            if r.completed + r.failed != r.trials {
                return bad("completed + failed != trials");
            }
            if r.nonalon_positive_count > r.completed || r.hastangles_count > r.completed {
                return bad("count exceeds completed trials");
            }
            if r.nonalon_and_tanglefree_count > r.nonalon_positive_count.min(r.completed - r.hastangles_count) {
                return bad("NonAlon-and-tangle-free count exceeds its bounds");
            }
            if r.disconnected_unflagged > 0 {
                return bad("a disconnected lift has no new eigenvalue at d");
            }
        }
        Ok(())
    }

    /// The `NonAlon > 0` probability trend is non-increasing in `n`.
    pub fn trend_non_increasing(&self) -> bool {
        stats::non_increasing(&self.rows.iter().map(ExperimentRow::wilson).collect::<Vec<_>>())
    }
}

fn aggregate(n: usize, trials: u64, outcomes: &[Result<TrialOutcome>], failures: &mut Vec<TrialFailure>) -> ExperimentRow {
    let ok: Vec<&TrialOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    for (t, o) in outcomes.iter().enumerate() {
        if let Err(e) = o {
            failures.push(TrialFailure {
                n,
                trial: t as u64,
                error: e.to_string(),
            });
        }
    }
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| ok.iter().filter(|o| f(o)).count() as u64;
    let completed = ok.len() as u64;
    let mean = |f: &dyn Fn(&TrialOutcome) -> f64| {
        if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(|o| f(o)).sum::<f64>() / ok.len() as f64
        }
    };
    let positives = count(&|o| o.non_alon > 0);
    let w = stats::wilson(positives, completed, Z95);
    ExperimentRow {
        n,
        trials,
        completed,
        failed: trials - completed,
        nonalon_positive_count: positives,
        hastangles_count: count(&|o| o.has_tangles == Some(true)),
        nonalon_and_tanglefree_count: count(&|o| o.non_alon > 0 && o.has_tangles != Some(true)),
        tangle_caps_hit_count: count(&|o| o.tangle_caps_hit),
        magnifier_count: count(&|o| o.magnifier == Some(true)),
        disconnected_count: count(&|o| !o.connected),
        disconnected_unflagged: count(&|o| !o.connected && !o.disconnection_flagged),
        mean_lambda2: mean(&|o| o.lambda2),
        mean_rho_new: mean(&|o| o.rho_new),
        mean_mu1_new: ok
            .iter()
            .all(|o| o.mu1_new.is_some())
            .then(|| mean(&|o| o.mu1_new.unwrap())),
        prob_nonalon: if completed == 0 { f64::NAN } else { positives as f64 / completed as f64 },
        wilson_low: w.low,
        wilson_high: w.high,
    }
}

/// Runs every trial and returns the per-trial outcomes for each degree.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<(usize, Vec<Result<TrialOutcome>>)>> {
    let base = cfg.validate()?;
    let ctx = Context {
        cfg,
        base: &base,
        base_spectrum: SpectrumMultiset::real(&spectral::adjacency_eigenvalues(&base), cfg.tolerance),
        d: base.regular_degree().expect("validated"),
    };
    Ok(cfg
        .degrees
        .iter()
        .map(|&n| {
            let outcomes = (0..cfg.trials).into_par_iter().map(|t| ctx.trial(n, t)).collect();
            (n, outcomes)
        })
        .collect())
}

fn conditioned_rows(per_n: &[(usize, Vec<Result<TrialOutcome>>)]) -> Vec<ConditionedRow> {
    per_n
        .iter()
        .map(|(n, outcomes)| {
            let ok: Vec<&TrialOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
            let free: Vec<&&TrialOutcome> = ok.iter().filter(|o| o.has_tangles == Some(false)).collect();
            let k = free.iter().filter(|o| o.non_alon > 0).count() as u64;
            let m = free.len() as u64;
            let w = (m > 0).then(|| stats::wilson(k, m, Z95));
            ConditionedRow {
                n: *n,
                tanglefree_trials: m,
                nonalon_positive: k,
                frequency: (m > 0).then(|| k as f64 / m as f64),
                wilson_low: w.map(|w| w.low),
                wilson_high: w.map(|w| w.high),
                empty: m == 0,
                caps_caveat: free.iter().any(|o| o.tangle_caps_hit),
            }
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let per_n = run_trials(cfg)?;
    let base = cfg.validate()?;
    let d = base.regular_degree().expect("validated");
    let mut failures = Vec::new();
    let rows: Vec<ExperimentRow> = per_n
        .iter()
        .map(|(n, o)| aggregate(*n, cfg.trials, o, &mut failures))
        .collect();
    let scaling = stats::fit_scaling(
        &rows
            .iter()
            .map(|r| (r.n, r.nonalon_positive_count, r.completed))
            .collect::<Vec<_>>(),
    );
    let mut notes = Vec::new();
    if rows.iter().all(|r| r.nonalon_positive_count == 0) {
        notes.push("NonAlon > 0 below detection at desk scale: no positive trials".into());
    }
    let threshold = spectral::alon_bound(d) + cfg.epsilon;
    if threshold >= d as f64 {
        notes.push(format!(
            "2 sqrt(d-1) + epsilon = {threshold:.6} >= d, so no new eigenvalue can exceed it"
        ));
    }
    if let Some(tc) = &cfg.tangle {
        notes.push(format!(
            "epsilon and nu are independent inputs; the coupling 2 sqrt(d-1) + eps' = nu + (d-1)/nu gives eps' = {:.6} for nu = {}",
            tc.nu + (d as f64 - 1.0) / tc.nu - spectral::alon_bound(d),
            tc.nu
        ));
    }
    if !failures.is_empty() {
        notes.push(format!("{} trial(s) failed and were excluded", failures.len()));
    }
    Ok(ExperimentReport {
        tool: "coverlab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        rng: "ChaCha8; trial seed = derive_seed(derive_seed(seed, n), trial)".into(),
        config: cfg.clone(),
        base_degree: d,
        alon_bound: spectral::alon_bound(d),
        rows,
        scaling,
        conditioned: cfg.tangle.as_ref().map(|_| conditioned_rows(&per_n)),
        failures,
        notes,
    })
}

/// The `NonAlon > 0` frequency among tangle-free lifts, per degree.
pub fn conditioned_nonalon(cfg: &ExperimentConfig) -> Result<Vec<ConditionedRow>> {
    if cfg.tangle.is_none() {
        return Err(Error::Config("conditioning needs a tangle query".into()));
    }
    Ok(conditioned_rows(&run_trials(cfg)?))
}
