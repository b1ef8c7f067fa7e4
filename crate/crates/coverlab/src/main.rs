use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coverlab::core::magnify::{self, Mode};
use coverlab::core::tangles::{scan_tangles, ScanCaps, TangleQuery};
use coverlab::core::{build_lift, sample_assignment, spectral, verify, walks, HalfLoopRule, ModelKind, ModelSpec, Parity};
use coverlab::error::{Error, Result};
use coverlab::experiment::{self, ExperimentConfig};
use coverlab::format;
use coverlab::report::{self, SpectralJson};

/// Random covers of graphs: spectra, tangles, magnification and counting
/// lemmas.
#[derive(Parser)]
#[command(name = "coverlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Permutation,
    Cyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum HalfLoop {
    Matching,
    NearMatching,
}

#[derive(Clone, Copy, ValueEnum)]
enum MagnifyMode {
    Exhaustive,
    Sampled,
}

#[derive(clap::Args)]
struct LiftArgs {
    /// Base graph: a JSON file or `family:<spec>`.
    #[arg(long)]
    graph: String,
    /// Cover degree.
    #[arg(long, short, default_value_t = 1)]
    n: usize,
    #[arg(long, value_enum, default_value = "permutation")]
    model: Model,
    #[arg(long, value_enum)]
    half_loop: Option<HalfLoop>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl LiftArgs {
    fn spec(&self) -> ModelSpec {
        let model = match self.model {
            Model::Permutation => ModelKind::Permutation,
            Model::Cyclic => ModelKind::Cyclic,
        };
        match self.half_loop {
            None => ModelSpec {
                model,
                half_loop: None,
                parity: Parity::Any,
            },
            Some(HalfLoop::Matching) => ModelSpec {
                model,
                half_loop: Some(HalfLoopRule::Matching),
                parity: Parity::Even,
            },
            Some(HalfLoop::NearMatching) => ModelSpec {
                model,
                half_loop: Some(HalfLoopRule::NearMatching),
                parity: Parity::Odd,
            },
        }
    }

    fn lift(&self) -> Result<coverlab::core::Lift> {
        let base = format::resolve_graph(&self.graph)?;
        let spec = self.spec();
        spec.check(&base, self.n).map_err(|e| Error::Config(e.to_string()))?;
        Ok(build_lift(&base, sample_assignment(&base, self.n, &spec, self.seed)?)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random cover and write it as graph JSON.
    Sample {
        #[command(flatten)]
        lift: LiftArgs,
        /// Also write the permutation assignment here.
        #[arg(long)]
        assignment: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Old and new adjacency and Hashimoto spectra of a sampled cover
    /// (with `-n 1`, of the graph itself).
    Spectrum {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = spectral::DEFAULT_MATCH_TOL)]
        tol: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Search a graph for (nu, r)-tangles.
    TangleScan {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        nu: f64,
        #[arg(long)]
        r: i64,
        /// Require mu_1 > nu rather than mu_1 >= nu.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = ScanCaps::default().max_vertices)]
        max_vertices: usize,
        #[arg(long, default_value_t = ScanCaps::default().max_subgraphs)]
        max_subgraphs: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check whether a graph is an (R, gamma)-pseudo-magnifier.
    MagnifyCheck {
        #[arg(long)]
        graph: String,
        #[arg(long = "R", default_value_t = 1)]
        r: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: MagnifyMode,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the exhaustive and numerical checks of the counting lemmas.
    VerifyLemmas {
        /// Largest n for the exhaustive enumerations.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
    },
    /// Run a Monte Carlo experiment from a JSON config.
    Experiment {
        #[arg(long, short)]
        config: PathBuf,
        /// Output prefix; overrides the config's `output`.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Classify SNBC walks by homotopy type.
    WalkCensus {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        #[arg(long, default_value_t = walks::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        }),
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample { lift, assignment, out } => {
            let l = lift.lift()?;
            if let Some(p) = assignment {
                emit(Some(&p), &json(l.assignment())?)?;
            }
            emit(out.as_deref(), &format::graph_to_json(l.cover()))
        }
        Command::Spectrum { lift, eps, tol, out } => {
            let l = lift.lift()?;
            let r = spectral::spectral_report(&l, eps, tol)?;
            emit(out.as_deref(), &json(&SpectralJson::new(&r, l.base()))?)
        }
        Command::TangleScan {
            graph,
            nu,
            r,
            strict,
            max_vertices,
            max_subgraphs,
            out,
        } => {
            let g = format::resolve_graph(&graph)?;
            let rep = scan_tangles(
                &g,
                &TangleQuery { nu, r, strict },
                ScanCaps {
                    max_vertices,
                    max_subgraphs,
                },
            );
            emit(out.as_deref(), &json(&rep)?)
        }
        Command::MagnifyCheck {
            graph,
            r,
            gamma,
            mode,
            trials,
            seed,
            out,
        } => {
            let g = format::resolve_graph(&graph)?;
            let mode = match mode {
                MagnifyMode::Exhaustive => Mode::Exhaustive,
                MagnifyMode::Sampled => Mode::Sampled { trials, seed },
            };
            let res = magnify::is_pseudo_magnifier(&g, r, gamma, mode).map_err(|e| Error::Config(e.to_string()))?;
            emit(out.as_deref(), &json(&res)?)
        }
        Command::VerifyLemmas { max_n } => {
            let rows = verify::verify_lemmas(max_n);
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut text = String::new();
            for r in &rows {
                let status = if r.passed { "PASS" } else { "FAIL" };
                text += &format!("{status}  {:width$}  {}\n", r.name, r.detail);
            }
            emit(None, &text)?;
            match rows.iter().find(|r| !r.passed) {
                Some(r) => Err(Error::Invariant(format!("{} failed", r.name))),
                None => Ok(()),
            }
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = experiment::run_experiment(&cfg)?;
            match out.or(cfg.output.clone()) {
                Some(prefix) => report.write(&prefix)?,
                None => emit(None, &report.to_json()?)?,
            }
            report.check_invariants()
        }
        Command::WalkCensus {
            graph,
            max_k,
            budget,
            csv,
            catalog,
        } => {
            let g = format::resolve_graph(&graph)?;
            let census = report::walk_census(&g, max_k, budget)?;
            let mut buf = Vec::new();
            report::write_csv(&census.rows, &mut buf)?;
            emit(csv.as_deref(), std::str::from_utf8(&buf).expect("csv output is UTF-8"))?;
            if let Some(p) = catalog {
                emit(Some(&p), &json(&census.catalog)?)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
