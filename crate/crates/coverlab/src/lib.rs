//! File formats, reports, the experiment driver and the command-line tool
//! built on [`coverlab_core`].

pub mod error;
pub mod experiment;
pub mod format;
pub mod report;
pub mod stats;

pub use coverlab_core as core;
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport};
