//! Config-driven experiment runner behind the `cold` binary.

pub mod config;
pub mod figures;
pub mod output;
pub mod run;

pub use config::{ExperimentConfig, ModelKind, OutputFormat, RunMethod};
pub use figures::{figure, Figure, Manifest, FIGURES};
pub use output::{csv_header, write_rows};
pub use run::{grid, run_experiment, run_experiment_with_jobs, ResultRow, SCHEMA_VERSION};

use crate::Error;

/// Process exit code for an error: 1 for config problems, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::UnknownFigure(_) => 1,
        _ => 2,
    }
}
