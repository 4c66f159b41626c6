//! Scenario runner behind the `superrad` binary: JSON scenario files,
//! parallel parameter sweeps and CSV/JSON tables.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{parse, Scenario};
pub use error::CliError;
pub use output::{config_hash, render, Format};
pub use presets::{list_presets, preset};
pub use run::{run_scenario, RunOutput, TrackedModes};

/// Runs a scenario on a dedicated pool of `threads` workers (rayon's default
/// when `None`).
pub fn run_with_threads(scenario: &Scenario, threads: Option<usize>) -> Result<RunOutput, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_scenario(scenario))
}
