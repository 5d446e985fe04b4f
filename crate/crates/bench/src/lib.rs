//! Benchmark harness, result formats and the binary dump for the `hodlr`
//! solver.

pub mod binfmt;
pub mod config;
pub mod record;
pub mod runner;

pub use config::{Cell, Config, ConfigError, Precision, Problem};
pub use record::{Format, Record};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerical(#[from] hodlr::Error),
    #[error("predicted storage of {predicted} bytes exceeds the budget of {budget} bytes")]
    Budget { predicted: u64, budget: u64 },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("format: {0}")]
    Format(String),
}

impl BenchError {
    /// Process exit status: 2 for configuration problems, 3 for numerical
    /// failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Budget { .. } => 2,
            BenchError::Numerical(_) => 3,
            _ => 1,
        }
    }
}

/// Runs every cell of `config` in order, reporting progress through
/// `progress`.
pub fn run_config(config: &Config, mut progress: impl FnMut(&Record)) -> Result<Vec<Record>, BenchError> {
    let mut out = Vec::new();
    for cell in config.cells() {
        let (rec, _) = runner::run_cell(&cell)?;
        progress(&rec);
        out.push(rec);
    }
    Ok(out)
}
