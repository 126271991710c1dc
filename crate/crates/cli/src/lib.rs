//! Experiment runner: reads an [`ExperimentConfig`], runs one pipeline over
//! a grid of sizes and writes `report.json` plus CSV tables.

mod config;
mod output;
mod pipeline;

pub use config::{ExperimentConfig, ObservableConfig, Pipeline, Thresholds};
pub use output::Table;
pub use pipeline::{run, Gate, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] modgauss::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Exit status for an error: every error is a usage or config problem.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn list_catalog() -> String {
    let mut s = String::new();
    s.push_str("models (\"family\" + \"variant\" tags):\n");
    for (name, fields) in [
        ("graphon:constant", "p"),
        ("graphon:step", "masses, values"),
        ("graphon:product", ""),
        ("graphon:mean", ""),
        ("graphon:grid", "values, interpolation = bilinear | piecewise_constant"),
        ("permuton:uniform", ""),
        ("permuton:from_permutation", "sigma"),
        ("permuton:grid", "values"),
        ("permuton:disc", ""),
        ("thoma", "alpha, beta"),
    ] {
        if fields.is_empty() {
            s.push_str(&format!("  {name}\n"));
        } else {
            s.push_str(&format!("  {name} {{{fields}}}\n"));
        }
    }
    s.push_str("basis objects (\"family\" + \"object\"):\n");
    s.push_str("  graph \"k=3; 1-2,1-3,2-3\"\n");
    s.push_str("  permutation \"231\"\n");
    s.push_str("  partition \"3,2\"\n");
    s.push_str("formal sums (\"family\" + \"element\", or {\"file\": path}):\n");
    s.push_str("  {\"21\": \"1\", \"12\": \"-1/2\"}\n");
    s.push_str("pipelines:\n");
    for p in Pipeline::ALL {
        s.push_str(&format!("  {p} (reps >= {})\n", p.min_reps()));
    }
    s
}
