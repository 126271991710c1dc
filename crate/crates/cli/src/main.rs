use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use modgauss_cli::{list_catalog, run, CliError, ExperimentConfig, Pipeline, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

/// Run a sampling / cumulant / CLT experiment from a JSON or TOML config.
#[derive(Parser, Debug)]
#[command(name = "modgauss", version)]
struct Args {
    /// Experiment config (.json, or .toml).
    #[arg(long, required_unless_present = "catalog")]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the pipeline.
    #[arg(long)]
    pipeline: Option<String>,
    /// Print models, basis objects and pipelines, then exit.
    #[arg(long)]
    catalog: bool,
}

fn load(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(args.config.as_ref().expect("clap enforces --config"))?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    if let Some(p) = &args.pipeline {
        cfg.pipeline = p.parse::<Pipeline>()?;
    }
    if args.threads == Some(0) {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.catalog {
        print!("{}", list_catalog());
        return ExitCode::SUCCESS;
    }
    let code = match load(&args).and_then(|cfg| run(&cfg, args.threads)) {
        Ok(summary) => {
            for g in summary.gates.iter().filter(|g| !g.pass) {
                eprintln!("FAIL {}: {} vs {}", g.name, g.value, g.limit);
            }
            println!(
                "{} ({} gates) -> {}",
                if summary.pass { "pass" } else { "fail" },
                summary.gates.len(),
                summary.out.join("report.json").display()
            );
            if summary.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
