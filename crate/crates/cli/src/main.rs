use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use crformal::scenario::{self, Scenario};
use crformal::{run, InputError, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Formal invariants of CR mappings between generic submanifolds.
#[derive(Debug, Parser)]
#[command(name = "crformal", version)]
struct Cli {
    /// Scenario file (JSON).
    scenario: Option<PathBuf>,

    /// Truncation order K.
    #[arg(long)]
    truncation: Option<u32>,

    /// Degree cutoff for codimension searches.
    #[arg(long)]
    cutoff: Option<u32>,

    /// Seed for randomized rank tests.
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,

    /// Run the theorem audit on every map.
    #[arg(long)]
    audit: bool,

    /// Include the built-in example corpus.
    #[arg(long)]
    fixtures: bool,
}

fn load(path: &PathBuf) -> Result<Scenario, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scenario::from_json(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = match cli.scenario.as_ref().map(load).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        truncation: cli.truncation,
        cutoff: cli.cutoff,
        seed: cli.seed,
        audit: cli.audit,
        fixtures: cli.fixtures,
    };
    match run(scenario.as_ref(), &opts) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            print!("{out}");
            if report.has_violations() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
