use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use morrey_lab::{run, Command, LabError, EXIT_DIVERGENCE};

/// Weighted Morrey norm experiments.
#[derive(Debug, Parser)]
#[command(name = "morrey-lab", version, about)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Command,
    /// JSON config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the quadrature cross-check printed to stderr.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("morrey-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, LabError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(LabError::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| LabError::Validation(format!("--threads: {e}")))?;
    }
    let text =
        std::fs::read_to_string(&cli.config).map_err(|e| LabError::Io { path: cli.config.clone(), source: e })?;
    let outcome = run(cli.command, &text, &cli.config.display().to_string(), &cli.out, cli.seed)?;
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    if let Some(c) = outcome.crosscheck {
        eprintln!("crosscheck: {} intervals, max relative mass deviation {:.3e}", c.intervals, c.max_rel_diff);
    }
    if let Some(msg) = outcome.divergence {
        eprintln!("morrey-lab: {msg}");
        return Ok(EXIT_DIVERGENCE as u8);
    }
    Ok(0)
}
