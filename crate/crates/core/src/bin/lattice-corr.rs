use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lattice_corr::experiment::{compare_files, run_to_file, ExperimentConfig, Preset};
use lattice_corr::par::{threads_from_env, with_threads, Execution};
use lattice_corr::Error;

#[derive(Parser)]
#[command(name = "lattice-corr", version, about = "Equilibrium correlations of harmonic and anharmonic chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an experiment and write the dataset (CSV or JSON).
    Run {
        /// JSON experiment config.
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Start from a built-in experiment: nn, example1 or example2.
        #[arg(long, value_parser = parse_preset)]
        preset: Option<Preset>,
        /// Overrides the Monte Carlo seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; `.json` selects JSON unless the config says otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entry-wise difference of two datasets on the same grid.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the config of a built-in experiment.
    Config {
        #[arg(long, value_parser = parse_preset)]
        preset: Preset,
    },
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    Preset::parse(s).ok_or_else(|| format!("unknown preset `{s}` (expected nn, example1 or example2)"))
}

/// Writes to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else {
        match e {
            Error::Io(_) | Error::GridMismatch(_) => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = threads_from_env();
    let exec = if threads == 1 { Execution::Sequential } else { Execution::Parallel };
    let result = with_threads(threads, || match cli.command {
        Command::Run { config, preset, seed, out } => {
            let mut cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::read(&path)?,
                (None, Some(p)) => ExperimentConfig::preset(p),
                (None, None) => {
                    return Err(Error::Config {
                        field: "config".into(),
                        message: "pass --config <file.json> or --preset <name>".into(),
                    })
                }
            };
            if let Some(s) = seed {
                cfg.set_seed(s);
            }
            let path = run_to_file(&cfg, out.as_deref(), exec)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::Compare { a, b, json } => {
            let report = compare_files(&a, &b)?;
            let mut text = String::new();
            if json {
                text = serde_json::to_string_pretty(&report).expect("report serialises");
                text.push('\n');
            } else {
                let _ = writeln!(text, "entries: {}", report.entries.len());
                let _ = writeln!(text, "max |a - b|: {:e}", report.max_abs_diff);
                for bn in &report.blocks {
                    let _ = writeln!(text, "  S{}{} t={}: {:e}", bn.alpha, bn.alphaprime, bn.t, bn.max_abs_diff);
                }
                for s in &report.slopes {
                    let _ = writeln!(text, "  S{}{} log-log slope of max diff vs t: {:.4}", s.alpha, s.alphaprime, s.slope);
                }
            }
            emit(&text);
            Ok(())
        }
        Command::Config { preset } => {
            emit(&(ExperimentConfig::preset(preset).to_json() + "\n"));
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
