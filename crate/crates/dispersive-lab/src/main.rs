//! `dlab`: command-line driver for the estimate registry.
//!
//! Exit codes: 0 all checks passed, 2 an acceptance check failed,
//! 3 configuration or usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dispersive_lab::harness::registry::{default_config, run_estimate, EstimateKind, ESTIMATES};
use dispersive_lab::harness::{run_sweep_config, Config};
use dispersive_lab::LabError;

#[derive(Parser)]
#[command(
    name = "dlab",
    about = "Measure smoothing, resolvent, trace and commutator estimate ratios \
             on a truncated lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every registered estimate with its statement and hypotheses.
    ListEstimates,
    /// Run one estimate with its default parameters, optionally overridden
    /// by key=value arguments.
    Verify {
        /// Estimate id (see `list-estimates`).
        id: String,
        /// Parameter overrides, `key=value`.
        overrides: Vec<String>,
    },
    /// Run one estimate from a config file (flat key=value lines or a JSON
    /// object) and write CSV rows plus a JSON summary.
    Sweep {
        /// Config file; must contain `estimate` plus the full parameter set.
        config: PathBuf,
    },
    /// Run every identity-class estimate with default parameters.
    Selftest,
}

fn apply_overrides(cfg: &mut Config, overrides: &[String]) -> dispersive_lab::Result<()> {
    for item in overrides {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            LabError::config(format!("override `{item}` is not of the form key=value"))
        })?;
        cfg.set(k.trim(), v.trim());
    }
    Ok(())
}

fn print_summary(id: &str, summary: &dispersive_lab::harness::Summary) {
    let verdict = if summary.pass { "PASS" } else { "FAIL" };
    let control = if summary.negative_control {
        " (negative control)"
    } else {
        ""
    };
    println!(
        "{verdict} {id}{control}: sup {:.6e}, measured {:.6e} vs threshold {:.1e}, {} rows",
        summary.family_sup, summary.measured, summary.threshold, summary.rows
    );
    for note in &summary.notes {
        println!("  note: {note}");
    }
}

fn run() -> dispersive_lab::Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::ListEstimates => {
            for e in ESTIMATES {
                let kind = match e.kind {
                    EstimateKind::Identity => "identity",
                    EstimateKind::Sweep => "sweep",
                };
                println!("{:<22} [{kind}] {}", e.id, e.statement);
                println!("{:<22}   hypotheses: {}", "", e.hypotheses);
            }
            Ok(0)
        }
        Command::Verify { id, overrides } => {
            let mut cfg = default_config(&id)?;
            apply_overrides(&mut cfg, &overrides)?;
            let (outcome, code) = run_sweep_config(&id, &cfg)?;
            print_summary(&id, &outcome.summary);
            Ok(code)
        }
        Command::Sweep { config } => {
            let cfg = Config::from_path(&config)?;
            let id = cfg.get_str("estimate")?.to_string();
            let (outcome, code) = run_sweep_config(&id, &cfg)?;
            print_summary(&id, &outcome.summary);
            Ok(code)
        }
        Command::Selftest => {
            let mut worst = 0;
            for e in ESTIMATES {
                if e.kind != EstimateKind::Identity {
                    continue;
                }
                let cfg = default_config(e.id)?;
                let outcome = run_estimate(e.id, &cfg)?;
                print_summary(e.id, &outcome.summary);
                if !outcome.summary.pass {
                    worst = 2;
                }
            }
            Ok(worst)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(3)
        }
    }
}
