//! Command-line front end: `run`, `summarize`, `list-strategies`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::harness::{load_config, read_csv_file, run_experiment, summarize, write_outputs};
use crate::strategies::{StrategyKind, DEFAULT_EPSILON, DEFAULT_WINDOW_R};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "bandit-lab",
    version,
    about = "Delayed-feedback multi-armed bandit simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment config and write per-epoch CSV plus summaries.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override `base_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Override `replications`.
        #[arg(long)]
        reps: Option<usize>,
        /// Output directory; overrides `output_dir`.
        #[arg(long, env = "BANDIT_LAB_OUT")]
        out: Option<PathBuf>,
    },
    /// Recompute the summary table from a per-epoch CSV.
    Summarize {
        #[arg(long)]
        input: PathBuf,
    },
    /// List strategy kinds, parameters and defaults.
    ListStrategies,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_RUNTIME
    }
}

/// Executes one invocation, writing data to `out` and diagnostics to `err`.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Run {
            config,
            seed,
            reps,
            out: out_dir,
        } => cmd_run(config, seed, reps, out_dir, out, err),
        Command::Summarize { input } => cmd_summarize(input, out, err),
        Command::ListStrategies => cmd_list_strategies(out),
    }
}

fn cmd_run(
    path: PathBuf,
    seed: Option<u64>,
    reps: Option<usize>,
    out_dir: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let source = match fs::read_to_string(&path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read config {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    let mut config = match load_config(&source) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    if let Some(s) = seed {
        config.base_seed = s;
    }
    if let Some(r) = reps {
        if r == 0 {
            let _ = writeln!(err, "error: --reps must be >= 1");
            return EXIT_INPUT;
        }
        config.replications = r;
    }
    if let Some(d) = out_dir {
        config.output_dir = d;
    }

    let result = run_experiment(&config).and_then(|records| {
        let summary = summarize(&records)?;
        let paths = write_outputs(&config, &records, &summary, &config.output_dir)?;
        Ok((summary, paths))
    });
    match result {
        Ok((summary, paths)) => {
            let _ = write!(out, "{}", summary.to_table());
            let _ = writeln!(err, "wrote {}", paths.records.display());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn cmd_summarize(input: PathBuf, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let summary = read_csv_file(&input).and_then(|records| summarize(&records));
    match summary {
        Ok(s) => {
            let _ = write!(out, "{}", s.to_table());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Io { .. } | Error::IncompleteGrid(_) => EXIT_INPUT,
                other => exit_code(&other),
            }
        }
    }
}

fn cmd_list_strategies(out: &mut dyn Write) -> i32 {
    let _ = writeln!(out, "strategies (config key \"kind\"):");
    for kind in StrategyKind::ALL {
        let params = match kind {
            StrategyKind::EpsilonGreedy => {
                format!("epsilon={DEFAULT_EPSILON}, window_r=full history")
            }
            StrategyKind::Ag1 => format!("epsilon={DEFAULT_EPSILON}, window_r={DEFAULT_WINDOW_R}"),
            StrategyKind::Ucb1 => "window_r=full history".to_string(),
            StrategyKind::Thompson => "prior=Beta(1,1), window_r=full history".to_string(),
        };
        let _ = writeln!(out, "  {:<16}{params}", kind.name());
    }
    let _ = writeln!(
        out,
        "restart wrapper: add \"restart_period\": <epochs> to epsilon-greedy or thompson \
         (labels epsilon-greedy*, thompson*; the usual period is {DEFAULT_WINDOW_R})"
    );
    EXIT_OK
}
