#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod run;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;

const EXIT_SELFTEST: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "fermi-bridge", version, about = "Fermi-bridge Monte Carlo for integrated heat kernels")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, overriding the config.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output CSV path, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// Run the fast invariant suite.
    Selftest {
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

fn run(path: &PathBuf, cli: &Cli) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut cfg = match ExperimentConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {}: {e}", path.display());
        return ExitCode::from(EXIT_CONFIG);
    }
    let start = Instant::now();
    let result = fermi_bridge::simulate::with_workers(cfg.workers, || run::run(&cfg)).map_err(|e| e.to_string());
    let table = match result.and_then(|r| r) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let wall = start.elapsed().as_secs_f64();
    let written = output::write_csv(&cfg.output, &table)
        .and_then(|_| output::write_metadata(&output::sidecar_path(&cfg.output), &cfg, wall, table.passed));
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    println!("wrote {} ({} rows, {wall:.2}s)", cfg.output.display(), table.rows.len());
    if table.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed; see {}", cfg.output.display());
        ExitCode::from(EXIT_VERIFY)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Cmd::Run { config } => run(config, &cli),
        Cmd::Selftest { perturb } => {
            let workers = cli.workers.unwrap_or(1);
            match fermi_bridge::simulate::with_workers(workers, || selftest::selftest(*perturb)) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(EXIT_SELFTEST),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_CONFIG)
                }
            }
        }
    }
}
