//! `memdiff`: command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 numerical
//! non-convergence, 3 a verification check failed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use commands::{Outcome, VerifyTarget};
use config::ScenarioConfig;
use output::Outputs;

#[derive(Parser, Debug)]
#[command(
    name = "memdiff",
    version,
    about = "Diffusion with exponential memory: kernels, solvers and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario file (TOML).
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Output directory; overrides `[output] dir`.
    #[arg(short, long, global = true, env = "MEMDIFF_OUT_DIR")]
    out: Option<PathBuf>,

    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate K0, K1, K2 on the sample grid.
    Kernel,
    /// Tabulate theta, theta*, and their x-derivatives on the sample grid.
    Theta,
    /// Green-function solve of `[problem]`.
    Solve,
    /// Finite-difference solve of `[problem]`.
    Oracle,
    /// Run both solvers and cross-validate.
    Compare,
    /// FitzHugh–Nagumo solve of `[fhn]`.
    Fhn,
    /// Long-time limit study.
    Asympt,
    /// Run an estimate or identity check suite.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
    },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Kernel => "kernel".into(),
            Command::Theta => "theta".into(),
            Command::Solve => "solve".into(),
            Command::Oracle => "oracle".into(),
            Command::Compare => "compare".into(),
            Command::Fhn => "fhn".into(),
            Command::Asympt => "asympt".into(),
            Command::Verify { target } => {
                format!(
                    "verify {}",
                    clap::ValueEnum::to_possible_value(target).unwrap().get_name()
                )
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("--config is required"))?;
    let cfg = ScenarioConfig::load(path)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    let mut out = Outputs::new(&cli.command.name(), &cfg)?;
    let outcome = match &cli.command {
        Command::Kernel => commands::kernel(&cfg, &mut out)?,
        Command::Theta => commands::theta(&cfg, &mut out)?,
        Command::Solve => commands::solve_cmd(&cfg, &mut out)?,
        Command::Oracle => commands::oracle(&cfg, &mut out)?,
        Command::Compare => commands::compare(&cfg, &mut out)?,
        Command::Fhn => commands::fhn_cmd(&cfg, &mut out)?,
        Command::Asympt => commands::asympt_cmd(&cfg, &mut out)?,
        Command::Verify { target } => commands::verify(*target, &cfg, &mut out)?,
    };
    let dir = cfg.output_dir(cli.out.as_deref());
    for path in out.write_all(&dir)? {
        info!("wrote {}", path.display());
    }
    Ok(outcome)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<memdiff::Error>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => {
            error!("verification failed; see the report files");
            eprintln!("memdiff: verification failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("memdiff: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
