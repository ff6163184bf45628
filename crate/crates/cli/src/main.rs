use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use transmission_sl::JumpConvention;
use tsl_cli::{
    asymptotics, load_config, oracle_compare, scan, solve, verify, AsymptoticsOptions,
    CommandError, Outcome, ScanOptions, SolveOptions, Status,
};

/// Eigenvalue problems with interface transmission conditions.
#[derive(Parser)]
#[command(name = "tsl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `report.out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Paper,
    Cramer,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, eigenfunctions and residuals.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_enum)]
        jump_convention: Option<Convention>,
    },
    /// Sample the characteristic function on a uniform grid.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long, default_value_t = 256)]
        points: usize,
    },
    /// Convergence of s_n towards its leading-order sequence.
    Asymptotics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Wronskian, orthogonality and residual checks.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Integral-equation and closed-form cross checks.
    OracleCompare {
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<Outcome, CommandError> {
    match cli.command {
        Command::Solve {
            common,
            count,
            jump_convention,
        } => {
            let cfg = load_config(&common.config)?;
            let convention = jump_convention.map(|c| match c {
                Convention::Paper => JumpConvention::PaperLiteral,
                Convention::Cramer => JumpConvention::CramerSolve,
            });
            solve(
                &cfg,
                &SolveOptions {
                    count,
                    convention,
                    out: common.out,
                },
            )
        }
        Command::Scan {
            common,
            lambda_min,
            lambda_max,
            points,
        } => {
            let cfg = load_config(&common.config)?;
            scan(
                &cfg,
                &ScanOptions {
                    lambda_min,
                    lambda_max,
                    points,
                    out: common.out,
                },
            )
        }
        Command::Asymptotics {
            common,
            n_min,
            n_max,
        } => {
            let cfg = load_config(&common.config)?;
            asymptotics(
                &cfg,
                &AsymptoticsOptions {
                    n_min,
                    n_max,
                    out: common.out,
                },
            )
        }
        Command::Verify { common } => verify(&load_config(&common.config)?, common.out),
        Command::OracleCompare { common } => {
            oracle_compare(&load_config(&common.config)?, common.out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            for c in &outcome.report.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skip",
                };
                println!("[{tag}] {}: {}", c.name, c.detail);
            }
            for w in &outcome.report.warnings {
                eprintln!("warning: {w}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
