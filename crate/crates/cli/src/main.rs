//! `shintani`: exact smoothed zeta values of totally real fields,
//! Stickelberger elements, order-of-vanishing certificates and p-adic
//! Gross-Stark units, driven by JSON fixtures.

use clap::{Parser, Subcommand};
use shintani_core::error::CoreError;
use shintani_core::fixture::{build, Fixture};
use shintani_core::pipeline;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shintani", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to a fixture file
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,

    /// Argument of the zeta function (non-positive integer); overrides the
    /// fixture default
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<i64>,

    /// Working precision for the local computation; overrides the fixture
    #[arg(long, global = true)]
    precision: Option<usize>,

    /// Worker threads for the internal parallel loops (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Also certify membership in the finer per-place ideal
    #[arg(long, global = true)]
    certify_fine_ideal: bool,
}

#[derive(Subcommand)]
enum Command {
    /// The integral equivariant zeta value at k
    Zeta,
    /// The zeta value with the smoothing factors divided out
    Unsmooth,
    /// Certify the order of vanishing in the relative augmentation ideal
    TowerCheck,
    /// The conjectural local unit to the working precision
    GrossStark,
    /// Verify the fundamental-domain partition property
    VerifyDomain,
    /// Classical cross-check tables (Hurwitz zeta, Bernoulli polynomials)
    Oracle,
}

fn run(cli: &Cli) -> Result<String, CoreError> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CoreError::invalid_input(format!("worker pool: {}", e)))?;
    }
    let path = cli
        .fixture
        .as_ref()
        .ok_or_else(|| CoreError::invalid_input("--fixture is required"))?;
    let fixture = Fixture::from_path(path)?;
    let default_k = fixture.k;
    let built = build(fixture)?;
    let k = cli.k.unwrap_or(default_k);
    let report = match cli.command {
        Command::Zeta => pipeline::cmd_zeta(&built, k)?,
        Command::Unsmooth => pipeline::cmd_unsmooth(&built, k)?,
        Command::TowerCheck => pipeline::cmd_tower_check(&built, cli.certify_fine_ideal)?,
        Command::GrossStark => pipeline::cmd_gross_stark(&built, cli.precision)?,
        Command::VerifyDomain => pipeline::cmd_verify_domain(&built)?,
        Command::Oracle => pipeline::cmd_oracle(&built, k)?,
    };
    Ok(report.to_json())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(json) => {
            println!("{}", json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
