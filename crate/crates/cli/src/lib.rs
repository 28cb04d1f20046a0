//! `dunkl` command-line tool.
//!
//! Exit codes: 0 when everything passed, 1 when a verification report exceeded
//! its tolerance, 2 on configuration, input or parse errors.
//!
//! CSV columns:
//! - `kernel`: `z_re,z_im,E_re,E_im,mode,est_err`
//! - `transform`: `lambda,F_re,F_im` (with `--round-trip`: `x,f_re,f_im`)
//! - `sonine`: `x,S_re,S_im,est_err`
//! - `verify`, `report`: `suite,name,params,grid,max_abs_err,max_rel_err,elapsed_s,tolerance,pass`
//!
//! Floats are written with 17 significant digits.

pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::commands::{ModeArg, TestFunction};
use crate::config::{thread_count, CommonArgs, Format, RunConfig};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "dunkl", version, about = "Dunkl kernel, transform and Sonine transform toolkit")]
#[command(after_help = "Exit codes: 0 all pass, 1 tolerance exceeded, 2 configuration or parse error.\n\
Set DUNKL_THREADS to cap the worker threads (0 = automatic).")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate E_α(z). Columns: z_re,z_im,E_re,E_im,mode,est_err
    Kernel {
        #[command(flatten)]
        common: CommonArgs,
        /// Arguments z, e.g. 1, 2i, 0.5-3i; comma-separated or repeated
        #[arg(long = "z", value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_z)]
        z: Vec<Complex64>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Dunkl transform of sampled data (header x,f_re[,f_im]). Columns: lambda,F_re,F_im
    Transform {
        #[command(flatten)]
        common: CommonArgs,
        /// Samples on a symmetric increasing grid
        #[arg(long)]
        input: PathBuf,
        /// Transform and invert; writes x,f_re,f_im at the input abscissae
        #[arg(long)]
        round_trip: bool,
    },
    /// Sonine transform S_{α,β} (or its dual) of a test function. Columns: x,S_re,S_im,est_err
    Sonine {
        #[command(flatten)]
        common: CommonArgs,
        /// gaussian, moment:N (x^N e^{-x²}) or poly:c0;c1;...
        #[arg(long = "f", default_value = "gaussian")]
        function: TestFunction,
        #[arg(long = "x", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        /// Apply the dual transform instead
        #[arg(long)]
        dual: bool,
    },
    /// Run identity suites; writes a JSON array of reports (or CSV)
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Summarise one or more report files from `verify`
    Report {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn parse_z(s: &str) -> Result<Complex64, String> {
    input::parse_complex(s).map_err(|e| e.to_string())
}

fn init_threads() -> CliResult<()> {
    let var = std::env::var("DUNKL_THREADS").ok();
    if let Some(n) = thread_count(var.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot set up {n} threads: {e}")))?;
    }
    Ok(())
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<bool> {
    init_threads()?;
    match cli.command {
        Command::Kernel { common, z, mode } => {
            let cfg = RunConfig::resolve(&common, Format::Csv)?;
            commands::kernel(&cfg, &z, mode)?;
            Ok(true)
        }
        Command::Transform { common, input, round_trip } => {
            let cfg = RunConfig::resolve(&common, Format::Csv)?;
            commands::transform(&cfg, &input, round_trip)?;
            Ok(true)
        }
        Command::Sonine { common, function, x, dual } => {
            let cfg = RunConfig::resolve(&common, Format::Csv)?;
            commands::sonine(&cfg, &function, &x, dual)?;
            Ok(true)
        }
        Command::Verify { common } => commands::verify(&RunConfig::resolve(&common, Format::Json)?),
        Command::Report { common, files } => commands::report(&RunConfig::resolve(&common, Format::Json)?, &files),
    }
}
