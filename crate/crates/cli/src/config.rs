//! Run configuration: command-line flags layered over an optional JSON file.
//!
//! The file is a flat object; every key is optional and every flag overrides
//! the key of the same name.
//!
//! ```json
//! {"alpha": 0.5, "beta": 1.5, "L": 12, "nx": 512, "n_lambda": 512,
//!  "lambda_max": 12, "plan_tol": 1e-10, "suites": ["all"],
//!  "tol": {"prop7": 1e-6}, "format": "json", "out": "reports.json",
//!  "timing": false}
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use dunkl_core::sonine::SoninePair;
use dunkl_core::special::OrderParam;
use dunkl_core::transform::PlanConfig;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Order parameter α (> -1/2)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Second order β of a Sonine pair (> α)
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Half-width of the x-grid [-L, L]
    #[arg(long = "L")]
    pub length: Option<f64>,
    /// Number of x nodes (a multiple of 32)
    #[arg(long)]
    pub nx: Option<usize>,
    /// Number of λ nodes (a multiple of 32)
    #[arg(long)]
    pub n_lambda: Option<usize>,
    /// Half-width of the λ-grid
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Comma-separated suite names, or `all`
    #[arg(long, value_delimiter = ',')]
    pub suites: Vec<String>,
    /// Tolerance override `<name>=<value>`, by suite or report name; repeatable
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record wall-clock times in reports (makes output non-reproducible)
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    beta: Option<f64>,
    #[serde(rename = "L")]
    length: Option<f64>,
    nx: Option<usize>,
    n_lambda: Option<usize>,
    lambda_max: Option<f64>,
    plan_tol: Option<f64>,
    suites: Option<Vec<String>>,
    tol: Option<BTreeMap<String, f64>>,
    format: Option<Format>,
    out: Option<PathBuf>,
    timing: Option<bool>,
}

/// Validated configuration of one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: Option<OrderParam>,
    pub pair: Option<SoninePair>,
    pub plan: PlanConfig,
    /// Set when any grid flag or key was given.
    pub plan_overridden: bool,
    pub suites: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs, default_format: Format) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let alpha = args.alpha.or(file.alpha);
        let beta = args.beta.or(file.beta);
        let alpha_param = alpha.map(OrderParam::new).transpose()?;
        let pair = match (alpha, beta) {
            (Some(a), Some(b)) => Some(SoninePair::new(a, b)?),
            (None, Some(_)) => return Err(CliError::Config("--beta requires --alpha".into())),
            _ => None,
        };

        let mut plan = PlanConfig::default();
        let length = args.length.or(file.length);
        let nx = args.nx.or(file.nx);
        let n_lambda = args.n_lambda.or(file.n_lambda);
        let lambda_max = args.lambda_max.or(file.lambda_max);
        let plan_overridden =
            length.is_some() || nx.is_some() || n_lambda.is_some() || lambda_max.is_some() || file.plan_tol.is_some();
        if let Some(v) = length {
            plan.length = positive("L", v)?;
        }
        if let Some(v) = lambda_max {
            plan.lambda_max = positive("lambda_max", v)?;
        }
        if let Some(v) = file.plan_tol {
            plan.tol = positive("plan_tol", v)?;
        }
        plan.n_x = nx.unwrap_or(plan.n_x);
        plan.n_lambda = n_lambda.unwrap_or(plan.n_lambda);

        let mut tolerances = file.tol.unwrap_or_default();
        for (k, v) in &tolerances {
            positive_or_zero(k, *v)?;
        }
        for spec in &args.tol {
            let (k, v) = parse_tol(spec)?;
            tolerances.insert(k, v);
        }

        let suites = if args.suites.is_empty() {
            file.suites.unwrap_or_default()
        } else {
            args.suites.clone()
        };

        Ok(Self {
            alpha: alpha_param,
            pair,
            plan,
            plan_overridden,
            suites,
            tolerances,
            format: args.format.or(file.format).unwrap_or(default_format),
            out: args.out.clone().or(file.out),
            timing: args.timing || file.timing.unwrap_or(false),
        })
    }

    pub fn require_alpha(&self) -> CliResult<OrderParam> {
        self.alpha.ok_or_else(|| CliError::Config("--alpha is required".into()))
    }

    pub fn require_pair(&self) -> CliResult<SoninePair> {
        self.pair
            .ok_or_else(|| CliError::Config("--alpha and --beta are required".into()))
    }
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be a positive number, got {v}")))
    }
}

fn positive_or_zero(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("tolerance for '{name}' must be a non-negative number, got {v}")))
    }
}

/// Parses `name=value`.
pub fn parse_tol(spec: &str) -> CliResult<(String, f64)> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--tol expects NAME=VALUE, got '{spec}'")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(CliError::Config(format!("--tol '{spec}' has an empty name")));
    }
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("--tol '{spec}': '{value}' is not a number")))?;
    Ok((name.to_string(), positive_or_zero(name, v)?))
}

/// Number of worker threads from `DUNKL_THREADS`; `None` means automatic.
pub fn thread_count(var: Option<&str>) -> CliResult<Option<usize>> {
    match var.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(CliError::Config(format!("DUNKL_THREADS must be a non-negative integer, got '{s}'"))),
        },
    }
}
