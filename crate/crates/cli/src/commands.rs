//! The five subcommands.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dunkl_core::func::{Callable, PolyFunction, PolyGaussian};
use dunkl_core::interp::SampledFunction;
use dunkl_core::kernel::{dunkl_kernel, KernelMode, SERIES_Z_MAX};
use dunkl_core::report::IdentityReport;
use dunkl_core::sonine::{dual_sonine_apply, sonine_apply, sonine_poly};
use dunkl_core::special::gamma_signed;
use dunkl_core::transform::build_plan;
use dunkl_core::verify::{resolve_suites, run_suites, suite_of, tolerance_for, Sweep, SUITES};
use num_complex::Complex64;

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input::{read_samples, Samples};
use crate::output::{emit, format_params, render_reports, Table};

/// Interpolation degree used to resample input files.
const RESAMPLE_DEGREE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Series,
    Bochner,
    Bessel,
    Auto,
    /// Series and Bochner rows side by side
    Both,
}

fn row_err(v: Complex64, reference: Option<Complex64>) -> f64 {
    match reference {
        Some(r) => (v - r).norm() / r.norm().max(f64::MIN_POSITIVE),
        None => f64::NAN,
    }
}

/// `E_α(z)` for each `z`. `est_err` is the relative distance to a second,
/// independent evaluation: Bochner for the series rows, series elsewhere
/// (Bochner again beyond the series range).
pub fn kernel(cfg: &RunConfig, zs: &[Complex64], mode: ModeArg) -> CliResult<()> {
    let alpha = cfg.require_alpha()?;
    let modes: Vec<KernelMode> = match mode {
        ModeArg::Series => vec![KernelMode::Series],
        ModeArg::Bochner => vec![KernelMode::Bochner],
        ModeArg::Bessel => vec![KernelMode::Bessel],
        ModeArg::Auto => vec![KernelMode::Auto],
        ModeArg::Both => vec![KernelMode::Series, KernelMode::Bochner],
    };
    if zs.is_empty() {
        return Err(CliError::Config("give at least one --z".into()));
    }
    let mut t = Table::new(vec!["z_re", "z_im", "E_re", "E_im", "mode", "est_err"]);
    for &z in zs {
        for &m in &modes {
            let v = dunkl_kernel(alpha, z, m)?;
            let reference_mode = if m == KernelMode::Series || z.norm() > SERIES_Z_MAX {
                KernelMode::Bochner
            } else {
                KernelMode::Series
            };
            let reference = if reference_mode == m {
                None
            } else {
                dunkl_kernel(alpha, z, reference_mode).ok()
            };
            t.push(vec![
                z.re.into(),
                z.im.into(),
                v.re.into(),
                v.im.into(),
                m.to_string().into(),
                row_err(v, reference).into(),
            ]);
        }
    }
    emit(&t.render(cfg.format)?, cfg.out.as_deref())
}

/// Checks that the sample grid is symmetric and increasing and wraps it as a
/// function vanishing outside the sampled interval.
pub fn sampled_function(samples: Samples) -> CliResult<SampledFunction> {
    SampledFunction::symmetric(samples.xs, samples.values, RESAMPLE_DEGREE).map_err(|e| match e {
        dunkl_core::DunklError::InvalidInput(m) => CliError::Config(format!("input samples: {m}")),
        other => other.into(),
    })
}

/// Forward transform of sampled input: rows `(λ, F_re, F_im)`. With
/// `round_trip`, the inverse of that spectrum back at the input abscissae:
/// rows `(x, f_re, f_im)`.
pub fn transform(cfg: &RunConfig, input: &Path, round_trip: bool) -> CliResult<()> {
    let alpha = cfg.require_alpha()?;
    let f = sampled_function(read_samples(input)?)?;
    if f.extent() > cfg.plan.length {
        eprintln!(
            "warning: samples reach |x| = {} but the plan stops at L = {}; the rest is ignored",
            f.extent(),
            cfg.plan.length
        );
    }
    let plan = build_plan(alpha, cfg.plan)?;
    let spectrum = plan.forward(&plan.resample(&f))?;
    let table = if round_trip {
        let back = plan.inverse(&spectrum)?;
        let on_plan = SampledFunction::new(back.grid(), back.values(), RESAMPLE_DEGREE)?;
        let mut t = Table::new(vec!["x", "f_re", "f_im"]);
        for &x in f.nodes() {
            let v = on_plan.eval(x);
            t.push(vec![x.into(), v.re.into(), v.im.into()]);
        }
        t
    } else {
        let mut t = Table::new(vec!["lambda", "F_re", "F_im"]);
        for (l, v) in spectrum.grid().iter().zip(spectrum.values()) {
            t.push(vec![(*l).into(), v.re.into(), v.im.into()]);
        }
        t
    };
    emit(&table.render(cfg.format)?, cfg.out.as_deref())
}

/// Test functions accepted by the `sonine` subcommand.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Gaussian,
    /// `x^n e^{-x²}`
    Moment(usize),
    Poly(Vec<f64>),
}

impl std::str::FromStr for TestFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "gaussian" {
            return Ok(Self::Gaussian);
        }
        if let Some(n) = s.strip_prefix("moment:") {
            return n
                .parse()
                .map(Self::Moment)
                .map_err(|_| format!("'{n}' is not a non-negative integer"));
        }
        if let Some(cs) = s.strip_prefix("poly:") {
            let coeffs = cs
                .split(';')
                .map(|c| c.trim().parse::<f64>().map_err(|_| format!("'{c}' is not a number")))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Self::Poly(coeffs));
        }
        Err(format!("unknown function '{s}' (expected gaussian, moment:N or poly:c0;c1;...)"))
    }
}

/// `S_{α,β} f` or `ᵗS_{α,β} f` at each `x`, with the distance to the exact
/// value where one is known (`nan` otherwise).
pub fn sonine(cfg: &RunConfig, f: &TestFunction, xs: &[f64], dual: bool) -> CliResult<()> {
    let pair = cfg.require_pair()?;
    if xs.is_empty() {
        return Err(CliError::Config("give at least one --x".into()));
    }
    let (a, b) = (pair.alpha.value(), pair.beta.value());
    let func: Box<dyn Callable> = match f {
        TestFunction::Gaussian => Box::new(PolyGaussian::gaussian()),
        TestFunction::Moment(n) => Box::new(PolyGaussian::moment(*n)),
        TestFunction::Poly(c) if dual => {
            return Err(CliError::Config(format!(
                "the dual transform needs a decaying function, not the polynomial {c:?}"
            )))
        }
        TestFunction::Poly(c) => Box::new(PolyFunction::new(c.clone())),
    };
    let exact: Option<Box<dyn Fn(f64) -> Complex64>> = match (f, dual) {
        (TestFunction::Poly(c), false) => {
            let image = sonine_poly(pair, &PolyFunction::new(c.clone()));
            Some(Box::new(move |x| image.eval(x)))
        }
        (TestFunction::Gaussian, true) => {
            let ratio = gamma_signed(b + 1.0) / gamma_signed(a + 1.0);
            Some(Box::new(move |x| Complex64::new(ratio * (-x * x).exp(), 0.0)))
        }
        _ => None,
    };
    let mut t = Table::new(vec!["x", "S_re", "S_im", "est_err"]);
    for &x in xs {
        let v = if dual {
            dual_sonine_apply(pair, func.as_ref(), x)?
        } else {
            sonine_apply(pair, func.as_ref(), x)?
        };
        let err = exact.as_ref().map_or(f64::NAN, |e| (v - e(x)).norm());
        t.push(vec![x.into(), v.re.into(), v.im.into(), err.into()]);
    }
    emit(&t.render(cfg.format)?, cfg.out.as_deref())
}

/// Outcome of `verify`: whether every report met its tolerance.
pub fn verify(cfg: &RunConfig) -> CliResult<bool> {
    let names = if cfg.suites.is_empty() {
        vec!["all".to_string()]
    } else {
        cfg.suites.clone()
    };
    let suites = resolve_suites(&names).map_err(|e| CliError::Config(e.to_string()))?;
    let mut sweep = match cfg.alpha {
        Some(a) => Sweep::single(a.value(), cfg.pair.map(|p| p.beta.value()))?,
        None => Sweep::default(),
    };
    if cfg.plan_overridden {
        sweep.plan = cfg.plan;
    }
    let results = run_suites(&suites, &sweep, &cfg.tolerances, cfg.timing)?;
    let mut all = Vec::new();
    let mut passed = true;
    for s in &results {
        let worst = s.reports.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
        eprintln!(
            "{:<20} {:>4} reports  worst rel err {:.3e}  {}",
            s.suite,
            s.reports.len(),
            worst,
            if s.passed { "pass" } else { "FAIL" }
        );
        passed &= s.passed;
        all.extend(s.reports.iter().cloned());
    }
    let text = render_reports(&all, cfg.format, |r| {
        let suite = suite_of(&r.name).unwrap_or(r.name.as_str());
        (suite.to_string(), tolerance_for(&r.name, suite, &cfg.tolerances))
    })?;
    emit(&text, cfg.out.as_deref())?;
    Ok(passed)
}

fn sort_key(r: &IdentityReport) -> (usize, f64, f64) {
    let suite = suite_of(&r.name).and_then(|s| SUITES.iter().position(|t| *t == s));
    let p = |k: &str| r.params.get(k).copied().unwrap_or(f64::NEG_INFINITY);
    (suite.unwrap_or(SUITES.len()), p("alpha"), p("beta"))
}

/// Concatenates report files and sorts them stably by suite, α and β.
pub fn merge_reports(files: &[PathBuf]) -> CliResult<Vec<IdentityReport>> {
    let mut all = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let reports: Vec<IdentityReport> =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        all.extend(reports);
    }
    all.sort_by(|a, b| {
        let (ka, kb) = (sort_key(a), sort_key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
    });
    Ok(all)
}

/// Human-readable summary of merged report files. Returns whether every
/// report is within tolerance.
pub fn summarize(reports: &[IdentityReport], tolerances: &BTreeMap<String, f64>) -> (String, bool) {
    if reports.is_empty() {
        return ("no reports\n".into(), true);
    }
    let mut groups: Vec<(String, Vec<&IdentityReport>)> = Vec::new();
    for r in reports {
        let suite = suite_of(&r.name).unwrap_or(r.name.as_str()).to_string();
        match groups.last_mut() {
            Some((s, v)) if *s == suite => v.push(r),
            _ => groups.push((suite, vec![r])),
        }
    }
    let mut out = String::new();
    let mut all_pass = true;
    out.push_str(&format!(
        "{:<20} {:>5} {:>11} {:>11} {:>9}  {:<6} worst point\n",
        "suite", "n", "max abs", "max rel", "time s", "status"
    ));
    for (suite, rs) in &groups {
        let worst = rs
            .iter()
            .copied()
            .max_by(|a, b| a.max_rel_err.total_cmp(&b.max_rel_err))
            .expect("groups are non-empty");
        let max_abs = rs.iter().map(|r| r.max_abs_err).fold(0.0, f64::max);
        let time: f64 = rs.iter().map(|r| r.elapsed_s).sum();
        let pass = rs.iter().all(|r| r.passes(tolerance_for(&r.name, suite, tolerances)));
        all_pass &= pass;
        out.push_str(&format!(
            "{:<20} {:>5} {:>11.3e} {:>11.3e} {:>9.3}  {:<6} {} {}\n",
            suite,
            rs.len(),
            max_abs,
            worst.max_rel_err,
            time,
            if pass { "pass" } else { "FAIL" },
            worst.name,
            format_params(worst)
        ));
    }
    (out, all_pass)
}

/// Prints the summary and, with `--out`, writes the merged sorted reports.
pub fn report(cfg: &RunConfig, files: &[PathBuf]) -> CliResult<bool> {
    let merged = merge_reports(files)?;
    let (text, pass) = summarize(&merged, &cfg.tolerances);
    print!("{text}");
    if let Some(path) = &cfg.out {
        let body = match cfg.format {
            Format::Json => serde_json::to_string_pretty(&merged)? + "\n",
            Format::Csv => render_reports(&merged, Format::Csv, |r| {
                let suite = suite_of(&r.name).unwrap_or(r.name.as_str());
                (suite.to_string(), tolerance_for(&r.name, suite, &cfg.tolerances))
            })?,
        };
        emit(&body, Some(path))?;
    }
    Ok(pass)
}
