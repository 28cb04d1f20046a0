use num_complex::Complex64;

use super::{PlanConfig, TransformPlan};
use crate::error::{DunklError, Result};
use crate::func::fd_derivative;
use crate::grid::{GridFunction, Smoothness};
use crate::special::OrderParam;

/// Number of weighted moments checked on a witness.
pub const WITNESS_MOMENTS: usize = 6;

/// Spectral scale of the witnesses used by the inversion checks.
pub const WITNESS_SCALE: f64 = 3.0;

/// Plan shape for witnesses of scale [`WITNESS_SCALE`]. A witness only decays
/// like `exp(-c (s|x|)^{2/3})`, so the `x`-range is much wider than for
/// Gaussians and the `λ`-panels are narrow enough to follow `E(iλx)` out to
/// `|x| = 54`.
pub fn witness_plan_config() -> PlanConfig {
    PlanConfig {
        length: 54.0,
        n_x: 2592,
        lambda_max: 18.0,
        n_lambda: 1536,
        tol: 1e-8,
    }
}

/// `(λ/s)^m exp(-(λ/s)² - (s/λ)²)`, continued by 0 at the origin.
pub fn profile(m: u32, scale: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let t = lambda / scale;
    let e = -t * t - 1.0 / (t * t);
    t.powi(m as i32) * e.exp()
}

/// Derivatives `0..=k_max` of the profile at 0 by nested central differences
/// with step `h`. They vanish because `exp(-1/λ²)` underflows long before
/// any finite difference could see it.
pub fn profile_derivatives_at_zero(m: u32, scale: f64, k_max: usize, h: f64) -> Vec<f64> {
    fn nth(m: u32, scale: f64, k: usize, h: f64, x: f64) -> f64 {
        if k == 0 {
            return profile(m, scale, x);
        }
        fd_derivative(|t| Complex64::new(nth(m, scale, k - 1, h, t), 0.0), x, h).re
    }
    (0..=k_max).map(|k| nth(m, scale, k, h, 0.0)).collect()
}

/// A Lizorkin-type test function: its spectrum vanishes to all orders at 0,
/// so all its weighted moments vanish.
#[derive(Debug, Clone)]
pub struct LizorkinWitness {
    pub alpha: OrderParam,
    pub m: u32,
    pub scale: f64,
    pub spectrum: GridFunction,
    pub f: GridFunction,
    /// `|∫ f y^k |y|^{2α+1}| / ∫ |f| |y|^{k+2α+1}` for `k < 6`.
    pub moments: Vec<f64>,
}

pub fn make_witness(plan: &TransformPlan, m: u32, scale: f64) -> Result<LizorkinWitness> {
    if m > 1 {
        return Err(DunklError::InvalidInput(format!("witness parity must be 0 or 1, got {m}")));
    }
    if !(scale > 0.0) {
        return Err(DunklError::InvalidInput(format!("witness scale must be positive, got {scale}")));
    }
    let spectrum = plan.sample_lambda(|l| Complex64::new(profile(m, scale, l), 0.0), Smoothness::Schwartz);
    let f = plan.inverse(&spectrum)?;
    let moments = (0..WITNESS_MOMENTS)
        .map(|k| {
            let raw = f.integrate_with(|y, v| v * y.powi(k as i32)).norm();
            let size = f.integrate_with(|y, v| Complex64::new(v.norm() * y.abs().powi(k as i32), 0.0)).re;
            if size > 0.0 {
                raw / size
            } else {
                0.0
            }
        })
        .collect();
    Ok(LizorkinWitness {
        alpha: plan.alpha,
        m,
        scale,
        spectrum,
        f,
        moments,
    })
}

impl LizorkinWitness {
    pub fn max_moment(&self) -> f64 {
        self.moments.iter().copied().fold(0.0, f64::max)
    }
}
