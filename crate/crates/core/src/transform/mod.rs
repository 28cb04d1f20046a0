//! Discrete Dunkl transform between two symmetric grids.
//!
//! Both the `x`-grid and the `λ`-grid are [`HalfLineRule`]s mirrored about 0,
//! each carrying the weight `|·|^{2α+1}`. On the imaginary axis the kernel
//! splits as `E_α(iy) = j(y) + i k(y)` with `j` even and `k` odd, so
//!
//! ```text
//! F(±λ) = 2 Σ_k w_k [ j(λx_k) f_e(x_k) ∓ i k(λx_k) f_o(x_k) ]
//! f(±x) = 2 c_α Σ_j v_j [ j(λ_j x) F_e(λ_j) ± i k(λ_j x) F_o(λ_j) ]
//! ```
//!
//! and one real table of `j` and `k` serves both directions.

mod fractional;
mod pipeline;
mod homogeneous;
mod witness;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DunklError, Result};
use crate::func::Callable;
use crate::grid::{GridFunction, Smoothness};
use crate::kernel::kernel_imag;
use crate::quadrature::{ComplexSum, HalfLineRule};
use crate::report::IdentityReport;
use crate::special::{c_const, gamma_signed, OrderParam};

pub use fractional::{frac_power_constant, frac_power_kernel, multiplier_point, riesz_kernel_constant, translated_power};
pub use pipeline::{
    inversion_a, inversion_b, inversion_c, inversion_d, k_operator, commutation_check, plancherel_dual, KOperator, PlanPair,
};
pub use homogeneous::{homogeneous_constants, prop7_identity_check, transformed_callable, TransformedCallable};
pub use witness::{
    make_witness, profile, profile_derivatives_at_zero, witness_plan_config, LizorkinWitness, WITNESS_MOMENTS, WITNESS_SCALE,
};

/// Panel order of plan grids.
pub const PLAN_ORDER: usize = 16;

/// Shape of a transform plan: `n_x` nodes on `[-L, L]` and `n_lambda` on `[-Λ, Λ]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PlanConfig {
    pub length: f64,
    pub n_x: usize,
    pub lambda_max: f64,
    pub n_lambda: usize,
    pub tol: f64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            length: 12.0,
            n_x: 512,
            lambda_max: 12.0,
            n_lambda: 512,
            tol: 1e-10,
        }
    }
}

impl PlanConfig {
    pub fn summary(&self) -> String {
        format!(
            "x in [-{}, {}] ({} nodes), lambda in [-{}, {}] ({} nodes)",
            self.length, self.length, self.n_x, self.lambda_max, self.lambda_max, self.n_lambda
        )
    }
}

#[derive(Debug)]
pub struct TransformPlan {
    pub alpha: OrderParam,
    pub config: PlanConfig,
    pub x_rule: Arc<HalfLineRule>,
    pub lambda_rule: Arc<HalfLineRule>,
    /// `j(λ_i x_k)` and `k(λ_i x_k)`, row-major in `λ`.
    j_table: Vec<f64>,
    k_table: Vec<f64>,
    /// Sup error of the Gaussian self-test.
    pub self_test_error: f64,
}

fn half_rule(weight_exp: f64, length: f64, n: usize, what: &str) -> Result<HalfLineRule> {
    if n == 0 {
        return Err(DunklError::InvalidInput(format!("{what} grid is empty")));
    }
    if n % (2 * PLAN_ORDER) != 0 {
        return Err(DunklError::InvalidInput(format!(
            "{what} grid size {n} must be a multiple of {}",
            2 * PLAN_ORDER
        )));
    }
    HalfLineRule::new(weight_exp, length, n / (2 * PLAN_ORDER), PLAN_ORDER)
}

/// Builds the kernel tables and runs the Gaussian self-test.
pub fn build_plan(alpha: OrderParam, config: PlanConfig) -> Result<TransformPlan> {
    let p = alpha.weight_exponent();
    let x_rule = Arc::new(half_rule(p, config.length, config.n_x, "x")?);
    let lambda_rule = Arc::new(half_rule(p, config.lambda_max, config.n_lambda, "lambda")?);
    let nx = x_rule.len();
    let rows: Vec<(Vec<f64>, Vec<f64>)> = lambda_rule
        .nodes
        .par_iter()
        .map(|&lam| x_rule.nodes.iter().map(|&x| kernel_imag(alpha, lam * x)).unzip())
        .collect();
    let mut j_table = Vec::with_capacity(nx * lambda_rule.len());
    let mut k_table = Vec::with_capacity(nx * lambda_rule.len());
    for (j, k) in rows {
        j_table.extend(j);
        k_table.extend(k);
    }
    let mut plan = TransformPlan {
        alpha,
        config,
        x_rule,
        lambda_rule,
        j_table,
        k_table,
        self_test_error: f64::NAN,
    };
    plan.self_test_error = plan.gaussian_self_test();
    if !(plan.self_test_error <= config.tol) {
        return Err(DunklError::PlanSelfTest {
            achieved: plan.self_test_error,
            tol: config.tol,
        });
    }
    Ok(plan)
}

impl TransformPlan {
    pub fn sample_x(&self, f: impl Fn(f64) -> Complex64 + Sync, smoothness: Smoothness) -> GridFunction {
        GridFunction::sample(self.x_rule.clone(), f, smoothness)
    }

    pub fn sample_lambda(&self, f: impl Fn(f64) -> Complex64 + Sync, smoothness: Smoothness) -> GridFunction {
        GridFunction::sample(self.lambda_rule.clone(), f, smoothness)
    }

    /// Samples any callable on the x-grid (used to move functions between plans).
    pub fn resample(&self, f: &dyn Callable) -> GridFunction {
        GridFunction::from_callable(self.x_rule.clone(), f, Smoothness::Schwartz)
    }

    /// `F_α f` on the λ-grid.
    pub fn forward(&self, f: &GridFunction) -> Result<GridFunction> {
        f.check_same_grid(&GridFunction::zeros(self.x_rule.clone()))?;
        let w = &self.x_rule.weights;
        let fe = f.even_values();
        let fo: Vec<Complex64> = f.odd_quotients().iter().zip(&self.x_rule.nodes).map(|(q, x)| q * x).collect();
        let nx = self.x_rule.len();
        let (pos, neg): (Vec<_>, Vec<_>) = (0..self.lambda_rule.len())
            .into_par_iter()
            .map(|i| {
                let jr = &self.j_table[i * nx..(i + 1) * nx];
                let kr = &self.k_table[i * nx..(i + 1) * nx];
                let mut even = ComplexSum::default();
                let mut odd = ComplexSum::default();
                for k in 0..nx {
                    even.add(fe[k] * (jr[k] * w[k]));
                    odd.add(fo[k] * (kr[k] * w[k]));
                }
                let (e, o) = (even.value() * 2.0, odd.value() * Complex64::new(0.0, 2.0));
                (e - o, e + o)
            })
            .unzip();
        GridFunction::from_parts(self.lambda_rule.clone(), pos, neg, f.smoothness)
    }

    /// `F_α^{-1} g` on the x-grid.
    pub fn inverse(&self, g: &GridFunction) -> Result<GridFunction> {
        g.check_same_grid(&GridFunction::zeros(self.lambda_rule.clone()))?;
        let v = &self.lambda_rule.weights;
        let ge = g.even_values();
        let go: Vec<Complex64> = g.odd_quotients().iter().zip(&self.lambda_rule.nodes).map(|(q, l)| q * l).collect();
        let nx = self.x_rule.len();
        let nl = self.lambda_rule.len();
        let c = 2.0 * c_const(self.alpha);
        let (pos, neg): (Vec<_>, Vec<_>) = (0..nx)
            .into_par_iter()
            .map(|k| {
                let mut even = ComplexSum::default();
                let mut odd = ComplexSum::default();
                for i in 0..nl {
                    even.add(ge[i] * (self.j_table[i * nx + k] * v[i]));
                    odd.add(go[i] * (self.k_table[i * nx + k] * v[i]));
                }
                let (e, o) = (even.value() * c, odd.value() * Complex64::new(0.0, c));
                (e + o, e - o)
            })
            .unzip();
        GridFunction::from_parts(self.x_rule.clone(), pos, neg, g.smoothness)
    }

    /// `F_α f(λ)` at a single `λ`, integrating a callable on the plan's x-rule.
    pub fn forward_at(&self, f: &dyn Callable, lambda: f64) -> Complex64 {
        forward_point(self.alpha, &self.x_rule, f, lambda)
    }

    fn gaussian_self_test(&self) -> f64 {
        let gauss = self.sample_x(|x| Complex64::new((-x * x).exp(), 0.0), Smoothness::Schwartz);
        let Ok(spec) = self.forward(&gauss) else {
            return f64::INFINITY;
        };
        let g = gamma_signed(self.alpha.value() + 1.0);
        let fwd = spec
            .grid()
            .iter()
            .zip(spec.values())
            .map(|(l, v)| (v - g * (-l * l / 4.0).exp()).norm())
            .fold(0.0, f64::max);
        let Ok(back) = self.inverse(&spec) else {
            return f64::INFINITY;
        };
        let (round, _) = back.compare(&gauss, 0.0).unwrap_or((f64::INFINITY, 0.0));
        fwd.max(round)
    }

    pub fn grid_summary(&self) -> String {
        self.config.summary()
    }
}

/// `F_α f(λ) = ∫ f(x) E_α(-iλx) |x|^{2α+1} dx` on the mirrored nodes of `rule`.
pub fn forward_point(alpha: OrderParam, rule: &HalfLineRule, f: &dyn Callable, lambda: f64) -> Complex64 {
    let mut even = ComplexSum::default();
    let mut odd = ComplexSum::default();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let (j, k) = kernel_imag(alpha, lambda * x);
        even.add(f.even(*x) * (j * w));
        odd.add(f.odd(*x) * (k * w));
    }
    (even.value() - odd.value() * Complex64::new(0.0, 1.0)) * 2.0
}

/// Multiplier `scale · |λ|^exponent` on the spectral side.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MultiplierSpec {
    pub exponent: f64,
    pub scale: f64,
}

impl MultiplierSpec {
    pub fn new(exponent: f64, scale: f64) -> Result<Self> {
        if !scale.is_finite() || !exponent.is_finite() {
            return Err(DunklError::InvalidInput(format!(
                "multiplier needs finite scale and exponent (got {scale}, {exponent})"
            )));
        }
        Ok(Self { exponent, scale })
    }

    /// Multipliers compose by adding exponents and multiplying scales.
    pub fn compose(self, other: MultiplierSpec) -> MultiplierSpec {
        MultiplierSpec {
            exponent: self.exponent + other.exponent,
            scale: self.scale * other.scale,
        }
    }

    pub fn value(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return if self.exponent == 0.0 { self.scale } else { 0.0 };
        }
        self.scale * lambda.abs().powf(self.exponent)
    }
}

/// Result of a multiplier application; `warning` is set when a negative exponent
/// meets a spectrum that does not vanish near the origin.
#[derive(Debug, Clone)]
pub struct MultiplierOutcome {
    pub result: GridFunction,
    pub warning: Option<String>,
}

/// Spectrum magnitude near `λ = 0`, relative to its maximum, above which
/// negative exponents are flagged.
const ORIGIN_LEAK: f64 = 1e-6;

pub fn multiply_spectrum(spec: &GridFunction, m: MultiplierSpec) -> GridFunction {
    spec.map(|l, v| v * m.value(l))
}

/// `F_α^{-1}(m(λ) F_α f)`.
pub fn apply_multiplier(plan: &TransformPlan, f: &GridFunction, m: MultiplierSpec) -> Result<MultiplierOutcome> {
    let spec = plan.forward(f)?;
    let mut warning = None;
    if m.exponent < 0.0 {
        let peak = spec.max_abs();
        let near = spec.pos()[0].norm().max(spec.neg()[0].norm());
        let lam0 = plan.lambda_rule.nodes[0];
        // the multiplier amplifies the smallest node by lam0^exponent
        if peak > 0.0 && near * lam0.powf(m.exponent) > ORIGIN_LEAK * peak {
            warning = Some(format!(
                "negative exponent {} on a spectrum of size {:.3e} at lambda = {:.3e}",
                m.exponent, near, lam0
            ));
        }
    }
    let result = plan.inverse(&multiply_spectrum(&spec, m))?;
    Ok(MultiplierOutcome { result, warning })
}

/// Compares `∫|f|²|x|^{2α+1}dx` with `c_α ∫|F_α f|²|λ|^{2α+1}dλ`.
pub fn plancherel_check(plan: &TransformPlan, f: &GridFunction) -> Result<IdentityReport> {
    let lhs = f.norm_sq();
    let rhs = c_const(plan.alpha) * plan.forward(f)?.norm_sq();
    let mut report = IdentityReport::new("plancherel-classic")
        .param("alpha", plan.alpha.value())
        .grid(plan.grid_summary());
    report.record((lhs - rhs).abs(), lhs.abs());
    Ok(report)
}
