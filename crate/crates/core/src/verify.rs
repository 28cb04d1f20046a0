//! Named identity suites run over a parameter sweep.
//!
//! Each suite produces one [`IdentityReport`] per identity and parameter
//! point. A report passes when its `max_rel_err` is within the tolerance
//! looked up first by report name, then by suite name.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DunklError, Result};
use crate::func::{fd_derivative, Callable, PolyFunction, PolyGaussian};
use crate::grid::{GridFunction, Smoothness};
use crate::kernel::{dunkl_kernel, KernelFunction, KernelMode};
use crate::operators::{
    dual_intertwiner_v, dunkl_operator, dunkl_operator_poly, intertwiner_v, intertwiner_v_poly, OperatorImage,
};
use crate::quadrature::{homogeneous_pairing, ComplexSum, HalfLineRule};
use crate::report::IdentityReport;
use crate::sonine::{
    dual_sonine_apply, intertwining_check, intertwining_check_poly, sonine_apply, sonine_poly, sonine_product,
    sonine_via_intertwiners, SoninePair,
};
use crate::special::{b_ratio_product, gamma_signed, OrderParam};
use crate::transform::{
    build_plan, frac_power_kernel, inversion_a, inversion_b, inversion_c, inversion_d, commutation_check, make_witness,
    multiplier_point, plancherel_check, plancherel_dual, prop7_identity_check, witness_plan_config, LizorkinWitness,
    MultiplierSpec, PlanConfig, PlanPair, TransformPlan, WITNESS_SCALE,
};

/// Every suite accepted by [`run_suites`], in run order.
pub const SUITES: &[&str] = &[
    "kernel-consistency",
    "eigenrelation",
    "transmutation",
    "duality",
    "sonine-product",
    "monomial",
    "decomposition",
    "transform-oracles",
    "plancherel-classic",
    "residue",
    "prop7",
    "frac-power",
    "lemma3",
    "theorem3-a",
    "theorem3-b",
    "theorem3-c",
    "theorem3-d",
    "plancherel-dual",
];

/// Default tolerance for a suite or report name.
pub fn default_tolerance(name: &str) -> Option<f64> {
    let tol = match name {
        "kernel-consistency" => 1e-10,
        "eigenrelation" => 1e-9,
        "transmutation" | "prop1" | "prop2-i" | "intertwining" => 1e-6,
        "prop1-poly" | "intertwining-poly" => 1e-12,
        "duality" | "prop2-ii" | "prop6-i" => 1e-7,
        "sonine-product" => 1e-8,
        "monomial" => 1e-10,
        "sonine-routes" => 1e-12,
        "decomposition" | "dual-sonine-gaussian" => 1e-6,
        "transform-oracles" | "gaussian-transform" => 1e-9,
        "prop3-i" => 1e-7,
        "plancherel-closed-form" => 1e-9,
        "plancherel-classic" => 1e-8,
        "residue" => 1e-6,
        "prop7" => 1e-6,
        "prop7-degenerate" => 1e-8,
        "frac-power" => 1e-4,
        "lemma3" => 1e-4,
        "theorem3-a" | "theorem3-b" | "theorem3-c" | "theorem3-d" | "plancherel-dual" => 1e-3,
        _ => return None,
    };
    Some(tol)
}

/// Suite that produces reports called `report`.
pub fn suite_of(report: &str) -> Option<&'static str> {
    let suite = match report {
        "prop1" | "prop1-poly" | "prop2-i" | "intertwining" | "intertwining-poly" => "transmutation",
        "prop2-ii" | "prop6-i" => "duality",
        "sonine-routes" => "monomial",
        "dual-sonine-gaussian" => "decomposition",
        "gaussian-transform" | "prop3-i" => "transform-oracles",
        "plancherel-closed-form" => "plancherel-classic",
        "prop7-degenerate" => "prop7",
        other => return SUITES.iter().find(|s| **s == other).copied(),
    };
    Some(suite)
}

/// Parameter points and grids the suites run on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    /// Orders for the kernel suite.
    pub kernel_alphas: Vec<f64>,
    /// Orders for single-index suites.
    pub alphas: Vec<f64>,
    /// Pairs for the Sonine suites.
    pub pairs: Vec<(f64, f64)>,
    /// Pairs for the inversion pipelines on witnesses.
    pub witness_pairs: Vec<(f64, f64)>,
    /// Orders for the two fractional-power routes.
    pub frac_alphas: Vec<f64>,
    pub plan: PlanConfig,
    pub witness_plan: PlanConfig,
}

impl Default for Sweep {
    fn default() -> Self {
        let alphas = vec![-0.25, 0.0, 0.5, 1.5];
        let pairs = alphas
            .iter()
            .flat_map(|&a| [0.5, 1.0, 2.0].map(|d| (a, a + d)))
            .collect();
        Self {
            kernel_alphas: vec![-0.4, 0.0, 0.5, 1.5, 2.7],
            alphas,
            pairs,
            witness_pairs: vec![(0.0, 0.5), (0.5, 1.5), (0.0, 2.0)],
            frac_alphas: vec![0.5, 1.5],
            plan: PlanConfig::default(),
            witness_plan: witness_plan_config(),
        }
    }
}

impl Sweep {
    /// A sweep over one order; without `beta` the pairs are `α + {1/2, 1, 2}`.
    pub fn single(alpha: f64, beta: Option<f64>) -> Result<Self> {
        OrderParam::new(alpha)?;
        let pairs = match beta {
            Some(b) => {
                SoninePair::new(alpha, b)?;
                vec![(alpha, b)]
            }
            None => [0.5, 1.0, 2.0].iter().map(|d| (alpha, alpha + d)).collect(),
        };
        Ok(Self {
            kernel_alphas: vec![alpha],
            alphas: vec![alpha],
            witness_pairs: pairs.clone(),
            pairs,
            frac_alphas: vec![alpha],
            ..Self::default()
        })
    }
}

/// Reports of one suite and whether all of them are within tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub reports: Vec<IdentityReport>,
    pub passed: bool,
}

/// Tolerance for `report` in `suite`: overrides first, then the defaults.
pub fn tolerance_for(report: &str, suite: &str, overrides: &BTreeMap<String, f64>) -> f64 {
    overrides
        .get(report)
        .or_else(|| overrides.get(suite))
        .copied()
        .or_else(|| default_tolerance(report))
        .or_else(|| default_tolerance(suite))
        .unwrap_or(0.0)
}

/// Expands `all` and checks every name against [`SUITES`].
pub fn resolve_suites(names: &[String]) -> Result<Vec<&'static str>> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            return Ok(SUITES.to_vec());
        }
        match SUITES.iter().find(|s| **s == name.as_str()) {
            Some(s) => out.push(*s),
            None => {
                return Err(DunklError::InvalidInput(format!(
                    "unknown suite '{name}'; available: all, {}",
                    SUITES.join(", ")
                )))
            }
        }
    }
    // run order follows SUITES so output does not depend on argument order
    out.sort_by_key(|s| SUITES.iter().position(|t| t == s));
    out.dedup();
    Ok(out)
}

/// Runs the named suites. Report timings are kept only when `timing` is set,
/// so that output is byte-identical between runs otherwise.
pub fn run_suites(
    names: &[&str],
    sweep: &Sweep,
    overrides: &BTreeMap<String, f64>,
    timing: bool,
) -> Result<Vec<SuiteResult>> {
    let mut cache = PlanCache::default();
    let mut out = Vec::with_capacity(names.len());
    for &suite in names {
        let mut reports = run_one(suite, sweep, &mut cache)?;
        if !timing {
            for r in &mut reports {
                r.elapsed_s = 0.0;
            }
        }
        let passed = reports
            .iter()
            .all(|r| r.passes(tolerance_for(&r.name, suite, overrides)));
        out.push(SuiteResult {
            suite: suite.to_string(),
            reports,
            passed,
        });
    }
    Ok(out)
}

fn run_one(suite: &str, sweep: &Sweep, cache: &mut PlanCache) -> Result<Vec<IdentityReport>> {
    let ops = |xs: &[f64]| xs.iter().map(|&a| OrderParam::new(a)).collect::<Result<Vec<_>>>();
    let pairs = |xs: &[(f64, f64)]| xs.iter().map(|&(a, b)| SoninePair::new(a, b)).collect::<Result<Vec<_>>>();
    let reports = match suite {
        "kernel-consistency" => ops(&sweep.kernel_alphas)?.into_iter().map(kernel_consistency).collect(),
        "eigenrelation" => ops(&sweep.alphas)?.into_iter().map(eigenrelation).collect(),
        "transmutation" => {
            let mut v = Vec::new();
            for a in ops(&sweep.alphas)? {
                v.push(transmutation_poly(a));
                v.push(guard("prop1", &[("alpha", a.value())], || transmutation_gaussian(a)));
                v.push(guard("prop2-i", &[("alpha", a.value())], || inverse_transmutation(a)));
            }
            for p in pairs(&sweep.pairs)? {
                v.push(intertwining_check_poly(p, &degree_twenty()));
                let xs = [-1.7, -0.6, 0.4, 1.1, 2.3];
                v.push(guard("intertwining", &pair_params(p), || {
                    intertwining_check(p, &PolyGaussian::moment(1), &xs)
                }));
            }
            v
        }
        "duality" => {
            let mut v: Vec<IdentityReport> = ops(&sweep.alphas)?
                .into_iter()
                .map(|a| guard("prop2-ii", &[("alpha", a.value())], || intertwiner_duality(a)))
                .collect();
            for p in pairs(&sweep.pairs)? {
                v.push(guard("prop6-i", &pair_params(p), || sonine_duality(p)));
            }
            v
        }
        "sonine-product" => pairs(&sweep.pairs)?
            .into_iter()
            .map(|p| guard("sonine-product", &pair_params(p), || product_formula(p)))
            .collect(),
        "monomial" => {
            let mut v = Vec::new();
            for p in pairs(&sweep.pairs)? {
                v.push(guard("monomial", &pair_params(p), || monomial_law(p)));
                v.push(sonine_routes(p));
            }
            v
        }
        "decomposition" => {
            let mut v = Vec::new();
            for p in pairs(&sweep.pairs)? {
                let plans = cache.pair(p, sweep.plan);
                v.push(guard("decomposition", &pair_params(p), || decomposition(p, plans?)));
                v.push(guard("dual-sonine-gaussian", &pair_params(p), || dual_sonine_gaussian(p)));
            }
            v
        }
        "transform-oracles" => {
            let mut v = Vec::new();
            for a in ops(&sweep.alphas)? {
                let plan = cache.plan(a, sweep.plan);
                v.push(guard("gaussian-transform", &[("alpha", a.value())], || {
                    gaussian_transform(plan.clone()?)
                }));
                v.push(guard("prop3-i", &[("alpha", a.value())], || derivative_rule(plan?)));
            }
            let zero = OrderParam::new(0.0)?;
            let plan = cache.plan(zero, sweep.plan);
            v.push(guard("plancherel-closed-form", &[("alpha", 0.0)], || plancherel_closed_form(plan?)));
            v
        }
        "plancherel-classic" => {
            let mut v = Vec::new();
            for a in ops(&sweep.alphas)? {
                let plan = cache.plan(a, sweep.plan);
                for (n, f) in [(0, PolyGaussian::gaussian()), (1, PolyGaussian::moment(1))] {
                    let params = [("alpha", a.value()), ("degree", n as f64)];
                    let plan = plan.clone();
                    v.push(guard("plancherel-classic", &params, || {
                        let plan = plan?;
                        let g = plan.sample_x(|x| f.eval(x), Smoothness::PolyGaussian);
                        Ok(plancherel_check(&plan, &g)?.param("degree", n as f64))
                    }));
                }
            }
            v
        }
        "residue" => vec![residue(-1.0, 2.0), residue(-3.0, -2.0)],
        "prop7" => {
            let mut v = Vec::new();
            for a in ops(&sweep.alphas)? {
                let rule = Arc::new(HalfLineRule::new(a.weight_exponent(), 12.0, 16, 16)?);
                let gauss = PolyGaussian::gaussian();
                for lam in [-1.3, -0.6, 0.7] {
                    v.push(guard("prop7", &[("alpha", a.value()), ("lambda", lam)], || {
                        prop7_identity_check(a, lam, &gauss, rule.clone(), PROP7_CUTOFF)
                    }));
                }
                // φ''(0) = 0, so the finite part at the pole of |x|^{-3} carries no δ'' term
                let flat = PolyGaussian::new(PolyFunction::new(vec![1.0, 0.0, 1.0]), 1.0);
                v.push(guard("prop7-degenerate", &[("alpha", a.value()), ("lambda", 2.0)], || {
                    prop7_identity_check(a, 2.0, &flat, rule.clone(), PROP7_CUTOFF)
                }));
            }
            v
        }
        "frac-power" => {
            let mut v = Vec::new();
            for a in ops(&sweep.frac_alphas)? {
                let plan = cache.plan(a, sweep.plan);
                for lam in [-0.3, -0.5] {
                    let plan = plan.clone();
                    v.push(guard("frac-power", &[("alpha", a.value()), ("lambda", lam)], || {
                        frac_power_routes(plan?, lam)
                    }));
                }
            }
            v
        }
        "lemma3" | "theorem3-a" | "theorem3-b" | "theorem3-c" | "theorem3-d" | "plancherel-dual" => {
            let mut v = Vec::new();
            for p in pairs(&sweep.witness_pairs)? {
                for m in 0..2 {
                    let params = [
                        ("alpha", p.alpha.value()),
                        ("beta", p.beta.value()),
                        ("m", m as f64),
                    ];
                    let ctx = cache.witnesses(p, sweep.witness_plan, m);
                    v.push(guard(suite, &params, || {
                        let (plans, wa, wb) = ctx?;
                        let start = Instant::now();
                        let r = match suite {
                            "lemma3" => commutation_check(&plans, &wb.f),
                            "theorem3-a" => inversion_a(&plans, &wb.f),
                            "theorem3-b" => inversion_b(&plans, &wa.f),
                            "theorem3-c" => inversion_c(&plans, &wa.f),
                            "theorem3-d" => inversion_d(&plans, &wb.f),
                            _ => plancherel_dual(&plans, &wb.f),
                        }?;
                        Ok(r.param("m", m as f64).param("scale", WITNESS_SCALE).timed(start))
                    }));
                }
            }
            v
        }
        other => {
            return Err(DunklError::InvalidInput(format!("unknown suite '{other}'")));
        }
    };
    Ok(reports)
}

/// Runs a check, turning an evaluation error into a failing report.
fn guard(name: &str, params: &[(&str, f64)], f: impl FnOnce() -> Result<IdentityReport>) -> IdentityReport {
    let start = Instant::now();
    match f() {
        Ok(r) => {
            if r.elapsed_s > 0.0 {
                r
            } else {
                r.timed(start)
            }
        }
        Err(e) => {
            let mut r = IdentityReport::new(name).grid(format!("error: {e}"));
            for (k, v) in params {
                r = r.param(k, *v);
            }
            r.with_errors(f64::INFINITY, f64::INFINITY)
        }
    }
}

fn pair_params(p: SoninePair) -> [(&'static str, f64); 2] {
    [("alpha", p.alpha.value()), ("beta", p.beta.value())]
}

fn pair_report(name: &str, p: SoninePair) -> IdentityReport {
    IdentityReport::new(name)
        .param("alpha", p.alpha.value())
        .param("beta", p.beta.value())
}

#[derive(Default)]
struct PlanCache {
    plans: BTreeMap<(u64, String), Arc<TransformPlan>>,
    witnesses: BTreeMap<(u64, u32), Arc<LizorkinWitness>>,
}

impl PlanCache {
    fn plan(&mut self, alpha: OrderParam, config: PlanConfig) -> Result<Arc<TransformPlan>> {
        let key = (alpha.value().to_bits(), format!("{config:?}"));
        if let Some(p) = self.plans.get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(build_plan(alpha, config)?);
        self.plans.insert(key, p.clone());
        Ok(p)
    }

    fn pair(&mut self, pair: SoninePair, config: PlanConfig) -> Result<PlanPair> {
        let a = self.plan(pair.alpha, config)?;
        let b = self.plan(pair.beta, config)?;
        PlanPair::new(pair, a, b)
    }

    fn witness(&mut self, alpha: OrderParam, config: PlanConfig, m: u32) -> Result<Arc<LizorkinWitness>> {
        let key = (alpha.value().to_bits(), m);
        if let Some(w) = self.witnesses.get(&key) {
            return Ok(w.clone());
        }
        let plan = self.plan(alpha, config)?;
        let w = Arc::new(make_witness(&plan, m, WITNESS_SCALE)?);
        self.witnesses.insert(key, w.clone());
        Ok(w)
    }

    fn witnesses(
        &mut self,
        pair: SoninePair,
        config: PlanConfig,
        m: u32,
    ) -> Result<(PlanPair, Arc<LizorkinWitness>, Arc<LizorkinWitness>)> {
        let plans = self.pair(pair, config)?;
        let wa = self.witness(pair.alpha, config, m)?;
        let wb = self.witness(pair.beta, config, m)?;
        Ok((plans, wa, wb))
    }
}

fn kernel_consistency(alpha: OrderParam) -> IdentityReport {
    let zs = [
        Complex64::new(0.1, 0.0),
        Complex64::new(-0.1, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(5.0, 0.0),
        Complex64::new(-5.0, 0.0),
        Complex64::new(0.0, 10.0),
        Complex64::new(0.0, -10.0),
        Complex64::new(3.0, 4.0),
    ];
    let mut r = IdentityReport::new("kernel-consistency")
        .param("alpha", alpha.value())
        .grid(format!("{} points, series vs bochner vs bessel", zs.len()));
    for z in zs {
        let vals: Result<Vec<Complex64>> = [KernelMode::Series, KernelMode::Bochner, KernelMode::Bessel]
            .into_iter()
            .map(|m| dunkl_kernel(alpha, z, m))
            .collect();
        match vals {
            Ok(v) => {
                let scale = v[0].norm();
                r.record((v[0] - v[1]).norm(), scale);
                r.record((v[0] - v[2]).norm(), scale);
                r.record((v[1] - v[2]).norm(), scale);
            }
            Err(_) => r.record(f64::INFINITY, 1.0),
        }
    }
    r
}

fn eigenrelation(alpha: OrderParam) -> IdentityReport {
    let xs: Vec<f64> = (0..41).map(|k| -2.0 + 0.1 * k as f64).collect();
    let mut r = IdentityReport::new("eigenrelation")
        .param("alpha", alpha.value())
        .grid("41 points in [-2, 2], lambda in {1, i, 2i}");
    for lam in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)] {
        let e = KernelFunction::new(alpha, lam);
        let scale = xs.iter().fold(0.0f64, |m, &x| m.max(e.eval(x).norm()));
        for &x in &xs {
            let got = dunkl_operator(alpha, &e, x).unwrap_or(Complex64::new(f64::NAN, 0.0));
            r.record((got - lam * e.eval(x)).norm(), scale);
        }
    }
    r
}

fn degree_twenty() -> PolyFunction {
    PolyFunction::new((0..=20).map(|n| 1.0 / (1.0 + n as f64)).collect())
}

/// `Λ_α V_α p = V_α p'` coefficientwise.
fn transmutation_poly(alpha: OrderParam) -> IdentityReport {
    let p = degree_twenty();
    let lhs = dunkl_operator_poly(alpha, &intertwiner_v_poly(alpha, &p));
    let rhs = intertwiner_v_poly(alpha, &p.derivative_poly());
    let scale = rhs.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut r = IdentityReport::new("prop1-poly")
        .param("alpha", alpha.value())
        .param("degree", 20.0)
        .grid("coefficients");
    r.record(lhs.max_rel_diff(&rhs) * scale, scale);
    r
}

const CHECK_POINTS: [f64; 6] = [-2.1, -0.9, -0.3, 0.2, 0.8, 1.6];

/// `Λ_α V_α f = V_α f'` at points, `f = (1+x) e^{-x²}`.
fn transmutation_gaussian(alpha: OrderParam) -> Result<IdentityReport> {
    let f = PolyGaussian::new(PolyFunction::new(vec![1.0, 1.0]), 1.0);
    let df = PolyGaussian::new(PolyFunction::new(vec![1.0, -2.0, -2.0]), 1.0);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &x in &CHECK_POINTS {
        lhs.push(crate::sonine::apply_dunkl_fd(alpha, &|t| intertwiner_v(alpha, &f, t), x)?);
        rhs.push(intertwiner_v(alpha, &df, x)?);
    }
    let mut r = IdentityReport::new("prop1")
        .param("alpha", alpha.value())
        .grid(format!("{} points in [-2.1, 1.6]", CHECK_POINTS.len()));
    record_all(&mut r, &lhs, &rhs);
    Ok(r)
}

/// `ᵗV_α(Λ_α f) = (ᵗV_α f)'` at points, `f = x e^{-x²}`.
fn inverse_transmutation(alpha: OrderParam) -> Result<IdentityReport> {
    let f = PolyGaussian::moment(1);
    let lam_f = OperatorImage::new(|y| dunkl_operator(alpha, &f, y));
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &x in &CHECK_POINTS {
        lhs.push(dual_intertwiner_v(alpha, &lam_f, x)?);
        let failure = std::cell::RefCell::new(None);
        let d = fd_derivative(
            |t| {
                dual_intertwiner_v(alpha, &f, t).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                })
            },
            x,
            1e-2,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        rhs.push(d);
    }
    let mut r = IdentityReport::new("prop2-i")
        .param("alpha", alpha.value())
        .grid(format!("{} points in [-2.1, 1.6]", CHECK_POINTS.len()));
    record_all(&mut r, &lhs, &rhs);
    Ok(r)
}

fn record_all(r: &mut IdentityReport, lhs: &[Complex64], rhs: &[Complex64]) {
    let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    for (a, b) in lhs.iter().zip(rhs) {
        r.record((a - b).norm(), scale);
    }
}

/// `∫_ℝ f(x) g(x) |x|^p dx` on the nodes `±x_k` of a rule with weight `|x|^p`.
fn line_integral(rule: &HalfLineRule, f: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = ComplexSum::default();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc.add((f(*x)? + f(-x)?) * *w);
    }
    Ok(acc.value())
}

const DUALITY_LENGTH: f64 = 10.0;
const DUALITY_PANELS: usize = 20;

fn duality_pairs() -> Vec<(PolyFunction, PolyGaussian)> {
    vec![
        (PolyFunction::monomial(2), PolyGaussian::gaussian()),
        (PolyFunction::monomial(0), PolyGaussian::gaussian()),
        (PolyFunction::monomial(1), PolyGaussian::moment(1)),
        (PolyFunction::monomial(3), PolyGaussian::new(PolyFunction::new(vec![1.0, 1.0]), 1.0)),
        (PolyFunction::new(vec![0.0, 1.0, 0.0, 0.0, 1.0]), PolyGaussian::new(PolyFunction::new(vec![0.0, 1.0, 1.0]), 1.0)),
    ]
}

/// `∫ V_α(f) g |x|^{2α+1} dx = ∫ f ᵗV_α(g) dx` on polynomial × Gaussian pairs.
fn intertwiner_duality(alpha: OrderParam) -> Result<IdentityReport> {
    let weighted = HalfLineRule::new(alpha.weight_exponent(), DUALITY_LENGTH, DUALITY_PANELS, 16)?;
    let flat = HalfLineRule::new(0.0, DUALITY_LENGTH, DUALITY_PANELS, 16)?;
    let pairs = duality_pairs();
    let mut r = IdentityReport::new("prop2-ii")
        .param("alpha", alpha.value())
        .grid(format!("{} pairs, x in [-{DUALITY_LENGTH}, {DUALITY_LENGTH}]", pairs.len()));
    for (f, g) in pairs {
        let vf = intertwiner_v_poly(alpha, &f);
        let lhs = line_integral(&weighted, |x| Ok(vf.eval(x) * g.eval(x)))?;
        let rhs = line_integral(&flat, |x| Ok(f.eval(x) * dual_intertwiner_v(alpha, &g, x)?))?;
        r.record((lhs - rhs).norm(), lhs.norm().max(rhs.norm()));
    }
    Ok(r)
}

/// `∫ S f · g |x|^{2β+1} dx = ∫ f · ᵗS g |x|^{2α+1} dx`.
fn sonine_duality(pair: SoninePair) -> Result<IdentityReport> {
    let on_beta = HalfLineRule::new(pair.beta.weight_exponent(), DUALITY_LENGTH, DUALITY_PANELS, 16)?;
    let on_alpha = HalfLineRule::new(pair.alpha.weight_exponent(), DUALITY_LENGTH, DUALITY_PANELS, 16)?;
    let pairs = duality_pairs();
    let mut r = pair_report("prop6-i", pair).grid(format!(
        "{} pairs, x in [-{DUALITY_LENGTH}, {DUALITY_LENGTH}]",
        pairs.len()
    ));
    for (f, g) in pairs {
        let sf = sonine_poly(pair, &f);
        let lhs = line_integral(&on_beta, |x| Ok(sf.eval(x) * g.eval(x)))?;
        let rhs = line_integral(&on_alpha, |x| Ok(f.eval(x) * dual_sonine_apply(pair, &g, x)?))?;
        r.record((lhs - rhs).norm(), lhs.norm().max(rhs.norm()));
    }
    Ok(r)
}

fn product_formula(pair: SoninePair) -> Result<IdentityReport> {
    let mut r = pair_report("sonine-product", pair).grid("lambda in {1, 2i}, x in {0.3, 1, 2.5}");
    for lam in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)] {
        for x in [0.3, 1.0, 2.5] {
            let want = dunkl_kernel(pair.beta, lam * x, KernelMode::Auto)?;
            let got = sonine_product(pair, lam, x)?;
            r.record((got - want).norm(), want.norm());
        }
    }
    Ok(r)
}

/// Quadrature of `S(x^n)` against `b_n(α)/b_n(β) x^n` for `n ≤ 20`.
fn monomial_law(pair: SoninePair) -> Result<IdentityReport> {
    let mut r = pair_report("monomial", pair).grid("n <= 20, x in {-1.3, 0.7, 2}");
    for n in 0..=20 {
        let mono = PolyFunction::monomial(n);
        let ratio = b_ratio_product(n, pair.alpha, pair.beta);
        for x in [-1.3, 0.7, 2.0] {
            let want = ratio * f64::powi(x, n as i32);
            let got = sonine_apply(pair, &mono, x)?;
            r.record((got.re - want).abs().max(got.im.abs()), want.abs());
        }
    }
    Ok(r)
}

/// The diagonal route against `V_β ∘ V_α^{-1}` on a degree 20 polynomial.
fn sonine_routes(pair: SoninePair) -> IdentityReport {
    let p = degree_twenty();
    let direct = sonine_poly(pair, &p);
    let composed = sonine_via_intertwiners(pair, &p);
    let scale = direct.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut r = pair_report("sonine-routes", pair).param("degree", 20.0).grid("coefficients");
    r.record(direct.max_rel_diff(&composed) * scale, scale);
    r
}

const DECOMPOSITION_LAMBDA: f64 = 8.0;

/// `F_β g = F_α(ᵗS g)` on the λ-nodes with `|λ| ≤ 8`.
fn decomposition(pair: SoninePair, plans: PlanPair) -> Result<IdentityReport> {
    let inputs = [
        PolyGaussian::gaussian(),
        PolyGaussian::moment(1),
        PolyGaussian::new(PolyFunction::new(vec![1.0, 1.0, 0.5]), 1.0),
    ];
    let mut r = pair_report("decomposition", pair).grid(format!(
        "{}, |lambda| <= {DECOMPOSITION_LAMBDA}",
        plans.alpha.grid_summary()
    ));
    for g in inputs {
        let gb = plans.beta.sample_x(|x| g.eval(x), Smoothness::PolyGaussian);
        let tg = plans.dual_sonine(&gb)?;
        let want = plans.beta.forward(&gb)?;
        let got = plans.alpha.forward(&tg)?;
        compare_spectra(&mut r, &got, &want, plans.alpha.as_ref(), plans.beta.as_ref())?;
    }
    Ok(r)
}

/// Compares two spectra on `|λ| ≤ 8`; `got` lives on `pa`'s λ-rule and is
/// interpolated onto `pb`'s nodes when the two differ.
fn compare_spectra(
    r: &mut IdentityReport,
    got: &GridFunction,
    want: &GridFunction,
    pa: &TransformPlan,
    pb: &TransformPlan,
) -> Result<()> {
    let nodes = &pb.lambda_rule.nodes;
    let same = pa.lambda_rule.nodes == *nodes;
    let scale = want.max_abs();
    for (k, &l) in nodes.iter().enumerate() {
        if l > DECOMPOSITION_LAMBDA {
            break;
        }
        let (gp, gm) = if same {
            (got.pos()[k], got.neg()[k])
        } else {
            (got.eval(l), got.eval(-l))
        };
        r.record((gp - want.pos()[k]).norm(), scale);
        r.record((gm - want.neg()[k]).norm(), scale);
    }
    Ok(())
}

/// `ᵗS(e^{-y²}) = Γ(β+1)/Γ(α+1) e^{-x²}`.
fn dual_sonine_gaussian(pair: SoninePair) -> Result<IdentityReport> {
    let g = PolyGaussian::gaussian();
    let c = gamma_signed(pair.beta.value() + 1.0) / gamma_signed(pair.alpha.value() + 1.0);
    let mut r = pair_report("dual-sonine-gaussian", pair).grid("x in {0, ±0.5, ±1.2, ±2.5}");
    for x in [0.0, 0.5, -0.5, 1.2, -1.2, 2.5, -2.5] {
        let got = dual_sonine_apply(pair, &g, x)?;
        let want = c * (-x * x).exp();
        r.record((got - want).norm(), want);
    }
    Ok(r)
}

fn gaussian_transform(plan: Arc<TransformPlan>) -> Result<IdentityReport> {
    let g0 = gamma_signed(plan.alpha.value() + 1.0);
    let f = plan.sample_x(|x| Complex64::new((-x * x).exp(), 0.0), Smoothness::PolyGaussian);
    let spec = plan.forward(&f)?;
    let want = plan.sample_lambda(|l| Complex64::new(g0 * (-l * l / 4.0).exp(), 0.0), Smoothness::PolyGaussian);
    let mut r = IdentityReport::new("gaussian-transform")
        .param("alpha", plan.alpha.value())
        .grid(format!("{}, |lambda| <= 8", plan.grid_summary()));
    compare_spectra(&mut r, &spec, &want, &plan, &plan)?;
    Ok(r)
}

/// `F_α(Λ_α f) = iλ F_α f` for `f = x e^{-x²}`.
fn derivative_rule(plan: Arc<TransformPlan>) -> Result<IdentityReport> {
    let alpha = plan.alpha;
    let f = PolyGaussian::new(PolyFunction::new(vec![0.5, 1.0]), 1.0);
    let samples = plan.sample_x(|x| f.eval(x), Smoothness::PolyGaussian);
    let images = GridFunction::try_sample(
        plan.x_rule.clone(),
        |x| dunkl_operator(alpha, &f, x),
        Smoothness::PolyGaussian,
    )?;
    let lhs = plan.forward(&images)?;
    let rhs = plan.forward(&samples)?.map(|l, v| v * Complex64::new(0.0, l));
    let mut r = IdentityReport::new("prop3-i")
        .param("alpha", alpha.value())
        .grid(format!("{}, |lambda| <= 8", plan.grid_summary()));
    compare_spectra(&mut r, &lhs, &rhs, &plan, &plan)?;
    Ok(r)
}

/// At `α = 0` both sides of Plancherel for `e^{-x²}` equal `1/2`.
fn plancherel_closed_form(plan: Arc<TransformPlan>) -> Result<IdentityReport> {
    let f = plan.sample_x(|x| Complex64::new((-x * x).exp(), 0.0), Smoothness::PolyGaussian);
    let lhs = f.norm_sq();
    let rhs = crate::special::c_const(plan.alpha) * plan.forward(&f)?.norm_sq();
    let mut r = IdentityReport::new("plancherel-closed-form")
        .param("alpha", plan.alpha.value())
        .grid(plan.grid_summary());
    r.record((lhs - 0.5).abs(), 0.5);
    r.record((rhs - 0.5).abs(), 0.5);
    Ok(r)
}

/// Residue of `λ ↦ ⟨|x|^λ, e^{-x²}⟩` at a pole, extracted from values at
/// `pole ± ε`; the symmetric combination cancels the linear term.
fn residue(pole: f64, want: f64) -> IdentityReport {
    const EPS: f64 = 1e-4;
    let g = PolyGaussian::gaussian();
    let order = (-pole).ceil() as usize + 1;
    let start = Instant::now();
    let mut r = IdentityReport::new("residue")
        .param("lambda", pole)
        .grid(format!("pole {pole} +- {EPS}"));
    let value = |l: f64| homogeneous_pairing(l, &g, order).map(|p| p.value);
    match (value(pole + EPS), value(pole - EPS), homogeneous_pairing(pole, &g, order)) {
        (Ok(up), Ok(down), Ok(at)) => {
            let numeric = 0.5 * EPS * (up - down);
            r.record((numeric - want).abs(), want.abs());
            let flagged = at.residue_estimate.filter(|_| at.pole_flag).unwrap_or(f64::NAN);
            r.record((flagged - want).abs(), want.abs());
        }
        _ => r.record(f64::INFINITY, 1.0),
    }
    r.timed(start)
}

const PROP7_CUTOFF: f64 = 16.0;

/// Kernel route against the spectral route for `(-Δ_α)^λ e^{-x²}`.
fn frac_power_routes(plan: Arc<TransformPlan>, lam: f64) -> Result<IdentityReport> {
    let alpha = plan.alpha;
    let f = PolyGaussian::gaussian();
    let m = MultiplierSpec::new(2.0 * lam, 1.0)?;
    let xs = [0.0, 0.5, 1.0, 2.0];
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for &x in &xs {
        lhs.push(frac_power_kernel(alpha, lam, &f, x)?);
        rhs.push(multiplier_point(&plan, &f, m, x)?);
    }
    let mut r = IdentityReport::new("frac-power")
        .param("alpha", alpha.value())
        .param("lambda", lam)
        .grid(format!("x in {{0, 0.5, 1, 2}}; {}", plan.grid_summary()));
    for (a, b) in lhs.iter().zip(&rhs) {
        r.record((a - b).norm(), b.norm());
    }
    Ok(r)
}
