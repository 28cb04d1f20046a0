//! The Dunkl operator, the intertwiner `V_α`, its inverse and its dual.
//!
//! Integrals over `[-1, 1]` with weights `(1-t²)^g (1+t) |t|^p` are split by
//! parity, so each piece becomes a Jacobi-weight integral on `[0, 1]`. For
//! moderate `|x|` the substitution `s = t²` is used; for large `|x|` the
//! integrand oscillates on the scale `1/|x|` and a composite rule in `t` with
//! Jacobi end panels takes over.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::func::{fornberg_weights, Callable, PolyFunction};
use crate::grid::{GridFunction, Smoothness};
use crate::quadrature::{gauss_legendre, jacobi_rule, ComplexSum, DEFAULT_RULE_SIZE};
use crate::special::{a_const, d_const, intertwiner_eigenvalue, monomial_eigenvalue, OrderParam};

/// Beyond this `|x|` the parity integrals switch to panels in `t`.
const T_FORM_THRESHOLD: f64 = 2.0;
/// Width of a `t`-panel measured in `|x| t`.
const T_PANEL_SPAN: f64 = 0.5;
const PANEL_ORDER: usize = 16;
/// Panel width of the dual integrals in `u`.
const DUAL_PANEL: f64 = 0.5;
const DUAL_MAX_PANELS: usize = 20_000;
const DUAL_QUIET: f64 = 1e-17;
/// Inverse-intertwiner stencil size and relative step.
const STENCIL: usize = 11;
const STENCIL_STEP: f64 = 0.05;

/// `Λ_α` on a polynomial, exactly.
pub fn dunkl_operator_poly(alpha: OrderParam, p: &PolyFunction) -> PolyFunction {
    if p.coeffs.len() <= 1 {
        return PolyFunction::new(vec![0.0]);
    }
    PolyFunction::new(
        (1..p.coeffs.len())
            .map(|n| monomial_eigenvalue(n, alpha) * p.coeffs[n])
            .collect(),
    )
}

/// `Λ_α f(x) = f'(x) + (2α+1) f_o(x)/x`.
pub fn dunkl_operator(alpha: OrderParam, f: &dyn Callable, x: f64) -> Result<Complex64> {
    let df = f.derivative(x).ok_or(DunklError::MissingDerivative(x))?;
    Ok(df + f.odd_quotient(x) * alpha.weight_exponent())
}

/// `Λ_α f` as a function; it has no derivative of its own.
#[derive(Clone)]
pub struct DunklImage<F> {
    pub alpha: OrderParam,
    pub f: F,
}

impl<F: Callable> Callable for DunklImage<F> {
    fn eval(&self, x: f64) -> Complex64 {
        dunkl_operator(self.alpha, &self.f, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn support(&self) -> Option<f64> {
        self.f.support()
    }
}

/// Samples `Λ_α f` on the grid of `f` using the interpolant's derivative.
pub fn dunkl_operator_grid(alpha: OrderParam, f: &GridFunction) -> GridFunction {
    GridFunction::sample(
        f.rule().clone(),
        |x| dunkl_operator(alpha, f, x).expect("grid functions carry a derivative"),
        f.smoothness,
    )
}

/// `V_α` on a polynomial: `x^n ↦ (n!/b_n(α)) x^n`.
pub fn intertwiner_v_poly(alpha: OrderParam, p: &PolyFunction) -> PolyFunction {
    p.map_diagonal(|n| intertwiner_eigenvalue(n, alpha))
}

/// `V_α^{-1}` on a polynomial: `x^n ↦ (b_n(α)/n!) x^n`.
pub fn intertwiner_v_inverse_poly(alpha: OrderParam, p: &PolyFunction) -> PolyFunction {
    p.map_diagonal(|n| 1.0 / intertwiner_eigenvalue(n, alpha))
}

/// `V_α f(x) = a_α ∫_{-1}^1 f(xt) (1-t²)^{α-1/2} (1+t) dt`.
pub fn intertwiner_v(alpha: OrderParam, f: &dyn Callable, x: f64) -> Result<Complex64> {
    Ok(parity_integral(f, x, 0.0, alpha.value() - 0.5)? * a_const(alpha))
}

/// `∫_{-1}^1 f(xt) (1-t²)^g (1+t) |t|^p dt` for `p >= 0`, `g > -1`.
pub(crate) fn parity_integral(f: &dyn Callable, x: f64, p: f64, g: f64) -> Result<Complex64> {
    if x.abs() <= T_FORM_THRESHOLD {
        parity_integral_s(f, x, p, g)
    } else {
        parity_integral_t(f, x, p, g)
    }
}

/// `∫ f_e(x√s) s^{(p-1)/2}(1-s)^g ds + x ∫ q(x√s) s^{(p+1)/2}(1-s)^g ds`, `q = f_o/z`.
fn parity_integral_s(f: &dyn Callable, x: f64, p: f64, g: f64) -> Result<Complex64> {
    let even = jacobi_rule(g, 0.5 * (p - 1.0), DEFAULT_RULE_SIZE)?;
    let mut total = even.integrate_complex(|s| f.even(x * s.sqrt()));
    if x != 0.0 {
        let odd = jacobi_rule(g, 0.5 * (p + 1.0), DEFAULT_RULE_SIZE)?;
        total += odd.integrate_complex(|s| f.odd_quotient(x * s.sqrt())) * x;
    }
    Ok(total)
}

/// `2 ∫_0^1 [f_e(|x|t) + sgn(x) t f_o(|x|t)] t^p (1-t²)^g dt` on panels in `t`.
fn parity_integral_t(f: &dyn Callable, x: f64, p: f64, g: f64) -> Result<Complex64> {
    let ax = x.abs();
    let sign = x.signum();
    let h = |t: f64| f.even(ax * t) + f.odd(ax * t) * (sign * t);
    let m = (ax / T_PANEL_SPAN).ceil() as usize;
    let w = 1.0 / m as f64;
    let gl = gauss_legendre(PANEL_ORDER);
    let head = jacobi_rule(0.0, p, PANEL_ORDER)?;
    let tail = jacobi_rule(g, 0.0, PANEL_ORDER)?;

    let mut acc = ComplexSum::default();
    // [0, w]: weight t^p = w^p s^p
    acc.add(head.integrate_complex(|s| {
        let t = w * s;
        h(t) * (1.0 - t * t).powf(g)
    }) * w.powf(p + 1.0));
    for k in 1..m - 1 {
        let lo = k as f64 * w;
        acc.add(gl.integrate_complex(|s| {
            let t = lo + w * s;
            h(t) * t.powf(p) * (1.0 - t * t).powf(g)
        }) * w);
    }
    // [1-w, 1]: weight (1-t)^g = w^g (1-s)^g
    let lo = 1.0 - w;
    acc.add(tail.integrate_complex(|s| {
        let t = lo + w * s;
        h(t) * t.powf(p) * (1.0 + t).powf(g)
    }) * w.powf(g + 1.0));
    Ok(acc.value() * 2.0)
}

/// `ᵗV_α f(x) = a_α ∫_{|y|>=|x|} sgn(y) (y²-x²)^{α-1/2} (x+y) f(y) dy`.
pub fn dual_intertwiner_v(alpha: OrderParam, f: &dyn Callable, x: f64) -> Result<Complex64> {
    Ok(dual_integral(f, x, alpha.value() - 0.5)? * a_const(alpha))
}

/// `∫_{|x|}^∞ (u²-x²)^g · 2[u f_e(u) + x f_o(u)] du`, the two branches
/// `y > |x|` and `y < -|x|` folded together.
///
/// Panels of width 1/2 march outward from `|x|` until two consecutive panels are
/// negligible or the support of `f` is passed. The first panel carries the
/// endpoint singularity in a Jacobi rule; when `|x|` is small compared with the
/// panel width, panels grow geometrically from `|x|` first.
pub(crate) fn dual_integral(f: &dyn Callable, x: f64, g: f64) -> Result<Complex64> {
    let ax = x.abs();
    let support = f.support().unwrap_or(f64::INFINITY);
    if ax >= support {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let integrand = |u: f64| (f.even(u) * u + f.odd(u) * x) * 2.0;
    let gl = gauss_legendre(PANEL_ORDER);
    let mut acc = ComplexSum::default();

    let mut lo;
    if ax == 0.0 {
        // (u²)^g · 2u f_e(u) with the weight u^{2g+1} exact
        let head = jacobi_rule(0.0, 2.0 * g + 1.0, PANEL_ORDER)?;
        let h = DUAL_PANEL.min(support);
        acc.add(head.integrate_complex(|s| f.even(h * s) * 2.0) * h.powf(2.0 * g + 2.0));
        lo = h;
    } else {
        let head = jacobi_rule(0.0, g, PANEL_ORDER)?;
        let first = if ax >= DUAL_PANEL { DUAL_PANEL } else { ax };
        let hi = (ax + first).min(support);
        let width = hi - ax;
        acc.add(
            head.integrate_complex(|s| {
                let u = ax + width * s;
                integrand(u) * (u + ax).powf(g)
            }) * width.powf(g + 1.0),
        );
        lo = hi;
        // geometric panels up to the regular width
        while lo < DUAL_PANEL && lo < support {
            let hi = (2.0 * lo).min(DUAL_PANEL).min(support);
            acc.add(panel(&gl, lo, hi, |u| integrand(u) * (u * u - ax * ax).powf(g)));
            lo = hi;
        }
    }

    let mut quiet = 0;
    for _ in 0..DUAL_MAX_PANELS {
        if lo >= support {
            return Ok(acc.value());
        }
        let hi = (lo + DUAL_PANEL).min(support);
        let mut size = 0.0;
        let part = panel(&gl, lo, hi, |u| {
            let v = integrand(u) * (u * u - ax * ax).powf(g);
            size += v.norm();
            v
        });
        acc.add(part);
        if size * (hi - lo) <= DUAL_QUIET * acc.value().norm() {
            quiet += 1;
            if quiet == 2 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
        lo = hi;
    }
    Err(DunklError::TailNotConverged(DUAL_MAX_PANELS))
}

fn panel(
    gl: &crate::quadrature::QuadRule,
    lo: f64,
    hi: f64,
    mut f: impl FnMut(f64) -> Complex64,
) -> Complex64 {
    let w = hi - lo;
    let mut acc = ComplexSum::default();
    for (s, ws) in gl.nodes.iter().zip(&gl.weights) {
        acc.add(f(lo + w * s) * *ws);
    }
    acc.value() * w
}

/// `V_α^{-1} f(x)` for a smooth callable.
///
/// With `u = x²`, `r = [α+1/2]` and `c = r-α-1/2` the inner integrals are
/// `P(u) = ½∫ f_e(√(us)) s^α (1-s)^c ds` and `Q(u) = ½∫ q(√(us)) s^{α+1} (1-s)^c ds`.
/// The outer differential operators expand by Leibniz into
/// `Σ_j C(r+1,j) (r+1/2)_j↓ u^{r+1-j} P^{(r+1-j)}(u)` (and the same with `r+3/2`
/// for `Q`), whose derivatives come from an 11-point stencil in `u`.
pub fn intertwiner_v_inverse(alpha: OrderParam, f: &dyn Callable, x: f64) -> Result<Complex64> {
    let (r, d) = d_const(alpha)?;
    let a = alpha.value();
    let c = r as f64 - a - 0.5;
    let ev = jacobi_rule(c, a, DEFAULT_RULE_SIZE)?;
    let od = jacobi_rule(c, a + 1.0, DEFAULT_RULE_SIZE)?;
    let p_fn = |u: f64| ev.integrate_complex(|s| f.even((u * s).sqrt())) * 0.5;
    let q_fn = |u: f64| od.integrate_complex(|s| f.odd_quotient((u * s).sqrt())) * 0.5;

    let u = x * x;
    let order = r as usize + 1;
    let h = STENCIL_STEP * (1.0 + u.sqrt());
    let half = (STENCIL / 2) as f64;
    let nodes: Vec<f64> = if u >= half * h {
        (0..STENCIL).map(|k| u + h * (k as f64 - half)).collect()
    } else {
        (0..STENCIL).map(|k| h * k as f64).collect()
    };
    let weights = fornberg_weights(u, &nodes, order);
    let pv: Vec<Complex64> = nodes.iter().map(|&v| p_fn(v)).collect();
    let qv: Vec<Complex64> = nodes.iter().map(|&v| q_fn(v)).collect();
    let deriv = |vals: &[Complex64], k: usize| -> Complex64 {
        weights[k].iter().zip(vals).map(|(w, v)| v * *w).sum()
    };

    let combine = |vals: &[Complex64], shift: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        let mut falling = 1.0;
        for j in 0..=order {
            let k = order - j;
            acc += deriv(vals, k) * (binom * falling * u.powi(k as i32));
            binom *= (order - j) as f64 / (j + 1) as f64;
            falling *= shift - j as f64;
        }
        acc
    };
    let scale = d * 2f64.powi(order as i32);
    let even = combine(&pv, r as f64 + 0.5);
    let odd = combine(&qv, r as f64 + 1.5) * x;
    Ok((even + odd) * scale)
}

/// `V_α^{-1}` applied at every node of a grid function.
pub fn intertwiner_v_inverse_grid(alpha: OrderParam, f: &GridFunction) -> Result<GridFunction> {
    if f.smoothness == Smoothness::Generic {
        return Err(DunklError::CoarseGrid(
            "the inverse intertwiner differentiates numerically and needs a smooth input".into(),
        ));
    }
    let width = f.rule().panel_width();
    if width > 1.0 {
        return Err(DunklError::CoarseGrid(format!(
            "panel width {width} exceeds 1; refine the grid before differentiating"
        )));
    }
    d_const(alpha)?;
    GridFunction::try_sample(f.rule().clone(), |x| intertwiner_v_inverse(alpha, f, x), f.smoothness)
}

/// Number of `θ` nodes for translating at `(x, y)`: the integrand of a function
/// varying on unit scale oscillates about `|x|+|y|` times.
fn translation_nodes(x: f64, y: f64) -> usize {
    let span = (x.abs() + y.abs()).ceil() as usize;
    (DEFAULT_RULE_SIZE + 16 * span).min(512)
}

/// `τ_x f(y) = a_α ∫_0^π [f_e(z) + (x+y) f_o(z)/z] (1 - sgn(xy) cos θ) sin^{2α}θ dθ`
/// with `z² = x² + y² - 2|xy| cos θ`. At `(0, 0)` the value `f(0)` is returned.
pub fn translation(alpha: OrderParam, f: &dyn Callable, x: f64, y: f64) -> Result<Complex64> {
    if x == 0.0 && y == 0.0 {
        return Ok(f.eval(0.0));
    }
    let rule = crate::quadrature::theta_rule(alpha, translation_nodes(x, y))?;
    let sigma = (x * y).signum() * if x * y == 0.0 { 0.0 } else { 1.0 };
    let xy = (x * y).abs();
    let base = (x.abs() - y.abs()).powi(2);
    let total = rule.integrate_complex(|theta| {
        let c = theta.cos();
        // z² = (|x|-|y|)² + 2|xy|(1 - cos θ), kept free of cancellation
        let s = (0.5 * theta).sin();
        let z = (base + 4.0 * xy * s * s).sqrt();
        (f.even(z) + f.odd_quotient(z) * (x + y)) * (1.0 - sigma * c)
    });
    Ok(total * a_const(alpha))
}

/// `f ∗_α g(x) = ∫ τ_x f(-y) g(y) |y|^{2α+1} dy` on the nodes `±y_k` of `y_rule`.
pub fn convolution(
    alpha: OrderParam,
    f: &dyn Callable,
    g: &dyn Callable,
    x: f64,
    y_rule: &crate::quadrature::HalfLineRule,
) -> Result<Complex64> {
    if (y_rule.weight_exp - alpha.weight_exponent()).abs() > 1e-14 {
        return Err(DunklError::GridMismatch(format!(
            "convolution needs the weight |y|^{}, rule carries |y|^{}",
            alpha.weight_exponent(),
            y_rule.weight_exp
        )));
    }
    let mut acc = ComplexSum::default();
    for (y, w) in y_rule.nodes.iter().zip(&y_rule.weights) {
        let plus = translation(alpha, f, x, -y)? * g.eval(*y);
        let minus = translation(alpha, f, x, *y)? * g.eval(-y);
        acc.add((plus + minus) * *w);
    }
    Ok(acc.value())
}

/// A callable evaluated through a fallible operator at each point.
pub struct OperatorImage<F> {
    op: F,
    support: Option<f64>,
}

impl<F> OperatorImage<F>
where
    F: Fn(f64) -> Result<Complex64> + Send + Sync,
{
    pub fn new(op: F) -> Self {
        Self { op, support: None }
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support = Some(radius);
        self
    }
}

impl<F> Callable for OperatorImage<F>
where
    F: Fn(f64) -> Result<Complex64> + Send + Sync,
{
    fn eval(&self, x: f64) -> Complex64 {
        (self.op)(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn support(&self) -> Option<f64> {
        self.support
    }
}

/// Shared handle used when operators are chained on grids.
pub type SharedCallable = Arc<dyn Callable>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::PolyGaussian;
    use crate::kernel::{dunkl_kernel, KernelMode};
    use crate::special::gamma_signed;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    #[test]
    fn dunkl_operator_on_monomials() {
        let a = op(0.7);
        assert_eq!(dunkl_operator_poly(a, &PolyFunction::new(vec![1.0])).coeffs, vec![0.0]);
        let lx = dunkl_operator_poly(a, &PolyFunction::monomial(1));
        assert!((lx.coeffs[0] - 2.4 - 1.0).abs() < 1e-15);
        let p = PolyFunction::new(vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0]);
        let l = dunkl_operator_poly(a, &p);
        assert_eq!(l.coeffs, vec![0.0, 0.0, 0.0, 4.0, 5.0 + 2.4]);
        // the callable route agrees
        for &x in &[-1.3, 0.0, 0.4, 2.0] {
            let got = dunkl_operator(a, &p, x).unwrap();
            assert!((got.re - l.eval_real(x)).abs() < 1e-12);
        }
        let bare = crate::func::FnFunction::real(|x| x);
        assert!(matches!(dunkl_operator(a, &bare, 1.0), Err(DunklError::MissingDerivative(_))));
    }

    #[test]
    fn intertwiner_quadrature_matches_diagonal_action() {
        for &a in &[-0.3, 0.0, 0.7, 2.2] {
            let alpha = op(a);
            let p = PolyFunction::new((0..12).map(|k| 1.0 / (k as f64 + 1.0)).collect());
            let exact = intertwiner_v_poly(alpha, &p);
            for &x in &[-3.7, -1.0, 0.0, 0.5, 1.9, 6.0] {
                let got = intertwiner_v(alpha, &p, x).unwrap();
                let want = exact.eval_real(x);
                assert!((got.re - want).abs() < 1e-12 * want.abs().max(1.0), "α={a} x={x}: {got} vs {want}");
            }
        }
        let v2 = intertwiner_v_poly(op(0.0), &PolyFunction::monomial(2));
        assert!((v2.coeffs[2] - 0.5).abs() < 1e-14);
        let back = intertwiner_v_inverse_poly(op(1.3), &intertwiner_v_poly(op(1.3), &PolyFunction::monomial(7)));
        assert!((back.coeffs[7] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn intertwiner_of_exponential_is_kernel() {
        for &a in &[-0.25, 0.5, 1.5] {
            let alpha = op(a);
            for &lam in &[1.0, -0.6] {
                let e = crate::func::FnFunction::new(move |t| Complex64::new((lam * t).exp(), 0.0))
                    .with_derivative(move |t| Complex64::new(lam * (lam * t).exp(), 0.0));
                for &x in &[-4.0, -0.5, 0.3, 2.5, 7.0] {
                    let got = intertwiner_v(alpha, &e, x).unwrap();
                    let want = dunkl_kernel(alpha, Complex64::new(lam * x, 0.0), KernelMode::Series).unwrap();
                    assert!((got - want).norm() < 1e-12 * want.norm(), "α={a} λ={lam} x={x}");
                }
            }
        }
    }

    #[test]
    fn inverse_intertwiner_on_monomials() {
        for &a in &[0.0, 0.3, 1.2, 2.7] {
            let alpha = op(a);
            for n in 0..7 {
                let m = PolyFunction::monomial(n);
                let want = intertwiner_v_inverse_poly(alpha, &m);
                for &x in &[-1.7, -0.2, 0.0, 0.6, 2.3] {
                    let got = intertwiner_v_inverse(alpha, &m, x).unwrap();
                    let w = want.eval_real(x);
                    assert!((got.re - w).abs() < 1e-7 * w.abs().max(1.0), "α={a} n={n} x={x}: {} vs {w}", got.re);
                }
            }
        }
        assert!(matches!(
            intertwiner_v_inverse(op(0.5), &PolyFunction::monomial(1), 1.0),
            Err(DunklError::HalfIntegerOrder(_))
        ));
    }

    #[test]
    fn dual_intertwiner_of_gaussian() {
        // ᵗV_α(e^{-y²}) = Γ(α+1)/√π · e^{-x²}
        for &a in &[-0.25, 0.0, 0.5, 1.5] {
            let alpha = op(a);
            let c = gamma_signed(a + 1.0) / std::f64::consts::PI.sqrt();
            for &x in &[0.0, 1e-3, 0.2, -0.7, 1.5, 3.0] {
                let got = dual_intertwiner_v(alpha, &PolyGaussian::gaussian(), x).unwrap();
                let want = c * (-x * x).exp();
                assert!((got.re - want).abs() < 1e-12 * c, "α={a} x={x}: {} vs {want}", got.re);
                assert!(got.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn translation_basics() {
        let alpha = op(0.5);
        let g = PolyGaussian::new(PolyFunction::new(vec![1.0, 0.5]), 1.0);
        for &y in &[-1.2, 0.3, 2.0] {
            let got = translation(alpha, &g, 0.0, y).unwrap();
            assert!((got - g.eval(y)).norm() < 1e-13);
        }
        assert_eq!(translation(alpha, &g, 0.0, 0.0).unwrap(), g.eval(0.0));
    }
}
