//! Fractional powers `(-Δ_α)^λ` on the absolutely convergent strip
//! `-(α+1) < λ < 0`, computed as a singular double integral in `x`-space.

use num_complex::Complex64;

use super::{forward_point, MultiplierSpec, TransformPlan};
use crate::error::{DunklError, Result};
use crate::func::{Callable, FnFunction};
use crate::kernel::kernel_imag;
use crate::operators::translation;
use crate::quadrature::{gauss_legendre, jacobi_rule, ln_beta, ComplexSum, HalfLineRule, KahanSum, QuadRule};
use crate::special::{c_const, gamma_signed, rgamma, OrderParam};

const ORDER: usize = 16;
/// Dyadic refinement levels toward the singular point `|y| = |x|`.
const LEVELS: usize = 40;
const OUTER_PANEL: f64 = 0.5;
const OUTER_MAX_PANELS: usize = 4000;

/// `b_α(λ) = 2^{2λ} Γ(α+λ+1) / (√π Γ(α+1/2) Γ(-λ))`.
pub fn frac_power_constant(alpha: OrderParam, lam: f64) -> f64 {
    let a = alpha.value();
    2f64.powf(2.0 * lam) * gamma_signed(a + lam + 1.0) * rgamma(a + 0.5) * rgamma(-lam) / std::f64::consts::PI.sqrt()
}

/// Constant of the convolution form, `2^{2λ} Γ(α+λ+1) / (Γ(α+1) Γ(-λ))`.
/// Times `a_α` it equals [`frac_power_constant`].
pub fn riesz_kernel_constant(alpha: OrderParam, lam: f64) -> f64 {
    let a = alpha.value();
    2f64.powf(2.0 * lam) * gamma_signed(a + lam + 1.0) * rgamma(a + 1.0) * rgamma(-lam)
}

/// `τ_x(|·|^{-2μ})(-y)` through the generic translation; valid away from `|x| = |y|`.
pub fn translated_power(alpha: OrderParam, mu: f64, x: f64, y: f64) -> Result<Complex64> {
    let g = FnFunction::real(move |t| t.abs().powf(-2.0 * mu));
    translation(alpha, &g, x, -y)
}

fn check_range(alpha: OrderParam, lam: f64) -> Result<()> {
    let low = -(alpha.value() + 1.0);
    if lam > low && lam < 0.0 {
        Ok(())
    } else {
        Err(DunklError::ExponentOutOfRange { lambda: lam, low })
    }
}

/// `(-Δ_α)^λ f(x) = b_α(λ) ∫ [∫_0^π (1+sgn(xy) cos θ) (x,y)_θ^{-2(λ+α+1)} sin^{2α}θ dθ] f(y) |y|^{2α+1} dy`.
pub fn frac_power_kernel(alpha: OrderParam, lam: f64, f: &dyn Callable, x: f64) -> Result<Complex64> {
    check_range(alpha, lam)?;
    let a = alpha.value();
    let mu = lam + a + 1.0;
    let p = alpha.weight_exponent();
    let gl = gauss_legendre(ORDER);
    let ax = x.abs();
    let mut acc = ComplexSum::default();

    // both signs of y share the radial nodes u = |y|
    let term = |u: f64| -> Complex64 {
        let kp = inner_kernel(a, mu, x, u);
        let km = inner_kernel(a, mu, x, -u);
        f.eval(u) * kp + f.eval(-u) * km
    };

    let lo = if ax == 0.0 {
        // K(0, y) ∝ |y|^{-2μ}: fold it into the head weight
        let head = jacobi_rule(0.0, p - 2.0 * mu, ORDER)?;
        let k0 = 2f64.powf(2.0 * a) * ln_beta(a + 0.5, a + 0.5).exp();
        let h = OUTER_PANEL;
        acc.add(head.integrate_complex(|s| (f.eval(h * s) + f.eval(-h * s)) * k0) * h.powf(p - 2.0 * mu + 1.0));
        h
    } else {
        // [0, |x|/2] with the weight u^{2α+1}, then dyadic panels up to |x|
        let head = jacobi_rule(0.0, p, ORDER)?;
        let h = 0.5 * ax;
        acc.add(head.integrate_complex(|s| term(h * s)) * h.powf(p + 1.0));
        let mut left = h;
        for k in 1..=LEVELS {
            let right = ax - ax * 0.5f64.powi(k as i32 + 1);
            acc.add(panel(&gl, left, right, |u| term(u) * u.powf(p)));
            left = right;
        }
        // dyadic panels leaving |x|, then regular panels
        let d = ax.min(OUTER_PANEL);
        let mut right = ax + d * 0.5f64.powi(LEVELS as i32);
        for k in (0..LEVELS).rev() {
            let next = ax + d * 0.5f64.powi(k as i32);
            acc.add(panel(&gl, right, next, |u| term(u) * u.powf(p)));
            right = next;
        }
        right
    };

    let support = f.support().unwrap_or(f64::INFINITY);
    let mut left = lo;
    let mut quiet = 0;
    for _ in 0..OUTER_MAX_PANELS {
        if left >= support {
            break;
        }
        let right = (left + OUTER_PANEL).min(support);
        let part = panel(&gl, left, right, |u| term(u) * u.powf(p));
        acc.add(part);
        if part.norm() <= 1e-17 * acc.value().norm() {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        left = right;
    }
    if quiet < 2 && left < support {
        return Err(DunklError::TailNotConverged(OUTER_MAX_PANELS));
    }
    Ok(acc.value() * frac_power_constant(alpha, lam))
}

/// `∫_0^π (1 + sgn(xy) cos θ) (x,y)_θ^{-2μ} sin^{2α}θ dθ` with `s = (1 - cos θ)/2`.
fn inner_kernel(a: f64, mu: f64, x: f64, y: f64) -> f64 {
    let big_a = (x.abs() - y.abs()).powi(2);
    let big_b = 4.0 * (x * y).abs();
    let e = a - 0.5;
    let scale = 2f64.powf(2.0 * a);
    if big_b == 0.0 {
        return scale * ln_beta(a + 0.5, a + 0.5).exp() * big_a.powf(-mu);
    }
    // 1 + cos θ = 2(1-s), 1 - cos θ = 2s
    let (sa, sb) = if x * y > 0.0 { (e, e + 1.0) } else { (e + 1.0, e) };
    2.0 * scale * power_beta_integral(sa, sb, big_a, big_b, mu)
}

/// `∫_0^1 s^p (1-s)^q (A + B s)^{-μ} ds` with the peak near `s = -A/B` resolved
/// by dyadic panels.
fn power_beta_integral(p: f64, q: f64, a: f64, b: f64, mu: f64) -> f64 {
    let eps = a / b;
    let g = |s: f64| (a + b * s).powf(-mu);
    if eps >= 0.5 {
        let rule = jacobi_rule(q, p, 48).expect("exponents exceed -1");
        return rule.integrate(g);
    }
    let gl = gauss_legendre(ORDER);
    let head = jacobi_rule(0.0, p, ORDER).expect("exponent exceeds -1");
    let tail = jacobi_rule(q, 0.0, ORDER).expect("exponent exceeds -1");
    let mut acc = KahanSum::default();
    let first = eps.max(1e-300);
    acc.add(head.integrate(|t| {
        let s = first * t;
        (1.0 - s).powf(q) * g(s)
    }) * first.powf(p + 1.0));
    let mut left = first;
    while left < 0.5 {
        let right = (2.0 * left).min(0.5);
        let w = right - left;
        acc.add(gl.integrate(|t| {
            let s = left + w * t;
            s.powf(p) * (1.0 - s).powf(q) * g(s)
        }) * w);
        left = right;
    }
    acc.add(tail.integrate(|t| {
        let s = 0.5 + 0.5 * t;
        s.powf(p) * g(s)
    }) * 0.5f64.powf(q + 1.0));
    acc.value()
}

fn panel(gl: &QuadRule, lo: f64, hi: f64, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let w = hi - lo;
    let mut acc = ComplexSum::default();
    for (s, ws) in gl.nodes.iter().zip(&gl.weights) {
        acc.add(f(lo + w * s) * *ws);
    }
    acc.value() * w
}

/// `F_α^{-1}(m(ξ) F_α f)(x)` at one point, with the spectral integral taken on a
/// rule whose weight is `|ξ|^{2α+1+exponent}`, so negative exponents are exact
/// at the origin. `F_α f` is computed on the plan's x-rule.
pub fn multiplier_point(plan: &TransformPlan, f: &dyn Callable, m: MultiplierSpec, x: f64) -> Result<Complex64> {
    let alpha = plan.alpha;
    let exp = alpha.weight_exponent() + m.exponent;
    let lr = &plan.lambda_rule;
    let rule = HalfLineRule::new(exp, lr.length, lr.panels.len(), lr.panels[0].end - lr.panels[0].start)?;
    let mut even = ComplexSum::default();
    let mut odd = ComplexSum::default();
    for (l, v) in rule.nodes.iter().zip(&rule.weights) {
        let fp = forward_point(alpha, &plan.x_rule, f, *l);
        let fm = forward_point(alpha, &plan.x_rule, f, -*l);
        let (j, k) = kernel_imag(alpha, l * x);
        even.add((fp + fm) * (0.5 * j * v));
        odd.add((fp - fm) * (0.5 * k * v));
    }
    let c = 2.0 * c_const(alpha) * m.scale;
    Ok((even.value() + odd.value() * Complex64::new(0.0, 1.0)) * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::a_const;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    #[test]
    fn constants_agree() {
        for &a in &[0.0, 0.5, 1.5] {
            for &l in &[-0.3, -0.5, -0.9] {
                let alpha = op(a);
                let lhs = riesz_kernel_constant(alpha, l) * a_const(alpha);
                assert!((lhs - frac_power_constant(alpha, l)).abs() < 1e-14 * lhs.abs());
            }
        }
    }

    #[test]
    fn inner_kernel_matches_translation() {
        let alpha = op(0.5);
        let mu = 1.2;
        for &(x, y) in &[(1.0, 2.5), (1.0, -2.5), (-0.7, 0.2), (0.3, 0.0)] {
            let k = inner_kernel(alpha.value(), mu, x, y);
            let t = translated_power(alpha, mu, x, y).unwrap().re / a_const(alpha);
            assert!((k - t).abs() < 1e-10 * k.abs(), "({x},{y}): {k} vs {t}");
        }
    }

    #[test]
    fn beta_integral_closed_form() {
        // A = 0: ∫ s^{p-μ}(1-s)^q ds / B^μ
        let (p, q, mu) = (0.5, -0.3, 0.6);
        let want = ln_beta(p - mu + 1.0, q + 1.0).exp();
        let got = power_beta_integral(p, q, 1e-200, 1.0, mu);
        assert!((got - want).abs() < 1e-9 * want);
        // B small: ≈ A^{-μ} B(p+1, q+1)
        let got = power_beta_integral(p, q, 2.0, 1e-12, mu);
        let want = 2f64.powf(-mu) * ln_beta(p + 1.0, q + 1.0).exp();
        assert!((got - want).abs() < 1e-12 * want);
    }

    #[test]
    fn range_is_enforced() {
        let g = crate::func::PolyGaussian::gaussian();
        assert!(matches!(
            frac_power_kernel(op(0.5), 0.2, &g, 1.0),
            Err(DunklError::ExponentOutOfRange { .. })
        ));
        assert!(frac_power_kernel(op(0.5), -1.6, &g, 1.0).is_err());
    }
}
