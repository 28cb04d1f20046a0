//! The Sonine transform `S_{α,β}` and its dual.

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::func::{fd_derivative, Callable, PolyFunction};
use crate::kernel::KernelFunction;
use crate::operators::{
    dual_integral, dunkl_operator, dunkl_operator_poly, intertwiner_v_inverse_poly, intertwiner_v_poly,
    parity_integral, OperatorImage,
};
use crate::quadrature::ln_beta;
use crate::report::IdentityReport;
use crate::special::{a_sonine, b_ratio_product, OrderParam};

/// Step of the finite differences used when a transformed function is differentiated.
const FD_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SoninePair {
    pub alpha: OrderParam,
    pub beta: OrderParam,
}

impl SoninePair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let a = OrderParam::new(alpha)?;
        let b = OrderParam::new(beta)?;
        Self::from_params(a, b)
    }

    pub fn from_params(alpha: OrderParam, beta: OrderParam) -> Result<Self> {
        if beta.value() <= alpha.value() {
            return Err(DunklError::InvalidPair {
                alpha: alpha.value(),
                beta: beta.value(),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// `β - α - 1`, the exponent of `(1-t²)`.
    pub fn gap_exponent(&self) -> f64 {
        self.beta.value() - self.alpha.value() - 1.0
    }

    pub fn normalisation(&self) -> f64 {
        a_sonine(self.alpha, self.beta).expect("pair invariant guarantees beta > alpha")
    }
}

/// `S_{α,β} f(x) = a_{α,β} ∫_{-1}^1 f(xt) (1-t²)^{β-α-1} (1+t) |t|^{2α+1} dt`.
pub fn sonine_apply(pair: SoninePair, f: &dyn Callable, x: f64) -> Result<Complex64> {
    Ok(parity_integral(f, x, pair.alpha.weight_exponent(), pair.gap_exponent())? * pair.normalisation())
}

/// `ᵗS_{α,β} f(x) = a_{α,β} ∫_{|y|>=|x|} sgn(y) (y²-x²)^{β-α-1} (x+y) f(y) dy`.
pub fn dual_sonine_apply(pair: SoninePair, f: &dyn Callable, x: f64) -> Result<Complex64> {
    Ok(dual_integral(f, x, pair.gap_exponent())? * pair.normalisation())
}

/// Exact action on polynomials: `x^n ↦ (b_n(α)/b_n(β)) x^n`.
pub fn sonine_poly(pair: SoninePair, p: &PolyFunction) -> PolyFunction {
    p.map_diagonal(|n| b_ratio_product(n, pair.alpha, pair.beta))
}

/// `V_β ∘ V_α^{-1}` on polynomials.
pub fn sonine_via_intertwiners(pair: SoninePair, p: &PolyFunction) -> PolyFunction {
    intertwiner_v_poly(pair.beta, &intertwiner_v_inverse_poly(pair.alpha, p))
}

/// `I_n = ∫_{-1}^1 t^n (1-t²)^{β-α-1} (1+t) |t|^{2α+1} dt`, in closed form.
pub fn sonine_moment(pair: SoninePair, n: usize) -> f64 {
    let m = (n / 2) as f64;
    let a = pair.alpha.value();
    let gap = pair.beta.value() - a;
    let shift = if n % 2 == 0 { 1.0 } else { 2.0 };
    ln_beta(m + a + shift, gap).exp()
}

/// Right side of the product formula, `S_{α,β}(E_α(λ·))(x)`.
pub fn sonine_product(pair: SoninePair, lambda: Complex64, x: f64) -> Result<Complex64> {
    sonine_apply(pair, &KernelFunction::new(pair.alpha, lambda), x)
}

/// Coefficientwise check of `Λ_β S = S Λ_α` and `Λ_α ᵗS = ᵗS Λ_β` on a polynomial,
/// where on polynomials the dual transform acts as the adjoint diagonal.
pub fn intertwining_check_poly(pair: SoninePair, p: &PolyFunction) -> IdentityReport {
    let lhs = dunkl_operator_poly(pair.beta, &sonine_poly(pair, p));
    let rhs = sonine_poly(pair, &dunkl_operator_poly(pair.alpha, p));
    let err = lhs.max_rel_diff(&rhs);
    let mut report = IdentityReport::new("intertwining-poly")
        .param("alpha", pair.alpha.value())
        .param("beta", pair.beta.value())
        .param("degree", p.degree() as f64)
        .grid("coefficients");
    let scale = rhs.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    report.record(err * scale, scale);
    report
}

/// Pointwise check of both relations on a callable with derivative, at the points `xs`.
///
/// The sides involving a derivative of a transformed function use an
/// eighth-order finite difference of that transform.
pub fn intertwining_check(pair: SoninePair, f: &dyn Callable, xs: &[f64]) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("intertwining")
        .param("alpha", pair.alpha.value())
        .param("beta", pair.beta.value())
        .grid(format!("{} points in [{:.2}, {:.2}]", xs.len(), min(xs), max(xs)));

    // Λ_β(S f) = S(Λ_α f)
    let s_f = |x: f64| sonine_apply(pair, f, x);
    let lam_f = OperatorImage::new(|y| dunkl_operator(pair.alpha, f, y));
    // ᵗS(Λ_β f) = Λ_α(ᵗS f)
    let t_f = |x: f64| dual_sonine_apply(pair, f, x);
    let lam_b = OperatorImage::new(|y| dunkl_operator(pair.beta, f, y));

    let mut lhs1 = Vec::with_capacity(xs.len());
    let mut rhs1 = Vec::with_capacity(xs.len());
    let mut lhs2 = Vec::with_capacity(xs.len());
    let mut rhs2 = Vec::with_capacity(xs.len());
    for &x in xs {
        lhs1.push(apply_dunkl_fd(pair.beta, &s_f, x)?);
        rhs1.push(sonine_apply(pair, &lam_f, x)?);
        lhs2.push(dual_sonine_apply(pair, &lam_b, x)?);
        rhs2.push(apply_dunkl_fd(pair.alpha, &t_f, x)?);
    }
    for (lhs, rhs) in [(lhs1, rhs1), (lhs2, rhs2)] {
        let scale = rhs.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        for (a, b) in lhs.iter().zip(&rhs) {
            report.record((a - b).norm(), scale);
        }
    }
    Ok(report)
}

/// `Λ_α g(x)` for a fallibly evaluated `g` without a derivative evaluator.
pub(crate) fn apply_dunkl_fd(alpha: OrderParam, g: &dyn Fn(f64) -> Result<Complex64>, x: f64) -> Result<Complex64> {
    let failure = std::cell::RefCell::new(None);
    let eval = |t: f64| {
        g(t).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        })
    };
    let dg = fd_derivative(eval, x, FD_STEP);
    let odd_quot = if x.abs() < 1e-8 {
        // f_o(x)/x → f'(0)
        dg
    } else {
        (eval(x) - eval(-x)) * (0.5 / x)
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(dg + odd_quot * alpha.weight_exponent())
}

fn min(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}
