use std::sync::Arc;

use num_complex::Complex64;

use super::forward_point;
use crate::error::Result;
use crate::func::Callable;
use crate::quadrature::{homogeneous_pairing, HalfLineRule};
use crate::report::IdentityReport;
use crate::special::{b_coeff, gamma_signed, rgamma, OrderParam};

/// `F_α φ` evaluated pointwise by quadrature of `φ`, with even Taylor
/// coefficients `(-1)^k M_{2k} / b_{2k}(α)` from the weighted moments of `φ`.
/// Beyond `cutoff` the transform is taken to be 0; past the point where it
/// drops below rounding the quadrature only returns noise.
pub struct TransformedCallable<'a> {
    alpha: OrderParam,
    rule: Arc<HalfLineRule>,
    phi: &'a dyn Callable,
    cutoff: f64,
}

pub fn transformed_callable<'a>(
    alpha: OrderParam,
    rule: Arc<HalfLineRule>,
    phi: &'a dyn Callable,
    cutoff: f64,
) -> TransformedCallable<'a> {
    TransformedCallable { alpha, rule, phi, cutoff }
}

impl Callable for TransformedCallable<'_> {
    fn eval(&self, lambda: f64) -> Complex64 {
        if lambda.abs() > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        forward_point(self.alpha, &self.rule, self.phi, lambda)
    }

    fn support(&self) -> Option<f64> {
        Some(self.cutoff)
    }

    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        let fe: Vec<f64> = self.rule.nodes.iter().map(|&x| self.phi.even(x).re).collect();
        let mut out = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut m = crate::quadrature::KahanSum::default();
            for ((x, w), v) in self.rule.nodes.iter().zip(&self.rule.weights).zip(&fe) {
                m.add(w * v * x.powi(2 * k as i32));
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out.push(sign * 2.0 * m.value() / b_coeff(2 * k, self.alpha));
        }
        Some(out)
    }
}

/// Constants of the homogeneous transform pair: `F_α(|x|^{λ+2α+1}) = C_iii |x|^{-(λ+1)}`
/// and `F_α(|x|^λ) = C_iv |x|^{-(λ+2α+2)}`.
pub fn homogeneous_constants(alpha: OrderParam, lam: f64) -> (f64, f64) {
    let a = alpha.value();
    let g = gamma_signed(a + 1.0);
    let mid = gamma_signed((2.0 * a + lam + 2.0) / 2.0);
    let r = rgamma(-lam / 2.0);
    let c_iii = 2f64.powf(2.0 * a + lam + 2.0) * g * mid * r;
    let c_iv = 2f64.powf(lam) * mid * r / g;
    (c_iii, c_iv)
}

fn taylor_order_for(exponent: f64) -> usize {
    let need = (-exponent - 3.0) / 2.0;
    if need < 0.0 {
        0
    } else {
        2 * (need.floor() as usize + 1)
    }
}

/// Compares `⟨|x|^{λ+2α+1}, F_α φ⟩` with `C_iii ⟨|x|^{-(λ+1)}, φ⟩`; the
/// transform is cut off at `cutoff`.
///
/// When `C_iii = 0` (λ a non-negative even integer) the relative error is
/// replaced by the absolute one, since both sides should vanish.
pub fn prop7_identity_check(
    alpha: OrderParam,
    lam: f64,
    phi: &dyn Callable,
    rule: Arc<HalfLineRule>,
    cutoff: f64,
) -> Result<IdentityReport> {
    let fphi = transformed_callable(alpha, rule.clone(), phi, cutoff);
    let e_lhs = lam + alpha.weight_exponent();
    let lhs = homogeneous_pairing(e_lhs, &fphi, taylor_order_for(e_lhs))?;
    let e_rhs = -(lam + 1.0);
    let (c_iii, _) = homogeneous_constants(alpha, lam);
    let rhs_pair = homogeneous_pairing(e_rhs, phi, taylor_order_for(e_rhs))?;
    let rhs = if c_iii == 0.0 { 0.0 } else { c_iii * rhs_pair.value };

    let err = (lhs.value - rhs).abs();
    let degenerate = c_iii == 0.0;
    let scale = if degenerate { 1.0 } else { rhs.abs().max(lhs.value.abs()) };
    let mut report = IdentityReport::new(if degenerate { "prop7-degenerate" } else { "prop7" })
        .param("alpha", alpha.value())
        .param("lambda", lam)
        .grid(format!("x-rule on [0, {}] with {} nodes", rule.length, rule.len()));
    report.record(err, scale);
    if degenerate {
        report.max_abs_err = report.max_abs_err.max(lhs.value.abs());
        report.max_rel_err = report.max_abs_err;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{PolyFunction, PolyGaussian};
    use crate::special::c_const;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    fn rule(a: OrderParam) -> Arc<HalfLineRule> {
        Arc::new(HalfLineRule::new(a.weight_exponent(), 12.0, 16, 16).unwrap())
    }

    #[test]
    fn constants_are_reciprocal_under_reflection() {
        for &a in &[0.0, 0.5, 1.5] {
            let alpha = op(a);
            for &l in &[-1.3, 0.4, 2.5] {
                let (_, c_iv) = homogeneous_constants(alpha, l);
                let (c_iii, _) = homogeneous_constants(alpha, -l - 2.0 * a - 2.0);
                assert!((c_iv * c_iii - 1.0).abs() < 1e-13, "α={a} λ={l}");
            }
            // the product with c_α is not the reciprocal in general
            let (c_iii, c_iv) = homogeneous_constants(alpha, 0.4);
            assert!((c_const(alpha) * c_iii * c_iv - 1.0).abs() > 1e-3);
        }
        assert_eq!(homogeneous_constants(op(0.5), 2.0).0, 0.0);
    }

    #[test]
    fn taylor_coefficients_of_gaussian_transform() {
        // F_α(e^{-x²}) = Γ(α+1) e^{-λ²/4}
        let alpha = op(0.5);
        let g = PolyGaussian::gaussian();
        let f = transformed_callable(alpha, rule(alpha), &g, 16.0);
        let c = f.taylor_even(6).unwrap();
        let g0 = gamma_signed(1.5);
        let mut want = g0;
        for (k, ck) in c.iter().enumerate() {
            assert!((ck - want).abs() < 1e-12 * want.abs(), "k={k}");
            want *= -0.25 / (k as f64 + 1.0);
        }
    }

    #[test]
    fn gaussian_identity_holds() {
        let alpha = op(0.5);
        let r = prop7_identity_check(alpha, -1.3, &PolyGaussian::gaussian(), rule(alpha), 16.0).unwrap();
        assert!(r.max_rel_err < 1e-9, "{}", r.max_rel_err);
        let phi = PolyGaussian::new(PolyFunction::new(vec![1.0, 0.0, 1.0]), 1.0);
        let r = prop7_identity_check(alpha, 2.0, &phi, rule(alpha), 16.0).unwrap();
        assert_eq!(r.name, "prop7-degenerate");
        assert!(r.max_abs_err < 1e-9, "{}", r.max_abs_err);
    }
}
