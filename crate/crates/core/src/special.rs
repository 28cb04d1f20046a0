//! Gamma-function constants and the coefficient sequences of the Dunkl kernel.
//!
//! Every Gamma ratio is formed as a difference of `log_gamma` values and then
//! exponentiated, so the coefficients stay finite up to a few hundred terms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DunklError, Result};

/// Largest argument modulus accepted by the defining series of [`bessel_mod`].
pub const BESSEL_Z_MAX: f64 = 60.0;
const BESSEL_MAX_TERMS: usize = 500;

/// Validated order parameter `alpha > -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize)]
pub struct OrderParam(f64);

impl OrderParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > -0.5 {
            Ok(Self(alpha))
        } else {
            Err(DunklError::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Exponent `2 alpha + 1` of the weight `|x|^{2 alpha + 1}`.
    #[inline]
    pub fn weight_exponent(self) -> f64 {
        2.0 * self.0 + 1.0
    }

    /// The order shifted by one, used by the odd-index coefficient recurrence.
    pub fn shifted(self) -> Self {
        Self(self.0 + 1.0)
    }
}

impl std::fmt::Display for OrderParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(DunklError::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

#[inline]
fn lg(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `Γ(x)` for any real `x` that is not a pole, using reflection on the left half-line.
pub fn gamma_signed(x: f64) -> f64 {
    if x > 0.5 {
        return lg(x).exp();
    }
    if x == x.floor() {
        return f64::NAN;
    }
    // Γ(x) Γ(1 - x) = π / sin(πx)
    PI / ((PI * x).sin() * lg(1.0 - x).exp())
}

/// `1/Γ(x)`, which is entire: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x > 0.5 {
        return (-lg(x)).exp();
    }
    if x == x.floor() {
        return 0.0;
    }
    (PI * x).sin() * lg(1.0 - x).exp() / PI
}

/// Immutable table of kernel coefficients `b_0(α) .. b_N(α)`.
#[derive(Debug, Clone)]
pub struct CoeffCache {
    alpha: OrderParam,
    log_b: Vec<f64>,
}

impl CoeffCache {
    pub fn new(alpha: OrderParam, max_n: usize) -> Self {
        let log_b = (0..=max_n).map(|n| log_b_coeff(n, alpha)).collect();
        Self { alpha, log_b }
    }

    pub fn alpha(&self) -> OrderParam {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.log_b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_b.is_empty()
    }

    /// `b_n(α)`; falls back to direct evaluation beyond the cached range.
    pub fn b(&self, n: usize) -> f64 {
        self.log_b(n).exp()
    }

    pub fn log_b(&self, n: usize) -> f64 {
        self.log_b.get(n).copied().unwrap_or_else(|| log_b_coeff(n, self.alpha))
    }
}

/// `ln b_n(α)` from the closed Gamma forms
/// `b_{2m} = 2^{2m} m! Γ(m+α+1)/Γ(α+1)` and `b_{2m+1} = 2(α+1) b_{2m}(α+1)`.
pub fn log_b_coeff(n: usize, alpha: OrderParam) -> f64 {
    let a = alpha.value();
    let m = (n / 2) as f64;
    let ln2 = std::f64::consts::LN_2;
    if n % 2 == 0 {
        2.0 * m * ln2 + lg(m + 1.0) + lg(m + a + 1.0) - lg(a + 1.0)
    } else {
        // 2(α+1) · 2^{2m} m! Γ(m+α+2)/Γ(α+2)
        (2.0 * (a + 1.0)).ln() + 2.0 * m * ln2 + lg(m + 1.0) + lg(m + a + 2.0) - lg(a + 2.0)
    }
}

/// Coefficient `b_n(α)` of the power series `E_α(z) = Σ z^n / b_n(α)`.
pub fn b_coeff(n: usize, alpha: OrderParam) -> f64 {
    if n == 0 {
        return 1.0;
    }
    log_b_coeff(n, alpha).exp()
}

/// Eigenvalue of the Dunkl operator on monomials: `Λ_α x^n = ρ_n x^{n-1}`,
/// with `ρ_n = n` for even `n` and `n + 2α + 1` for odd `n`.
#[inline]
pub fn monomial_eigenvalue(n: usize, alpha: OrderParam) -> f64 {
    if n % 2 == 0 {
        n as f64
    } else {
        n as f64 + alpha.weight_exponent()
    }
}

/// `b_n(α)/b_n(β)` as a running product of eigenvalue ratios.
pub fn b_ratio_product(n: usize, alpha: OrderParam, beta: OrderParam) -> f64 {
    (1..=n)
        .map(|k| monomial_eigenvalue(k, alpha) / monomial_eigenvalue(k, beta))
        .product()
}

/// `n!/b_n(α)`: the diagonal action of the intertwiner on `x^n`.
pub fn intertwiner_eigenvalue(n: usize, alpha: OrderParam) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (lg(n as f64 + 1.0) - log_b_coeff(n, alpha)).exp()
}

/// Bochner normalisation `a_α = Γ(α+1) / (√π Γ(α+1/2))`.
pub fn a_const(alpha: OrderParam) -> f64 {
    let a = alpha.value();
    (lg(a + 1.0) - lg(a + 0.5)).exp() / PI.sqrt()
}

/// Sonine normalisation `a_{α,β} = Γ(β+1) / (Γ(β-α) Γ(α+1))`.
pub fn a_sonine(alpha: OrderParam, beta: OrderParam) -> Result<f64> {
    let (a, b) = (alpha.value(), beta.value());
    if b <= a {
        return Err(DunklError::InvalidPair { alpha: a, beta: b });
    }
    Ok((lg(b + 1.0) - lg(b - a) - lg(a + 1.0)).exp())
}

/// Inversion constant `c_α = 1 / [2^{α+1} Γ(α+1)]^2`.
pub fn c_const(alpha: OrderParam) -> f64 {
    let a = alpha.value();
    (-2.0 * ((a + 1.0) * std::f64::consts::LN_2 + lg(a + 1.0))).exp()
}

/// Integer part `r = [α + 1/2]` and prefactor `d_α` of the inverse intertwiner.
///
/// The prefactor is `√π 2^{-r} / (Γ(α+1) Γ(r-α+1/2))`, the value that makes the
/// inversion formulas reproduce `V_α^{-1}(x^n) = (b_n(α)/n!) x^n`.
pub fn d_const(alpha: OrderParam) -> Result<(u32, f64)> {
    let a = alpha.value();
    let shifted = a + 0.5;
    let r = shifted.floor();
    // (1 - t^2)^{r - α - 1/2} is non-integrable when α + 1/2 is an integer.
    if (shifted - shifted.round()).abs() < 1e-12 {
        return Err(DunklError::HalfIntegerOrder(a));
    }
    let d = (0.5 * PI.ln() - r * std::f64::consts::LN_2 - lg(a + 1.0) - lg(r - a + 0.5)).exp();
    Ok((r as u32, d))
}

/// Modified spherical Bessel function `𝕴_α(z) = Γ(α+1) Σ (z/2)^{2n} / (n! Γ(n+α+1))`.
pub fn bessel_mod(alpha: OrderParam, z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if modulus > BESSEL_Z_MAX {
        return Err(DunklError::ArgumentTooLarge {
            modulus,
            limit: BESSEL_Z_MAX,
            mode: "series",
        });
    }
    let a = alpha.value();
    let q = z * z / 4.0;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 1..BESSEL_MAX_TERMS {
        let nf = n as f64;
        term *= q / (nf * (nf + a));
        sum += term;
        if term.norm() < 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(DunklError::SeriesNotConverged {
        terms: BESSEL_MAX_TERMS,
        modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    #[test]
    fn order_param_rejects_boundary() {
        assert!(OrderParam::new(-0.5).is_err());
        assert!(OrderParam::new(-1.0).is_err());
        assert!(OrderParam::new(f64::NAN).is_err());
        assert!(OrderParam::new(-0.4999).is_ok());
    }

    #[test]
    fn log_gamma_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-15);
        assert_relative_eq!(log_gamma(0.5).unwrap(), 0.572_364_942_924_700_1, max_relative = 1e-14);
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
    }

    #[test]
    fn log_gamma_against_high_precision_table() {
        // mpmath.loggamma at 40 digits
        let table = [
            (1e-3, 6.907_178_885_383_853_7),
            (0.3, 1.095_797_994_818_075_6),
            (1.3, -0.108_174_809_507_860_48),
            (3.7, 1.428_072_326_665_388_1),
            (10.5, 13.940_625_219_403_763),
            (100.0, 359.134_205_369_575_4),
            (999.0, 5_898.313_668_430_533),
        ];
        for (x, want) in table {
            let got = log_gamma(x).unwrap();
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1.0), "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn reflection_gamma() {
        assert_relative_eq!(gamma_signed(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_signed(4.0), 6.0, max_relative = 1e-14);
        assert_eq!(rgamma(-1.0), 0.0);
        assert_eq!(rgamma(0.0), 0.0);
        assert_relative_eq!(rgamma(-1.5), 1.0 / gamma_signed(-1.5), max_relative = 1e-14);
    }

    #[test]
    fn b_coeff_examples() {
        assert_eq!(b_coeff(0, op(0.3)), 1.0);
        assert_relative_eq!(b_coeff(1, op(0.0)), 2.0, max_relative = 1e-14);
        assert_relative_eq!(b_coeff(2, op(0.5)), 6.0, max_relative = 1e-14);
        // b_3(α) = 8(α+1)(α+2)
        assert_relative_eq!(b_coeff(3, op(0.0)), 16.0, max_relative = 1e-14);
        assert_relative_eq!(b_coeff(3, op(1.0)), 48.0, max_relative = 1e-14);
    }

    #[test]
    fn b_coeff_recurrences_agree() {
        for &a in &[-0.4, 0.0, 0.5, 1.0, 2.7] {
            let alpha = op(a);
            for n in 0..=50usize {
                let m = (n / 2) as f64;
                // explicit Gamma ratio for even index, shifted recurrence for odd
                let explicit = if n % 2 == 0 {
                    (2.0 * m * std::f64::consts::LN_2 + lg(m + 1.0) + lg(m + a + 1.0) - lg(a + 1.0)).exp()
                } else {
                    2.0 * (a + 1.0) * b_coeff(n - 1, alpha.shifted())
                };
                let got = b_coeff(n, alpha);
                assert!(got.is_finite() && got > 0.0);
                assert_relative_eq!(got, explicit, max_relative = 1e-12);
                // product of Dunkl eigenvalues
                let prod: f64 = (1..=n).map(|k| monomial_eigenvalue(k, alpha)).product();
                assert_relative_eq!(got, prod, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn b_coeff_large_index_is_finite() {
        let c = CoeffCache::new(op(0.7), 200);
        assert_eq!(c.len(), 201);
        assert!(c.log_b(200).is_finite());
        assert!(c.log_b(200) > 700.0);
    }

    #[test]
    fn constants() {
        assert_relative_eq!(a_const(op(0.5)), 0.5, max_relative = 1e-14);
        assert_relative_eq!(a_const(op(0.0)), 1.0 / PI, max_relative = 1e-14);
        // a_α ~ sqrt(α/π) for large α and increasing
        let mut prev = 0.0;
        for k in 1..40 {
            let a = 5.0 * k as f64;
            let v = a_const(op(a));
            assert!(v > prev);
            prev = v;
        }
        assert_relative_eq!(a_const(op(1e4)) / (1e4 / PI).sqrt(), 1.0, max_relative = 1e-4);

        assert_relative_eq!(a_sonine(op(0.3), op(1.3)).unwrap(), 1.3, max_relative = 1e-14);
        assert_relative_eq!(a_sonine(op(0.0), op(1.0)).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(a_sonine(op(0.5), op(2.5)).unwrap(), 3.75, max_relative = 1e-14);
        assert!(a_sonine(op(1.0), op(1.0)).is_err());
        assert!(a_sonine(op(1.0), op(0.5)).is_err());

        assert_relative_eq!(c_const(op(0.0)), 0.25, max_relative = 1e-14);
        assert_relative_eq!(c_const(op(1.0)), 1.0 / 16.0, max_relative = 1e-14);
        // near the classical limit c_α → 1/(2π)
        assert_relative_eq!(c_const(op(-0.5 + 1e-12)), 1.0 / (2.0 * PI), max_relative = 1e-9);
    }

    #[test]
    fn d_const_cases() {
        let (r, d) = d_const(op(0.0)).unwrap();
        assert_eq!(r, 0);
        assert_relative_eq!(d, 1.0, max_relative = 1e-14);
        let (r, d) = d_const(op(1.2)).unwrap();
        assert_eq!(r, 1);
        let want = PI.sqrt() / (2.0 * lg(2.2).exp() * lg(0.3).exp());
        assert_relative_eq!(d, want, max_relative = 1e-13);
        let (r, d) = d_const(op(0.49)).unwrap();
        assert_eq!(r, 0);
        assert_relative_eq!(d, PI.sqrt() / (lg(1.49).exp() * lg(0.01).exp()), max_relative = 1e-13);
        assert!(matches!(d_const(op(0.5)), Err(DunklError::HalfIntegerOrder(_))));
        assert!(matches!(d_const(op(1.5)), Err(DunklError::HalfIntegerOrder(_))));
    }

    #[test]
    fn bessel_mod_values() {
        let one = bessel_mod(op(0.7), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        // I_0(2) = Σ 1/(n!)^2
        let i0 = bessel_mod(op(0.0), Complex64::new(2.0, 0.0)).unwrap();
        assert_relative_eq!(i0.re, 2.279_585_302_336_067_3, max_relative = 1e-13);
        // half-integer order closes to sinh z / z
        for &z in &[0.3, 1.0, 4.5, 12.0] {
            let v = bessel_mod(op(0.5), Complex64::new(z, 0.0)).unwrap();
            assert_relative_eq!(v.re, z.sinh() / z, max_relative = 1e-13);
            // on the imaginary axis the alternating series loses digits in proportion to sinh z / z
            let w = bessel_mod(op(0.5), Complex64::new(0.0, z)).unwrap();
            assert!((w.re - z.sin() / z).abs() <= 1e-15 * (z.sinh() / z).max(1.0));
        }
        assert!(bessel_mod(op(0.0), Complex64::new(61.0, 0.0)).is_err());
    }
}
