//! The Dunkl kernel `E_α(z)`.
//!
//! Three evaluations are available: the power series `Σ z^n / b_n(α)`, the
//! Bochner integral against `(1-t²)^{α-1/2}(1+t)`, and the combination
//! `𝕴_α(z) + z/(2(α+1)) 𝕴_{α+1}(z)` of modified Bessel series. On the imaginary
//! axis, where the transform needs millions of evaluations, a dedicated path
//! goes through `J_α` and `J_{α+1}`.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{DunklError, Result};
use crate::func::Callable;
use crate::quadrature::{jacobi_rule, ComplexSum};
use crate::special::{bessel_mod, monomial_eigenvalue, CoeffCache, OrderParam, BESSEL_Z_MAX};

pub const SERIES_Z_MAX: f64 = 60.0;
pub const BOCHNER_Z_MAX: f64 = 1e3;
const SERIES_MAX_TERMS: usize = 600;
const SMALL_ARG: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    Series,
    Bochner,
    Bessel,
    /// Imaginary axis through `J`-Bessel functions, series for moderate `|z|`,
    /// Bochner beyond.
    Auto,
}

impl std::str::FromStr for KernelMode {
    type Err = DunklError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Self::Series),
            "bochner" => Ok(Self::Bochner),
            "bessel" => Ok(Self::Bessel),
            "auto" => Ok(Self::Auto),
            other => Err(DunklError::InvalidInput(format!(
                "unknown kernel mode '{other}' (expected series, bochner, bessel or auto)"
            ))),
        }
    }
}

impl std::fmt::Display for KernelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::Series => "series",
            Self::Bochner => "bochner",
            Self::Bessel => "bessel",
            Self::Auto => "auto",
        };
        f.write_str(s)
    }
}

pub fn dunkl_kernel(alpha: OrderParam, z: Complex64, mode: KernelMode) -> Result<Complex64> {
    match mode {
        KernelMode::Series => kernel_series(alpha, z),
        KernelMode::Bochner => kernel_bochner(alpha, z),
        KernelMode::Bessel => {
            let a = alpha.value();
            Ok(bessel_mod(alpha, z)? + z / (2.0 * (a + 1.0)) * bessel_mod(alpha.shifted(), z)?)
        }
        KernelMode::Auto => {
            if z.re == 0.0 {
                let (j, k) = kernel_imag(alpha, z.im);
                Ok(Complex64::new(j, k))
            } else if z.norm() <= SERIES_Z_MAX {
                kernel_series(alpha, z)
            } else {
                kernel_bochner(alpha, z)
            }
        }
    }
}

fn kernel_series(alpha: OrderParam, z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if modulus > SERIES_Z_MAX {
        return Err(DunklError::ArgumentTooLarge {
            modulus,
            limit: SERIES_Z_MAX,
            mode: "series (try bochner)",
        });
    }
    let mut term = Complex64::new(1.0, 0.0);
    let mut acc = ComplexSum::default();
    acc.add(term);
    let mut quiet = 0;
    for n in 1..SERIES_MAX_TERMS {
        term *= z / monomial_eigenvalue(n, alpha);
        acc.add(term);
        if (n as f64) > modulus && term.norm() < 1e-17 * acc.value().norm() {
            quiet += 1;
            if quiet == 2 {
                return Ok(acc.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(DunklError::SeriesNotConverged {
        terms: SERIES_MAX_TERMS,
        modulus,
    })
}

fn kernel_bochner(alpha: OrderParam, z: Complex64) -> Result<Complex64> {
    if z.re.abs() > BOCHNER_Z_MAX || z.im.abs() > BOCHNER_Z_MAX {
        return Err(DunklError::ArgumentTooLarge {
            modulus: z.norm(),
            limit: BOCHNER_Z_MAX,
            mode: "bochner",
        });
    }
    let a = alpha.value();
    // enough nodes to resolve the oscillation, rounded up to share cached rules
    let n = (((z.norm() + 48.0) / 32.0).ceil() as usize * 32).max(64);
    // t = 2s - 1 turns the weight into 2^{2α} (1-s)^{α-1/2} s^{α+1/2}, dt = 2 ds
    let rule = jacobi_rule(a - 0.5, a + 0.5, n)?;
    let integral = rule.integrate_complex(|s| (z * (2.0 * s - 1.0)).exp());
    // a_α 2^{2α+1} is the reciprocal of the weight's total mass; dividing by
    // the rule's own mass keeps E_α(0) = 1 exact
    let mass: f64 = rule.weights.iter().sum();
    Ok(integral / mass)
}

/// `E_α(iy) = j(y) + i k(y)` for real `y`, with `j` even and `k` odd.
pub fn kernel_imag(alpha: OrderParam, y: f64) -> (f64, f64) {
    let a = alpha.value();
    let ay = y.abs();
    let (j, k) = if ay <= SMALL_ARG {
        imag_series(a, ay)
    } else if ay >= 20.0 + a * a + 2.0 * a {
        // Hankel asymptotics for J_α and J_{α+1}
        let scale = (ln_gamma(a + 1.0) + a * (2.0 / ay).ln()).exp();
        (scale * hankel_j(a, ay), scale * hankel_j(a + 1.0, ay))
    } else {
        miller_pair(a, ay)
    };
    (j, if y < 0.0 { -k } else { k })
}

fn imag_series(a: f64, y: f64) -> (f64, f64) {
    let q = -0.25 * y * y;
    let series = |nu: f64| {
        let mut term = 1.0;
        let mut acc = crate::quadrature::KahanSum::default();
        acc.add(1.0);
        for n in 1..200 {
            let nf = n as f64;
            term *= q / (nf * (nf + nu));
            acc.add(term);
            if term.abs() < 1e-18 * acc.value().abs() {
                break;
            }
        }
        acc.value()
    };
    (series(a), y / (2.0 * (a + 1.0)) * series(a + 1.0))
}

/// `J_ν(y)` from the Hankel expansion, accurate for `y ≳ 20 + ν²`.
fn hankel_j(nu: f64, y: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * y);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // P collects even k with alternating sign, Q the odd ones
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = y - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * y)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Normalised `(j, k)` by backward recurrence from `J_{α+N}` and the Neumann sum
/// `(y/2)^α / Γ(α+1) = J_α + Σ_{k≥1} (α+2k) h_k J_{α+2k}`.
fn miller_pair(a: f64, y: f64) -> (f64, f64) {
    let n_top = y.ceil() as usize + 50;
    let mut h = vec![0.0; n_top / 2 + 2];
    h[1] = 1.0;
    for k in 1..h.len() - 1 {
        h[k + 1] = h[k] * (a + k as f64) / (k as f64 + 1.0);
    }
    let mut above = 0.0; // J̃_{α+m+1}
    let mut cur = 1e-30; // J̃_{α+m}
    let mut sum = 0.0;
    let mut j1 = 0.0;
    let mut m = n_top;
    loop {
        if m % 2 == 0 {
            let w = if m == 0 { 1.0 } else { (a + m as f64) * h[m / 2] };
            sum += w * cur;
        }
        if m == 1 {
            j1 = cur;
        }
        if m == 0 {
            break;
        }
        let below = 2.0 * (a + m as f64) / y * cur - above;
        above = cur;
        cur = below;
        m -= 1;
        if cur.abs() > 1e200 {
            above *= 1e-200;
            cur *= 1e-200;
            sum *= 1e-200;
            j1 *= 1e-200;
        }
    }
    (cur / sum, j1 / sum)
}

/// `x ↦ E_α(λx)` as a [`Callable`].
#[derive(Debug, Clone)]
pub struct KernelFunction {
    pub alpha: OrderParam,
    pub lambda: Complex64,
}

impl KernelFunction {
    pub fn new(alpha: OrderParam, lambda: Complex64) -> Self {
        Self { alpha, lambda }
    }

    /// `x ↦ E_α(iωx)`.
    pub fn oscillatory(alpha: OrderParam, omega: f64) -> Self {
        Self::new(alpha, Complex64::new(0.0, omega))
    }
}

impl Callable for KernelFunction {
    fn eval(&self, x: f64) -> Complex64 {
        dunkl_kernel(self.alpha, self.lambda * x, KernelMode::Auto).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn derivative(&self, x: f64) -> Option<Complex64> {
        let a = self.alpha.value();
        let z = self.lambda * x;
        if self.lambda.re == 0.0 {
            // E(iy) = j_α(y) + i y j_{α+1}(y)/(2(α+1)), j_ν(y) = 𝕴_ν(iy)
            let omega = self.lambda.im;
            let y = omega * x;
            let j1 = kernel_imag(self.alpha.shifted(), y).0;
            let j2 = kernel_imag(self.alpha.shifted().shifted(), y).0;
            let dj = -y / (2.0 * (a + 1.0)) * j1;
            let dk = (j1 - y * y / (2.0 * (a + 2.0)) * j2) / (2.0 * (a + 1.0));
            return Some(Complex64::new(dj, dk) * omega);
        }
        if z.norm() > BESSEL_Z_MAX {
            return None;
        }
        let i1 = bessel_mod(self.alpha.shifted(), z).ok()?;
        let i2 = bessel_mod(self.alpha.shifted().shifted(), z).ok()?;
        let c = 1.0 / (2.0 * (a + 1.0));
        Some((i1 * (z * c + c) + i2 * (z * z * c / (2.0 * (a + 2.0)))) * self.lambda)
    }

    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        // c_{2k} = λ^{2k} / b_{2k}(α), real when λ² is real
        let l2 = self.lambda * self.lambda;
        if l2.im != 0.0 {
            return None;
        }
        let cache = CoeffCache::new(self.alpha, 2 * terms);
        Some(
            (0..terms)
                .map(|k| {
                    let mag = (2 * k) as f64 * l2.re.abs().ln() * 0.5 - cache.log_b(2 * k);
                    let sign = if l2.re < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                    if k == 0 {
                        1.0
                    } else if l2.re == 0.0 {
                        0.0
                    } else {
                        sign * mag.exp()
                    }
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::fd_derivative;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // 40-digit reference values of Σ z^n / b_n(α)
    const REFERENCE: [(f64, (f64, f64), (f64, f64)); 9] = [
        (0.7, (0.0, 2.0), (0.511_387_570_896_971_06, 0.397_812_452_179_064_36)),
        (0.7, (0.0, -2.0), (0.511_387_570_896_971_06, -0.397_812_452_179_064_36)),
        (0.0, (1.0, 0.0), (1.831_224_981_744_493_4, 0.0)),
        (1.5, (3.0, 4.0), (-1.505_578_505_955_394_8, 1.160_810_345_610_874_1)),
        (-0.4, (0.0, 10.0), (-0.654_807_909_994_109_16, -0.294_104_350_783_531_42)),
        (2.7, (-5.0, 0.0), (2.080_116_078_846_841_7, 0.0)),
        (0.3, (0.0, 25.0), (0.011_899_977_501_048_824, -0.065_690_290_278_504_783)),
        (0.3, (0.0, 40.0), (0.023_242_332_910_737_839, 0.040_267_799_917_254_944)),
        (1.2, (0.5, -7.0), (-0.011_585_582_494_896_904, 0.122_621_462_355_021_35)),
    ];

    #[test]
    fn kernel_at_origin_is_one() {
        for mode in [KernelMode::Series, KernelMode::Bochner, KernelMode::Bessel, KernelMode::Auto] {
            let v = dunkl_kernel(op(0.3), c(0.0, 0.0), mode).unwrap();
            assert!((v - c(1.0, 0.0)).norm() < 1e-14, "{mode}");
        }
    }

    #[test]
    fn reference_values() {
        for (a, (zr, zi), (er, ei)) in REFERENCE {
            let want = c(er, ei);
            for mode in [KernelMode::Series, KernelMode::Bochner, KernelMode::Bessel, KernelMode::Auto] {
                let got = dunkl_kernel(op(a), c(zr, zi), mode).unwrap();
                // the series on the imaginary axis cancels about e^{|z|}·1e-16 away
                let slack = if zr == 0.0 && zi.abs() > 20.0 && mode != KernelMode::Bochner && mode != KernelMode::Auto {
                    (zi.abs()).exp() * 1e-16
                } else {
                    0.0
                };
                assert!(
                    (got - want).norm() <= 2e-12 * want.norm() + slack,
                    "α={a} z=({zr},{zi}) {mode}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn half_integer_closed_form() {
        // E_{1/2}(z) = sinh z / z + (cosh z - sinh z / z) / z
        for z in [0.4f64, 1.7, 6.0] {
            let want = z.sinh() / z + (z.cosh() - z.sinh() / z) / z;
            let got = dunkl_kernel(op(0.5), c(z, 0.0), KernelMode::Series).unwrap();
            assert!((got.re - want).abs() < 1e-13 * want.abs());
        }
    }

    #[test]
    fn imaginary_axis_branches_agree() {
        for &a in &[-0.45, -0.25, 0.0, 0.5, 1.5, 2.7, 4.0] {
            let alpha = op(a);
            for i in 0..400 {
                let y = 0.1 + 0.25 * i as f64;
                let (j, k) = kernel_imag(alpha, y);
                let want = kernel_bochner(alpha, c(0.0, y)).unwrap();
                assert!(
                    (c(j, k) - want).norm() < 1e-12,
                    "α={a} y={y}: ({j},{k}) vs {want}"
                );
                let (jm, km) = kernel_imag(alpha, -y);
                assert_eq!(jm, j);
                assert_eq!(km, -k);
            }
        }
    }

    #[test]
    fn series_limit_suggests_bochner() {
        let err = dunkl_kernel(op(0.0), c(61.0, 0.0), KernelMode::Series).unwrap_err();
        assert!(err.to_string().contains("bochner"));
        assert!(dunkl_kernel(op(0.0), c(0.0, 1e4), KernelMode::Bochner).is_err());
    }

    #[test]
    fn kernel_function_derivative_and_taylor() {
        for lambda in [c(0.0, 1.3), c(0.7, 0.0), c(0.4, -0.9)] {
            let f = KernelFunction::new(op(0.8), lambda);
            for &x in &[-1.2, 0.0, 0.6, 3.1] {
                let d = f.derivative(x).unwrap();
                let fd = fd_derivative(|t| f.eval(t), x, 1e-2);
                assert!((d - fd).norm() < 1e-10, "λ={lambda} x={x}: {d} vs {fd}");
            }
        }
        let f = KernelFunction::oscillatory(op(0.0), 2.0);
        let t = f.taylor_even(3).unwrap();
        // b_2(0) = 4, b_4(0) = 64: c = 1, -4/4, 16/64
        assert!((t[1] + 1.0).abs() < 1e-14 && (t[2] - 0.25).abs() < 1e-14);
        assert!(KernelFunction::new(op(0.0), c(1.0, 1.0)).taylor_even(3).is_none());
    }
}
