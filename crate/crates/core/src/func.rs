//! Function representations the operators act on.
//!
//! [`Callable`] is the common interface: point evaluation, an optional
//! derivative, and optional even Taylor coefficients at the origin. Concrete
//! implementors are exact polynomials, polynomial-times-Gaussian functions and
//! boxed closures; sampled functions live in [`crate::grid`].

use std::sync::Arc;

use num_complex::Complex64;

const ODD_QUOTIENT_CUTOFF: f64 = 1e-8;

pub trait Callable: Send + Sync {
    fn eval(&self, x: f64) -> Complex64;

    /// Derivative at `x`, if the function knows it.
    fn derivative(&self, _x: f64) -> Option<Complex64> {
        None
    }

    /// Coefficients `c_{2k} = f_e^{(2k)}(0)/(2k)!` for `k < terms`.
    fn taylor_even(&self, _terms: usize) -> Option<Vec<f64>> {
        None
    }

    /// Radius beyond which the function is identically zero, if any.
    fn support(&self) -> Option<f64> {
        None
    }

    fn even(&self, z: f64) -> Complex64 {
        0.5 * (self.eval(z) + self.eval(-z))
    }

    fn odd(&self, z: f64) -> Complex64 {
        0.5 * (self.eval(z) - self.eval(-z))
    }

    /// `f_o(z)/z`, with the removable singularity at 0 filled by `f'(0)`.
    fn odd_quotient(&self, z: f64) -> Complex64 {
        if z.abs() < ODD_QUOTIENT_CUTOFF {
            return self
                .derivative(0.0)
                .unwrap_or_else(|| fd_derivative(|t| self.odd(t), 0.0, 1e-3));
        }
        self.odd(z) / z
    }
}

impl<T: Callable + ?Sized> Callable for &T {
    fn eval(&self, x: f64) -> Complex64 {
        (**self).eval(x)
    }
    fn derivative(&self, x: f64) -> Option<Complex64> {
        (**self).derivative(x)
    }
    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        (**self).taylor_even(terms)
    }
    fn support(&self) -> Option<f64> {
        (**self).support()
    }
    fn even(&self, z: f64) -> Complex64 {
        (**self).even(z)
    }
    fn odd(&self, z: f64) -> Complex64 {
        (**self).odd(z)
    }
    fn odd_quotient(&self, z: f64) -> Complex64 {
        (**self).odd_quotient(z)
    }
}

impl<T: Callable + ?Sized> Callable for Arc<T> {
    fn eval(&self, x: f64) -> Complex64 {
        (**self).eval(x)
    }
    fn derivative(&self, x: f64) -> Option<Complex64> {
        (**self).derivative(x)
    }
    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        (**self).taylor_even(terms)
    }
    fn support(&self) -> Option<f64> {
        (**self).support()
    }
    fn even(&self, z: f64) -> Complex64 {
        (**self).even(z)
    }
    fn odd(&self, z: f64) -> Complex64 {
        (**self).odd(z)
    }
    fn odd_quotient(&self, z: f64) -> Complex64 {
        (**self).odd_quotient(z)
    }
}

/// Exact real polynomial `Σ c_n x^n`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PolyFunction {
    pub coeffs: Vec<f64>,
}

impl PolyFunction {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative_poly(&self) -> PolyFunction {
        if self.coeffs.len() <= 1 {
            return PolyFunction::new(vec![0.0]);
        }
        PolyFunction::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| n as f64 * c)
                .collect(),
        )
    }

    /// Coefficientwise scaling `c_n ↦ d(n) c_n`.
    pub fn map_diagonal(&self, d: impl Fn(usize) -> f64) -> PolyFunction {
        PolyFunction::new(self.coeffs.iter().enumerate().map(|(n, c)| d(n) * c).collect())
    }

    /// Largest coefficient difference relative to the largest coefficient of `other`.
    pub fn max_rel_diff(&self, other: &PolyFunction) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &PolyFunction, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        let scale = (0..n).map(|i| get(other, i).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        (0..n).map(|i| (get(self, i) - get(other, i)).abs()).fold(0.0, f64::max) / scale
    }
}

impl Callable for PolyFunction {
    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.eval_real(x), 0.0)
    }

    fn derivative(&self, x: f64) -> Option<Complex64> {
        Some(Complex64::new(self.derivative_poly().eval_real(x), 0.0))
    }

    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        Some((0..terms).map(|k| self.coeffs.get(2 * k).copied().unwrap_or(0.0)).collect())
    }

    fn odd_quotient(&self, z: f64) -> Complex64 {
        // Σ c_{2k+1} z^{2k}
        let z2 = z * z;
        let v = self
            .coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .rev()
            .fold(0.0, |acc, c| acc * z2 + c);
        Complex64::new(v, 0.0)
    }
}

/// `p(x) e^{-t x²}` with exact derivative and Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussian {
    pub poly: PolyFunction,
    pub t: f64,
}

impl PolyGaussian {
    pub fn new(poly: PolyFunction, t: f64) -> Self {
        Self { poly, t }
    }

    /// `e^{-x²}`.
    pub fn gaussian() -> Self {
        Self::new(PolyFunction::new(vec![1.0]), 1.0)
    }

    /// `x^n e^{-x²}`.
    pub fn moment(n: usize) -> Self {
        Self::new(PolyFunction::monomial(n), 1.0)
    }
}

impl Callable for PolyGaussian {
    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.poly.eval_real(x) * (-self.t * x * x).exp(), 0.0)
    }

    fn derivative(&self, x: f64) -> Option<Complex64> {
        let p = self.poly.eval_real(x);
        let dp = self.poly.derivative_poly().eval_real(x);
        Some(Complex64::new((dp - 2.0 * self.t * x * p) * (-self.t * x * x).exp(), 0.0))
    }

    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        // (Σ p_i x^i)(Σ (-t)^j x^{2j}/j!), even powers only
        let mut gauss = vec![1.0; terms];
        for j in 1..terms {
            gauss[j] = gauss[j - 1] * (-self.t) / j as f64;
        }
        let out = (0..terms)
            .map(|k| {
                (0..=k)
                    .filter_map(|i| self.poly.coeffs.get(2 * i).map(|c| c * gauss[k - i]))
                    .sum()
            })
            .collect();
        Some(out)
    }

    fn odd_quotient(&self, z: f64) -> Complex64 {
        let q = self.poly.odd_quotient(z).re;
        Complex64::new(q * (-self.t * z * z).exp(), 0.0)
    }
}

type EvalFn = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A smooth function given by closures.
#[derive(Clone)]
pub struct FnFunction {
    f: Arc<EvalFn>,
    df: Option<Arc<EvalFn>>,
    taylor: Option<Arc<Vec<f64>>>,
    support: Option<f64>,
}

impl std::fmt::Debug for FnFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnFunction")
            .field("has_derivative", &self.df.is_some())
            .field("taylor_terms", &self.taylor.as_ref().map(|t| t.len()))
            .finish()
    }
}

impl FnFunction {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            df: None,
            taylor: None,
            support: None,
        }
    }

    pub fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |x| Complex64::new(f(x), 0.0))
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn with_taylor(mut self, coeffs: Vec<f64>) -> Self {
        self.taylor = Some(Arc::new(coeffs));
        self
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support = Some(radius);
        self
    }
}

impl Callable for FnFunction {
    fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }

    fn derivative(&self, x: f64) -> Option<Complex64> {
        self.df.as_ref().map(|d| d(x))
    }

    fn taylor_even(&self, terms: usize) -> Option<Vec<f64>> {
        self.taylor
            .as_ref()
            .map(|t| (0..terms).map(|k| t.get(k).copied().unwrap_or(0.0)).collect())
    }

    fn support(&self) -> Option<f64> {
        self.support
    }
}

/// Eighth-order centred difference for `f'(x)` with step `h`.
pub fn fd_derivative(f: impl Fn(f64) -> Complex64, x: f64, h: f64) -> Complex64 {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, c) in C.iter().enumerate() {
        let d = (k + 1) as f64 * h;
        acc += (f(x + d) - f(x - d)) * *c;
    }
    acc / h
}

/// Finite-difference weights for derivatives `0..=m` at `x0` from arbitrary
/// distinct `nodes` (Fornberg's recursion). `w[k][j]` is the weight of node `j`
/// in the `k`-th derivative.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_basics() {
        let p = PolyFunction::new(vec![1.0, -2.0, 0.5, 3.0]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.eval_real(2.0), 1.0 - 4.0 + 2.0 + 24.0);
        assert_eq!(p.derivative_poly().coeffs, vec![-2.0, 1.0, 9.0]);
        assert_eq!(p.odd_quotient(2.0).re, -2.0 + 12.0);
        assert_eq!(p.taylor_even(3).unwrap(), vec![1.0, 0.5, 0.0]);
        assert_eq!(PolyFunction::new(vec![0.0, 0.0]).degree(), 0);
    }

    #[test]
    fn poly_gaussian_consistency() {
        let f = PolyGaussian::new(PolyFunction::new(vec![1.0, 0.5, 1.0]), 0.7);
        for &x in &[-1.3, 0.0, 0.4, 2.0] {
            let d = f.derivative(x).unwrap();
            let fd = fd_derivative(|t| f.eval(t), x, 1e-2);
            assert!((d - fd).norm() < 1e-10);
        }
        // even part 1 + x² against e^{-0.7x²}: c_2 = 1 - 0.7
        let t = f.taylor_even(3).unwrap();
        assert!((t[0] - 1.0).abs() < 1e-15);
        assert!((t[1] - 0.3).abs() < 1e-15);
        assert!((t[2] - (0.49 / 2.0 - 0.7)).abs() < 1e-15);
        assert!((f.odd_quotient(0.0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn odd_quotient_fallbacks() {
        let f = FnFunction::real(|x| x.sin() + x * x);
        assert!((f.odd_quotient(0.0).re - 1.0).abs() < 1e-10);
        assert!((f.odd_quotient(0.3).re - 0.3f64.sin() / 0.3).abs() < 1e-14);
        let g = FnFunction::real(f64::sin).with_derivative(|x| Complex64::new(x.cos(), 0.0));
        assert_eq!(g.odd_quotient(1e-12).re, 1.0);
    }

    #[test]
    fn fornberg_matches_known_stencils() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[1][0] + 0.5).abs() < 1e-15 && (w[1][2] - 0.5).abs() < 1e-15);
        assert!((w[2][0] - 1.0).abs() < 1e-15 && (w[2][1] + 2.0).abs() < 1e-15);
        // one-sided stencil on exp
        let nodes: Vec<f64> = (0..9).map(|k| 0.1 * k as f64).collect();
        let w = fornberg_weights(0.05, &nodes, 3);
        for (k, row) in w.iter().enumerate().skip(1) {
            let d: f64 = row.iter().zip(&nodes).map(|(c, x)| c * x.exp()).sum();
            assert!((d - 0.05f64.exp()).abs() < 1e-5 * 10f64.powi(k as i32), "k={k}: {d}");
        }
    }
}
