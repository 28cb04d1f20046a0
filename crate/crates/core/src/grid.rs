//! Functions sampled on a symmetric grid `±x_k`.
//!
//! The half-grid is a [`HalfLineRule`], so every sampled function carries
//! its own weighted quadrature. Values are stored at `+x_k` and `-x_k`
//! separately; the even part and the odd quotient `f_o(x)/x` are kept alongside
//! because both are smooth functions of `|x|` and interpolate cleanly.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DunklError, Result};
use crate::func::Callable;
use crate::quadrature::HalfLineRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Smoothness {
    Schwartz,
    PolyGaussian,
    Generic,
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    rule: Arc<HalfLineRule>,
    pos: Vec<Complex64>,
    neg: Vec<Complex64>,
    even: Vec<Complex64>,
    odd_quot: Vec<Complex64>,
    pub smoothness: Smoothness,
}

impl GridFunction {
    pub fn from_parts(
        rule: Arc<HalfLineRule>,
        pos: Vec<Complex64>,
        neg: Vec<Complex64>,
        smoothness: Smoothness,
    ) -> Result<Self> {
        if pos.len() != rule.len() || neg.len() != rule.len() {
            return Err(DunklError::GridMismatch(format!(
                "expected {} values per side, got {} and {}",
                rule.len(),
                pos.len(),
                neg.len()
            )));
        }
        let even = pos.iter().zip(&neg).map(|(p, n)| 0.5 * (p + n)).collect();
        let odd_quot = pos
            .iter()
            .zip(&neg)
            .zip(&rule.nodes)
            .map(|((p, n), x)| 0.5 * (p - n) / x)
            .collect();
        Ok(Self {
            rule,
            pos,
            neg,
            even,
            odd_quot,
            smoothness,
        })
    }

    /// Samples `f` at every grid point; evaluation runs in parallel with a fixed output order.
    pub fn sample(rule: Arc<HalfLineRule>, f: impl Fn(f64) -> Complex64 + Sync, smoothness: Smoothness) -> Self {
        let pos: Vec<Complex64> = rule.nodes.par_iter().map(|&x| f(x)).collect();
        let neg: Vec<Complex64> = rule.nodes.par_iter().map(|&x| f(-x)).collect();
        Self::from_parts(rule, pos, neg, smoothness).expect("lengths match by construction")
    }

    pub fn try_sample(
        rule: Arc<HalfLineRule>,
        f: impl Fn(f64) -> Result<Complex64> + Sync,
        smoothness: Smoothness,
    ) -> Result<Self> {
        let pos = rule.nodes.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        let neg = rule.nodes.par_iter().map(|&x| f(-x)).collect::<Result<Vec<_>>>()?;
        Self::from_parts(rule, pos, neg, smoothness)
    }

    pub fn from_callable(rule: Arc<HalfLineRule>, f: &dyn Callable, smoothness: Smoothness) -> Self {
        Self::sample(rule, |x| f.eval(x), smoothness)
    }

    pub fn zeros(rule: Arc<HalfLineRule>) -> Self {
        let n = rule.len();
        let z = vec![Complex64::new(0.0, 0.0); n];
        Self::from_parts(rule, z.clone(), z, Smoothness::Schwartz).expect("lengths match")
    }

    pub fn rule(&self) -> &Arc<HalfLineRule> {
        &self.rule
    }

    pub fn pos(&self) -> &[Complex64] {
        &self.pos
    }

    pub fn neg(&self) -> &[Complex64] {
        &self.neg
    }

    pub fn even_values(&self) -> &[Complex64] {
        &self.even
    }

    pub fn odd_quotients(&self) -> &[Complex64] {
        &self.odd_quot
    }

    /// Symmetric increasing grid.
    pub fn grid(&self) -> Vec<f64> {
        self.rule.full_grid()
    }

    /// Values in the order of [`GridFunction::grid`].
    pub fn values(&self) -> Vec<Complex64> {
        self.neg.iter().rev().chain(self.pos.iter()).copied().collect()
    }

    /// Pointwise map `v ↦ g(x, v)` on the same grid.
    pub fn map(&self, g: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let pos = self.rule.nodes.iter().zip(&self.pos).map(|(x, v)| g(*x, *v)).collect();
        let neg = self.rule.nodes.iter().zip(&self.neg).map(|(x, v)| g(-*x, *v)).collect();
        Self::from_parts(self.rule.clone(), pos, neg, self.smoothness).expect("same grid")
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    /// `∫ g(x, f(x)) |x|^p dx` over the symmetric grid.
    pub fn integrate_with(&self, g: impl Fn(f64, Complex64) -> Complex64) -> Complex64 {
        let mut acc = crate::quadrature::ComplexSum::default();
        for ((x, w), (p, n)) in self.rule.nodes.iter().zip(&self.rule.weights).zip(self.pos.iter().zip(&self.neg)) {
            acc.add((g(*x, *p) + g(-*x, *n)) * *w);
        }
        acc.value()
    }

    /// `∫ |f|² |x|^p dx`.
    pub fn norm_sq(&self) -> f64 {
        self.integrate_with(|_, v| Complex64::new(v.norm_sqr(), 0.0)).re
    }

    pub fn max_abs(&self) -> f64 {
        self.pos.iter().chain(&self.neg).map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.rule, &other.rule) || self.rule.same_partition(&other.rule) {
            Ok(())
        } else {
            Err(DunklError::GridMismatch("functions live on different grids".into()))
        }
    }

    /// Largest pointwise difference, absolute and relative to `max |reference|`,
    /// over the points where `|reference| >= mask · max |reference|`.
    pub fn compare(&self, reference: &GridFunction, mask: f64) -> Result<(f64, f64)> {
        self.check_same_grid(reference)?;
        let scale = reference.max_abs();
        let mut worst: f64 = 0.0;
        for (a, b) in self.pos.iter().chain(&self.neg).zip(reference.pos.iter().chain(&reference.neg)) {
            if b.norm() >= mask * scale {
                worst = worst.max((a - b).norm());
            }
        }
        let rel = if scale > 0.0 { worst / scale } else { worst };
        Ok((worst, rel))
    }

    fn interp_parts(&self, ax: f64) -> (Complex64, Complex64) {
        (
            self.rule.interpolate(&self.even, ax),
            self.rule.interpolate(&self.odd_quot, ax),
        )
    }
}

impl Callable for GridFunction {
    fn eval(&self, x: f64) -> Complex64 {
        let ax = x.abs();
        if ax > self.rule.length {
            return Complex64::new(0.0, 0.0);
        }
        let (e, q) = self.interp_parts(ax);
        e + q * x
    }

    fn derivative(&self, x: f64) -> Option<Complex64> {
        let ax = x.abs();
        if ax > self.rule.length {
            return Some(Complex64::new(0.0, 0.0));
        }
        let de = self.rule.interpolate_derivative(&self.even, ax);
        let q = self.rule.interpolate(&self.odd_quot, ax);
        let dq = self.rule.interpolate_derivative(&self.odd_quot, ax);
        Some(de * x.signum() + q + dq * ax)
    }

    fn support(&self) -> Option<f64> {
        Some(self.rule.length)
    }

    fn even(&self, z: f64) -> Complex64 {
        let az = z.abs();
        if az > self.rule.length {
            return Complex64::new(0.0, 0.0);
        }
        self.rule.interpolate(&self.even, az)
    }

    fn odd(&self, z: f64) -> Complex64 {
        self.odd_quotient(z) * z
    }

    fn odd_quotient(&self, z: f64) -> Complex64 {
        let az = z.abs();
        if az > self.rule.length {
            return Complex64::new(0.0, 0.0);
        }
        self.rule.interpolate(&self.odd_quot, az)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule() -> Arc<HalfLineRule> {
        Arc::new(HalfLineRule::new(1.0, 8.0, 8, 16).unwrap())
    }

    #[test]
    fn parity_split_is_exact() {
        let f = GridFunction::sample(rule(), |x| Complex64::new((x - 0.3).exp() * (-x * x).exp(), x), Smoothness::Schwartz);
        let g = f.grid();
        let v = f.values();
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        for (i, x) in g.iter().enumerate() {
            let j = g.len() - 1 - i;
            assert_eq!(g[j], -x);
            let fe = 0.5 * (v[i] + v[j]);
            let fo = 0.5 * (v[i] - v[j]);
            assert!((f.even(*x) - fe).norm() < 1e-15);
            assert!((f.odd(*x) - fo).norm() < 1e-14);
        }
    }

    #[test]
    fn interpolation_reproduces_smooth_functions() {
        let f = GridFunction::sample(rule(), |x| Complex64::new((1.0 + x) * (-x * x).exp(), 0.0), Smoothness::PolyGaussian);
        for &x in &[-3.3f64, -0.01, 0.0, 0.2, 1.7, 7.9] {
            let want = (1.0 + x) * (-x * x).exp();
            assert!((f.eval(x).re - want).abs() < 1e-12, "x={x}");
            let dwant = (1.0 - 2.0 * x * (1.0 + x)) * (-x * x).exp();
            assert!((f.derivative(x).unwrap().re - dwant).abs() < 1e-9, "x={x}");
        }
        assert_eq!(f.eval(8.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn weighted_norm_and_compare() {
        let f = GridFunction::sample(rule(), |x| Complex64::new((-x * x).exp(), 0.0), Smoothness::Schwartz);
        // ∫ e^{-2x²} |x| dx = 1/2
        assert!((f.norm_sq() - 0.5).abs() < 1e-14);
        let g = f.scale(Complex64::new(2.0, 0.0));
        let (abs, rel) = g.compare(&f, 0.0).unwrap();
        assert!((abs - 1.0).abs() < 1e-3 && (rel - 1.0).abs() < 1e-3);
        let other = GridFunction::zeros(Arc::new(HalfLineRule::new(1.0, 4.0, 4, 16).unwrap()));
        assert!(f.compare(&other, 0.0).is_err());
        assert!(GridFunction::from_parts(rule(), vec![], vec![], Smoothness::Generic).is_err());
    }
}
