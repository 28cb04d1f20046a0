//! Floater-Hormann barycentric interpolation of scattered samples.

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::func::Callable;

/// Samples on a strictly increasing grid, interpolated by the Floater-Hormann
/// rational of blending degree `d`. Zero outside the sampled interval.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    xs: Vec<f64>,
    ys: Vec<Complex64>,
    weights: Vec<f64>,
}

impl SampledFunction {
    /// Fails on fewer than two samples, non-finite data or a grid that is not
    /// strictly increasing.
    pub fn new(xs: Vec<f64>, ys: Vec<Complex64>, d: usize) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(DunklError::InvalidInput(format!(
                "{} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(DunklError::InvalidInput("need at least two samples".into()));
        }
        if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
            return Err(DunklError::InvalidInput(format!("sample {} has a non-finite abscissa", i + 1)));
        }
        if let Some(i) = ys.iter().position(|y| !y.re.is_finite() || !y.im.is_finite()) {
            return Err(DunklError::InvalidInput(format!("sample {} has a non-finite value", i + 1)));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(DunklError::InvalidInput(format!(
                "grid is not strictly increasing at sample {} ({} after {})",
                i + 2,
                xs[i + 1],
                xs[i]
            )));
        }
        let weights = fh_weights(&xs, d.min(xs.len() - 1));
        Ok(Self { xs, ys, weights })
    }

    /// Like [`SampledFunction::new`], and additionally requires `x_k = -x_{n-1-k}`
    /// to within `1e-9` of the grid extent.
    pub fn symmetric(xs: Vec<f64>, ys: Vec<Complex64>, d: usize) -> Result<Self> {
        let f = Self::new(xs, ys, d)?;
        let n = f.xs.len();
        let tol = 1e-9 * f.xs[n - 1].abs().max(f.xs[0].abs());
        for k in 0..n / 2 {
            if (f.xs[k] + f.xs[n - 1 - k]).abs() > tol {
                return Err(DunklError::InvalidInput(format!(
                    "grid is not symmetric about 0: x[{}] = {} but x[{}] = {}",
                    k + 1,
                    f.xs[k],
                    n - k,
                    f.xs[n - 1 - k]
                )));
            }
        }
        Ok(f)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    /// Largest `|x|` covered by the samples.
    pub fn extent(&self) -> f64 {
        self.xs[0].abs().max(self.xs[self.xs.len() - 1].abs())
    }
}

fn fh_weights(xs: &[f64], d: usize) -> Vec<f64> {
    let n = xs.len() - 1;
    (0..=n)
        .map(|k| {
            let lo = k.saturating_sub(d);
            let hi = k.min(n - d);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let sum: f64 = (lo..=hi)
                .map(|i| (i..=i + d).filter(|&j| j != k).map(|j| 1.0 / (xs[k] - xs[j]).abs()).product::<f64>())
                .sum();
            sign * sum
        })
        .collect()
}

impl Callable for SampledFunction {
    fn eval(&self, x: f64) -> Complex64 {
        let (a, b) = (self.xs[0], self.xs[self.xs.len() - 1]);
        if !(a..=b).contains(&x) {
            return Complex64::new(0.0, 0.0);
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for ((xk, yk), wk) in self.xs.iter().zip(&self.ys).zip(&self.weights) {
            let diff = x - xk;
            if diff == 0.0 {
                return *yk;
            }
            let t = wk / diff;
            num += yk * t;
            den += t;
        }
        num / den
    }

    fn support(&self) -> Option<f64> {
        Some(self.extent())
    }
}
