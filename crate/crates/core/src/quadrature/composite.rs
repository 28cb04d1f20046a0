use num_complex::Complex64;

use super::{gauss_legendre, jacobi_rule, ComplexSum};
use crate::error::{DunklError, Result};

/// One panel of a composite rule: `[lo, hi]` owns `nodes[start..end]`.
#[derive(Debug, Clone)]
pub struct Panel {
    pub lo: f64,
    pub hi: f64,
    pub start: usize,
    pub end: usize,
    bary: Vec<f64>,
}

/// Composite rule for `∫_0^L g(x) x^p dx` on equal panels.
///
/// The first panel uses a Jacobi rule for the weight `x^p`; the others are
/// Gauss-Legendre with `x^p` folded into the weights. The same nodes serve as
/// interpolation points, one polynomial per panel.
#[derive(Debug, Clone)]
pub struct HalfLineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub weight_exp: f64,
    pub length: f64,
    pub panels: Vec<Panel>,
}

impl HalfLineRule {
    pub fn new(weight_exp: f64, length: f64, n_panels: usize, order: usize) -> Result<Self> {
        if !(length > 0.0) || n_panels == 0 || order < 2 {
            return Err(DunklError::InvalidInput(format!(
                "half-line rule needs L > 0, panels > 0, order > 1 (got L={length}, panels={n_panels}, order={order})"
            )));
        }
        let h = length / n_panels as f64;
        let head = jacobi_rule(0.0, weight_exp, order)?;
        let gl = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(n_panels * order);
        let mut weights = Vec::with_capacity(n_panels * order);
        let mut panels = Vec::with_capacity(n_panels);
        let hp = h.powf(weight_exp + 1.0);
        for (s, w) in head.nodes.iter().zip(&head.weights) {
            nodes.push(h * s);
            weights.push(w * hp);
        }
        panels.push(Panel {
            lo: 0.0,
            hi: h,
            start: 0,
            end: order,
            bary: barycentric_weights(&head.nodes),
        });
        let gl_bary = barycentric_weights(&gl.nodes);
        for p in 1..n_panels {
            let lo = p as f64 * h;
            let start = nodes.len();
            for (s, w) in gl.nodes.iter().zip(&gl.weights) {
                let x = lo + h * s;
                nodes.push(x);
                weights.push(w * h * x.powf(weight_exp));
            }
            panels.push(Panel {
                lo,
                hi: lo + h,
                start,
                end: nodes.len(),
                bary: gl_bary.clone(),
            });
        }
        Ok(Self {
            nodes,
            weights,
            weight_exp,
            length,
            panels,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panel_width(&self) -> f64 {
        self.length / self.panels.len() as f64
    }

    /// Same partition as `other` (used to reject transforms across plans).
    pub fn same_partition(&self, other: &HalfLineRule) -> bool {
        self.len() == other.len()
            && self.length == other.length
            && self.weight_exp == other.weight_exp
            && self.panels.len() == other.panels.len()
    }

    /// Symmetric full grid `-x_{n-1} < … < -x_0 < x_0 < … < x_{n-1}`.
    pub fn full_grid(&self) -> Vec<f64> {
        self.nodes.iter().rev().map(|x| -x).chain(self.nodes.iter().copied()).collect()
    }

    fn panel_of(&self, x: f64) -> &Panel {
        let idx = ((x / self.panel_width()) as usize).min(self.panels.len() - 1);
        &self.panels[idx]
    }

    /// Interpolate node values at `0 <= x <= L`.
    pub fn interpolate(&self, values: &[Complex64], x: f64) -> Complex64 {
        let panel = self.panel_of(x);
        let xs = &self.nodes[panel.start..panel.end];
        let vs = &values[panel.start..panel.end];
        let h = panel.hi - panel.lo;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for ((xj, vj), wj) in xs.iter().zip(vs).zip(&panel.bary) {
            let d = (x - xj) / h;
            if d == 0.0 {
                return *vj;
            }
            let c = wj / d;
            num += vj * c;
            den += c;
        }
        num / den
    }

    /// Derivative of the panel interpolant at `0 <= x <= L`.
    pub fn interpolate_derivative(&self, values: &[Complex64], x: f64) -> Complex64 {
        let panel = self.panel_of(x);
        let xs = &self.nodes[panel.start..panel.end];
        let vs = &values[panel.start..panel.end];
        if let Some(j) = xs.iter().position(|&xj| xj == x) {
            // derivative at a node: p'(x_j) = Σ_k (w_k/w_j) (v_k - v_j)/(x_j - x_k)
            let wj = panel.bary[j];
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, (xk, vk)) in xs.iter().zip(vs).enumerate() {
                if k != j {
                    acc += (vk - vs[j]) * (panel.bary[k] / wj) / (x - xk);
                }
            }
            return acc;
        }
        let p = self.interpolate(values, x);
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for ((xj, vj), wj) in xs.iter().zip(vs).zip(&panel.bary) {
            let d = x - xj;
            let c = wj / d;
            num += (p - vj) * (c / d);
            den += c;
        }
        num / den
    }

    /// `∫_0^L g(x) x^p dx` from node samples of `g`.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = ComplexSum::default();
        for (w, v) in self.weights.iter().zip(values) {
            acc.add(v * *w);
        }
        acc.value()
    }
}

/// Barycentric weights `1/Π(x_j - x_k)` for nodes given on the unit interval.
pub(crate) fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect()
}
