//! Quadrature rules for the singular weights that appear in every integral
//! representation: Jacobi rules on `[0, 1]`, composite half-line rules carrying
//! the weight `x^p`, a doubling semi-infinite integrator and the regularised
//! pairing against `|x|^λ`.

mod composite;
mod jacobi;
mod pairing;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{DunklError, Result};
use crate::special::OrderParam;

pub use composite::{HalfLineRule, Panel};
pub use jacobi::{gauss_legendre, jacobi_rule};
pub(crate) use jacobi::ln_beta;
pub use pairing::{homogeneous_pairing, PairingResult};

/// Default node count for single-interval Jacobi rules.
pub const DEFAULT_RULE_SIZE: usize = 64;
/// Default node count for each panel of the semi-infinite integrator.
pub const DEFAULT_TAIL_PANEL: usize = 48;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum RuleKind {
    GaussLegendre,
    GaussJacobi { a: f64, b: f64 },
    TailPanels,
}

/// Nodes and positive weights; the weight function is implied by `kind`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut acc = KahanSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(*x));
        }
        acc.value()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let mut acc = ComplexSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f(*x) * *w);
        }
        acc.value()
    }

    pub fn try_integrate_complex(&self, f: impl Fn(f64) -> Result<Complex64>) -> Result<Complex64> {
        let mut acc = ComplexSum::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f(*x)? * *w);
        }
        Ok(acc.value())
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Rule for `∫_0^π g(θ) sin^{2α}θ dθ`, obtained from `s = (1 - cos θ)/2`.
///
/// Nodes are returned as angles; weights already contain the `2^{2α}` factor.
pub fn theta_rule(alpha: OrderParam, n: usize) -> Result<QuadRule> {
    let e = alpha.value() - 0.5;
    let base = jacobi_rule(e, e, n)?;
    let scale = (2.0 * alpha.value() * std::f64::consts::LN_2).exp();
    Ok(QuadRule {
        nodes: base.nodes.iter().map(|s| 2.0 * s.sqrt().asin()).collect(),
        weights: base.weights.iter().map(|w| w * scale).collect(),
        kind: base.kind,
    })
}

/// Integrator for `∫_0^∞ v^p g(v) dv`: a Jacobi head on `[0, split]` followed by
/// doubling Gauss-Legendre panels until two successive panels are negligible.
#[derive(Debug, Clone)]
pub struct SemiInfiniteRule {
    sing_exp: f64,
    split: f64,
    tol: f64,
    head: Arc<QuadRule>,
    panel: Arc<QuadRule>,
    max_doublings: usize,
}

pub fn semi_infinite_rule(sing_exp: f64, split: f64, tol: f64) -> Result<SemiInfiniteRule> {
    if !(split > 0.0) {
        return Err(DunklError::InvalidInput(format!("split point must be positive, got {split}")));
    }
    Ok(SemiInfiniteRule {
        sing_exp,
        split,
        tol,
        head: jacobi_rule(0.0, sing_exp, DEFAULT_RULE_SIZE)?,
        panel: gauss_legendre(DEFAULT_TAIL_PANEL),
        max_doublings: 60,
    })
}

impl SemiInfiniteRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        self.integrate_complex(|v| Complex64::new(f(v), 0.0)).map(|z| z.re)
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Result<Complex64> {
        let h = self.split;
        let head = self.head.integrate_complex(|s| f(h * s)) * h.powf(self.sing_exp + 1.0);
        let mut acc = ComplexSum::default();
        acc.add(head);
        let mut quiet = 0;
        let mut lo = h;
        for _ in 0..self.max_doublings {
            let width = lo;
            let part = self
                .panel
                .integrate_complex(|s| {
                    let v = lo + width * s;
                    f(v) * v.powf(self.sing_exp)
                })
                * width;
            acc.add(part);
            let total = acc.value().norm();
            if part.norm() <= self.tol * total || total == 0.0 {
                quiet += 1;
                if quiet == 2 {
                    return Ok(acc.value());
                }
            } else {
                quiet = 0;
            }
            lo *= 2.0;
        }
        Err(DunklError::TailNotConverged(self.max_doublings))
    }

    /// Flattened rule on `[0, V]` with weights including `v^p`, `V` fixed by
    /// `doublings` panels after the split point.
    pub fn to_rule(&self, doublings: usize) -> QuadRule {
        let h = self.split;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let hs = h.powf(self.sing_exp + 1.0);
        for (s, w) in self.head.nodes.iter().zip(&self.head.weights) {
            nodes.push(h * s);
            weights.push(w * hs);
        }
        let mut lo = h;
        for _ in 0..doublings {
            for (s, w) in self.panel.nodes.iter().zip(&self.panel.weights) {
                let v = lo + lo * s;
                nodes.push(v);
                weights.push(w * lo * v.powf(self.sing_exp));
            }
            lo *= 2.0;
        }
        QuadRule {
            nodes,
            weights,
            kind: RuleKind::TailPanels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn op(a: f64) -> OrderParam {
        OrderParam::new(a).unwrap()
    }

    #[test]
    fn theta_rule_examples() {
        let r = theta_rule(op(0.5), 16).unwrap();
        assert!((r.integrate(|_| 1.0) - 2.0).abs() < 1e-14);
        let r = theta_rule(op(0.0), 16).unwrap();
        assert!((r.integrate(|_| 1.0) - PI).abs() < 1e-13);
        for &a in &[-0.3, 0.0, 0.7, 2.5] {
            let r = theta_rule(op(a), 24).unwrap();
            assert!(r.integrate(f64::cos).abs() < 1e-14);
            // ∫ sin^{2α}θ dθ = 2^{2α} B(α+1/2, α+1/2)
            let want = (2.0 * a * std::f64::consts::LN_2 + ln_beta(a + 0.5, a + 0.5)).exp();
            assert!((r.integrate(|_| 1.0) / want - 1.0).abs() < 1e-13);
            // a smooth integrand: ∫ cos²θ sin^{2α}θ dθ = B(α+1/2, 3/2)
            let want = ln_beta(a + 0.5, 1.5).exp();
            assert!((r.integrate(|t| t.cos().powi(2)) / want - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn semi_infinite_examples() {
        let r = semi_infinite_rule(-0.5, 1.0, 1e-16).unwrap();
        assert!((r.integrate(|v| (-v).exp()).unwrap() - PI.sqrt()).abs() < 1e-10);
        let r = semi_infinite_rule(0.0, 1.0, 1e-16).unwrap();
        assert!((r.integrate(|v| (-v).exp()).unwrap() - 1.0).abs() < 1e-12);
        let r = semi_infinite_rule(0.3, 1.0, 1e-16).unwrap();
        let want = statrs::function::gamma::gamma(0.65) / 2.0;
        assert!((r.integrate(|v| (-v * v).exp()).unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_flags_slow_tails() {
        let r = semi_infinite_rule(0.0, 1.0, 1e-14).unwrap();
        assert!(matches!(
            r.integrate(|v| 1.0 / (1.0 + v)),
            Err(DunklError::TailNotConverged(_))
        ));
    }

    #[test]
    fn flattened_tail_rule() {
        let r = semi_infinite_rule(-0.5, 1.0, 1e-16).unwrap().to_rule(6);
        assert_eq!(r.kind, RuleKind::TailPanels);
        assert!((r.integrate(|v| (-v).exp()) - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn compensated_sum() {
        let mut s = KahanSum::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-30);
    }
}
