//! Gauss-Jacobi rules on `[0, 1]` for the weight `(1-s)^a s^b`.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix, found with an
//! implicit QL sweep (no eigenvectors), then polished by Newton steps: on the
//! three-term recurrence in the interior, on the hypergeometric series in the
//! distance to the endpoint for the outermost nodes. Weights come from the
//! derivative formula and are renormalised to the exact zeroth moment
//! `B(a+1, b+1)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;

use super::{QuadRule, RuleKind};
use crate::error::{DunklError, Result};

type Key = (u64, u64, usize);

static CACHE: Lazy<RwLock<HashMap<Key, Arc<QuadRule>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Cached Gauss-Jacobi rule with `n` nodes for `∫_0^1 g(s) (1-s)^a s^b ds`.
pub fn jacobi_rule(a: f64, b: f64, n: usize) -> Result<Arc<QuadRule>> {
    if !(a > -1.0) || !(b > -1.0) {
        return Err(DunklError::NonIntegrableWeight(a.min(b)));
    }
    if n == 0 {
        return Err(DunklError::InvalidInput("a quadrature rule needs at least one node".into()));
    }
    let key = (a.to_bits(), b.to_bits(), n);
    if let Some(rule) = CACHE.read().expect("rule cache poisoned").get(&key) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(build(a, b, n));
    CACHE
        .write()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert_with(|| rule.clone());
    Ok(rule)
}

/// Shifted Gauss-Legendre rule on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<QuadRule> {
    let mut rule = (*jacobi_rule(0.0, 0.0, n).expect("unit weight is always valid")).clone();
    rule.kind = RuleKind::GaussLegendre;
    Arc::new(rule)
}

/// `ln B(x, y)`.
pub(crate) fn ln_beta(x: f64, y: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

fn build(a: f64, b: f64, n: usize) -> QuadRule {
    let (diag, off) = jacobi_matrix(a, b, n);
    let mut x = tridiagonal_eigenvalues(diag, off);
    x.sort_by(|p, q| p.total_cmp(q));

    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for xi in x.iter_mut() {
        // Near an endpoint the recurrence in x cannot resolve 1 ∓ x to full
        // relative precision, so those nodes are refined in the distance to it.
        let sp = 0.5 * (1.0 - *xi);
        let sm = 0.5 * (1.0 + *xi);
        if nf * nf * sp < 8.0 {
            let (d, wt) = refine_near_end(a, b, n, sp);
            nodes.push(1.0 - d);
            w.push(wt);
        } else if nf * nf * sm < 8.0 {
            let (d, wt) = refine_near_end(b, a, n, sm);
            nodes.push(d);
            w.push(wt);
        } else {
            for _ in 0..3 {
                let (p, dp) = jacobi_eval(a, b, n, *xi);
                let step = p / dp;
                *xi -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = jacobi_eval(a, b, n, *xi);
            nodes.push(0.5 * (1.0 + *xi));
            w.push(1.0 / ((1.0 - *xi * *xi) * dp * dp));
        }
    }

    let total: f64 = w.iter().sum();
    let scale = ln_beta(a + 1.0, b + 1.0).exp() / total;
    let weights = w.iter().map(|wi| wi * scale).collect();
    QuadRule {
        nodes,
        weights,
        kind: RuleKind::GaussJacobi { a, b },
    }
}

/// Newton refinement of a node at distance `d = (1-x)/2` from the endpoint
/// `x = 1` using the hypergeometric form
/// `P_n^{(a,b)} = C(n+a, n) ₂F₁(-n, n+a+b+1; a+1; d)`. Returns the refined `d`
/// and the unnormalised weight `1/(d(1-d) F'(d)²)`.
fn refine_near_end(a: f64, b: f64, n: usize, mut d: f64) -> (f64, f64) {
    use statrs::function::gamma::ln_gamma;
    let nf = n as f64;
    let c = (ln_gamma(nf + a + 1.0) - ln_gamma(a + 1.0) - ln_gamma(nf + 1.0)).exp();
    let eval = |d: f64| {
        let (mut f, mut df) = (1.0, 0.0);
        let mut t = 1.0;
        for k in 1..=n {
            let kf = k as f64;
            t *= (kf - 1.0 - nf) * (nf + a + b + kf) / ((a + kf) * kf);
            df += kf * t * d.powi(k as i32 - 1);
            let term = t * d.powi(k as i32);
            f += term;
            if term.abs() < 1e-18 * f.abs().max(1e-300) && kf * kf > nf * nf * d {
                break;
            }
        }
        (c * f, c * df)
    };
    for _ in 0..6 {
        let (f, df) = eval(d);
        let step = f / df;
        d -= step;
        if step.abs() < 1e-17 * d {
            break;
        }
    }
    let (_, df) = eval(d);
    (d, 1.0 / (d * (1.0 - d) * df * df))
}

/// Diagonal and off-diagonal of the monic Jacobi matrix on `[-1, 1]` for
/// the weight `(1-x)^a (1+x)^b`.
fn jacobi_matrix(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let kf = k as f64;
        let d = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            let t = 2.0 * kf + ab;
            (b * b - a * a) / (t * (t + 2.0))
        };
        diag.push(d);
        if k >= 1 {
            let beta = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let t = 2.0 * kf + ab;
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (t * t * (t + 1.0) * (t - 1.0))
            };
            off.push(beta.sqrt());
        }
    }
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// `P_n^{(a,b)}(x)` and its derivative by the three-term recurrence.
fn jacobi_eval(a: f64, b: f64, n: usize, x: f64) -> (f64, f64) {
    let ab = a + b;
    let mut p0 = 1.0;
    let mut p1 = 0.5 * (a - b + (ab + 2.0) * x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let t = 2.0 * kf + ab;
        let c1 = 2.0 * kf * (kf + ab) * (t - 2.0);
        let c2 = (t - 1.0) * (t * (t - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * t;
        let p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let t = 2.0 * nf + ab;
    let dp = (nf * ((a - b) - t * x) * p1 + 2.0 * (nf + a) * (nf + b) * p0) / (t * (1.0 - x * x));
    (p1, dp)
}
