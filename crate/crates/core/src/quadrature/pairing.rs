use super::{gauss_legendre, semi_infinite_rule, KahanSum};
use crate::error::{DunklError, Result};
use crate::func::Callable;

/// Left end of the Gauss-Legendre piece; below it the Taylor series is used.
const SERIES_RADIUS: f64 = 0.5;
const SERIES_TERMS: usize = 120;
const POLE_TOL: f64 = 1e-9;

/// Value of `⟨|x|^λ, φ⟩`. At a pole `value` holds the finite part.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PairingResult {
    pub value: f64,
    pub pole_flag: bool,
    pub residue_estimate: Option<f64>,
}

/// Analytic continuation of `∫ |x|^λ φ(x) dx` in `λ`.
///
/// The even Taylor polynomial of `φ` up to `x^{taylor_order}` is subtracted on
/// `[0, 1]` and integrated in closed form. The remainder is summed term by
/// term on `[0, 1/2]`, integrated by Gauss-Legendre on `[1/2, 1]`, and the tail
/// beyond 1 is handled by the semi-infinite integrator. Only `Re φ` enters.
pub fn homogeneous_pairing(lambda: f64, phi: &dyn Callable, taylor_order: usize) -> Result<PairingResult> {
    let kmax = taylor_order / 2;
    if lambda + (2 * kmax) as f64 + 3.0 <= 0.0 {
        return Err(DunklError::TaylorOrderTooLow {
            lambda,
            needed: (-lambda - 3.0).ceil() as i64,
        });
    }
    let coeffs = phi
        .taylor_even(SERIES_TERMS.max(kmax + 1))
        .ok_or(DunklError::MissingTaylor)?;

    let mut pole = None;
    let mut acc = KahanSum::default();
    for (k, c) in coeffs.iter().enumerate().take(kmax + 1) {
        let denom = lambda + (2 * k) as f64 + 1.0;
        if denom.abs() < POLE_TOL {
            pole = Some(2.0 * c);
            continue;
        }
        acc.add(2.0 * c / denom);
    }

    // remainder on [0, x0]: Σ_{k>K} c_{2k} x0^{λ+2k+1}/(λ+2k+1)
    let x0 = SERIES_RADIUS;
    let mut series = KahanSum::default();
    for (k, c) in coeffs.iter().enumerate().skip(kmax + 1) {
        let e = lambda + (2 * k) as f64 + 1.0;
        let term = c * x0.powf(e) / e;
        series.add(term);
        if term.abs() < 1e-18 * series.value().abs().max(1e-300) && k > kmax + 4 {
            break;
        }
    }
    acc.add(2.0 * series.value());

    // remainder on [x0, 1]
    let taylor = |x: f64| {
        let x2 = x * x;
        coeffs[..=kmax.min(coeffs.len() - 1)]
            .iter()
            .rev()
            .fold(0.0, |s, c| s * x2 + c)
    };
    let gl = gauss_legendre(40);
    let middle = gl.integrate(|s| {
        let x = x0 + (1.0 - x0) * s;
        x.powf(lambda) * (phi.even(x).re - taylor(x))
    }) * (1.0 - x0);
    acc.add(2.0 * middle);

    // tail ∫_1^∞ x^λ φ_e(x) dx
    let tail = semi_infinite_rule(0.0, 1.0, 1e-17)?.integrate(|v| {
        let x = 1.0 + v;
        x.powf(lambda) * phi.even(x).re
    })?;
    acc.add(2.0 * tail);

    Ok(PairingResult {
        value: acc.value(),
        pole_flag: pole.is_some(),
        residue_estimate: pole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{FnFunction, PolyGaussian};
    use crate::special::gamma_signed;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_mellin_values() {
        let g = PolyGaussian::gaussian();
        let r = homogeneous_pairing(0.0, &g, 0).unwrap();
        assert!(!r.pole_flag && r.residue_estimate.is_none());
        assert!((r.value - PI.sqrt()).abs() < 1e-13);
        // Γ((λ+1)/2), continued
        for &lam in &[-2.0, -0.5, 0.7, 2.5, -2.6, -4.2] {
            let r = homogeneous_pairing(lam, &g, 8).unwrap();
            let want = gamma_signed((lam + 1.0) / 2.0);
            assert!((r.value - want).abs() < 1e-12 * want.abs(), "λ={lam}: {} vs {want}", r.value);
        }
        let r = homogeneous_pairing(-2.0, &g, 2).unwrap();
        assert!((r.value + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn poles_report_residues() {
        let g = PolyGaussian::gaussian();
        let r = homogeneous_pairing(-1.0, &g, 4).unwrap();
        assert!(r.pole_flag);
        assert_eq!(r.residue_estimate, Some(2.0));
        let r = homogeneous_pairing(-3.0, &g, 4).unwrap();
        assert_eq!(r.residue_estimate, Some(-2.0));
        // numeric extraction from both sides of the pole
        let eps = 1e-4;
        let up = homogeneous_pairing(-1.0 + eps, &g, 4).unwrap().value;
        let down = homogeneous_pairing(-1.0 - eps, &g, 4).unwrap().value;
        assert!((eps * (up - down) / 2.0 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn independent_of_taylor_order() {
        let g = PolyGaussian::new(crate::func::PolyFunction::new(vec![1.0, 0.3, 2.0]), 1.3);
        for &lam in &[-2.5, -0.4, 1.1] {
            let base = homogeneous_pairing(lam, &g, 4).unwrap().value;
            for order in [6, 10, 20] {
                let v = homogeneous_pairing(lam, &g, order).unwrap().value;
                assert!((v - base).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn errors() {
        let g = PolyGaussian::gaussian();
        assert!(matches!(
            homogeneous_pairing(-3.5, &g, 0),
            Err(DunklError::TaylorOrderTooLow { .. })
        ));
        let f = FnFunction::real(|x| (-x * x).exp());
        assert!(matches!(homogeneous_pairing(0.0, &f, 0), Err(DunklError::MissingTaylor)));
    }
}
