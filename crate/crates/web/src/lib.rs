//! Three operations for the demo page. Errors come back as JavaScript
//! exceptions carrying the library's message.

use dunkl_core::func::PolyGaussian;
use dunkl_core::kernel::{dunkl_kernel, KernelMode};
use dunkl_core::quadrature::HalfLineRule;
use dunkl_core::sonine::{dual_sonine_apply, sonine_apply, SoninePair};
use dunkl_core::special::OrderParam;
use dunkl_core::transform::forward_point;
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// `[Re E_α(z), Im E_α(z)]`. `mode` is one of auto, series, bochner, bessel.
#[wasm_bindgen]
pub fn kernel(alpha: f64, re: f64, im: f64, mode: &str) -> Result<Vec<f64>, JsError> {
    let alpha = OrderParam::new(alpha).map_err(js_err)?;
    let mode: KernelMode = mode.parse().map_err(js_err)?;
    let v = dunkl_kernel(alpha, Complex64::new(re, im), mode).map_err(js_err)?;
    Ok(vec![v.re, v.im])
}

/// Dunkl transform of `x^n e^{-x²}` at `count` evenly spaced `λ` in
/// `[-lambda_max, lambda_max]`, flattened as `λ, Re F, Im F` triples.
#[wasm_bindgen]
pub fn transform_moment(alpha: f64, n: u32, lambda_max: f64, count: u32) -> Result<Vec<f64>, JsError> {
    let alpha = OrderParam::new(alpha).map_err(js_err)?;
    if count < 2 || !(lambda_max > 0.0 && lambda_max <= 40.0) {
        return Err(JsError::new("need count >= 2 and 0 < lambda_max <= 40"));
    }
    if n > 12 {
        return Err(JsError::new("moment order is limited to 12"));
    }
    let rule = HalfLineRule::new(alpha.weight_exponent(), 12.0, 16, 16).map_err(js_err)?;
    let f = PolyGaussian::moment(n as usize);
    let mut out = Vec::with_capacity(3 * count as usize);
    for k in 0..count {
        let l = -lambda_max + 2.0 * lambda_max * k as f64 / (count - 1) as f64;
        let v = forward_point(alpha, &rule, &f, l);
        out.extend([l, v.re, v.im]);
    }
    Ok(out)
}

/// `S_{α,β}` (or with `dual`, its dual) of `x^n e^{-x²}` at each `x`,
/// flattened as `x, Re, Im` triples.
#[wasm_bindgen]
pub fn sonine(alpha: f64, beta: f64, n: u32, xs: Vec<f64>, dual: bool) -> Result<Vec<f64>, JsError> {
    let pair = SoninePair::new(alpha, beta).map_err(js_err)?;
    let f = PolyGaussian::moment(n.min(12) as usize);
    let mut out = Vec::with_capacity(3 * xs.len());
    for x in xs {
        let v = if dual {
            dual_sonine_apply(pair, &f, x)
        } else {
            sonine_apply(pair, &f, x)
        }
        .map_err(js_err)?;
        out.extend([x, v.re, v.im]);
    }
    Ok(out)
}
