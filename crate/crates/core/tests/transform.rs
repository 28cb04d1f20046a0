use std::sync::Arc;

use dunkl_core::func::PolyGaussian;
use dunkl_core::grid::{GridFunction, Smoothness};
use dunkl_core::operators::dunkl_operator;
use dunkl_core::sonine::SoninePair;
use dunkl_core::special::{gamma_signed, OrderParam};
use dunkl_core::transform::{
    apply_multiplier, build_plan, frac_power_kernel, inversion_a, k_operator, commutation_check, make_witness,
    multiplier_point, multiply_spectrum, plancherel_check, plancherel_dual, profile_derivatives_at_zero,
    witness_plan_config, KOperator, MultiplierSpec, PlanConfig, PlanPair, TransformPlan, WITNESS_SCALE,
};
use dunkl_core::DunklError;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use proptest::prelude::*;

fn op(a: f64) -> OrderParam {
    OrderParam::new(a).unwrap()
}

fn plan(a: f64) -> TransformPlan {
    build_plan(op(a), PlanConfig::default()).unwrap()
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

static WITNESS_PLANS: Lazy<PlanPair> = Lazy::new(|| {
    let cfg = witness_plan_config();
    let a = Arc::new(build_plan(op(0.5), cfg).unwrap());
    let b = Arc::new(build_plan(op(1.5), cfg).unwrap());
    PlanPair::new(SoninePair::new(0.5, 1.5).unwrap(), a, b).unwrap()
});

#[test]
fn gaussian_transforms() {
    let p = plan(0.0);
    let g = p.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz);
    let spec = p.forward(&g).unwrap();
    // ∫ e^{-x²} |x| dx = 1
    assert!((p.forward_at(&PolyGaussian::gaussian(), 0.0) - 1.0).norm() < 1e-14);
    for a in [-0.25, 0.5, 1.5] {
        let p = plan(a);
        let g0 = gamma_signed(a + 1.0);
        let spec = p.forward(&p.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz)).unwrap();
        for (l, v) in spec.grid().iter().zip(spec.values()) {
            if l.abs() <= 8.0 {
                assert!((v - g0 * (-l * l / 4.0).exp()).norm() < 1e-9, "α={a} λ={l}");
            }
        }
        // and back from the closed-form spectrum
        let s = p.sample_lambda(|l| real(g0 * (-l * l / 4.0).exp()), Smoothness::Schwartz);
        let back = p.inverse(&s).unwrap();
        for (x, v) in back.grid().iter().zip(back.values()) {
            assert!((v - (-x * x).exp()).norm() < 1e-10, "α={a} x={x}");
        }
    }
    // an even real input has an even real spectrum
    for (l, v) in spec.pos().iter().zip(spec.neg()) {
        assert!(l.im.abs() < 1e-16 && (l - v).norm() < 1e-16);
    }
}

#[test]
fn plan_validation() {
    let bad = PlanConfig { n_x: 0, ..PlanConfig::default() };
    assert!(matches!(build_plan(op(0.5), bad), Err(DunklError::InvalidInput(_))));
    let bad = PlanConfig { n_lambda: 100, ..PlanConfig::default() };
    assert!(matches!(build_plan(op(0.5), bad), Err(DunklError::InvalidInput(_))));
    let short = PlanConfig { length: 3.0, ..PlanConfig::default() };
    assert!(matches!(build_plan(op(0.5), short), Err(DunklError::PlanSelfTest { .. })));
}

#[test]
fn transform_is_linear_and_checks_grids() {
    let p = plan(0.5);
    let f = p.sample_x(|x| real((1.0 + x) * (-x * x).exp()), Smoothness::Schwartz);
    let s = p.forward(&f).unwrap();
    let s2 = p.forward(&f.scale(Complex64::new(0.0, 3.0))).unwrap();
    for (a, b) in s.values().iter().zip(s2.values()) {
        assert!((a * Complex64::new(0.0, 3.0) - b).norm() < 1e-14);
    }
    let other = plan(1.5);
    let g = other.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz);
    assert!(matches!(p.forward(&g), Err(DunklError::GridMismatch(_))));
}

#[test]
fn dunkl_operator_becomes_multiplication() {
    for a in [0.0, 0.5, 1.5] {
        let p = plan(a);
        let f = PolyGaussian::moment(1);
        let lf = GridFunction::try_sample(p.x_rule.clone(), |x| dunkl_operator(op(a), &f, x), Smoothness::Schwartz)
            .unwrap();
        let lhs = p.forward(&lf).unwrap();
        let rhs = p.forward(&p.resample(&f)).unwrap().map(|l, v| v * Complex64::new(0.0, l));
        for ((l, x), y) in lhs.grid().iter().zip(lhs.values()).zip(rhs.values()) {
            if l.abs() <= 8.0 {
                assert!((x - y).norm() < 1e-7, "α={a} λ={l}");
            }
        }
    }
}

#[test]
fn plancherel() {
    let p = plan(0.0);
    let g = p.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz);
    assert!((g.norm_sq() - 0.5).abs() < 1e-9);
    let r = plancherel_check(&p, &g).unwrap();
    assert!(r.max_rel_err < 1e-9);
    let p = plan(0.5);
    let f = p.sample_x(|x| real(x * (-x * x).exp()), Smoothness::Schwartz);
    // ∫ x² e^{-2x²} |x|² dx = 3√(π/2)/16
    let closed = 3.0 * (std::f64::consts::PI / 2.0).sqrt() / 16.0;
    assert!((f.norm_sq() - closed).abs() < 1e-12);
    assert!(plancherel_check(&p, &f).unwrap().max_rel_err < 1e-8);
    let zero = plancherel_check(&p, &GridFunction::zeros(p.x_rule.clone())).unwrap();
    assert_eq!(zero.max_abs_err, 0.0);
}

#[test]
fn second_power_is_minus_the_dunkl_laplacian() {
    for a in [0.0, 0.7] {
        let p = plan(a);
        let g = p.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz);
        let out = apply_multiplier(&p, &g, MultiplierSpec::new(2.0, 1.0).unwrap()).unwrap();
        assert!(out.warning.is_none());
        // -Λ_α² e^{-x²} = (4α + 4 - 4x²) e^{-x²}
        for (x, v) in out.result.grid().iter().zip(out.result.values()) {
            let want = (4.0 * a + 4.0 - 4.0 * x * x) * (-x * x).exp();
            assert!((v - want).norm() < 1e-6, "α={a} x={x}");
        }
    }
}

#[test]
fn negative_power_of_a_gaussian_is_flagged() {
    let p = plan(0.5);
    let g = p.sample_x(|x| real((-x * x).exp()), Smoothness::Schwartz);
    let out = apply_multiplier(&p, &g, MultiplierSpec::new(-1.2, 1.0).unwrap()).unwrap();
    assert!(out.warning.is_some());
    assert!(MultiplierSpec::new(1.0, f64::NAN).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multipliers_compose(e1 in -2.0f64..3.0, e2 in -2.0f64..3.0, s1 in 0.1f64..4.0, s2 in 0.1f64..4.0) {
        let p = &*WITNESS_PLANS.alpha;
        let spec = p.sample_lambda(|l| real((l * l + 0.3 * l) * (-l * l).exp()), Smoothness::Schwartz);
        let (m1, m2) = (MultiplierSpec::new(e1, s1).unwrap(), MultiplierSpec::new(e2, s2).unwrap());
        let twice = multiply_spectrum(&multiply_spectrum(&spec, m1), m2);
        let once = multiply_spectrum(&spec, m1.compose(m2));
        for (a, b) in twice.values().iter().zip(once.values()) {
            prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300));
        }
    }
}

#[test]
fn kernel_and_multiplier_routes_agree() {
    let g = PolyGaussian::gaussian();
    let p = plan(0.5);
    let m = MultiplierSpec::new(-1.0, 1.0).unwrap();
    let a = frac_power_kernel(op(0.5), -0.5, &g, 1.0).unwrap();
    let b = multiplier_point(&p, &g, m, 1.0).unwrap();
    assert!((a - b).norm() < 1e-4 * b.norm(), "{a} vs {b}");
    // even input, even output
    let c = frac_power_kernel(op(0.5), -0.5, &g, -1.0).unwrap();
    assert!((a - c).norm() < 1e-12 * a.norm());
    assert!(matches!(
        frac_power_kernel(op(0.5), -1.7, &g, 1.0),
        Err(DunklError::ExponentOutOfRange { .. })
    ));
}

#[test]
fn witnesses_have_vanishing_moments() {
    let p = &*WITNESS_PLANS.alpha;
    for m in 0..2 {
        let w = make_witness(p, m, WITNESS_SCALE).unwrap();
        // parity follows m
        let sign = if m == 0 { 1.0 } else { -1.0 };
        for (a, b) in w.f.pos().iter().zip(w.f.neg()) {
            assert!((a - b * sign).norm() < 1e-13 * w.f.max_abs());
        }
        // the first orders vanish to 1e-8; the last two are limited by rounding
        // in the far tail, where |y|^{k+2α+1} amplifies it
        for (k, mk) in w.moments.iter().enumerate() {
            let tol = if k < 4 { 1e-8 } else { 1e-5 };
            assert!(*mk <= tol, "m={m} k={k}: {mk}");
        }
    }
    let d = profile_derivatives_at_zero(0, WITNESS_SCALE, 5, 0.02);
    assert!(d.iter().all(|v| v.abs() < 1e-30));
    assert!(make_witness(p, 2, 1.0).is_err());
    assert!(make_witness(p, 0, -1.0).is_err());
}

#[test]
fn square_of_k3_is_k1() {
    let plans = &*WITNESS_PLANS;
    let w = make_witness(&plans.alpha, 1, WITNESS_SCALE).unwrap();
    let k3 = k_operator(KOperator::K3, plans, &k_operator(KOperator::K3, plans, &w.f).unwrap()).unwrap();
    let k1 = k_operator(KOperator::K1, plans, &w.f).unwrap();
    let (_, rel) = k3.compare(&k1, 1e-3).unwrap();
    assert!(rel < 1e-10, "{rel}");
    // K2 lives on the β-grid
    assert!(matches!(k_operator(KOperator::K2, plans, &w.f), Err(DunklError::GridMismatch(_))));
}

#[test]
fn pipelines_on_one_pair() {
    let plans = &*WITNESS_PLANS;
    let wb = make_witness(&plans.beta, 0, WITNESS_SCALE).unwrap();
    assert!(commutation_check(plans, &wb.f).unwrap().max_rel_err < 1e-4);
    assert!(inversion_a(plans, &wb.f).unwrap().max_rel_err < 1e-3);
    let r = plancherel_dual(plans, &wb.f).unwrap();
    assert!(r.max_rel_err < 1e-3);
    // doubling the input quadruples both sides
    let r2 = plancherel_dual(plans, &wb.f.scale(real(2.0))).unwrap();
    assert!((r2.max_abs_err - 4.0 * r.max_abs_err).abs() <= 1e-12 * wb.f.norm_sq());
    let zero = GridFunction::zeros(plans.beta.x_rule.clone());
    assert_eq!(inversion_a(plans, &zero).unwrap().max_abs_err, 0.0);
}

#[test]
fn plan_pairs_must_match() {
    let a = Arc::new(plan(0.5));
    let b = Arc::new(plan(1.5));
    let pair = SoninePair::new(0.5, 1.5).unwrap();
    assert!(PlanPair::new(pair, b.clone(), a.clone()).is_err());
    let c = Arc::new(build_plan(op(1.5), PlanConfig { n_x: 640, ..PlanConfig::default() }).unwrap());
    assert!(PlanPair::new(pair, a, c).is_err());
}
