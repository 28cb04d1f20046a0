use std::collections::BTreeMap;

use dunkl_core::verify::{resolve_suites, run_suites, suite_of, tolerance_for, Sweep, SUITES};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn suite_names_resolve_in_fixed_order() {
    assert_eq!(resolve_suites(&names(&["all"])).unwrap(), SUITES.to_vec());
    let r = resolve_suites(&names(&["duality", "kernel-consistency", "duality"])).unwrap();
    assert_eq!(r, vec!["kernel-consistency", "duality"]);
    let err = resolve_suites(&names(&["kernel", "duality"])).unwrap_err().to_string();
    assert!(err.contains("kernel") && err.contains("plancherel-dual"), "{err}");
}

#[test]
fn overrides_take_precedence() {
    let mut o = BTreeMap::new();
    assert_eq!(tolerance_for("prop7-degenerate", "prop7", &o), 1e-8);
    o.insert("prop7".to_string(), 1e-3);
    assert_eq!(tolerance_for("prop7", "prop7", &o), 1e-3);
    assert_eq!(tolerance_for("prop7-degenerate", "prop7", &o), 1e-3);
    o.insert("prop7-degenerate".to_string(), 1e-2);
    assert_eq!(tolerance_for("prop7-degenerate", "prop7", &o), 1e-2);
}

#[test]
fn cheap_suites_pass_and_repeat_exactly() {
    let sweep = Sweep::single(0.5, Some(1.5)).unwrap();
    let suites = resolve_suites(&names(&["kernel-consistency", "duality", "sonine-product", "residue"])).unwrap();
    let a = run_suites(&suites, &sweep, &BTreeMap::new(), false).unwrap();
    let b = run_suites(&suites, &sweep, &BTreeMap::new(), false).unwrap();
    for s in &a {
        assert!(s.passed, "{}: {:?}", s.suite, s.reports);
        assert!(s.reports.iter().all(|r| r.elapsed_s == 0.0));
        assert!(s.reports.iter().all(|r| suite_of(&r.name) == Some(s.suite.as_str())));
    }
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn zero_tolerance_fails() {
    let sweep = Sweep::single(0.0, None).unwrap();
    let mut o = BTreeMap::new();
    o.insert("eigenrelation".to_string(), 0.0);
    let r = run_suites(&["eigenrelation"], &sweep, &o, true).unwrap();
    assert!(r[0].reports.iter().any(|r| r.max_rel_err > 0.0));
    assert!(!r[0].passed);
}

#[test]
fn single_sweep_validates_orders() {
    assert!(Sweep::single(-0.5, None).is_err());
    assert!(Sweep::single(1.0, Some(1.0)).is_err());
    assert!(Sweep::single(1.0, Some(0.5)).is_err());
}
