use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dunkl");

fn dunkl(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn kernel_at_zero_is_one() {
    let o = dunkl(&["kernel", "--alpha", "0.5", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("z_re,z_im,E_re,E_im,mode,est_err\n"));
    let r = &rows(&text)[0];
    assert_eq!((num(&r[2]), num(&r[3])), (1.0, 0.0));
}

#[test]
fn kernel_modes_agree() {
    let o = dunkl(&["kernel", "--alpha", "0.5", "--z", "1", "--mode", "both"]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert_eq!((r[0][4].as_str(), r[1][4].as_str()), ("series", "bochner"));
    assert!((num(&r[0][2]) - num(&r[1][2])).abs() < 1e-12);
    let o = dunkl(&["kernel", "--alpha", "0.5", "--z", "1+2i", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["z_im"], 2.0);
    assert_eq!(v[0]["mode"], "auto");
}

#[test]
fn invalid_parameters_exit_two() {
    let o = dunkl(&["kernel", "--alpha", "-1", "--z", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("-1/2"));
    assert_eq!(dunkl(&["kernel", "--alpha", "0", "--z", "1+q"]).status.code(), Some(2));
    assert_eq!(dunkl(&["verify", "--alpha", "1", "--beta", "1"]).status.code(), Some(2));
    assert_eq!(dunkl(&["verify", "--tol", "nonsense"]).status.code(), Some(2));
    let o = dunkl(&["verify", "--suites", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("plancherel-dual"));
}

#[test]
fn tolerance_failures_exit_one() {
    let o = dunkl(&["verify", "--alpha", "0.5", "--suites", "kernel-consistency", "--tol", "kernel-consistency=0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = dunkl(&["verify", "--alpha", "0.5", "--beta", "1.5", "--suites", "sonine-product"]);
    assert_eq!(o.status.code(), Some(0));
}

fn write_gaussian(path: &Path, step: f64, n: i32) {
    let mut s = String::from("x,f_re,f_im\n");
    for i in -n..=n {
        let x = i as f64 * step;
        s.push_str(&format!("{x},{},0\n", (-x * x).exp()));
    }
    std::fs::write(path, s).unwrap();
}

#[test]
fn transform_of_sampled_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.csv");
    write_gaussian(&input, 0.02, 600);
    let o = dunkl(&["transform", "--alpha", "1.5", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    // Γ(5/2) e^{-λ²/4}
    let g = 0.75 * std::f64::consts::PI.sqrt();
    for r in rows(&stdout(&o)) {
        let l = num(&r[0]);
        if l.abs() <= 8.0 {
            assert!((num(&r[1]) - g * (-l * l / 4.0).exp()).abs() < 1e-9, "λ={l}");
        }
    }
    let o = dunkl(&["transform", "--alpha", "1.5", "--round-trip", "--input", input.to_str().unwrap()]);
    for r in rows(&stdout(&o)) {
        let x = num(&r[0]);
        assert!((num(&r[1]) - (-x * x).exp()).abs() < 1e-8, "x={x}");
    }
}

#[test]
fn transform_rejects_bad_grids() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    for body in ["x,f_re\n-1,1\n0,1\n2,1\n", "x,f_re\n-1,1\n1,1\n0,1\n", ""] {
        std::fs::write(&p, body).unwrap();
        let o = dunkl(&["transform", "--alpha", "0", "--input", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body:?}");
    }
}

#[test]
fn sonine_of_a_square() {
    let o = dunkl(&["sonine", "--alpha", "0", "--beta", "1", "--f", "poly:0;0;1", "--x", "2"]);
    let r = &rows(&stdout(&o))[0];
    assert!((num(&r[1]) - 2.0).abs() < 1e-13);
    let o = dunkl(&["sonine", "--alpha", "0", "--beta", "1", "--f", "poly:1", "--x", "1", "--dual"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out = dir.path().join("r.json");
    std::fs::write(&cfg, r#"{"alpha": 0.5, "beta": 1.5, "suites": ["sonine-product"], "format": "csv"}"#).unwrap();
    let o = dunkl(&["verify", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["params"]["beta"], 1.5);
    std::fs::write(&cfg, r#"{"alpha": 0.5, "colour": "red"}"#).unwrap();
    assert_eq!(dunkl(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn report_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "[]").unwrap();
    assert_eq!(stdout(&dunkl(&["report", empty.to_str().unwrap()])), "no reports\n");
    let a = dir.path().join("a.json");
    dunkl(&["verify", "--alpha", "0.5", "--suites", "residue", "--out", a.to_str().unwrap()]);
    let text = stdout(&dunkl(&["report", a.to_str().unwrap()]));
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("residue") && text.contains("pass"));
    let o = dunkl(&["report", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(BIN)
        .args(["kernel", "--alpha", "0", "--z", "1"])
        .env("DUNKL_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(BIN)
        .args(["kernel", "--alpha", "0", "--z", "1"])
        .env("DUNKL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
