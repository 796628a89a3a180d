use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn randlind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randlind")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = randlind(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn all_pass(m: &Value) -> bool {
    m["all_checks_pass"].as_bool().unwrap()
}

#[test]
fn scatter_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        ok(&[
            "--experiment",
            "spectrum-scatter",
            "--seed",
            "11",
            "--set",
            "n=5",
            "--set",
            "n_samples=3",
            "--output",
            dir.to_str().unwrap(),
        ]);
    }
    let first = std::fs::read(a.join("spectrum.csv")).unwrap();
    assert_eq!(first, std::fs::read(b.join("spectrum.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    assert_eq!(lines.count(), 3 * 25);
    let m = manifest(&a);
    assert!(m["row_layout"].as_str().unwrap().contains("seed 11"));
    assert_eq!(m["config"]["seed"], 11);
    assert!(m["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert!(m.get("git_describe").is_some());
}

#[test]
fn echoed_config_reruns_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    ok(&[
        "--experiment",
        "dff-compare",
        "--seed",
        "5",
        "--set",
        "n=10",
        "--set",
        "n_samples=3",
        "--set",
        "times.points=12",
        "--output",
        first.to_str().unwrap(),
    ]);
    let echoed = tmp.path().join("echo.json");
    std::fs::write(&echoed, manifest(&first)["config"].to_string()).unwrap();
    let second = tmp.path().join("second");
    ok(&["--config", echoed.to_str().unwrap(), "--output", second.to_str().unwrap()]);
    assert_eq!(
        std::fs::read(first.join("dff.csv")).unwrap(),
        std::fs::read(second.join("dff.csv")).unwrap()
    );
    let text = std::fs::read_to_string(first.join("dff.csv")).unwrap();
    assert!(text.starts_with("t,F_numeric,F_analytic,stderr,n\n"));
    assert_eq!(text.lines().count(), 13);
}

#[test]
fn seed_is_mandatory_for_ensembles() {
    let out = randlind(&["--experiment", "gap-scaling", "--set", "n_list=[4,6]"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn invalid_configs_exit_nonzero() {
    for args in [
        &["--experiment", "density", "--set", "colour=red"][..],
        &["--experiment", "no-such-experiment"],
        &["--experiment", "dff-compare", "--seed", "1"],
        &["--experiment", "density", "--set", "v=-1"],
        &["--experiment", "density", "--set", "novalue"],
    ] {
        let out = randlind(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_file_and_overrides_layer() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"experiment": "gap-curve", "m": 2, "grid": {"min": 0.01, "max": 100, "points": 5, "log": true}}"#)
        .unwrap();
    let dir = tmp.path().join("out");
    ok(&["--config", cfg.to_str().unwrap(), "--set", "grid.points=9", "--output", dir.to_str().unwrap()]);
    let text = std::fs::read_to_string(dir.join("gap_curve.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("x,value"));
    assert_eq!(text.lines().count(), 10);
    let m = manifest(&dir);
    assert_eq!(m["config"]["m"], 2);
    assert!(all_pass(&m));
}

#[test]
fn gap_scaling_writes_fit() {
    let tmp = tempfile::tempdir().unwrap();
    ok(&[
        "--experiment",
        "gap-scaling",
        "--seed",
        "3",
        "--set",
        "n_list=[4,6,8,10]",
        "--set",
        "n_samples=20",
        "--output",
        tmp.path().to_str().unwrap(),
    ]);
    let fit = std::fs::read_to_string(tmp.path().join("fit.csv")).unwrap();
    assert!(fit.starts_with("param,estimate,stderr\nexponent,"));
    assert_eq!(std::fs::read_to_string(tmp.path().join("gaps.csv")).unwrap().lines().count(), 5);
}

#[test]
fn densities_and_special_functions_pass_their_checks() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["--experiment", "density"],
        &["--experiment", "density", "--set", "kind=gue", "--set", "v=0.5"],
        &["--experiment", "density", "--set", "model=multi-dissipator", "--set", "m=4"],
        &["--experiment", "density", "--set", "model=lvn"],
        &["--experiment", "density", "--set", "model=lindbladian", "--set", "gamma=0.3"],
        &["--experiment", "specfun-check"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let dir = tmp.path().join(k.to_string());
        let mut full = args.to_vec();
        full.extend(["--output", dir.to_str().unwrap()]);
        ok(&full);
        assert!(all_pass(&manifest(&dir)), "{args:?}");
    }
}

#[test]
fn ensemble_checks_run() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 3] = [
        &["--experiment", "lemma-check", "--seed", "4", "--set", "n_list=[4,8]", "--set", "n_samples=10"],
        &["--experiment", "moment-check", "--seed", "4", "--set", "n=4", "--set", "n_samples=400", "--set", "model=lvn"],
        &["--experiment", "self-averaging", "--seed", "4", "--set", "n_list=[4,8]", "--set", "n_samples=30"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let dir = tmp.path().join(k.to_string());
        let mut full = args.to_vec();
        full.extend(["--output", dir.to_str().unwrap()]);
        ok(&full);
        let m = manifest(&dir);
        assert!(!m["checks"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn ginibre_dff_tracks_the_closed_form() {
    // one N = 80 sample on the default time window
    let tmp = tempfile::tempdir().unwrap();
    let out = ok(&[
        "--experiment",
        "dff-compare",
        "--seed",
        "80",
        "--set",
        "n=80",
        "--output",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    assert!(all_pass(&manifest(tmp.path())));
}
