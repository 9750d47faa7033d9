use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gfp_core::asymptotics::{mu_limit, sweep, SweepResult};
use gfp_core::field::ScalarField;
use gfp_core::interaction::{perimeter, PerimeterBreakdown};
use gfp_core::kernel::kernel_k;
use gfp_core::spectral::{expand, spectral_seminorm_sq};
use gfp_core::{InteractionConfig, QuadratureSpec, Region};

fn gfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// `<command> value=<v> err=<e>` → (v, e)
fn summary(o: &Output, command: &str) -> (f64, f64) {
    let line = stdout(o);
    let line = line.trim();
    let rest = line
        .strip_prefix(command)
        .unwrap_or_else(|| panic!("unexpected summary {line:?}"));
    let mut it = rest.split_whitespace();
    let v = it
        .next()
        .unwrap()
        .strip_prefix("value=")
        .unwrap()
        .parse()
        .unwrap();
    let e = it
        .next()
        .unwrap()
        .strip_prefix("err=")
        .unwrap()
        .parse()
        .unwrap();
    (v, e)
}

fn write_set(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn half_line(dir: &Path) -> PathBuf {
    write_set(
        dir,
        "E.json",
        r#"{"dimension": 1, "set": {"intervals": [[0, "inf"]]}}"#,
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn kernel_matches_library_bitwise() {
    let o = gfp(&["kernel", "--sigma", "0.5", "--x", "0", "--y", "1"]);
    assert!(o.status.success());
    let (v, e) = summary(&o, "kernel");
    let lib = kernel_k(0.5, &[0.0], &[1.0], &QuadratureSpec::default()).unwrap();
    assert_eq!(v.to_bits(), lib.value.to_bits());
    assert_eq!(e.to_bits(), lib.error_bound.to_bits());

    let o = gfp(&[
        "kernel", "--sigma", "0.3", "--x", "-0.5,1", "--y", "0.25,-2",
    ]);
    let (v, _) = summary(&o, "kernel");
    let lib = kernel_k(0.3, &[-0.5, 1.0], &[0.25, -2.0], &QuadratureSpec::default()).unwrap();
    assert_eq!(v.to_bits(), lib.value.to_bits());
}

#[test]
fn kernel_usage_errors() {
    let o = gfp(&["kernel", "--sigma", "0.5", "--x", "0", "--y", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular input"));
    let o = gfp(&["kernel", "--sigma", "2.5", "--x", "0", "--y", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gfp(&["kernel", "--sigma", "0.5", "--x", "0", "--y", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limit_of_half_space() {
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    let o = gfp(&["limit", "--set", s(&e)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "limit value=0.5 err=0");

    let omega = write_set(
        dir.path(),
        "O.json",
        r#"{"dimension": 1, "set": {"intervals": [[-1, 1]]}}"#,
    );
    let (v, _) = summary(
        &gfp(&["limit", "--set", s(&e), "--omega", s(&omega)]),
        "limit",
    );
    let lib = mu_limit(
        &Region::interval(0.0, f64::INFINITY),
        &Region::interval(-1.0, 1.0),
    )
    .unwrap();
    assert_eq!(v, lib.mu);
}

#[test]
fn spectral_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    let o = gfp(&[
        "spectral",
        "--u",
        "chi",
        "--set",
        s(&e),
        "--s",
        "0.25",
        "--degree",
        "2000",
    ]);
    assert!(o.status.success());
    let (v, err) = summary(&o, "spectral");
    let field = ScalarField::indicator(&Region::interval(0.0, f64::INFINITY));
    let lib = spectral_seminorm_sq(&expand(&field, 2000, 4002).unwrap(), 0.25).unwrap();
    assert_eq!(v, lib.value);
    assert_eq!(err, lib.truncation);

    let o = gfp(&["spectral", "--u", "hermite", "--alpha", "1", "--s", "0.25"]);
    let (v, _) = summary(&o, "spectral");
    let field = ScalarField::hermite(vec![1]).unwrap();
    let lib = spectral_seminorm_sq(&expand(&field, 5, 64).unwrap(), 0.25).unwrap();
    assert_eq!(v, lib.value);

    assert_eq!(
        gfp(&["spectral", "--u", "chi", "--s", "0.25"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn perimeter_json_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    let omega = write_set(
        dir.path(),
        "O.json",
        r#"{"dimension": 1, "set": {"intervals": [[-1, 1]]}}"#,
    );
    let out1 = dir.path().join("p1.json");
    let out2 = dir.path().join("p2.json");
    for (out, workers) in [(&out1, "1"), (&out2, "2")] {
        let o = gfp(&[
            "--workers",
            workers,
            "perimeter",
            "--set",
            s(&e),
            "--omega",
            s(&omega),
            "--s",
            "0.5",
            "--out",
            s(out),
            "--format",
            "json",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b);

    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let parsed: PerimeterBreakdown = serde_json::from_value(doc["breakdown"].clone()).unwrap();
    let lib = perimeter(
        &Region::interval(0.0, f64::INFINITY),
        &Region::interval(-1.0, 1.0),
        0.5,
        &InteractionConfig::default(),
    )
    .unwrap();
    assert_eq!(parsed, lib);
}

#[test]
fn sweep_csv_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    let out = dir.path().join("sweep.csv");
    let o = gfp(&["sweep", "--set", s(&e), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "s,value,error,method");
    assert_eq!(rows.len(), 9);

    let s_list: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
    let lib = sweep(
        &Region::interval(0.0, f64::INFINITY),
        &Region::full(1),
        &s_list,
        &InteractionConfig::default(),
    )
    .unwrap();
    assert_eq!(csv, lib.to_csv());
    let (v, err) = summary(&o, "sweep");
    assert_eq!(v, lib.extrapolated_limit);
    assert_eq!(err, lib.uncertainty);
    assert_eq!(SweepResult::from_json(&lib.to_json()).unwrap(), lib);
}

#[test]
fn sweep_rejects_bad_order_list() {
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    assert_eq!(
        gfp(&["sweep", "--set", s(&e), "--s-list", "0.5,1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gfp(&["sweep", "--set", s(&e), "--s-list", "0.5,0.25"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn example_reports_lower_bound() {
    let o = gfp(&["example", "--pairs", "100", "--s", "0.5"]);
    assert!(o.status.success());
    let (v, err) = summary(&o, "example");
    let lib = gfp_core::asymptotics::divergent_example(100, 0.5, None).unwrap();
    assert_eq!(v, lib.lower_bound);
    assert_eq!(err, 0.0);
}

#[test]
fn io_errors_exit_three() {
    assert_eq!(
        gfp(&["limit", "--set", "/nonexistent/E.json"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let e = half_line(dir.path());
    let bad = dir.path().join("missing").join("out.csv");
    assert_eq!(
        gfp(&["limit", "--set", s(&e), "--out", s(&bad)])
            .status
            .code(),
        Some(3)
    );
    let garbled = write_set(dir.path(), "bad.json", "{\"dimension\": 1}");
    assert_eq!(gfp(&["limit", "--set", s(&garbled)]).status.code(), Some(2));
}
