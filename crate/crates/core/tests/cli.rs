use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn fdcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdcap"))
        .args(args)
        .env_remove("FDCAP_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn micro() -> String {
    config("micro.conf").display().to_string()
}

#[test]
fn help_lists_flags() {
    let o = fdcap(&["sweep", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for flag in ["--sweep", "--from", "--to", "--points", "--log", "--grid", "--outputs", "--samples", "--seed", "--workers"] {
        assert!(text.contains(flag), "missing {flag}");
    }
    assert_eq!(fdcap(&["--version"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_one() {
    let o = fdcap(&["analyze", "/nonexistent/net.conf"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/net.conf"));

    assert_eq!(fdcap(&["analyze", &micro(), "--bogus"]).status.code(), Some(1));
    assert_eq!(fdcap(&["frobnicate"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.conf");
    let text = std::fs::read_to_string(config("micro.conf")).unwrap().replace("eta = 4", "eta = 2");
    std::fs::write(&flat, text).unwrap();
    let o = fdcap(&["analyze", flat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).to_lowercase().contains("diverge"), "{}", stderr(&o));

    let typo = dir.path().join("typo.conf");
    std::fs::write(&typo, "lamda = 5e-5\n").unwrap();
    assert_eq!(fdcap(&["analyze", typo.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn single_point_sweep() {
    let o = fdcap(&["sweep", &micro(), "--sweep", "p_bs", "--grid", "1", "--outputs", "fd_opt,fd_fixed"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "p_bs,fd_opt_kbps,fd_fixed_kbps");
    let cells: Vec<f64> = lines[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(cells[0], 1.0);
    assert!(cells[1] >= cells[2] * (1.0 - 1e-9) && cells[2] > 0.0);
}

#[test]
fn micro_power_sweep_shape() {
    let o = fdcap(&[
        "sweep", &micro(), "--sweep", "p_bs", "--grid", "0.1,0.2,0.5,1,2,5", "--outputs", "fd_opt,hd", "--samples", "20000",
        "--workers", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(rows.iter().all(|r| r[2] == rows[0][2]));
}

#[test]
fn validate_rejects_small_sample_counts() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("h.csv");
    let o = fdcap(&["validate", &micro(), "--samples", "1000", "--histogram", hist.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_is_reproducible_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, tag: &str| {
        let hist = dir.path().join(format!("hist_{tag}.csv"));
        let o = fdcap(&[
            "validate", &micro(), "--samples", "20000", "--seed", "7", "--workers", workers, "--histogram",
            hist.to_str().unwrap(),
        ]);
        assert!(matches!(o.status.code(), Some(0 | 3)), "{}", stderr(&o));
        (o.status.code(), stdout(&o), std::fs::read_to_string(hist).unwrap())
    };
    let first = run("1", "a");
    assert_eq!(first, run("1", "b"));
    assert_eq!(first, run("3", "c"));
    assert!(first.2.starts_with("bin_left,bin_right,density,gamma_pdf\n"));
    let report: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 4);
    assert_eq!(report["pass"].as_bool(), Some(first.0 == Some(0)));
}

#[test]
fn analyze_reports_provenance() {
    let o = fdcap(&["analyze", &micro(), "--samples", "10000", "--workers", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let opt = &report["c_fd_optimal"];
    assert_eq!(opt["provenance"], "quadrature");
    assert!(opt["value"].as_f64().unwrap() > 1e6);
}
