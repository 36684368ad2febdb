use std::path::Path;
use std::process::{Command, Output};

fn optrelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optrelay"))
        .args(args)
        .env_remove("OPTRELAY_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn eval(args: &[&str]) -> f64 {
    let mut full = vec!["eval"];
    full.extend_from_slice(args);
    let o = optrelay(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).trim().parse().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,series,analytic,simulated,stderr"));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * (1.0 + b.abs())
}

#[test]
fn eval_examples() {
    assert!((eval(&["mu", "--lambda", "1", "--d", "1", "--T", "2"]) - 4.91348).abs() < 5e-6);
    assert!((eval(&["s-star", "--rho", "0.3", "--snr-db", "5"]) - 0.6022).abs() < 1e-3);
    assert_eq!(eval(&["cdf-gamma-opt", "--gamma", "0.5", "--d", "1"]), 0.0);
    let listed = stdout(&optrelay(&["eval", "list"]));
    assert!(listed.lines().any(|l| l.starts_with("prob-mid-opt")));
}

#[test]
fn exit_codes() {
    assert_eq!(optrelay(&["experiment", "no-such-experiment", "--dry-run"]).status.code(), Some(2));
    assert_eq!(optrelay(&["eval", "no-such-quantity"]).status.code(), Some(2));
    assert_eq!(optrelay(&["eval", "mu"]).status.code(), Some(2));
    assert_eq!(optrelay(&["eval", "mu", "--lambda", "-1", "--T", "2"]).status.code(), Some(2));
    assert_eq!(optrelay(&["bogus"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "lambdas = 1, 2\nwho_knows = 3\n").unwrap();
    let o = optrelay(&["experiment", "outage-and-rate", "--config", cfg.to_str().unwrap(), "--dry-run"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_and_dry_run() {
    let listed = stdout(&optrelay(&["list-experiments"]));
    assert_eq!(listed.lines().count(), 10);
    let dir = tempfile::tempdir().unwrap();
    let o = optrelay(&["experiment", "outage-and-rate", "--dry-run", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!stdout(&o).is_empty());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nlambdas = 0.5, 1\nn_trials = 50\nts = 1.5\n").unwrap();
    let out = dir.path().to_str().unwrap();
    let o = optrelay(&["experiment", "feedback-load", "--config", cfg.to_str().unwrap(), "--lambdas", "2", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&dir.path().join("feedback-load.csv"));
    assert!(r.iter().all(|row| row[1].contains("lambda=2")));
    assert!(r.iter().all(|row| row[0] == "1.5"));
}

#[test]
fn csv_is_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["experiment", "nfb-distribution", "--trials", "500", "--seed", "9", "--out-dir"];
    let mut run_a = args.to_vec();
    run_a.push(a.path().to_str().unwrap());
    let mut run_b = args.to_vec();
    run_b.push(b.path().to_str().unwrap());
    run_b.push("--sequential");
    assert!(optrelay(&run_a).status.success());
    assert!(optrelay(&run_b).status.success());
    let fa = std::fs::read(a.path().join("nfb-distribution.csv")).unwrap();
    let fb = std::fs::read(b.path().join("nfb-distribution.csv")).unwrap();
    assert!(!fa.is_empty());
    assert_eq!(fa, fb);
}

#[test]
fn analytic_column_matches_eval() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = optrelay(&["experiment", "feedback-load", "--lambdas", "1,2", "--ts", "1.25,2", "--trials", "100", "--out-dir", out]);
    assert!(o.status.success());
    for row in rows(&dir.path().join("feedback-load.csv")) {
        let lambda = row[1].split("lambda=").nth(1).unwrap().split(' ').next().unwrap();
        let quantity = if row[1].starts_with("mu ") { "mu" } else { "prob-any-feedback" };
        let want = eval(&[quantity, "--lambda", lambda, "--d", "1", "--T", &row[0]]);
        assert!(close(row[2].parse().unwrap(), want), "{row:?} vs {want}");
    }

    let o = optrelay(&["experiment", "outage-and-rate", "--lambdas", "0.5,2", "--trials", "100", "--out-dir", out]);
    assert!(o.status.success());
    let mut checked = 0;
    for row in rows(&dir.path().join("outage-and-rate.csv")) {
        let (kind, rest) = row[1].split_once(' ').unwrap();
        let mut parts = rest.split(' ');
        let (policy, fading) = (parts.next().unwrap(), parts.next().unwrap());
        let quantity = match (kind, policy) {
            ("rate", "opt") => "rate",
            ("outage", "opt") => "outage",
            ("rate", "mid") => "rate-mid",
            ("outage", "mid") => "outage-mid",
            _ => continue,
        };
        let fading = if fading.contains("rayleigh") { "rayleigh" } else { "none" };
        let want = eval(&[quantity, "--lambda", &row[0], "--rho", "0.5", "--fading", fading]);
        assert!(close(row[2].parse().unwrap(), want) || (row[2].parse::<f64>().unwrap() - want).abs() < 1e-10, "{row:?} vs {want}");
        checked += 1;
    }
    assert!(checked >= 8, "checked {checked}");
}
