use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltfrechet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn export_counts() {
    let o = run(&["export"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 46);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",1")).count(), 34);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",0")).count(), 12);
}

#[test]
fn fit_round_trips_through_exported_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("data.csv");
    assert!(run(&["export", "--output", path.to_str().unwrap()]).status.success());
    let builtin = run(&["fit", "--data", "kersey1987"]);
    let from_file = run(&["fit", "--data", path.to_str().unwrap()]);
    assert!(builtin.status.success());
    assert_eq!(stdout(&builtin), stdout(&from_file));
    assert!(stdout(&builtin).starts_with("parameter,estimate,se,ci_lower,ci_upper\nalpha,"));
}

#[test]
fn fit_lt_weibull_rows() {
    let o = run(&["fit", "--data", "kersey1987", "--model", "lt-weibull"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(names, ["scale", "shape", "p", "neg_loglik", "aic", "aicc"]);
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--lambda", "4", "--alpha", "2", "--p", "0.3", "--censoring", "0.35", "--n", "30,60",
        "--replications", "40", "--seed", "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n,parameter,mre,mse,coverage,m_p,replications_used\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
}

#[test]
fn simulate_infeasible_censoring_is_usage_error() {
    let o = run(&["simulate", "--lambda", "2", "--alpha", "0.5", "--p", "0.5", "--censoring", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("censoring"));
}

#[test]
fn malformed_csv_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "time,status\n1.0,1\nabc,0\n").unwrap();
    let o = run(&["fit", "--data", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("abc"), "{err}");
}

#[test]
fn all_censored_compare_marks_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("censored.csv");
    fs::write(&path, "time,status\n1.0,0\n2.0,0\n3.0,0\n4.0,0\n5.0,0\n").unwrap();
    let o = run(&["compare", "--data", path.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("model,neg_loglik,aic,aicc,rank\n"));
    assert_eq!(text.matches("error:NoEvents").count(), 2, "{text}");
}

#[test]
fn curves_satisfy_identities() {
    let o = run(&[
        "curves", "--lambda", "2", "--alpha", "0.5", "--p", "0.3", "--points", "25", "--data", "kersey1987",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,pdf,cdf,survival,hazard,km"));
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[2] + v[3] - 1.0).abs() < 1e-14);
        assert!((v[4] * v[3] - v[1]).abs() <= 1e-12 * v[1].max(1e-300));
        assert!((0.0..=1.0).contains(&v[5]));
    }
}

#[test]
fn json_output_and_timestamp() {
    let o = run(&["compare", "--data", "kersey1987", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["model"], "lf");
    assert_eq!(v[0]["rank"], 1);
    let o = run(&["fit", "--data", "kersey1987", "--timestamp"]);
    assert!(stdout(&o).starts_with("# generated "));
}

#[test]
fn invalid_arguments_exit_2() {
    assert_eq!(run(&["fit", "--data", "kersey1987", "--model", "gamma"]).status.code(), Some(2));
    assert_eq!(run(&["curves", "--lambda", "-1", "--alpha", "1", "--p", "0.2"]).status.code(), Some(2));
    assert_eq!(
        run(&["fit", "--data", "kersey1987", "--ci-level", "1.5"]).status.code(),
        Some(2)
    );
}
