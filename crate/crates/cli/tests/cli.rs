use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_helmholtz6"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn run_csv_has_header_and_one_row() {
    let o = cli(&["run", "--problem", "p1", "--n", "16", "--format", "csv", "--no-timing"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "problem,scheme,n,K,unknowns,err_max,err_l2,iters,residual,converged,seconds");
    assert_eq!(lines.len(), 2);
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols[..3], ["p1", "new", "16"]);
    assert_eq!(cols[10], "0.000");
}

#[test]
fn no_timing_output_is_byte_stable() {
    let args = ["sweep", "--problem", "p7", "--ns", "4,8", "--scheme", "baseline", "--no-timing"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn configuration_errors_exit_with_two() {
    let cases: [&[&str]; 6] = [
        &["run", "--problem", "p1", "--n", "2048"],
        &["run", "--problem", "p1", "--n", "16", "--ns", "16,32"],
        &["run", "--problem", "p1", "--l", "8", "--n", "16"],
        &["run", "--problem", "p9", "--n", "16"],
        &["run", "--problem", "p3", "--n", "16", "--tol", "-1"],
        &["analyze", "--problem", "zero2", "--n", "8", "--format", "csv"],
    ];
    for args in cases {
        let o = cli(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(code(&cli(&["run", "--bogus"])), 2);
}

#[test]
fn solver_failure_exits_with_one() {
    let o = cli(&["run", "--problem", "p3", "--n", "32", "--max-iter", "2", "--tol", "1e-14"]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_round_trips_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    std::fs::write(&file, "# p1 study\nproblem=p1\nn=16\nscheme=baseline\nmethod=direct\n").unwrap();
    let path = file.to_str().unwrap();
    let o = cli(&["run", "--config", path, "--n", "32", "--print-config"]);
    assert_eq!(code(&o), 0);
    let echoed = stdout(&o);
    assert_eq!(echoed, "problem=p1\nscheme=baseline\nn=32\nmethod=direct\n");

    let again = dir.path().join("echo.cfg");
    std::fs::write(&again, &echoed).unwrap();
    let o = cli(&["run", "--config", again.to_str().unwrap(), "--print-config"]);
    assert_eq!(stdout(&o), echoed);

    std::fs::write(&file, "problem=p1\nproblem=p2\n").unwrap();
    assert_eq!(code(&cli(&["run", "--config", path])), 2);
}

#[test]
fn sweep_both_writes_one_file_per_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let o = cli(&[
        "sweep",
        "--problem",
        "p1",
        "--ns",
        "8,16",
        "--scheme",
        "both",
        "--method",
        "direct",
        "--no-timing",
        "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for scheme in ["new", "baseline"] {
        let text = std::fs::read_to_string(out.join(format!("p1_{scheme}.csv"))).unwrap();
        assert_eq!(text.lines().count(), 3, "{text}");
    }
    assert!(!Path::new(&out.join("p1_both.csv")).exists());
}

#[test]
fn ksweep_and_pollution_headers() {
    let o = cli(&["ksweep", "--problem", "p3", "--ks", "5,10", "--n", "16", "--method", "direct"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("K,err_max_new,err_max_baseline\n5,"));
    let o = cli(&["pollution", "--problem", "p3", "--ks", "10,20", "--method", "direct"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("N,K,err_baseline,err_new\n20,10,"), "{text}");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn analyze_emits_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let o = cli(&[
        "analyze",
        "--problem",
        "zero2",
        "--k",
        "0",
        "--n",
        "8",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["strongly_connected"], true);
    assert_eq!(v["row_sums_asserted"], true);
    assert_eq!(v["unknowns"], 49);
}
