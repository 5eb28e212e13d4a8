use std::process::{Command, Output};

fn qdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().skip(1);
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn ck_run_is_deterministic() {
    let args = ["ck", "--m", "1", "--omega", "1", "--gamma", "1", "--t", "0:5:0.1", "--out", "csv"];
    let a = qdo(&args);
    let b = qdo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("#schema=1\n"));
    let dqd = column(&text, "delta_qd");
    assert_eq!(dqd.len(), 51);
    assert!(dqd.iter().all(|v| v == "5.00000000000e-1"));
}

#[test]
fn bft_reference_row() {
    let o = qdo(&["bft", "--d-abs", "2", "--theta", "2.356194", "--momega", "1", "--t", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let d: f64 = column(&text, "delta_qd")[0].parse().unwrap();
    let dp: f64 = column(&text, "delta_qd_paper")[0].parse().unwrap();
    assert!((d - 0.166667).abs() < 1e-6);
    assert!((dp - 0.235702).abs() < 1e-6);
}

#[test]
fn coupled_json_and_inf() {
    let o = qdo(&["coupled", "--m", "1", "--omega1", "1", "--omega2", "1", "--lambda", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["delta_qd"], 0.5);
    assert_eq!(v["delta_cc"], "inf");
}

#[test]
fn sweep_through_zero_damping() {
    let o = qdo(&["sweep", "ck", "--vary", "gamma=-0.5..0.5:5"]);
    assert_eq!(o.status.code(), Some(0));
    let cc = column(&stdout(&o), "delta_cc");
    assert_eq!(cc.iter().filter(|c| *c == "inf").count(), 1);
    assert_eq!(cc[2], "inf");
}

#[test]
fn exit_codes() {
    assert_eq!(qdo(&["bft", "--theta", "135deg"]).status.code(), Some(1));
    assert_eq!(qdo(&["ck", "--k", "1", "--omega", "1"]).status.code(), Some(1));
    assert_eq!(qdo(&["ck", "--t", "5:0:1"]).status.code(), Some(1));
    assert_eq!(qdo(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qdo(&["sweep", "ck", "--vary", "lambda=0,1"]).status.code(), Some(1));
    assert_eq!(qdo(&["sweep", "ck", "--t", "0:10000:0.001", "--vary", "gamma=0..1:200"]).status.code(), Some(1));
    assert_eq!(qdo(&["ck", "--gamma", "2"]).status.code(), Some(2));
    assert_eq!(qdo(&["bft", "--theta", "1.0"]).status.code(), Some(2));
    assert_eq!(qdo(&["coupled", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(qdo(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_reports_named_checks() {
    let o = qdo(&["verify", "all"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    let fixed = text.lines().find(|l| l.contains("bft.particular.fixed_point")).unwrap();
    assert!(fixed.starts_with("PASS"));
    assert!(text.lines().filter(|l| l.starts_with("INFO  paper_discrepancy")).count() >= 3);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("rows.csv");
    std::fs::write(
        &cfg,
        "scenario = \"bft\"\nt = \"0:1:0.5\"\n[params]\nd_abs = 2.0\ntheta = 2.356194\nmomega = 1.0\n",
    )
    .unwrap();
    let o = qdo(&["bft", "--config", cfg.to_str().unwrap(), "--d-abs", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&text, "t").len(), 3);
    assert!(column(&text, "delta_qd").iter().all(|v| v == "5.00000000000e-1"));
    assert_eq!(qdo(&["ck", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}
