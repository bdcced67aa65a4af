use std::process::{Command, Output};

fn unruh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unruh")).args(args).output().expect("spawn unruh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn csv_sweep_has_schema_header_and_rows() {
    let o = unruh(&["--points", "5", "sweep"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema: unruh-sweep/v1"));
    assert_eq!(
        lines.next(),
        Some("r,fe_closed,fe_kraus,s_ar,s_r,s_a,s_e,mutual_info,subadd_margin,tail,n_used")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|row| row.split(',').count() == 11));
}

#[test]
fn json_sweep_round_trips() {
    let o = unruh(&["--points", "3", "--r-max", "1", "--format", "json", "sweep"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "unruh-sweep/v1");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["r"], 1.0);
    assert!((rows[0]["mutual_info"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("unruh-cli-{}.csv", std::process::id()));
    let o = unruh(&["--points", "2", "--output", path.to_str().unwrap(), "sweep"]);
    assert!(o.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("# schema: unruh-sweep/v1\n"));
    assert_eq!(written.lines().count(), 4);
}

#[test]
fn point_reports_measures() {
    let o = unruh(&["point", "--r", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("entanglement fidelity      0.285171280763"));
    assert!(text.contains("mutual information"));
}

#[test]
fn bad_config_exits_two() {
    for args in [
        &["--points", "1", "sweep"][..],
        &["--r-min", "2", "--r-max", "1", "sweep"],
        &["--n-max", "4", "sweep"],
        &["point", "--r", "-1"],
        &["verify", "--points", "4", "--perturb-kraus", "49"],
        &["no-such-command"],
    ] {
        assert_eq!(unruh(args).status.code(), Some(2), "args {args:?}");
    }
}

#[test]
fn verify_passes_on_small_grid() {
    let o = unruh(&["--points", "8", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("checks passed"));
}

#[test]
fn insufficient_truncation_fails_tail_bound() {
    let o = unruh(&["--points", "8", "--n-max", "8", "verify"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failing check `tail_bound`"));
}
