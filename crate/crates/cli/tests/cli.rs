use std::fs;
use std::process::{Command, Output};

fn firelmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firelmp"))
        .args(args)
        .env_remove("WD_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_half_capacity_prices_bus_d_at_40() {
    let o = firelmp(&["solve", "--case", "pjm5.json", "--foc", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let d = text
        .lines()
        .find(|l| l.split_whitespace().next() == Some("d") && l.split_whitespace().count() >= 7)
        .expect("bus d row");
    assert_eq!(d.split_whitespace().nth(1), Some("40.0000"));
}

#[test]
fn missing_case_file_is_a_usage_error() {
    let o = firelmp(&["solve", "--case", "missing.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("case file not found"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn unknown_flag_exits_1() {
    let o = firelmp(&["solve", "--case", "pjm5", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_reports_infeasible_last_row() {
    let o = firelmp(&["sweep", "--case", "pjm5.json", "--foc", "1.0,0.75,0.5,0.25"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[3].contains("Infeasible"));
    assert!(rows[..3].iter().all(|r| r.contains("Optimal")));
}

#[test]
fn infeasible_solve_still_succeeds() {
    let o = firelmp(&["solve", "--case", "pjm5", "--foc", "0.25", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "Infeasible");
}

#[test]
fn json_solution_round_trips() {
    let o = firelmp(&["solve", "--case", "pjm5", "--foc", "0.75", "--format", "json"]);
    let doc: firelmp::SolutionDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.status, "Optimal");
    assert!((doc.flows["de"] + 180.0).abs() < 1e-6);
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(again, stdout(&o));
}

#[test]
fn identical_invocations_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = firelmp(&["n1", "--case", "pjm5", "--foc", "0.5", "--shedding", "--format", "csv", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn schema_violation_is_reported_in_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(
        &p,
        r#"{"name":"bad","buses":[{"id":"a","demand_mw":1},{"id":"b","demand_mw":1}],
            "lines":[{"id":"ab","from":"a","to":"b","reactance_pu":0,"at_risk":false}],
            "generators":[{"id":"g","bus":"a","cost_per_mwh":1,"p_max_mw":5}]}"#,
    )
    .unwrap();
    let o = firelmp(&["solve", "--case", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert_eq!(err.trim().lines().count(), 1);
    assert!(err.contains("reactance"));
}

#[test]
fn lmp_csv_has_one_row_per_bus() {
    let o = firelmp(&["lmp", "--case", "pjm5", "--foc", "0.5", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("bus,lmp,energy,congestion"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn perturb_serves_one_more_mw() {
    let o = firelmp(&["perturb", "--case", "pjm5", "--foc", "0.75", "--bus", "b", "--delta", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let served = v[1]["total_served"].as_f64().unwrap();
    assert!((served - 1001.0).abs() < 1e-6);
}

#[test]
fn run_bundled_scenario_and_fixture_dir() {
    let o = firelmp(&["run", "pjm5_derate", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 5);

    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("mini.json"), firelmp::fixtures::TWO_BUS_JSON).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_firelmp"))
        .args(["solve", "--case", "mini", "--foc", "0.5"])
        .env("WD_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("case: two_bus"));
}

#[test]
fn dump_ptdf_matches_library() {
    let o = firelmp(&["dump", "ptdf", "--case", "pjm5"]);
    let lib = firelmp::compute_ptdf::<f64>(&firelmp::fixtures::pjm5(), "a").unwrap().to_csv();
    assert_eq!(stdout(&o), lib);
}

#[test]
fn dump_flags_write_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("lp.txt");
    let ptdf = dir.path().join("ptdf.csv");
    let o = firelmp(&[
        "solve",
        "--case",
        "pjm5",
        "--foc",
        "optimized",
        "--dump-lp",
        lp.to_str().unwrap(),
        "--dump-ptdf",
        ptdf.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(fs::read_to_string(&lp).unwrap().contains("risk_cap[de][1]"));
    assert!(fs::read_to_string(&ptdf).unwrap().starts_with("line,"));
}

#[test]
fn bad_foc_value_exits_1() {
    let o = firelmp(&["solve", "--case", "pjm5", "--foc", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = firelmp(&["solve", "--case", "pjm5", "--foc", "abc"]);
    assert_eq!(o.status.code(), Some(1));
}
