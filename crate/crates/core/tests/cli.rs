//! End-to-end checks of the `catcost` binary: output shapes, determinism,
//! config overrides, and exit codes.

use std::process::{Command, Output};

fn catcost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catcost"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn plan_prints_reference_multiset() {
    let output = catcost(&[
        "plan", "--copies", "60", "--scheme", "control", "--angles", "35", "--reps", "200",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.contains("plan: {3:7, 4:4, 5:2, 6:1, 8:1}"), "{text}");
    assert!(text.contains("excess: 2"), "{text}");
    assert!(text.contains("t_per_repetition: 28709"), "{text}");
}

#[test]
fn plan_json_carries_demand_and_yields() {
    let output = catcost(&[
        "plan", "--copies", "60", "--scheme", "excess", "--angles", "35", "--format", "json",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["towers"]["8"], 15);
    assert_eq!(value["tcount_per_repetition"], 45750);
    assert_eq!(value["demand"]["levels"][0], 60);
    assert_eq!(value["yields"][0], 60);
}

#[test]
fn sweep_csv_has_canonical_header_and_rows() {
    let output = catcost(&[
        "sweep", "--scenario", "poc", "--d-min", "11", "--d-max", "13", "--format", "csv",
    ]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "d,method,p_logical,n_logical,factory_phys,total_phys,volume"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("11,synthesis,"));
    assert!(rows[3].starts_with("13,synthesis,"));
}

#[test]
fn sweep_empty_range_prints_header_only() {
    let output = catcost(&[
        "sweep", "--scenario", "poc", "--d-min", "13", "--d-max", "11",
    ]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output).trim_end(),
        "d,method,p_logical,n_logical,factory_phys,total_phys,volume"
    );
}

#[test]
fn sweep_json_echoes_config_and_matches_csv() {
    let json_run = catcost(&[
        "sweep", "--scenario", "gaussian", "--d-min", "9", "--d-max", "11", "--format", "json",
    ]);
    assert!(json_run.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&json_run)).unwrap();
    assert_eq!(value["config"]["name"], "gaussian");
    assert!(value["config"]["assumptions"].as_array().unwrap().len() > 2);

    let csv_run = catcost(&[
        "sweep", "--scenario", "gaussian", "--d-min", "9", "--d-max", "11", "--format", "csv",
    ]);
    let csv_rows = catcost_rows(&stdout(&csv_run));
    let json_rows = value["rows"].as_array().unwrap();
    assert_eq!(csv_rows.len(), json_rows.len());
    for (csv_row, json_row) in csv_rows.iter().zip(json_rows) {
        assert_eq!(csv_row.0, json_row["d"].as_u64().unwrap() as u32);
        assert_eq!(csv_row.1, json_row["method"].as_str().unwrap());
        assert_eq!(csv_row.2, json_row["total_phys"].as_u64().unwrap());
    }
}

fn catcost_rows(csv: &str) -> Vec<(u32, String, u64)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            (fields[0].parse().unwrap(), fields[1].to_owned(), fields[5].parse().unwrap())
        })
        .collect()
}

#[test]
fn sweep_rejects_even_distances_with_exit_2() {
    let output = catcost(&["sweep", "--scenario", "poc", "--d-min", "4", "--d-max", "8"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_scenario_exits_2() {
    let output = catcost(&["sweep", "--scenario", "nope"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_overrides_apply() {
    let dir = std::env::temp_dir().join("catcost-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("override.toml");
    std::fs::write(
        &path,
        r#"
        [[methods]]
        name = "synthesis"
        n_t = 1.0
        "#,
    )
    .unwrap();
    let output = catcost(&[
        "sweep", "--scenario", "gaussian", "--d-min", "9", "--d-max", "9", "--format", "json",
        "--config", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let synthesis_row = &value["rows"][0];
    assert_eq!(synthesis_row["method"], "synthesis");
    // One T state over 177 steps needs a single factory's worth of qubits.
    assert!(synthesis_row["factory_phys"].as_u64().unwrap() < 100);

    let bad = std::env::temp_dir().join("catcost-cli-test/bad.toml");
    std::fs::write(&bad, "not_a_field = true").unwrap();
    let output = catcost(&[
        "sweep", "--scenario", "gaussian", "--config", bad.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn rus_depth_reports_estimate_exact_and_seed() {
    let output = catcost(&[
        "rus-depth", "--parallel", "5", "--layers", "7", "--copies", "60", "--samples", "2000",
        "--seed", "7",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let estimate = value["estimate"].as_f64().unwrap();
    let exact = value["exact"].as_f64().unwrap();
    assert!((38.0..=40.0).contains(&estimate));
    assert!((exact - 39.1637).abs() < 1e-3);
    assert_eq!(value["seed"], 7);
    assert_eq!(value["rng"], "chacha8");

    // Same seed, same estimate; different seed, different estimate.
    let again = catcost(&[
        "rus-depth", "--parallel", "5", "--layers", "7", "--copies", "60", "--samples", "2000",
        "--seed", "7",
    ]);
    assert_eq!(stdout(&output), stdout(&again));
}

#[test]
fn crossover_reports_gaussian_reference_point() {
    let output = catcost(&[
        "crossover", "--scenario", "gaussian", "--a", "excess", "--b", "synthesis", "--metric",
        "phys",
    ]);
    assert!(output.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(value["crossover_d"], 11);
}

#[test]
fn verify_exits_zero_and_emits_json_report() {
    let output = catcost(&["verify", "--trials", "2", "--seed", "3"]);
    assert!(output.status.success());
    let reports: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(reports.len() >= 10);
    for report in reports {
        assert_eq!(report["passed"], true, "{report}");
    }
}
