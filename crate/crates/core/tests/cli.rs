//! End-to-end tests of the command-line interface: config validation, exit
//! codes, output formats and byte-level reproducibility.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pair-radiance"))
}

/// Reference binary config with fast numerics for the unoptimized test
/// binary.
fn binary_config(scenario: &str) -> serde_json::Value {
    let mass = 2.0 * 1.98892e30;
    let rho = 0.5 * mass / (4.0 / 3.0 * std::f64::consts::PI * 1e5f64.powi(3));
    serde_json::json!({
        "scenario": scenario,
        "system": {
            "mass_kg": mass,
            "mu": 0.5,
            "period_s": 3600.0,
            "radius1_m": 1e5,
            "radius2_m": 1e5,
            "density1_kg_m3": rho,
            "density2_kg_m3": rho,
            "kappa1": -0.5,
            "kappa2": -0.2
        },
        "numerics": { "gauss_order": 10, "mc_samples": 20000, "seed": 7,
                      "events": 400, "envelope_grid": 10, "grid_points": 9 }
    })
}

fn write_config(dir: &Path, name: &str, doc: &serde_json::Value) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path
}

fn csv_value(output: &str, key: &str) -> f64 {
    output
        .lines()
        .find(|line| line.starts_with(&format!("{key},")))
        .unwrap_or_else(|| panic!("row {key} missing in:\n{output}"))
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn power_reproduces_reference_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let out = bin().args(["power", "--config"]).arg(&config).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();

    let coefficient = csv_value(&text, "p_m_coefficient_of_2hbar_omega_per_t");
    assert!(
        (coefficient / 5.4e-27 - 1.0).abs() < 0.10,
        "coefficient {coefficient:e} not within 10% of 5.4e-27"
    );
    let waiting = csv_value(&text, "waiting_time_yr");
    assert!(waiting > 1e22, "waiting time {waiting:e}");
    // self-describing headers
    assert!(text.contains("# constants: G="));
    assert!(text.contains("# alpha_variant: paper"));
    assert!(text.contains("# config_sha256: "));
}

#[test]
fn integrals_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let run = || {
        let out = bin()
            .args(["integrals", "--config"])
            .arg(&config)
            .args(["--seed", "11"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn sample_output_is_reproducible_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let status = bin()
            .args(["sample", "--config"])
            .arg(&config)
            .args(["--seed", "3", "--out"])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&out_a).unwrap();
    assert_eq!(a, std::fs::read(&out_b).unwrap());

    let text = String::from_utf8(a).unwrap();
    assert!(text.contains("event,m,l1x,l1y,l1z,l2x,l2y,l2z,hel1,hel2"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 400);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[1], "2"); // metric source samples its m = 2 harmonic
        assert!(fields[8] == "L" || fields[8] == "R");
        assert!(fields[9] == "L" || fields[9] == "R");
        // the metric source emits opposite polarizations only
        assert_ne!(fields[8], fields[9]);
    }
}

#[test]
fn scan_produces_monotone_velocity_column() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = binary_config("compare");
    doc["scan"] = serde_json::json!({
        "parameter": "omega_rad_s",
        "from": 1e-4,
        "to": 1e-2,
        "points": 5
    });
    let config = write_config(dir.path(), "scan.json", &doc);
    let out = bin().args(["scan", "--config"]).arg(&config).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5);
    let v: Vec<f64> =
        rows.iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    for pair in v.windows(2) {
        assert!(pair[1] > pair[0], "v_R column not monotone: {v:?}");
    }
}

#[test]
fn rate_and_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_dielectric"));
    let out = bin()
        .args(["rate", "--config"])
        .arg(&config)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["command"], "rate");
    assert_eq!(doc["meta"]["config_sha256"].as_str().unwrap().len(), 64);
    assert!(doc["data"]["total_per_s"].as_f64().unwrap() > 0.0);
}

#[test]
fn alpha_variant_flag_changes_metric_rate() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let rate_with = |variant: &str| -> f64 {
        let out = bin()
            .args(["rate", "--config"])
            .arg(&config)
            .args(["--format", "json", "--alpha-variant", variant])
            .output()
            .unwrap();
        assert!(out.status.success());
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        doc["data"]["total_per_s"].as_f64().unwrap()
    };
    let paper = rate_with("paper");
    let rederived = rate_with("rederived");
    // the prefactors differ by 4π, the rates by (4π)²
    let expected = (4.0 * std::f64::consts::PI).powi(2);
    assert!(
        (paper / rederived / expected - 1.0).abs() < 1e-10,
        "paper/rederived = {}",
        paper / rederived
    );
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let run = |threads: &str| {
        let out = bin()
            .args(["integrals", "--config"])
            .arg(&config)
            .args(["--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn config_errors_exit_2_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = binary_config("binary_metric");
    doc["system"]["mu"] = serde_json::json!(1.5);
    let config = write_config(dir.path(), "bad.json", &doc);
    let out = bin().args(["power", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("mu") && stderr.contains("(0, 1)"), "{stderr}");

    let mut doc = binary_config("binary_metric");
    doc["system"]["unexpected_key"] = serde_json::json!(1.0);
    let config = write_config(dir.path(), "unknown.json", &doc);
    let out = bin().args(["power", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown field"));
}

#[test]
fn missing_config_exits_4() {
    let out = bin()
        .args(["power", "--config", "/nonexistent/nowhere.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn spectrum_table_is_symmetric_about_the_midpoint() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_dielectric"));
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&config)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let value = |i: usize| rows[i][1].as_f64().unwrap();
    for i in 0..rows.len() / 2 {
        let (a, b) = (value(i), value(rows.len() - 1 - i));
        assert!((a / b - 1.0).abs() < 1e-9, "spectrum asymmetric: {a} vs {b}");
    }
}

#[test]
fn angular_table_vanishes_at_the_poles_and_peaks_in_plane() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "binary.json", &binary_config("binary_metric"));
    let out = bin()
        .args(["angular", "--config"])
        .arg(&config)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["data"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][1].as_f64().unwrap(), 0.0);
    assert_eq!(rows[8][1].as_f64().unwrap(), 0.0);
    // normalized to a peak of one at χ = 0 (middle of the grid)
    assert!((rows[4][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn sphere_scenario_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let r = 1e-3 * 299_792_458.0;
    let doc = serde_json::json!({
        "scenario": "sphere",
        "system": {
            "radius_m": 0.01 * r,
            "kappa": -0.5,
            "orbit_radius_m": r,
            "omega_rad_s": 1.0
        },
        "numerics": { "gauss_order": 10 }
    });
    let config = write_config(dir.path(), "sphere.json", &doc);
    let out = bin().args(["power", "--config"]).arg(&config).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(csv_value(&text, "p_e_w") > 0.0);
    let metric_row = text.lines().find(|l| l.starts_with("p_m_w,")).unwrap();
    assert!(metric_row.contains("n/a"));
}
