//! Exit-code behavior, schema round-trips and option handling.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use fuzzyfolio_cli::scenario::Scenario;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzyfolio"))
}

fn scenario_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn reference_scenario() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/reference_m1.json")
}

#[test]
fn malformed_json_exits_2() {
    let f = scenario_file("{ not json");
    let out = bin().arg("solve").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn missing_file_exits_2() {
    let out = bin().arg("solve").arg("/nonexistent.json").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_normalized_weighting_exits_2() {
    // f(γ) = 3γ integrates to 1.5, violating the normality condition
    let f = scenario_file(
        r#"{
            "model": "M1",
            "market": { "w0": 1.0, "r": 0.02 },
            "investment": { "triangular": { "center": 0.03, "left_width": 0.2, "right_width": 0.2 } },
            "weighting": { "linear": { "slope": 3.0, "intercept": 0.0 } },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let out = bin().arg("solve").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("integral"), "stderr: {err}");
}

#[test]
fn over_specified_market_exits_2() {
    let f = scenario_file(
        r#"{
            "model": "M1",
            "market": { "w0": 1.0, "w": 1.02, "r": 0.02 },
            "investment": { "triangular": { "center": 0.03, "left_width": 0.2, "right_width": 0.2 } },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let out = bin().arg("solve").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn model_risk_kind_mismatch_exits_2() {
    let f = scenario_file(
        r#"{
            "model": "M4",
            "market": { "w0": 1.0, "r": 0.02 },
            "investment": { "triangular": { "center": 0.03, "left_width": 0.2, "right_width": 0.2 } },
            "background": { "point": 0.0 },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let out = bin().arg("solve").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_riskless_asset_exits_3() {
    // a point "risky" asset at the bond rate: zero approximation denominator
    let f = scenario_file(
        r#"{
            "model": "M1",
            "market": { "w0": 1.0, "r": 0.02 },
            "investment": { "point": 0.02 },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let out = bin().arg("solve").arg(f.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn sweep_without_sweep_block_exits_2() {
    let out = bin().arg("sweep").arg(reference_scenario()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scenario_round_trip_is_identity() {
    for path in [
        "../../scenarios/reference_m1.json",
        "../../scenarios/compare_all_models.json",
        "../../scenarios/wealth_sweep_crra.json",
        "../../scenarios/risk_scale_m1.json",
    ] {
        let full = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(path);
        let parsed = Scenario::from_path(&full).unwrap();
        let emitted = serde_json::to_string(&parsed).unwrap();
        let reparsed = Scenario::from_text(&emitted).unwrap();
        assert_eq!(parsed, reparsed, "round trip changed {path}");
    }
}

#[test]
fn json_output_carries_the_table_numbers_bit_identically() {
    let f = scenario_file(
        r#"{
            "model": "M1",
            "market": { "w0": 1.0, "r": 0.02 },
            "investment": { "triangular": { "center": 0.03, "left_width": 0.2, "right_width": 0.2 } },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let out = bin()
        .arg("solve")
        .arg(f.path())
        .args(["--output", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // shortest round-trip decimals re-read to the same bits
    let alpha = parsed["alpha_exact"].as_f64().unwrap();
    let re: f64 = alpha.to_string().parse().unwrap();
    assert_eq!(alpha.to_bits(), re.to_bits());
}

#[test]
fn node_count_overrides_are_honored() {
    let f = scenario_file(
        r#"{
            "model": "M1",
            "market": { "w0": 1.0, "r": 0.02 },
            "investment": { "triangular": { "center": 0.03, "left_width": 0.2, "right_width": 0.2 } },
            "utility": { "cara": { "lambda": 2.0 } }
        }"#,
    );
    let flag = bin()
        .arg("solve")
        .arg(f.path())
        .args(["--nodes", "32", "--output", "json"])
        .output()
        .unwrap();
    assert!(flag.status.success());
    let env = bin()
        .arg("solve")
        .arg(f.path())
        .env("PPF_QUAD_NODES", "32")
        .args(["--output", "json"])
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(flag.stdout, env.stdout);

    let bad = bin()
        .arg("solve")
        .arg(f.path())
        .args(["--nodes", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn selftest_passes_with_any_seed() {
    for seed in ["1", "42"] {
        let out = bin().arg("selftest").args(["--seed", seed]).output().unwrap();
        assert!(
            out.status.success(),
            "selftest --seed {seed} failed:\n{}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}
