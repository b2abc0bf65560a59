mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use common::fixture;
use ftqc_core::engine::{AblationTable, PresetStore, ResourceEstimate};
use ftqc_core::hardware::HardwareModel;
use ftqc_core::profile::load_proxy_profile_str;
use ftqc_core::report::{read_csv, ComparisonRow, GridRow, Verdict};

fn ftqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftqc"))
        .args(args)
        .env_remove("FTQC_PRESET_DIR")
        .output()
        .unwrap()
}

fn ok_json(out: &Output) -> Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(rel: &str) -> String {
    fixture(rel).to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn estimate_writes_reloadable_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = ftqc(&[
        "estimate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    let s = ok_json(&out);
    assert!((s["runtime_days"].as_f64().unwrap() - 1.0).abs() < 0.1);

    let report = read_json(&dir.path().join("estimate.json"));
    let est: ResourceEstimate = serde_json::from_value(report["estimate"].clone()).unwrap();
    assert_eq!(est.physical_qubits_basic, 1_780_016);
    let hw: HardwareModel = serde_json::from_value(report["hardware_preset"].clone()).unwrap();
    assert_eq!(
        hw,
        PresetStore::builtin()
            .hardware("ion_trap_detailed")
            .unwrap()
    );
    assert!(!hw.provenance.is_empty());
    assert!(report["calibration_preset"]["provenance"]
        .as_object()
        .is_some_and(|p| !p.is_empty()));

    let rows: Vec<GridRow> = read_csv(&dir.path().join("estimate.csv")).unwrap();
    assert_eq!(rows, vec![GridRow::from(&est)]);
}

#[test]
fn estimate_overrides() {
    let s = ok_json(&ftqc(&[
        "estimate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--hardware",
        "neutral_atom_erasure",
        "--calibration",
        "paper-56o-na",
    ]));
    assert!((s["runtime_days"].as_f64().unwrap() - 0.73).abs() < 0.073);
    assert_eq!(s["written"], serde_json::json!([]));
}

#[test]
fn chem_example() {
    let s = ok_json(&ftqc(&[
        "chem",
        "--ledger",
        &f("chem/energies.csv"),
        "--reaction",
        "XVIII",
        "--method",
        "SHCI",
    ]));
    assert!((s["delta_e_hartree"].as_f64().unwrap() - 0.443483).abs() < 1e-5);
}

#[test]
fn chem_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let s = ok_json(&ftqc(&[
        "chem",
        "--ledger",
        &f("chem/energies.csv"),
        "--runs",
        &f("chem/runs.csv"),
        "--points",
        &f("chem/extrapolation_56o.csv"),
        "--temperature",
        "298.15",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(s["reactions"].as_array().unwrap().len(), 5);
    assert_eq!(s["runs"][0]["cpu_hours"], 167.0);
    assert_eq!(s["runs"][0]["cpu_hours_exact"], "167");
    assert!((s["extrapolated_energy"].as_f64().unwrap() + 7475.4404).abs() < 1e-6);
    let shci = s["reactions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["method"] == "SHCI")
        .unwrap();
    assert_eq!(shci["rate_ratio"], 1.0);
    assert_eq!(read_json(&dir.path().join("chem.json")), {
        let mut x = s.clone();
        x.as_object_mut().unwrap().remove("written");
        x
    });
}

#[test]
fn fit_example() {
    let s = ok_json(&ftqc(&[
        "fit",
        "--kind",
        "linear",
        "--points",
        &f("fits/quantum_days.csv"),
    ]));
    assert!((s["slope_or_rate"].as_f64().unwrap() - 0.0818).abs() < 5e-4);
    let s = ok_json(&ftqc(&[
        "fit",
        "--kind",
        "exponential",
        "--points",
        &f("fits/classical_days.csv"),
        "--reference",
        &f("fits/reference_fits.json"),
        "--at",
        "250",
    ]));
    assert!(s["reference_annotation"]
        .as_str()
        .unwrap()
        .starts_with("MISMATCH"));
    assert_eq!(
        s["reference_coefficients"],
        serde_json::json!([0.0465, 0.02763])
    );
}

#[test]
fn compare_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = ok_json(&ftqc(&[
        "compare",
        "--table",
        &f("fits/table2.csv"),
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]));
    let ion: Vec<f64> = s["verdict"]["speedups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["ion"].as_f64().unwrap())
        .collect();
    for (got, want) in ion.iter().zip([7.0, 5.8, 33.8]) {
        assert!((got - want).abs() < 0.05);
    }
    let rows: Vec<ComparisonRow> = read_csv(&dir.path().join("comparison.csv")).unwrap();
    assert_eq!(
        rows,
        read_csv::<ComparisonRow>(&fixture("fits/table2.csv")).unwrap()
    );
    let v: Verdict = serde_json::from_value(read_json(&dir.path().join("verdict.json"))).unwrap();
    assert!(v.quantum_advantage);
}

#[test]
fn compare_from_scenarios_and_runs() {
    let mut args = vec!["compare".to_string(), "--runs".into(), f("chem/runs.csv")];
    for size in ["56o", "100o", "150o"] {
        for platform in ["ion", "na"] {
            args.push("--scenario".into());
            args.push(f(&format!("scenarios/paper-{size}-{platform}.json")));
        }
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let s = ok_json(&ftqc(&args));
    let speedups = s["verdict"]["speedups"].as_array().unwrap();
    assert_eq!(speedups.len(), 3);
    assert!((speedups[0]["ion"].as_f64().unwrap() - 167.0 / 24.0).abs() < 0.01);
    assert!((speedups[2]["ion"].as_f64().unwrap() - 33.8).abs() < 0.2);
    assert_eq!(s["verdict"]["quantum_advantage"], true);
    let out = ftqc(&[
        "compare",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--runs",
        &f("chem/runs.csv"),
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("key mismatch"));
}

#[test]
fn parse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = ok_json(&ftqc(&[
        "parse",
        &f("circuits/small_block.qasm"),
        "--label",
        "small-block",
        "--block-encodings",
        "3017",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(s["profile"]["remote_cnot_per_block"], 9529);
    let text = std::fs::read_to_string(dir.path().join("profile.json")).unwrap();
    let back = load_proxy_profile_str(&text).unwrap();
    assert_eq!(back, PresetStore::builtin().profile("small-block").unwrap());
    assert!(dir.path().join("profile.csv").is_file());
}

#[test]
fn ablate_replay_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = ok_json(&ftqc(&[
        "ablate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--fixture",
        &f("ablation/s_table.json"),
        "--replay",
        "--sequential",
        "--output-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "json",
    ]));
    assert_eq!(s["monotonicity_violations"], 0);
    let report = read_json(&dir.path().join("ablation.json"));
    let table: AblationTable = serde_json::from_value(report["table"].clone()).unwrap();
    assert_eq!(table.rows.len(), 10);
    assert!(!dir.path().join("ablation.csv").exists());
}

#[test]
fn ablate_shared_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    ok_json(&ftqc(&[
        "ablate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--fixture",
        &f("ablation/s_table.json"),
        "--output-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "csv",
    ]));
    let rows: Vec<GridRow> = read_csv(&dir.path().join("ablation.csv")).unwrap();
    assert_eq!(rows.len(), 16);
    assert!(!dir.path().join("ablation.json").exists());
}

#[test]
fn preset_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let hw_dir = dir.path().join("hardware");
    std::fs::create_dir_all(&hw_dir).unwrap();
    let mut hw = PresetStore::builtin()
        .hardware("ion_trap_detailed")
        .unwrap();
    hw.scc_time *= 2.0;
    std::fs::write(
        hw_dir.join("ion_trap_detailed.json"),
        serde_json::to_string(&hw).unwrap(),
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ftqc"))
        .args(["estimate", "--scenario", &f("scenarios/paper-56o-ion.json")])
        .env("FTQC_PRESET_DIR", dir.path())
        .output()
        .unwrap();
    let s = ok_json(&out);
    assert!((s["runtime_days"].as_f64().unwrap() - 2.0).abs() < 0.01);
}

#[test]
fn exit_codes() {
    let missing = ftqc(&["estimate", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_dir = ftqc(&[
        "--preset-dir",
        "/nonexistent",
        "fit",
        "--kind",
        "linear",
        "--points",
        &f("fits/quantum_days.csv"),
    ]);
    assert_eq!(bad_dir.status.code(), Some(2));
    let usage = ftqc(&["estimate"]);
    assert_eq!(usage.status.code(), Some(2));
    let flags = ftqc(&[
        "estimate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--flags",
        "12",
    ]);
    assert_eq!(flags.status.code(), Some(2));
    let preset = ftqc(&[
        "estimate",
        "--scenario",
        &f("scenarios/paper-56o-ion.json"),
        "--hardware",
        "nope",
    ]);
    assert_eq!(preset.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("partial.csv");
    std::fs::write(
        &ledger,
        "species,method,energy_hartree,source\nI,HF,-1.0,x\n",
    )
    .unwrap();
    let partial = ftqc(&[
        "chem",
        "--ledger",
        ledger.to_str().unwrap(),
        "--method",
        "HF",
    ]);
    assert_eq!(partial.status.code(), Some(1));

    let qasm = dir.path().join("m.qasm");
    std::fs::write(&qasm, "qreg q[1]; creg c[1]; measure q[0] -> c[0];").unwrap();
    let unsupported = ftqc(&["parse", qasm.to_str().unwrap()]);
    assert_eq!(unsupported.status.code(), Some(1));

    let malformed = dir.path().join("bad.csv");
    std::fs::write(&malformed, "orbitals,days\n56,abc\n").unwrap();
    let bad_points = ftqc(&[
        "fit",
        "--kind",
        "linear",
        "--points",
        malformed.to_str().unwrap(),
    ]);
    assert_eq!(bad_points.status.code(), Some(2));
    let one_point = dir.path().join("one.csv");
    std::fs::write(&one_point, "orbitals,days\n56,1.0\n").unwrap();
    let underdetermined = ftqc(&[
        "fit",
        "--kind",
        "linear",
        "--points",
        one_point.to_str().unwrap(),
    ]);
    assert_eq!(underdetermined.status.code(), Some(1));
}
