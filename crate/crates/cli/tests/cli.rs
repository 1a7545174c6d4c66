//! Black-box tests of the `uhvforge` binary and the file schemas.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use uhvforge_cli::schema::ChamberFile;
use uhvforge_core::model::PortStandard;
use uhvforge_core::presets::example_chamber;

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

fn uhvforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uhvforge"))
        .args(args)
        .output()
        .expect("spawn uhvforge")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// A compact spec that meshes quickly at 1 mm voxels.
fn small_chamber_json(ports: bool) -> String {
    let mut spec = example_chamber();
    spec.core = uhvforge_core::model::CoreShape::Sphere { inner_radius_mm: 15.0 };
    spec.skin_thickness_mm = 2.0;
    spec.lattice_region.outer_offset_mm = 4.0;
    spec.lattice.cell_size_mm = 8.0;
    spec.lattice.boosts.clear();
    if !ports {
        spec.ports.clear();
    } else {
        spec.ports.truncate(6);
        for p in &mut spec.ports {
            p.bore_diameter_mm = 10.0;
            p.flange_outer_diameter_mm = 20.0;
        }
    }
    serde_json::to_string_pretty(&serde_json::json!({ "chamber": spec })).unwrap()
}

#[test]
fn bundled_chamber_matches_preset_with_ten_ports() {
    let bytes = fs::read(data("chamber.json")).unwrap();
    let file: ChamberFile = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(file.chamber, example_chamber());
    assert_eq!(file.chamber.ports.len(), 10);
    let cf40 =
        file.chamber.ports.iter().filter(|p| p.standard == PortStandard::CF40).count();
    assert_eq!(cf40, 2);
    assert!(file.reference_material.is_some());
}

#[test]
fn chamber_file_round_trip_is_stable() {
    let bytes = fs::read(data("chamber.json")).unwrap();
    let once: ChamberFile = serde_json::from_slice(&bytes).unwrap();
    let emitted = serde_json::to_string_pretty(&once).unwrap();
    let twice: ChamberFile = serde_json::from_str(&emitted).unwrap();
    assert_eq!(serde_json::to_string_pretty(&twice).unwrap(), emitted);
}

#[test]
fn missing_skin_thickness_is_named_in_the_error() {
    let mut value: serde_json::Value =
        serde_json::from_slice(&fs::read(data("chamber.json")).unwrap()).unwrap();
    value["chamber"].as_object_mut().unwrap().remove("skin_thickness_mm");
    let err = serde_json::from_value::<ChamberFile>(value).unwrap_err();
    assert!(err.to_string().contains("skin_thickness_mm"), "got: {err}");
}

#[test]
fn unknown_field_is_rejected_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut value: serde_json::Value =
        serde_json::from_slice(&fs::read(data("chamber.json")).unwrap()).unwrap();
    value["chamber"]["skin_color"] = serde_json::json!("red");
    fs::write(&path, serde_json::to_string_pretty(&value).unwrap()).unwrap();
    let out = uhvforge(&[
        "generate",
        "--spec",
        path.to_str().unwrap(),
        "--voxel-mm",
        "1.0",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("skin_color"), "got: {}", stderr(&out));
}

#[test]
fn generate_is_deterministic_and_analyzable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, small_chamber_json(true)).unwrap();
    let run = |out: &Path| {
        let r = uhvforge(&[
            "generate",
            "--spec",
            spec.to_str().unwrap(),
            "--voxel-mm",
            "1.0",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", stderr(&r));
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a);
    run(&b);

    let stl_a = fs::read(a.join("chamber.stl")).unwrap();
    assert_eq!(stl_a, fs::read(b.join("chamber.stl")).unwrap(), "STL bytes differ");
    let report =
        |p: &Path| -> serde_json::Value { serde_json::from_slice(&fs::read(p).unwrap()).unwrap() };
    let (ra, rb) = (report(&a.join("report.json")), report(&b.join("report.json")));
    assert_eq!(ra["metrics"], rb["metrics"]);
    assert_eq!(ra["input_digest_sha256"], rb["input_digest_sha256"]);
    assert_eq!(ra["metrics"]["watertight"]["value"], serde_json::json!(1.0));

    let out = uhvforge(&["analyze", "--mesh", a.join("chamber.stl").to_str().unwrap()]);
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("analyze JSON");
    assert_eq!(parsed["metrics"]["watertight"]["value"], serde_json::json!(1.0));
}

#[test]
fn zero_port_spec_reports_missing_axes_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("solid.json");
    fs::write(&spec, small_chamber_json(false)).unwrap();
    let out = uhvforge(&[
        "generate",
        "--spec",
        spec.to_str().unwrap(),
        "--voxel-mm",
        "1.0",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["metrics"]["watertight"]["value"], serde_json::json!(1.0));
    let warnings = report["warnings"].as_array().unwrap();
    assert!(
        warnings.iter().any(|w| w.as_str().unwrap().contains("optical access")),
        "warnings: {warnings:?}"
    );
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out_csv = dir.path().join(name);
        let r = uhvforge(&[
            "simulate",
            "--scenario",
            data("calib/fig4.json").to_str().unwrap(),
            "--out",
            out_csv.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", stderr(&r));
        fs::read(out_csv).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn simulate_degenerate_sampling_warns_with_single_sample() {
    let dir = tempfile::tempdir().unwrap();
    let mut scenario: serde_json::Value =
        serde_json::from_slice(&fs::read(data("bakeout.json")).unwrap()).unwrap();
    scenario["duration_s"] = serde_json::json!(100.0);
    scenario["output_dt_s"] = serde_json::json!(500.0);
    let path = dir.path().join("degenerate.json");
    fs::write(&path, serde_json::to_string(&scenario).unwrap()).unwrap();
    let out_csv = dir.path().join("trace.csv");
    let out = uhvforge(&[
        "simulate",
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(&out_csv).unwrap();
    // Header plus one sample for each of the two nodes.
    assert_eq!(csv.lines().count(), 3, "csv:\n{csv}");
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("trace.report.json")).unwrap())
            .unwrap();
    assert!(!report["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn fit_error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_json = dir.path().join("fit.json");

    // Header-only file: insufficient data, validation exit code.
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "time_min,temp_C,signal\n").unwrap();
    let out = uhvforge(&[
        "fit",
        "--data",
        empty.to_str().unwrap(),
        "--mode",
        "two-segment",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("insufficient data"), "got: {}", stderr(&out));

    // Negative signal names the row.
    let neg = dir.path().join("neg.csv");
    fs::write(&neg, "time_min,temp_C,signal\n0,20,1e-8\n1,20,1e-8\n2,20,-1e-8\n").unwrap();
    let out = uhvforge(&[
        "fit",
        "--data",
        neg.to_str().unwrap(),
        "--mode",
        "arrhenius",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 3"), "got: {}", stderr(&out));

    // Malformed number names the row too.
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "time_min,temp_C,signal\n0,20,1e-8\nnope,20,1e-8\n").unwrap();
    let out = uhvforge(&[
        "fit",
        "--data",
        bad.to_str().unwrap(),
        "--mode",
        "two-segment",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("row 2"), "got: {}", stderr(&out));

    // Missing input file: I/O exit code.
    let out = uhvforge(&[
        "fit",
        "--data",
        dir.path().join("absent.csv").to_str().unwrap(),
        "--mode",
        "two-segment",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn buildparams_rejects_nonpositive_inputs() {
    let out = uhvforge(&[
        "buildparams",
        "--power-w",
        "0",
        "--layer-um",
        "25",
        "--hatch-um",
        "80",
        "--point-um",
        "70",
        "--exposure-us",
        "220",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("laser_power_w"));
}

#[test]
fn analyze_missing_file_is_io_error() {
    let out = uhvforge(&["analyze", "--mesh", "/nonexistent/mesh.stl"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn bundled_emission_csv_fits_published_gradients() {
    let dir = tempfile::tempdir().unwrap();
    let out_json = dir.path().join("fit.json");
    let out = uhvforge(&[
        "fit",
        "--data",
        data("fig3g_synthetic.csv").to_str().unwrap(),
        "--mode",
        "two-segment",
        "--out",
        out_json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let fit: serde_json::Value =
        serde_json::from_slice(&fs::read(&out_json).unwrap()).unwrap();
    let g1 = fit["result"]["g1"].as_f64().unwrap();
    let g2 = fit["result"]["g2"].as_f64().unwrap();
    assert!((g1 - -5.1e-3).abs() / 5.1e-3 < 0.02, "g1 = {g1}");
    assert!((g2 - -9.1e-4).abs() / 9.1e-4 < 0.02, "g2 = {g2}");
    assert_eq!(fit["result"]["degenerate_breakpoint"], serde_json::json!(false));
}
