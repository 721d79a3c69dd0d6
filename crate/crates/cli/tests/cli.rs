use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driftflux")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn bundled(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/scenarios").join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn read_json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn verify_quad_regular_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = run(&["verify", "--scenario", &bundled("quad-regular"), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&report);
    assert_eq!(r["overall"], true);
    assert_eq!(r["scenario"], "quad-regular");
    assert_eq!(r["scenario_hash"].as_str().unwrap().len(), 64);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] == true && c.get("threshold").is_some()));
}

#[test]
fn bundled_names_resolve() {
    let o = run(&["verify", "--scenario", "quad-regular", "--suite", "residual"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["suite"], "residual");
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(bundled("quad-regular")).unwrap()).unwrap();
    s["verify"]["tolerances"] = serde_json::json!({"residual_fd": 1e-30});
    let p = dir.path().join("strict.json");
    std::fs::write(&p, s.to_string()).unwrap();
    let o = run(&["verify", "--scenario", p.to_str().unwrap(), "--suite", "residual"]);
    assert_eq!(code(&o), 1);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["overall"], false);
}

#[test]
fn malformed_json_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"name": "b", "solution": {"family": "ultra-singular", "u0": 0, "v0": 0}, "window": {"t": [0, 1], "x": "wide"}}"#,
    )
    .unwrap();
    let o = run(&["generate", "--scenario", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("window.x"));
    std::fs::write(&p, "{not json").unwrap();
    assert_eq!(code(&run(&["generate", "--scenario", p.to_str().unwrap()])), 2);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(code(&run(&["verify", "--scenario", "quad-regular", "--suite", "nope"])), 2);
    assert_eq!(code(&run(&["generate"])), 2);
    assert_eq!(code(&run(&["generate", "--scenario", "/nonexistent/s.json"])), 2);
    assert_eq!(code(&run(&["algebra", "--canonicalize", "D+*"])), 2);
    assert_eq!(code(&run(&["compare", "--scenario", "generic-regular"])), 2);
}

#[test]
fn ultra_singular_csv_has_constant_u_v() {
    let o = run(&["generate", "--scenario", &bundled("ultra-singular")]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,u,v,w,r1,r2,r3"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert!(rows.len() > 1);
    assert!(rows.iter().all(|r| r.len() == 8 && r[2] == rows[0][2] && r[3] == rows[0][3]));
    let ws: std::collections::BTreeSet<u64> = rows.iter().map(|r| r[4].to_bits()).collect();
    assert!(ws.len() > 1);
}

#[test]
fn canonicalize_example() {
    let o = run(&["algebra", "--canonicalize", "D+3Pt+2Px"]);
    assert_eq!(code(&o), 0);
    let c: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c["family"], 1);
    assert_eq!((c["a"].as_str(), c["b"].as_str()), (Some("0"), Some("0")));
}

#[test]
fn algebra_report_passes() {
    let o = run(&["algebra", "--seed", "11"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["report"]["overall"], true);
    assert!(!r["structure_constants"].as_array().unwrap().is_empty());
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [&["generate"][..], &["simulate", "--cells", "32", "--snapshots", "2"], &["compare"], &["verify"]] {
        let outs: Vec<Vec<u8>> = ["1", "3"]
            .iter()
            .map(|threads| {
                let p = dir.path().join(format!("o{threads}"));
                let mut args = cmd.to_vec();
                args.extend(["--scenario", "quad-regular", "--threads", threads, "--out", p.to_str().unwrap()]);
                let o = run(&args);
                assert_eq!(code(&o), 0, "{cmd:?}: {}", String::from_utf8_lossy(&o.stderr));
                std::fs::read(&p).unwrap()
            })
            .collect();
        assert_eq!(outs[0], outs[1], "{cmd:?}");
    }
}

#[test]
fn simulate_writes_frames_and_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sim.csv");
    let o = run(&[
        "simulate",
        "--scenario",
        "quad-regular",
        "--cells",
        "16",
        "--cfl",
        "0.5",
        "--t-end",
        "1.2",
        "--snapshots",
        "3",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&p).unwrap().lines().count(), 1 + 4 * 16);
    let table: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = table.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["t"], 1.2);
    assert_eq!(code(&run(&["simulate", "--scenario", "quad-regular", "--cfl", "3"])), 2);
}

#[test]
fn seed_changes_the_hash() {
    let a: serde_json::Value =
        serde_json::from_slice(&run(&["verify", "--scenario", "quad-regular", "--suite", "residual"]).stdout).unwrap();
    let b: serde_json::Value =
        serde_json::from_slice(&run(&["verify", "--scenario", "quad-regular", "--suite", "residual", "--seed", "99"]).stdout).unwrap();
    assert_ne!(a["scenario_hash"], b["scenario_hash"]);
}
