use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qmaxwell(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmaxwell"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn bundled(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name]
        .iter()
        .collect();
    p.to_str().unwrap().to_string()
}

#[test]
fn residual_writes_the_default_report_next_to_cwd() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmaxwell(
        &["residual", "--scenario", &bundled("exponential_medium.json")],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("exponential_medium.report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["scenario"], "exponential-medium");
    assert_eq!(v["pass"], true);
}

#[test]
fn explicit_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested.json");
    let out = qmaxwell(
        &[
            "residual",
            "--scenario",
            &bundled("planewave_h_doubled.json"),
            "--out",
            target.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert!(v["formulations"]["maxmain"]["max"].as_f64().unwrap() > 0.1);
    assert_eq!(v["equivalence"]["solution"], false);
}

#[test]
fn convergence_prints_a_fit() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmaxwell(
        &[
            "convergence",
            "--scenario",
            &bundled("gaussian_pulse_fd.json"),
            "--h",
            "1e-1,1e-2,1e-3",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let order = v["fitted_order"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&order));
}

#[test]
fn sources_are_sampled_on_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmaxwell(
        &["sources", "--scenario", &bundled("exponential_medium.json")],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 625);
}

#[test]
fn config_errors_exit_2_with_a_message() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"name\": \"x\", \"medium\": ").unwrap();
    std::fs::write(
        dir.path().join("unknown.json"),
        r#"{"name": "x", "medium": {"eps_r": "1", "mu_r": "1"},
            "fields": {"E": ["foo(x1)", "0", "0"], "H": ["0", "0", "0"]}}"#,
    )
    .unwrap();
    for args in [
        &["residual", "--scenario", "broken.json"][..],
        &["residual", "--scenario", "unknown.json"],
        &["frobnicate"],
        &["identities", "--seed", "minus-one"],
        &["convergence", "--scenario", "broken.json"],
    ] {
        let out = qmaxwell(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
