use std::path::PathBuf;
use std::process::{Command, Output};

use dirac_yukawa::models;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-yukawa"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dirac-yukawa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn verify_all_passes_on_every_builtin() {
    for name in models::names() {
        let out = run(&["verify-all", "--model", name]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["pass"], true);
        assert_eq!(v["schema"], "dirac-yukawa-report");
    }
}

#[test]
fn shipped_model_file_runs() {
    let path = models_dir().join("ew_reference.toml");
    let out = run(&["masses", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn missing_and_truncated_inputs_exit_2() {
    let out = run(&["check", "--model", "/nonexistent/model.toml"]);
    assert_eq!(out.status.code(), Some(2));

    let text = models::ew_reference().to_toml().unwrap();
    let path = scratch("truncated.toml");
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = run(&["check", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("truncated.toml"));
}

#[test]
fn bad_tol_scale_exits_2() {
    let out = run(&["check", "--model", "ew-reference", "--tol-scale", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perturbed_hypercharge_fails_with_lemma_clause() {
    let path = scratch("perturbed.toml");
    std::fs::write(&path, models::ew_with_hypercharge(-2.1).to_toml().unwrap()).unwrap();
    let out = run(&["verify-all", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("yukawa.equivariance"), "{err}");
    assert!(err.contains("lemma."), "{err}");
}

#[test]
fn zero_seed_reports_saddle() {
    let mut cfg = models::ew_reference();
    cfg.higgs.get_mut().seed = vec![[0.0, 0.0]; 2];
    let path = scratch("saddle.toml");
    std::fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    let out = run(&["break", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["errors"][0].as_str().unwrap().contains("saddle"), "{v}");
}

#[test]
fn json_output_is_deterministic() {
    let a = run(&["verify-all", "--model", "u1xu1-wilson"]);
    let b = run(&["verify-all", "--model", "u1xu1-wilson"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_spectrum_round_trips() {
    let out = run(&["lattice", "--model", "ew-reference", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let values = dirac_yukawa::lattice_dirac::io::parse_spectrum_csv(&text).unwrap();
    // 16 sites x 2 spinor x 3 internal
    assert_eq!(values.len(), 96);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn dump_and_export() {
    let dir = scratch("dumps");
    let out = run(&["lattice", "--model", "u1-higgs", "--dump-operators", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let dumped = std::fs::read_to_string(dir.join("vacuum_dirac.json")).unwrap();
    let op = dirac_yukawa::lattice_dirac::io::load_operator(&dumped).unwrap();
    assert_eq!(op.dims(), (4, 2, 2));

    let out = run(&["export-model", "u1-higgs"]);
    assert_eq!(out.status.code(), Some(0));
    let shipped = std::fs::read(models_dir().join("u1_higgs.toml")).unwrap();
    assert_eq!(out.stdout, shipped);
}
