//! Exit-code and artifact contract of the `dlab` binary.

use std::process::Command;

fn dlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
}

#[test]
fn list_estimates_exits_zero() {
    let out = dlab().arg("list-estimates").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["plancherel", "T12-I", "stein-weiss", "case3-commutator"] {
        assert!(text.contains(id), "missing {id} in list output");
    }
}

#[test]
fn verify_pass_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab()
        .current_dir(dir.path())
        .args(["verify", "pv-cancellation"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS"));
    assert!(dir.path().join("pv-cancellation.csv").exists());
    assert!(dir.path().join("pv-cancellation.json").exists());
}

#[test]
fn unknown_id_exits_three_and_lists_ids() {
    let out = dlab().args(["verify", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown estimate id"), "{err}");
    assert!(err.contains("plancherel"), "error must list valid ids: {err}");
}

#[test]
fn hypothesis_violation_exits_three() {
    let out = dlab()
        .args(["verify", "T12-I", "delta=0.3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("delta > 1/2"), "{err}");
}

#[test]
fn sweep_missing_key_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "estimate=pv-cancellation\nlambda=1\n").unwrap();
    let out = dlab().arg("sweep").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("missing required config key"), "{err}");
}

#[test]
fn sweep_deterministic_modulo_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "estimate=plancherel\nn=2\nL=10\nN=32\ncount=5\nseed=42\nout_csv=out.csv\nout_json=out.json\n",
    )
    .unwrap();
    let mut bodies = Vec::new();
    for _ in 0..2 {
        let out = dlab().current_dir(dir.path()).arg("sweep").arg(&cfg).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
        let (header, body) = text.split_once('\n').unwrap();
        assert!(header.starts_with("# generated "), "{header}");
        bodies.push(body.to_string());
    }
    assert_eq!(bodies[0], bodies[1], "CSV body must be byte-identical");
}

#[test]
fn selftest_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab().current_dir(dir.path()).arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 12);
    assert!(!text.contains("FAIL"));
}
