//! The `dirac` binary: exit codes, emitted manifests, and stable output.

use dirac_core::cli::manifest::Manifest;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn manifest(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../manifests").join(name)
}

fn dirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the timing line, the only part allowed to differ between runs.
fn without_timing(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("elapsed_ms:")).collect::<Vec<_>>().join("\n")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn contact_check_exits_zero() {
    let o = dirac(&["check", path_str(&manifest("contact.toml"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: jacobi: true; graph is Dirac: true"));
}

#[test]
fn not_jacobi_reports_obstruction() {
    let o = dirac(&["check", path_str(&manifest("not_jacobi.toml"))]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("verdict: jacobi: false; graph is Dirac: false"));
    assert!(out.lines().any(|l| l.starts_with("obstruction: [π,π]_s − 2E∧π ≠ 0")), "{out}");
}

#[test]
fn conformal_emit_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("la.toml");
    let o = dirac(&[
        "conformal",
        path_str(&manifest("contact.toml")),
        "--factor",
        "1+x^2",
        "--emit",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = dirac(&["check", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: dirac: true"));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.toml");
    assert_eq!(dirac(&["check", path_str(&missing)]).status.code(), Some(2));

    let broken = dir.path().join("broken.toml");
    std::fs::write(
        &broken,
        "coordinates = [\"x\", \"y\"]\n[structure]\nkind = \"bivector\"\npi = [{ indices = [0, 1], coeff = \"x/(y-y)\" }]\n",
    )
    .unwrap();
    let o = dirac(&["check", path_str(&broken)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero"));

    let o = dirac(&["admissible", path_str(&manifest("contact.toml")), "--function", "x +"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(dirac(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn other_commands_succeed() {
    let m = manifest("contact.toml");
    let m = path_str(&m);
    let plane = manifest("plane.toml");
    let runs: [&[&str]; 5] = [
        &["bracket", m, "--i", "0", "--j", "1"],
        &["admissible", m, "--function", "x*y"],
        &["poisson-bracket", m, "-f", "x", "-g", "z"],
        &["recover-jacobi", m],
        &["lift", path_str(&plane)],
    ];
    for args in runs {
        let o = dirac(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn reports_are_deterministic() {
    for name in ["contact.toml", "not_jacobi.toml", "lcps.toml", "nambu.toml", "homogeneous.toml", "plane.toml"] {
        let p = manifest(name);
        let a = stdout(&dirac(&["check", path_str(&p)]));
        let b = stdout(&dirac(&["check", path_str(&p)]));
        assert_eq!(without_timing(&a), without_timing(&b), "{name}");
        assert!(a.lines().any(|l| l.starts_with("elapsed_ms: ")));
    }
}

#[test]
fn manifest_round_trip_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["contact.toml", "not_jacobi.toml", "lcps.toml", "nambu.toml", "homogeneous.toml", "plane.toml"] {
        let m = Manifest::load(&manifest(name)).unwrap();
        let text = m.to_toml();
        let path = dir.path().join(name);
        m.save(&path).unwrap();
        let again = Manifest::load(&path).unwrap();
        assert_eq!(again, m, "{name}");
        assert_eq!(again.to_toml(), text, "{name}");
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text, "{name}");
    }
}
