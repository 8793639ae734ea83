use std::fs;
use std::process::Command;

fn nldiff() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nldiff"))
}

#[test]
fn version_and_check_list() {
    let out = nldiff().arg("--version").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));

    let out = nldiff().arg("--list-checks").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().any(|l| l.starts_with("oracle-crosscheck")));
}

#[test]
fn admissibility_run_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a.cfg");
    fs::write(&cfg, "kernel = gaussian(1)\nchecks = admissibility\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = nldiff().arg("run").arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = fs::read_to_string(out_dir.join("manifest.csv")).unwrap();
    assert!(manifest.contains("\nadmissibility,pass,"));
    let report = fs::read_to_string(out_dir.join("admissibility.csv")).unwrap();
    assert_eq!(report.lines().count(), 3);
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("box.cfg");
    fs::write(&cfg, "kernel = box(1)\nchecks = admissibility\n").unwrap();
    let out = nldiff().arg("run").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_config_exits_two_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "checks = decay\nn = 1000\nL = 40\n").unwrap();
    let out = nldiff().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("`n`") && err.contains("power of two"), "{err}");
}

#[test]
fn seed_flag_satisfies_randomized_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("id.cfg");
    fs::write(&cfg, "checks = id1\ncases = 3\n").unwrap();
    let out = nldiff().arg("run").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = nldiff()
        .args(["run", cfg.to_str().unwrap(), "--seed", "5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
