use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn amr_gpc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amr-gpc")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ode");
    let res = amr_gpc(&[
        "run",
        "--experiment",
        "ode",
        "--p",
        "7",
        "--dump-mesh-at",
        "2,5",
        "--output",
        path(&out),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for name in [
        "moments.csv",
        "refinement.csv",
        "summary.json",
        "config.txt",
        "mesh_t2.csv",
        "mesh_t5.csv",
        "mesh_t10.csv",
    ] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let summary = fs::read_to_string(out.join("summary.json")).unwrap();
    assert!(summary.contains("\"elements\""));
    assert!(summary.contains("\"max_rel_error_variance\""));
    let header = fs::read_to_string(out.join("refinement.csv")).unwrap();
    assert!(header.starts_with("time,element,probability,q_hat,s1_1,s2_1,decision"));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let res = amr_gpc(&[
            "run",
            "--experiment",
            "ko2d",
            "--t-final",
            "2",
            "--reference",
            "none",
            "--output",
            path(out),
        ]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    }
    for name in ["moments.csv", "refinement.csv", "mesh_t2.csv", "summary.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn effective_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let res = amr_gpc(&[
        "run",
        "--experiment",
        "ko1d",
        "--t-final",
        "3",
        "--tol1",
        "1e-3",
        "--reference",
        "none",
        "--output",
        path(&first),
    ]);
    assert!(res.status.success());
    let second = dir.path().join("second");
    let res = amr_gpc(&[
        "run",
        "--config",
        path(&first.join("config.txt")),
        "--output",
        path(&second),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    for name in ["moments.csv", "refinement.csv"] {
        assert_eq!(
            fs::read(first.join(name)).unwrap(),
            fs::read(second.join(name)).unwrap()
        );
    }
}

#[test]
fn config_errors_list_every_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "[ode]\nfoo = 1\np = 5\nbar = 2\n").unwrap();
    let res = amr_gpc(&["run", "--config", path(&cfg)]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("foo") && err.contains("bar"), "{err}");
}

#[test]
fn invalid_flags_fail() {
    assert!(!amr_gpc(&["run", "--experiment", "ode", "--criterion", "s3"])
        .status
        .success());
    let res = amr_gpc(&["run", "--experiment", "ko2d", "--elements", "2", "--tol1", "-1"]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("elements") && err.contains("tol1"), "{err}");
    assert!(!amr_gpc(&["run", "--experiment", "heat"]).status.success());
}

#[test]
fn blowup_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let res = amr_gpc(&[
        "run",
        "--experiment",
        "burgers",
        "--mode",
        "global-collocation",
        "--dt",
        "0.5",
        "--t-final",
        "20",
        "--output",
        path(dir.path()),
    ]);
    assert!(!res.status.success());
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("blow-up") && err.contains("element"), "{err}");
}

#[test]
fn compare_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cmp.cfg");
    fs::write(
        &cfg,
        "[ode.global]\nmode = global-gpc\n[ode.amr]\n[ode.mc]\nmode = mc\nsamples = 200\n",
    )
    .unwrap();
    let table = dir.path().join("table.csv");
    let res = amr_gpc(&[
        "--workers",
        "1",
        "compare",
        "--config",
        path(&cfg),
        "--table",
        path(&table),
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    for label in ["reference", "ode.global", "ode.amr", "ode.mc"] {
        assert!(stdout.contains(label), "{stdout}");
    }
    let csv = fs::read_to_string(table).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn compare_rejects_mixed_references() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cmp.cfg");
    fs::write(&cfg, "[ko1d.a]\nreference = generate\n[ko1d.b]\nreference = none\n").unwrap();
    let res = amr_gpc(&["compare", "--config", path(&cfg)]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("validation"));
}
