//! End-to-end tests of the `hsl` binary: exit-code contract, byte-level
//! determinism of seeded reports, and golden output of the canonical basis
//! dump.

use std::process::{Command, Output};

fn hsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsl"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn degeneration_check_exits_zero() {
    let out = hsl(&["check", "degeneration", "--m", "5..6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("k0_is_laplacian"));
    assert!(text.contains("0 failed"));
}

#[test]
fn ellipticity_m4_reports_singular_and_exits_zero() {
    let out = hsl(&["check", "ellipticity", "--m", "4", "--k", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("singular-as-expected"));
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = [
        "check",
        "ellipticity",
        "--m",
        "5",
        "--k",
        "1",
        "--seed",
        "17",
        "--format",
        "json",
    ];
    let a = hsl(&args);
    let b = hsl(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same request + seed must be byte-identical");
}

#[test]
fn unknown_suite_exits_nonzero() {
    let out = hsl(&["check", "not-a-suite"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_parameters_need_allow_large() {
    let out = hsl(&["check", "kernel", "--m", "9", "--k", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--allow-large"));
}

#[test]
fn max_dim_env_caps_m() {
    let out = Command::new(env!("CARGO_BIN_EXE_hsl"))
        .args(["check", "kernel", "--m", "6", "--k", "0", "--l", "2"])
        .env("HSL_MAX_DIM", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("HSL_MAX_DIM"));
}

#[test]
fn basis_dump_golden() {
    let out = hsl(&["dump", "basis", "--space", "Hkl", "--m", "5", "--k", "1", "--l", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let expected = "\
# space=Hkl m=5 k=1 l=1 dim=10
1/1 x2^1 u1^1 + -1/1 x1^1 u2^1
1/1 x3^1 u1^1 + -1/1 x1^1 u3^1
1/1 x3^1 u2^1 + -1/1 x2^1 u3^1
1/1 x4^1 u1^1 + -1/1 x1^1 u4^1
1/1 x4^1 u2^1 + -1/1 x2^1 u4^1
1/1 x4^1 u3^1 + -1/1 x3^1 u4^1
1/1 x5^1 u1^1 + -1/1 x1^1 u5^1
1/1 x5^1 u2^1 + -1/1 x2^1 u5^1
1/1 x5^1 u3^1 + -1/1 x3^1 u5^1
1/1 x5^1 u4^1 + -1/1 x4^1 u5^1
";
    assert_eq!(text, expected);
}

#[test]
fn dump_rejects_dominance_violation() {
    let out = hsl(&["dump", "basis", "--space", "Hkl", "--m", "5", "--k", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_check_json_shape() {
    let out = hsl(&[
        "check", "kernel", "--m", "5", "--k", "1", "--l", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let suite = &v["suites"][0];
    assert_eq!(suite["suite"], "kernel");
    assert_eq!(suite["params"]["m"], "5");
    assert_eq!(suite["checks"][0]["status"], "pass");
    assert!(suite["checks"][0]["witness"]
        .as_str()
        .unwrap()
        .contains("70"));
    assert!(suite.get("runtime_ms").is_none(), "timings are opt-in");
}

#[test]
fn report_all_empty_grid_exits_zero() {
    let out = hsl(&["report-all", "--m-max", "4", "--k-max", "1", "--l-max", "2"]);
    assert!(out.status.success());
}

#[test]
fn list_shows_suites_and_identities() {
    let out = hsl(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["symmetries", "ellipticity", "lemma41", "ueasl2_4", "Skl"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn report_all_writes_dimension_tables() {
    let dir = std::env::temp_dir().join(format!("hsl-tables-{}", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_hsl"))
        .args([
            "report-all",
            "--m-max",
            "5",
            "--k-max",
            "1",
            "--l-max",
            "2",
            "--tables-dir",
        ])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let kernel_table = std::fs::read_to_string(dir.join("kernel_dimensions.csv")).unwrap();
    assert!(kernel_table.starts_with("m,k,l,nullity,formula\n"));
    assert!(kernel_table.contains("5,1,2,70,70"));
    std::fs::remove_dir_all(&dir).ok();
}
