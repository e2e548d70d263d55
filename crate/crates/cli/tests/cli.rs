use std::path::PathBuf;
use std::process::{Command, Output};

fn jnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jnlab"))
        .args(args)
        .env("JNLAB_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jnlab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn bell_verify_prints_three_passing_certificates() {
    let out = jnlab(&["bell", "verify"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let certs = v.as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert!(certs.iter().all(|c| c["status"]["state"] == "pass"));
}

#[test]
fn base_below_three_is_a_parse_error() {
    let out = jnlab(&["measure", "--N", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--N"));
}

#[test]
fn unknown_config_key_reports_line() {
    let dir = scratch("badcfg");
    let cfg = dir.join("suite.cfg");
    std::fs::write(&cfg, "N = 3\nshape = round\n").unwrap();
    let out = jnlab(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("suite.cfg:2"));
}

#[test]
fn flags_override_config_and_reports_are_byte_stable() {
    let dir = scratch("stable");
    let cfg = dir.join("suite.cfg");
    std::fs::write(&cfg, "families = diag,shift,bell\nseed = 5\nn = 3\n").unwrap();
    let mut bytes = Vec::new();
    for run in 0..2 {
        let report = dir.join(format!("r{run}.json"));
        let out = jnlab(&["suite", "--config", cfg.to_str().unwrap(), "--n", "2", "--report", report.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        bytes.push(std::fs::read(&report).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let v: serde_json::Value = serde_json::from_slice(&bytes[0]).unwrap();
    assert_eq!(v["config"]["n"], "2");
    assert_eq!(v["config"]["seed"], "5");
    assert!(v.get("timings").is_none());
}

#[test]
fn measure_emits_csv_companions() {
    let dir = scratch("emit");
    let out = jnlab(&[
        "measure",
        "--forbidden",
        "1",
        "--depth",
        "3",
        "--cylinder-depth",
        "3",
        "--emit",
        dir.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cdf = std::fs::read_to_string(dir.join("cdf_nu_N3_B1_K3_M2.csv")).unwrap();
    let mut lines = cdf.lines();
    assert_eq!(lines.next(), Some("x_num,x_den,F_num,F_den"));
    // 3^(K+M) pieces, so one more breakpoint
    assert_eq!(lines.count(), 3usize.pow(5) + 1);
    assert!(dir.join("weights_N3_B1_K3.csv").exists());
    assert!(dir.join("certificates.csv").exists());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["certificates"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.starts_with("singularity")));
}

#[test]
fn cap_turns_into_skip_not_failure() {
    let out = jnlab(&["measure", "--forbidden", "1", "--cap", "50"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("SKIP"));
}
