use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcns-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn without_timing(s: &str) -> String {
    s.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn check_division_on_rank_zero_is_proven() {
    let o = run(&["check-division", instance("f9_rank0.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proven-division"));
}

#[test]
fn one_invert_singular_element_exits_one() {
    let path = instance("f9_gram1.toml");
    let o = run(&["one-invert", path.to_str().unwrap(), "--element", r#"{"a": [1, 0], "v": [[1, 0]]}"#]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: nu(g) = 0"));
    let o = run(&["one-invert", path.to_str().unwrap(), "--element", r#"{"a": [1, 0], "v": [[0, 0]], "r": 1}"#]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn moufang_q3() {
    let o = run(&["--format", "structured", "moufang", instance("f9_rank0.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks[0]["detail"]["count"], 28);
    assert!(checks.iter().any(|c| c["detail"]["order"] == "6048"));
}

#[test]
fn operational_errors_exit_two() {
    assert_eq!(run(&["check-instance", "/nonexistent.toml"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("hcns-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "alpha = 2\nrank = 1\ngram = [[[1, 0]]]\n[base_field]\np = 4\ndeg = 1\n").unwrap();
    let o = run(&["check-instance", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("base_field.p"));
    assert_eq!(run(&["verify-universal", "--only", "axiom9"]).status.code(), Some(2));
}

#[test]
fn seeded_reports_are_reproducible() {
    let path = instance("golden_gram3.toml");
    let args = ["--format", "structured", "--seed", "7", "check-division", path.to_str().unwrap(), "--samples", "300"];
    let a = without_timing(&stdout(&run(&args)));
    assert_eq!(a, without_timing(&stdout(&run(&args))));
    assert!(a.contains("claimed-division"));
    let env = Command::new(env!("CARGO_BIN_EXE_hcns-lab"))
        .env("HCNS_LAB_SEED", "7")
        .args(["--format", "structured", "check-division", path.to_str().unwrap(), "--samples", "300"])
        .output()
        .unwrap();
    assert_eq!(without_timing(&stdout(&env)), a);
}

#[test]
fn instance_files_validate() {
    for name in ["f9_rank0.toml", "f9_gram1.toml", "f25_rank0.toml", "generic_gram.toml", "golden_gram3.toml"] {
        let o = run(&["--max-height", "20", "check-instance", instance(name).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}
