use std::path::Path;
use std::process::{Command, Output};

fn sim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oam-sim"))
        .current_dir(dir)
        .env_remove("OAM_SIM_SEED")
        .args(args)
        .output()
        .unwrap()
}

const SMALL: &str = r#"
[sweep]
snr_db = [0.0, 10.0, 20.0]
n_jammed = [0, 2]
n_elements = [8]
trials = 30
"#;

#[test]
fn small_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), SMALL).unwrap();
    let out = sim(
        dir.path(),
        &[
            "--config",
            "s.toml",
            "--seed",
            "4",
            "--output",
            "a.csv",
            "--check-trends",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("rows: 12"), "{stdout}");
    assert!(stdout.contains("trend"));

    let csv = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(
        lines[0],
        "scheme,snr_db,n_elements,n_jammed,se_bits_per_hz,p_j,p_u,p_c,ber,trials,seed"
    );
    assert!(lines[1..].iter().all(|l| l.ends_with(",30,4")));

    let again = sim(dir.path(), &["--config", "s.toml", "--seed", "4", "--output", "b.csv"]);
    assert!(again.status.success());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("b.csv")).unwrap());
}

#[test]
fn seed_from_environment_and_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), format!("{SMALL}seed = 8\n")).unwrap();
    let file = sim(
        dir.path(),
        &["--config", "s.toml", "--trials", "5", "--output", "f.csv"],
    );
    assert!(file.status.success());
    let f = std::fs::read_to_string(dir.path().join("f.csv")).unwrap();
    assert!(f.lines().nth(1).unwrap().ends_with(",5,8"));

    std::fs::write(dir.path().join("e.toml"), SMALL).unwrap();
    let env = Command::new(env!("CARGO_BIN_EXE_oam-sim"))
        .current_dir(dir.path())
        .env("OAM_SIM_SEED", "13")
        .args(["--config", "e.toml", "--trials", "5", "--output", "e.csv"])
        .output()
        .unwrap();
    assert!(env.status.success());
    let e = std::fs::read_to_string(dir.path().join("e.csv")).unwrap();
    assert!(e.lines().nth(1).unwrap().ends_with(",5,13"));
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "[link]\nn_tx = 0\n").unwrap();
    let out = sim(dir.path(), &["--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_tx"));

    std::fs::write(dir.path().join("typo.toml"), "[link]\nn_txx = 4\n").unwrap();
    assert_eq!(sim(dir.path(), &["--config", "typo.toml"]).status.code(), Some(1));

    assert_eq!(sim(dir.path(), &["--config", "missing.toml"]).status.code(), Some(1));
    assert_eq!(sim(dir.path(), &["--trials", "0"]).status.code(), Some(1));
    assert!(!dir.path().join("oam_sweep.csv").exists());
}

#[test]
fn failed_trend_check_exits_with_two() {
    // Baseline with every mode jammed has zero SE at each SNR, so the strict SNR trend fails.
    let dir = tempfile::tempdir().unwrap();
    let text = "[jamming]\nvariance_tx = 10.0\n[sweep]\nsnr_db = [0.0, 10.0]\nn_jammed = [4]\nn_elements = [4]\nschemes = [\"baseline\"]\ntrials = 5\n";
    std::fs::write(dir.path().join("s.toml"), text).unwrap();
    let out = sim(dir.path(), &["--config", "s.toml", "--check-trends"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    let plain = sim(dir.path(), &["--config", "s.toml"]);
    assert_eq!(plain.status.code(), Some(0));
}
