use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_residue-lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("RESIDUE_LAB_JOBS")
        .output()
        .expect("spawn residue-lab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("sweep.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn tables_lists_residues() {
    let out = run(&["tables", "--p", "7", "--sets"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("residues=3"));
    assert!(text.contains("R: p=7; {1,2,4}"));
    assert!(text.contains("N: p=7; {3,5,6}"));
}

#[test]
fn gaps_prints_json() {
    let out = run(&["gaps", "--p", "23"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["stats"]["d_star"], 4);
}

#[test]
fn sh_and_energy_values() {
    let out = run(&["sh", "--p", "7", "--h", "2"]);
    assert!(stdout(&out).starts_with("value=1\n"));
    let out = run(&["energy", "--p", "101", "--a", "1,2,3,4"]);
    assert!(stdout(&out).contains("additive_energy=44"));
    let out = run(&[
        "energy",
        "--p",
        "101",
        "--a",
        "p=101; {1,2,3,4}",
        "--b",
        "1",
    ]);
    assert!(stdout(&out).contains("additive_energy=4"));
}

#[test]
fn weil_check_emits_csv() {
    let out = run(&["weil-check", "--p", "7", "--shifts", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("p,suite,quantity,value,rhs,ratio,pass,paper_tag,params")
    );
    let row = lines.next().unwrap();
    assert!(
        row.starts_with("7,weil,shifted_class_intersection,1,"),
        "{row}"
    );
    assert!(row.contains(",true,"));
}

#[test]
fn charsum_scans_every_length() {
    let out = run(&["charsum", "--p", "101", "--a", "3", "--s", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(",true,"));
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(run(&["tables", "--p", "9"]).status.code(), Some(2));
    assert_eq!(run(&["tables"]).status.code(), Some(2));
    assert_eq!(
        run(&["probe", "--p", "10007", "--c", "16"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "suites = weil\nprimes.lo = 5\nprimes.hi = 50\n");
    // randomized suite without a seed
    let out = run(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write_config(dir.path(), "bogus = 1\n");
    assert_eq!(run(&["verify", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn missing_config_exits_three() {
    let out = run(&["verify", "--config", "/nonexistent/sweep.cfg"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "primes.lo = 50\nprimes.hi = 80\nsuites = gaps, weil, packing\nseed = 3\nsuite.weil.patterns = 5\n",
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("# generated_at="));
    assert_eq!(
        csv.lines().nth(1),
        Some("p,suite,quantity,value,rhs,ratio,pass,paper_tag,params")
    );
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(
        json["rows"].as_array().unwrap().len(),
        csv.lines().count() - 2
    );
    assert!(out_dir.join("data").join("gaps.d_star.dat").exists());
}

#[test]
fn verify_is_reproducible_and_jobs_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "primes.lo = 100\nprimes.hi = 160\nsuites = weil, energy, gapsearch\nseed = 9\n",
    );
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let out_dir = dir.path().join(format!("out{jobs}"));
        let out = Command::new(BIN)
            .args([
                "verify",
                "--no-timestamp",
                "--config",
                &cfg,
                "--out",
                out_dir.to_str().unwrap(),
            ])
            .env("RESIDUE_LAB_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        outputs.push(fs::read(out_dir.join("report.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(!String::from_utf8_lossy(&outputs[0]).starts_with('#'));
}

#[test]
fn verify_list_names_suites() {
    let out = run(&["verify", "--list"]);
    let text = stdout(&out);
    for name in ["weil", "packing", "probe", "covering", "inclusion"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
