//! End-to-end checks of the command-line interface: exit codes, file
//! round-trips and the pinned demo numbers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fairdiv"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fairdiv-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_is_byte_deterministic_and_plants_duplicates() {
    let dir = workdir("gen");
    let a = run(
        &["gen", "-n", "4", "--seed", "42", "-d", "2", "-o", "a.json"],
        &dir,
    );
    assert!(a.status.success());
    let b = run(
        &["gen", "-n", "4", "--seed", "42", "-d", "2", "-o", "b.json"],
        &dir,
    );
    assert!(b.status.success());
    let file_a = fs::read(dir.join("a.json")).unwrap();
    let file_b = fs::read(dir.join("b.json")).unwrap();
    assert_eq!(file_a, file_b);

    let inst = fairdiv::io::instance_from_json(std::str::from_utf8(&file_a).unwrap()).unwrap();
    assert_eq!(inst.valuations()[0], inst.valuations()[1]);
    assert_ne!(inst.valuations()[0], inst.valuations()[2]);
}

#[test]
fn divide_writes_exact_values_and_ledger() {
    let dir = workdir("divide");
    assert!(run(
        &[
            "gen",
            "--fixture",
            "all-lebesgue",
            "-n",
            "3",
            "-o",
            "leb3.json"
        ],
        &dir
    )
    .status
    .success());
    let out = run(
        &[
            "divide",
            "-a",
            "symprop",
            "-i",
            "leb3.json",
            "-o",
            "div.json",
        ],
        &dir,
    );
    assert!(out.status.success());
    let division = fs::read_to_string(dir.join("div.json")).unwrap();
    assert_eq!(division.matches("\"value\": \"1/3\"").count(), 3);
    let loaded = fairdiv::io::division_from_json(&division).unwrap();
    assert_eq!(loaded.algorithm, "symprop");
}

#[test]
fn divide_reports_the_counterexample_values() {
    let dir = workdir("divide-cx");
    assert!(run(
        &[
            "gen",
            "--fixture",
            "even-paz-not-aristotelian",
            "-o",
            "cx.json"
        ],
        &dir
    )
    .status
    .success());
    let out = run(
        &["divide", "-a", "even-paz", "-i", "cx.json", "-o", "d.json"],
        &dir,
    );
    assert!(out.status.success());
    let division = fs::read_to_string(dir.join("d.json")).unwrap();
    assert!(division.contains("\"value\": \"1/4\""));
    assert!(division.contains("\"value\": \"49/100\""));
}

#[test]
fn capability_errors_exit_with_three() {
    let dir = workdir("capability");
    assert!(
        run(&["gen", "-n", "5", "--seed", "1", "-o", "five.json"], &dir)
            .status
            .success()
    );
    let out = run(&["divide", "-a", "sym-envy-free", "-i", "five.json"], &dir);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = workdir("schema");
    fs::write(dir.join("broken.json"), "{ not json").unwrap();
    let out = run(&["divide", "-a", "symprop", "-i", "broken.json"], &dir);
    assert_eq!(out.status.code(), Some(2));

    fs::write(
        dir.join("halfmass.json"),
        r#"{ "players": [ { "name": "p1",
            "density": [ { "from": "0", "to": "1/2", "weight": "1" } ] } ] }"#,
    )
    .unwrap();
    let out = run(&["divide", "-a", "symprop", "-i", "halfmass.json"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_pass_fail_and_unknown_property() {
    let dir = workdir("verify");
    assert!(run(
        &[
            "gen",
            "--fixture",
            "even-paz-not-aristotelian",
            "-o",
            "cx.json"
        ],
        &dir
    )
    .status
    .success());
    assert!(run(
        &["divide", "-a", "even-paz", "-i", "cx.json", "-o", "d.json"],
        &dir
    )
    .status
    .success());

    let out = run(
        &[
            "verify",
            "-i",
            "cx.json",
            "-d",
            "d.json",
            "-p",
            "proportional",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));

    let out = run(
        &[
            "verify",
            "-i",
            "cx.json",
            "-d",
            "d.json",
            "-p",
            "aristotelian",
            "-o",
            "report.json",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("aristotelian: fail"), "got: {text}");
    assert!(text.contains("p1") && text.contains("p4"));
    let report = fs::read_to_string(dir.join("report.json")).unwrap();
    assert!(report.contains("\"verdict\": \"fail\""));
    assert!(report.contains("\"value_a\": \"1/4\""));
    assert!(report.contains("\"value_b\": \"49/100\""));

    let out = run(
        &["verify", "-i", "cx.json", "-d", "d.json", "-p", "sparkly"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_flags_order_dependence() {
    let dir = workdir("sweep");
    assert!(run(
        &[
            "gen",
            "--fixture",
            "even-paz-not-aristotelian",
            "-o",
            "cx.json"
        ],
        &dir
    )
    .status
    .success());
    let out = run(&["sweep", "-a", "even-paz", "-i", "cx.json"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("symmetric: false"));

    let out = run(&["sweep", "-a", "symprop", "-i", "cx.json"], &dir);
    assert!(out.status.success());
    assert!(stdout(&out).contains("symmetric: true"));
}

#[test]
fn sweep_single_player_is_trivially_symmetric() {
    let dir = workdir("sweep1");
    assert!(
        run(&["gen", "-n", "1", "--seed", "8", "-o", "one.json"], &dir)
            .status
            .success()
    );
    let out = run(&["sweep", "-a", "last-diminisher", "-i", "one.json"], &dir);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("symmetric: true"));
    assert_eq!(
        text.lines()
            .filter(|l| l.trim_start().starts_with('['))
            .count(),
        1
    );
}

#[test]
fn demos_assert_their_numbers() {
    let dir = workdir("demo");
    for name in [
        "even-paz-not-aristotelian",
        "last-diminisher-not-aristotelian",
        "symprop-all-lebesgue-S-count",
        "symprop-concentrated-S-count",
    ] {
        let out = run(&["demo", name], &dir);
        assert_eq!(out.status.code(), Some(0), "demo {name} failed");
        assert!(!stdout(&out).contains("FAILED"));
    }
    let out = run(&["demo", "nonsense"], &dir);
    assert_eq!(out.status.code(), Some(2));
}
