use std::fs;
use std::process::{Command, Output};

use secant_core::certificate::Certificate;

fn secant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secant"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    secant(args).status.code().unwrap()
}

#[test]
fn dims_exit_codes() {
    assert_eq!(
        code(&[
            "dims",
            "--factors",
            "1,1,1",
            "--degrees",
            "3,3,2",
            "--all-critical"
        ]),
        0
    );
    assert_eq!(
        code(&["dims", "--factors", "1,1", "--degrees", "2,2", "--z", "3"]),
        1
    );
    assert_eq!(code(&["dims", "--factors", "1", "--degrees", "2,2"]), 2);
    assert_eq!(
        code(&[
            "dims",
            "--factors",
            "1,1",
            "--degrees",
            "2,2",
            "--z",
            "3",
            "--all"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "dims",
            "--factors",
            "1,1",
            "--degrees",
            "2,2",
            "--prime",
            "91"
        ]),
        2
    );
    assert_eq!(code(&["dims", "--factors", "0", "--degrees", "2"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
}

#[test]
fn defect_shows_in_certificate() {
    let out = secant(&["dims", "--factors", "1,1", "--degrees", "2,2", "--z", "3"]);
    let cert = Certificate::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap();
    cert.validate().unwrap();
    assert_eq!(cert.defect, Some(1));
    assert!(cert.verdict_label.starts_with("defective (Monte-Carlo"));
}

#[test]
fn theorem_exit_codes() {
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "minus",
            "--factors",
            "1,1",
            "--extra-p1",
            "1",
            "--degrees",
            "3,3,2"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "i1",
            "--y-factors",
            "1",
            "--y-degrees",
            "4",
            "--t",
            "2"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "u1",
            "--y-factors",
            "1,1",
            "--y-degrees",
            "3,3",
            "--z",
            "5"
        ]),
        0
    );
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "i1.0",
            "--y-factors",
            "1,1",
            "--y-degrees",
            "4,5",
            "--t",
            "2"
        ]),
        0
    );
    // degree hypotheses of the product theorem
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "minus",
            "--factors",
            "1,1",
            "--degrees",
            "2,3,2"
        ]),
        1
    );
    // malformed instances
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "minus",
            "--factors",
            "1,1",
            "--extra-p1",
            "2",
            "--degrees",
            "3,3,2"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "i1",
            "--y-factors",
            "1,1",
            "--y-degrees",
            "3,3"
        ]),
        2
    );
    assert_eq!(
        code(&[
            "theorem",
            "--which",
            "u1",
            "--y-factors",
            "1,1",
            "--y-degrees",
            "3,3"
        ]),
        2
    );
    assert_eq!(code(&["theorem", "--which", "x9"]), 2);
}

#[test]
fn catalog_passes() {
    let out = secant(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("P2 conics z=2"));
    assert!(!table.contains("FAIL"));
}

#[test]
fn out_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(
        code(&[
            "dims",
            "--factors",
            "1,1",
            "--degrees",
            "4,2",
            "--all",
            "--out",
            d
        ]),
        1
    );
    for z in 1..=5 {
        let text = fs::read_to_string(dir.path().join(format!("z{z}.json"))).unwrap();
        let cert = Certificate::from_json(&text).unwrap();
        cert.validate().unwrap();
        assert_eq!(cert.defect, Some(usize::from(z == 5)));
    }
    let csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("format,bundle,z,"));
}

#[test]
fn seeds_are_recorded() {
    let run = |extra: &[&str]| {
        let mut args = vec!["dims", "--factors", "1,1", "--degrees", "2,2", "--z", "2"];
        args.extend_from_slice(extra);
        let out = secant(&args);
        Certificate::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap()
    };
    assert_eq!(run(&["--seed", "99"]).master_seed, 99);
    let a = run(&["--entropy"]);
    a.validate().unwrap();
    let b = run(&["--seed", &a.master_seed.to_string()]);
    assert_eq!(a.without_timing(), b.without_timing());
}

#[test]
fn trials_and_primes() {
    let out = secant(&[
        "dims",
        "--factors",
        "1,1",
        "--degrees",
        "2,2",
        "--z",
        "3",
        "--trials",
        "3",
        "--prime",
        "1000000007",
    ]);
    let cert = Certificate::from_json(std::str::from_utf8(&out.stdout).unwrap().trim()).unwrap();
    assert_eq!(cert.primes, vec![1_000_000_007]);
    assert_eq!((cert.trials, cert.max_trials), (3, 3));
}

#[test]
fn worker_count_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_secant"))
        .env("SECANT_WORKERS", "1")
        .args([
            "dims",
            "--factors",
            "1,1,1",
            "--degrees",
            "3,3,2",
            "--all-critical",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_secant"))
        .env("SECANT_WORKERS", "many")
        .args(["catalog"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
