//! End-to-end CLI tests: pipelines, exit codes, and output stability.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rankforge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn rankforge")
}

fn tmpfile(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rankforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn bounds_dim_exp_prints_the_threshold() {
    let out = run(&["bounds", "dim-exp", "--q", "4", "--alpha", "2", "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("d >= 5"), "got: {}", stdout(&out));
}

#[test]
fn bounds_reject_decimal_rationals() {
    let out = run(&["bounds", "dim-exp", "--q", "4", "--alpha", "2", "--eps", "0.25"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--eps"), "diagnostic must name the field: {}", stderr(&out));
}

#[test]
fn bounds_lossy_and_two_source_values() {
    let out = run(&["bounds", "lossy", "--q", "4", "--n", "8", "--t", "4", "--r", "2", "--eps", "1/2", "--mode", "le"]);
    assert!(stdout(&out).contains("k >= 18"), "got: {}", stdout(&out));

    let out = run(&["bounds", "two-source", "--q", "4", "--n", "3", "--m", "3", "--r", "1", "--s", "1", "--eps", "0"]);
    assert!(stdout(&out).contains("t >= 7"), "got: {}", stdout(&out));

    // nonpositive denominator: reported as inapplicable, not a usage error
    let out = run(&["bounds", "lossy", "--q", "4", "--n", "8", "--t", "1", "--r", "2", "--eps", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("inapplicable"), "got: {}", stdout(&out));
}

#[test]
fn construct_verify_pipeline_passes() {
    let file = tmpfile("lossless-f13.txt");
    let out = run(&[
        "construct", "lossless", "--field", "13^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let verify = run(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0), "{}", stderr(&verify));
    assert!(stdout(&verify).contains("pass=true"));
}

#[test]
fn verify_failure_exits_2_with_witness() {
    // an empty lossy collection fails with any line as witness
    let file = tmpfile("empty-collection.txt");
    std::fs::write(
        &file,
        "rankforge-collection v1\nfield p=3 k=1\nkind=lossy n=3 t=2 r=1 eps=1/2 mode=le count=0\n",
    )
    .unwrap();
    let out = run(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("pass=false"));
    assert!(stdout(&out).contains("witness"));
}

#[test]
fn verify_budget_exhaustion_exits_3() {
    let file = tmpfile("lossless-f13-budget.txt");
    run(&[
        "construct", "lossless", "--field", "13^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", file.to_str().unwrap(),
    ]);
    let out = run(&["verify", "--in", file.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_sampled_requires_seed() {
    let file = tmpfile("lossless-f13-sampled.txt");
    run(&[
        "construct", "lossless", "--field", "13^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", file.to_str().unwrap(),
    ]);
    let out = run(&["verify", "--in", file.to_str().unwrap(), "--mode", "sampled"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--seed"));

    let out = run(&[
        "verify", "--in", file.to_str().unwrap(), "--mode", "sampled", "--seed", "7",
        "--trials", "25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("sampled(seed=7,count=25)"));
}

#[test]
fn verify_jobs_do_not_change_output() {
    let file = tmpfile("lossless-f7-jobs.txt");
    run(&[
        "construct", "lossless", "--field", "7^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", file.to_str().unwrap(),
    ]);
    let one = run(&["verify", "--in", file.to_str().unwrap(), "--jobs", "1"]);
    let four = run(&["verify", "--in", file.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(stdout(&one), stdout(&four));
    assert_eq!(one.status.code(), four.status.code());
}

#[test]
fn malformed_file_exits_1_with_diagnostic() {
    let file = tmpfile("garbage.txt");
    std::fs::write(&file, "not a rankforge file\n").unwrap();
    let out = run(&["verify", "--in", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("magic"), "got: {}", stderr(&out));

    let out = run(&["construct", "lossless", "--field", "13", "--n", "5", "--t", "3", "--r", "2", "--out", "/tmp/x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("p^k"), "got: {}", stderr(&out));
}

#[test]
fn convert_design_and_verify_duality() {
    let coll = tmpfile("dual-coll.txt");
    run(&[
        "construct", "lossless", "--field", "7^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", coll.to_str().unwrap(),
    ]);
    let design = tmpfile("dual-design.txt");
    let out = run(&[
        "convert", "design-from-condenser", "--in", coll.to_str().unwrap(),
        "--out", design.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    let vc = run(&["verify", "--in", coll.to_str().unwrap()]);
    let vd = run(&["verify", "--in", design.to_str().unwrap()]);
    assert_eq!(vc.status.code(), Some(0));
    assert_eq!(vd.status.code(), Some(0));
    let worst = |s: &str| {
        s.split_whitespace()
            .find(|tok| tok.starts_with("worst="))
            .map(str::to_string)
    };
    assert_eq!(worst(&stdout(&vc)), worst(&stdout(&vd)), "duality: identical statistics");
}

#[test]
fn convert_code_round_trip_and_lift() {
    let code = tmpfile("gab.txt");
    run(&[
        "construct", "gabidulin", "--field", "2^1", "--m", "4", "--n", "4", "--r", "2",
        "--out", code.to_str().unwrap(),
    ]);
    let cond = tmpfile("gab-cond.txt");
    assert_eq!(
        run(&["convert", "code-to-condenser", "--in", code.to_str().unwrap(), "--out", cond.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let back = tmpfile("gab-back.txt");
    assert_eq!(
        run(&["convert", "condenser-to-code", "--in", cond.to_str().unwrap(), "--out", back.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let v = run(&["verify", "--in", back.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));

    // lift pipeline
    let f8 = tmpfile("f8-coll.txt");
    run(&[
        "construct", "lossless", "--field", "2^3", "--n", "5", "--t", "3", "--r", "2",
        "--out", f8.to_str().unwrap(),
    ]);
    let lifted = tmpfile("f8-lifted.txt");
    let out = run(&[
        "convert", "lift", "--base", "2^1", "--in", f8.to_str().unwrap(),
        "--out", lifted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&lifted).unwrap();
    assert!(text.contains("# lifted-from p=2 k=3"));
    let v = run(&["verify", "--in", lifted.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn montecarlo_requires_and_uses_seed() {
    let out = run(&[
        "montecarlo", "--kind", "matrix-rank", "--field", "2^1", "--n", "4", "--m", "4",
        "--r", "3", "--seed", "7", "--trials", "2000",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("frequency="));

    let again = run(&[
        "montecarlo", "--kind", "matrix-rank", "--field", "2^1", "--n", "4", "--m", "4",
        "--r", "3", "--seed", "7", "--trials", "2000",
    ]);
    assert_eq!(stdout(&out), stdout(&again), "same seed, same report");

    // omitting the seed is a usage error
    let out = run(&[
        "montecarlo", "--kind", "matrix-rank", "--field", "2^1", "--n", "4", "--m", "4",
        "--r", "3", "--trials", "2000",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_reports_have_stable_keys() {
    let file = tmpfile("json-coll.txt");
    run(&[
        "construct", "lossless", "--field", "13^1", "--n", "5", "--t", "3", "--r", "2",
        "--out", file.to_str().unwrap(),
    ]);
    let out = run(&["verify", "--in", file.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    for key in ["property", "mode", "worst", "threshold", "pass", "witness"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
}
