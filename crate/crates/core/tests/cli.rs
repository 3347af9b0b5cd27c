mod common;

use std::process::{Command, Output};

use common::golden;
use hardcore_expansion::polyring::parse;

fn hcexp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcexp")).args(args).env_remove("HCEXP_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn text_coefficient_is_the_golden_polynomial() {
    let o = hcexp(&["coefficients", "--j", "2", "--lambda", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse(stdout(&o).trim()).unwrap(), golden("appendix_l2"));
}

#[test]
fn counts_match_the_reported_table() {
    let o = hcexp(&["counts", "--j", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("compressed: 1712, covers: 14954\n"), "{}", stdout(&o));
}

#[test]
fn identities_on_c4_pass_with_exact_witness() {
    let o = hcexp(&["verify", "--suite", "identities", "--graph", "C4", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["passed"], true);
    let capture = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "capture_identity").unwrap();
    assert_eq!(capture["witness"]["zhat"], "8");
    assert_eq!(capture["witness"]["z"], "7");
}

#[test]
fn failed_verification_exits_one_with_witness() {
    let o = hcexp(&["verify", "--suite", "estimates", "--graph", "Q4"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["checks"][0]["witness"]["rows"].is_array());
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (&["counts", "--j", "0"][..], "--j"),
        (&["coefficients", "--j", "2", "--lambda", "3/0"][..], "--lambda"),
        (&["counts", "--j", "3", "--threads", "0"][..], "--threads"),
        (&["verify", "--suite", "nope"][..], "--suite"),
    ] {
        let o = hcexp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(flag), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    for args in [
        &["coefficients", "--j", "3", "--lambda", "symbolic", "--format", "json"][..],
        &["counts", "--j", "4", "--format", "json"][..],
        &["verify", "--suite", "sampler", "--seed", "7"][..],
    ] {
        let base = hcexp(args);
        assert_eq!(base.stdout, hcexp(args).stdout, "{args:?}");
        let threaded: Vec<&str> = args.iter().copied().chain(["--threads", "2"]).collect();
        if args[0] != "verify" {
            assert_eq!(base.stdout, hcexp(&threaded).stdout, "{args:?}");
        }
    }
}

#[test]
fn out_flag_writes_the_same_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l3.json");
    let args = ["coefficients", "--j", "3", "--lambda", "1/2"];
    let direct = hcexp(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(hcexp(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
