use std::process::Command;
use std::sync::atomic::AtomicBool;

use clap::Parser;
use genus5::cli::{self, Cli, EXIT_INTERRUPTED, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use genus5::fixtures::curves;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = cli::run(std::iter::once("genus5").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

#[test]
fn classify_single_patterns() {
    let (code, v) = json(&["classify", "--pattern", "1,2,2", "--expect-paper", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["rows"][0]["orbits"], 5);

    let (code, v) = json(&["classify", "--pattern", "5", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["rows"][0]["orbits"], 2);

    let (code, v) = json(&["classify", "--case", "II", "--expect-paper", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["case"] == "II"));

    assert_eq!(run(&["classify", "--pattern", "7,7"]).0, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["search", "--pattern", "1,2,2", "--range", "9..3", "--dry-run"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "x^6 + + y"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "--fixture", "no-such-curve"]).0, EXIT_USAGE);
}

#[test]
fn search_dry_run_reports_the_dimension() {
    let (code, v) = json(&["search", "--pattern", "1,1,1,2-indep", "--orbit", "3", "--dry-run", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["d"], 13);
    assert_eq!(v["total"], 797_161);
    let (code, v) = json(&["search", "--case", "II", "--pattern", "2", "--dry-run", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["d"], 16);
    let (code, text) = run(&["search", "--full", "--dry-run"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.lines().count() > 20, "{text}");
}

#[test]
fn search_checkpoints_and_refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck");
    let ck = ck.to_str().unwrap();
    let args = ["search", "--pattern", "1,2,2", "--orbit", "2", "--N", "30", "--range", "0..40000", "--chunk-size", "10000", "--json", "--checkpoint-dir", ck];
    let (code, first) = json(&args);
    assert_eq!(code, EXIT_OK);
    for f in ["manifest.json", "summary.json", "results.jsonl", "chunks/000000.json"] {
        assert!(dir.path().join("ck").join(f).exists(), "{f}");
    }
    assert_eq!(run(&args).0, EXIT_USAGE);
    let mut forced = args.to_vec();
    forced.push("--force");
    let (code, second) = json(&forced);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first["summary"]["results_sha256"], second["summary"]["results_sha256"]);
    assert_eq!(first["survivors"], second["survivors"]);
}

#[test]
fn stop_flag_gives_the_resumable_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck");
    let parsed = Cli::try_parse_from(["genus5", "search", "--pattern", "1,2,2", "--checkpoint-dir", ck.to_str().unwrap()]).unwrap();
    let cli::Command::Search(args) = parsed.command else { panic!() };
    let err = cli::cmd_search(&args, &mut Vec::new(), &AtomicBool::new(true)).unwrap_err();
    assert_eq!(err.0, EXIT_INTERRUPTED);
    assert!(ck.join("manifest.json").exists());
}

#[test]
fn binary_reads_the_checkpoint_directory_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_genus5"))
        .args(["search", "--pattern", "2,3", "--range", "0..3000", "--json"])
        .env(cli::CHECKPOINT_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("manifest.json").exists());
    let again = Command::new(env!("CARGO_BIN_EXE_genus5")).args(["verify", "--fixture", "fischer"]).output().unwrap();
    assert_eq!(again.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&again.stdout).contains("PASS"));
}

#[test]
fn verify_fixtures_and_failures() {
    for fx in &curves().curves {
        let (code, v) = json(&["verify", "--fixture", &fx.name, "--json"]);
        assert_eq!(code, EXIT_OK, "{}", fx.name);
        assert_eq!(v["report"]["counts"][0], fx.n1);
    }
    // without a configuration the singular points are found
    let fischer = curves().curves.iter().find(|c| c.name == "fischer").unwrap();
    let (code, v) = json(&["verify", &fischer.sextic, "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["report"]["singular_points"].as_array().unwrap().len(), 5);
    assert_eq!(v["report"]["counts"][0], 32);

    let (code, text) = run(&["verify", &fischer.sextic, "--expect-n1", "31"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(text.contains("FAIL"));

    let (code, text) = run(&["verify", "x^6 + x^5*y + y^5*z + z^5*x + x^2*y^2*z^2"]);
    assert_eq!(code, EXIT_MISMATCH);
    assert!(text.contains("no singular points"), "{text}");
}

#[test]
fn reproduce_passes_and_names_a_corrupted_fixture() {
    let (code, v) = json(&["reproduce", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["curves"].as_array().unwrap().len(), 7);
    assert_eq!(v["all_classes_realized"], true);

    let mut file = curves().clone();
    file.curves[2].n1 += 1;
    let report = cli::reproduce(&file, 1);
    assert!(!report.pass);
    let name = &file.curves[2].name;
    assert!(report.curves[2].problems.iter().any(|p| p.contains(name.as_str())));
    assert!(report.curves.iter().enumerate().all(|(i, r)| r.pass == (i != 2)));

    let mut file = curves().clone();
    file.curves[0].weil = file.weil_classes[1].clone();
    assert!(!cli::reproduce(&file, 1).pass);
}
