use floer_core::ainfty::models;
use floer_core::io::category_to_file;
use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floer-lab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--emit", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("json output");
    (v, out.status.code().unwrap())
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("floer-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn trees_count_matches_associahedron() {
    let (v, code) = json(&["trees", "--k", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 45);
    assert_eq!(v["schema"], "floer-lab/1");
}

#[test]
fn sections_csv_has_both_solvers() {
    let out = run(&["--emit", "csv", "sections", "--eps", "0.25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("closed-form,0.25") && text.contains("newton,0.25"));
}

#[test]
fn bad_epsilon_is_an_input_error() {
    assert_eq!(run(&["sections", "--eps", "0.9"]).status.code(), Some(2));
    assert_eq!(run(&["sections", "--solvers", "bisection"]).status.code(), Some(2));
}

#[test]
fn theorem_reports() {
    let (v, code) = json(&["theorem12", "--l", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["bulk (category)"], true);
    assert_eq!(v["verdicts"]["undeformed (category)"], false);
    assert_eq!(run(&["theorem12", "--l", "7"]).status.code(), Some(2));
    let (v, code) = json(&["theorem11", "--eps", "0.2", "--no-sweep"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"]["twisted (criterion)"], true);
    assert_eq!(v["verdicts"]["untwisted (category)"], false);
}

#[test]
fn zero_bulk_count_fails_verification() {
    assert_eq!(run(&["theorem12", "--kappa", "0"]).status.code(), Some(1));
}

#[test]
fn category_file_round_trip() {
    let good = scratch("floer.json", &category_to_file(&models::a2_floer(models::FloerDegrees::twisted(2), floer_core::coeff::rat_int(3))).to_json());
    let (v, code) = json(&["ainfty-check", "--input", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["passed"], true);

    let broken = models::directed_a2().with_flipped_entry(0);
    let bad = scratch("broken.json", &category_to_file(&broken).to_json());
    let (v, code) = json(&["ainfty-check", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(v["report"]["failure"].is_object());

    let junk = scratch("junk.json", "{ not json");
    assert_eq!(run(&["ainfty-check", "--input", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn picard_a2_square_is_identity() {
    let (v, code) = json(&["picard", "--power", "2", "--class", "L"]);
    assert_eq!(code, 0);
    assert_eq!(v["identity"], true);
    assert_eq!(v["orbit"][1], serde_json::json!([1, 1]));
    let (v, _) = json(&["picard", "--power", "1"]);
    assert_eq!(v["identity"], false);
}

#[test]
fn fseries_identities_hold() {
    for seed in ["1", "2", "3"] {
        let (v, code) = json(&["--seed", seed, "fseries", "--rank", "5", "--truncation", "5"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["inverse_exact"], true);
    }
}
