//! End-to-end tests against the compiled binary: file formats, exit codes,
//! determinism, and the search → verify round trip.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_drazinlab"))
}

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "drazinlab-test-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::SeqCst)
    ));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn scratch_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "drazinlab-test-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::SeqCst)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

/// Report bodies must be byte-identical across reruns once the manifest
/// timestamp is excluded.
fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|line| !line.contains("started_at_unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

const SHIFT_MATRIX: &str = r#"{"field":"q","rows":2,"cols":2,"entries":[["0","0"],["1","0"]]}"#;

const CANONICAL_PAIR: &str = r#"{
  "a": {"field":"q","rows":2,"cols":2,"entries":[["1","0"],["0","0"]]},
  "b": {"field":"q","rows":2,"cols":2,"entries":[["0","0"],["1","0"]]}
}"#;

const SKEW_PAIR: &str = r#"{
  "a": {"field":"q","rows":2,"cols":2,"entries":[["1","0"],["1","0"]]},
  "b": {"field":"q","rows":2,"cols":2,"entries":[["1","0"],["0","0"]]}
}"#;

const UNCONDITIONED_PAIR: &str = r#"{
  "a": {"field":"q","rows":2,"cols":2,"entries":[["1","1"],["0","1"]]},
  "b": {"field":"q","rows":2,"cols":2,"entries":[["0","1"],["1","0"]]}
}"#;

#[test]
fn compute_reports_drazin_data() {
    let input = scratch_file("shift.json", SHIFT_MATRIX);
    let output = run(&["compute", "--in", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["result"]["index"], 2);
    assert_eq!(doc["result"]["dinv"]["entries"][1][0], "0");
    assert_eq!(doc["result"]["spectral_idempotent"]["entries"][0][0], "1");
    assert_eq!(doc["manifest"]["command"], "compute");
}

#[test]
fn compute_with_out_file_keeps_stdout_quiet() {
    let input = scratch_file("shift.json", SHIFT_MATRIX);
    let out = scratch_path("result.json");
    let output = run(&[
        "compute",
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());
    let saved: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved["result"]["index"], 2);
}

#[test]
fn compute_error_classes() {
    let nonsquare = scratch_file(
        "wide.json",
        r#"{"field":"q","rows":1,"cols":2,"entries":[["1","2"]]}"#,
    );
    let output = run(&["compute", "--in", nonsquare.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));

    let junk = scratch_file("junk.json", "not json at all");
    assert_eq!(
        run(&["compute", "--in", junk.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let composite = scratch_file(
        "badfield.json",
        r#"{"field":"gf:6","rows":1,"cols":1,"entries":[["1"]]}"#,
    );
    assert_eq!(
        run(&["compute", "--in", composite.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        run(&["compute", "--in", "/nonexistent/x.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_canonical_pair_passes() {
    let input = scratch_file("pair.json", CANONICAL_PAIR);
    let output = run(&["verify", "--in", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["all_hold"], true);
    let flags = &doc["results"][0]["flags"];
    assert_eq!(flags["cond_ab"], true);
    assert_eq!(flags["cond_ba"], true);
    assert_eq!(flags["commutes"], false);
    let names: Vec<&str> = doc["results"][0]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"product_formula"));
    assert!(names.contains(&"sum_formula"));
    assert!(names.contains(&"xi_relation"));
    // noncommuting pair: the commuting-case check is skipped, not failed
    assert!(!names.contains(&"commuting_sum"));
}

#[test]
fn verify_treats_order_asymmetry_as_informational() {
    let input = scratch_file("pair.json", SKEW_PAIR);
    let output = run(&["verify", "--in", input.to_str().unwrap()]);
    assert_eq!(
        output.status.code(),
        Some(0),
        "a genuine witness pair must verify clean"
    );
    let doc = stdout_json(&output);
    let reports = doc["results"][0]["reports"].as_array().unwrap();
    let asym = reports
        .iter()
        .find(|r| r["identity"] == "product_order_asymmetry")
        .expect("asymmetry report present");
    assert_eq!(asym["holds"], false);
    assert_eq!(doc["all_hold"], true);
}

#[test]
fn verify_commuting_pair_includes_commuting_checks() {
    let input = scratch_file(
        "pair.json",
        r#"{
          "a": {"field":"q","rows":2,"cols":2,"entries":[["1","0"],["0","0"]]},
          "b": {"field":"q","rows":2,"cols":2,"entries":[["0","0"],["0","2"]]}
        }"#,
    );
    let output = run(&["verify", "--in", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["results"][0]["flags"]["commutes"], true);
    let names: Vec<&str> = doc["results"][0]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"commuting_sum"));
    assert!(names.contains(&"commuting_sum_alt"));
    assert_eq!(doc["all_hold"], true);
}

#[test]
fn verify_condition_failures_exit_4() {
    let input = scratch_file("pair.json", UNCONDITIONED_PAIR);
    let output = run(&["verify", "--in", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(4));
    // the emitted report still carries the computed flags
    let doc = stdout_json(&output);
    assert_eq!(doc["flags"][0]["cond_ab"], false);
    assert_eq!(doc["conditions_met"], false);

    let output = run(&[
        "verify",
        "--in",
        input.to_str().unwrap(),
        "--allow-unconditioned",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["flags"][0]["cond_ab"], false);
}

#[test]
fn verify_dimension_mismatch_exits_3() {
    let input = scratch_file(
        "pair.json",
        r#"{
          "a": {"field":"q","rows":2,"cols":2,"entries":[["1","0"],["0","1"]]},
          "b": {"field":"q","rows":1,"cols":1,"entries":[["1"]]}
        }"#,
    );
    assert_eq!(
        run(&["verify", "--in", input.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );

    let mixed = scratch_file(
        "pair.json",
        r#"{
          "a": {"field":"q","rows":1,"cols":1,"entries":[["1"]]},
          "b": {"field":"gf:5","rows":1,"cols":1,"entries":[["1"]]}
        }"#,
    );
    assert_eq!(
        run(&["verify", "--in", mixed.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verify_identity_subset_and_lemmas_depth() {
    let input = scratch_file("pair.json", CANONICAL_PAIR);
    let output = run(&[
        "verify",
        "--in",
        input.to_str().unwrap(),
        "--identities",
        "product,sum",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["results"][0]["reports"].as_array().unwrap().len(), 2);

    let output = run(&[
        "verify",
        "--in",
        input.to_str().unwrap(),
        "--lemmas-depth",
        "4",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    let names: Vec<&str> = doc["results"][0]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.starts_with("power_commutation")));
}

#[test]
fn search_exhaustive_finds_the_canonical_witness() {
    let output = run(&[
        "search",
        "--field",
        "gf:2",
        "--dim",
        "2",
        "--mode",
        "exhaustive",
        "--noncommuting",
        "--verify",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    let pairs = doc["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 18);
    assert_eq!(doc["all_hold"], true);
    let canonical = pairs.iter().any(|p| {
        p["a"]["entries"] == serde_json::json!([["1", "0"], ["0", "0"]])
            && p["b"]["entries"] == serde_json::json!([["0", "0"], ["1", "0"]])
    });
    assert!(canonical, "the canonical witness pair must be enumerated");
    for p in pairs {
        assert_eq!(p["flags"]["commutes"], false);
    }
}

#[test]
fn search_space_guard_exits_5() {
    let output = run(&[
        "search",
        "--field",
        "gf:5",
        "--dim",
        "3",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(output.status.code(), Some(5));

    // the rationals cannot be enumerated at all
    let output = run(&[
        "search",
        "--field",
        "q",
        "--dim",
        "2",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(output.status.code(), Some(5));

    // 2^18 pairs is within the guard and must run
    let output = run(&[
        "search",
        "--field",
        "gf:2",
        "--dim",
        "3",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    // missing required flag: clap usage errors share the parse class
    assert_eq!(run(&["compute"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--field", "gf:2"]).status.code(), Some(2));
    // a composite modulus is a field error
    assert_eq!(
        run(&["search", "--field", "gf:6", "--dim", "2", "--mode", "random"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn search_is_deterministic_under_seed() {
    let args = [
        "search", "--field", "gf:2", "--dim", "2", "--mode", "random", "--count", "5", "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    let a = String::from_utf8(first.stdout).unwrap();
    let b = String::from_utf8(second.stdout).unwrap();
    assert_eq!(strip_timestamp(&a), strip_timestamp(&b));

    let other = run(&[
        "search", "--field", "gf:2", "--dim", "2", "--mode", "random", "--count", "5", "--seed",
        "8",
    ]);
    let c = String::from_utf8(other.stdout).unwrap();
    assert_ne!(strip_timestamp(&a), strip_timestamp(&c));
}

#[test]
fn worker_count_never_changes_output() {
    let base = [
        "search", "--field", "gf:3", "--dim", "2", "--mode", "random", "--count", "6", "--seed",
        "11", "--verify",
    ];
    let serial = run(&{
        let mut v = base.to_vec();
        v.extend(["--jobs", "1"]);
        v
    });
    let parallel = run(&{
        let mut v = base.to_vec();
        v.extend(["--jobs", "3"]);
        v
    });
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(parallel.status.code(), Some(0));
    let a = String::from_utf8(serial.stdout).unwrap();
    let b = String::from_utf8(parallel.stdout).unwrap();
    assert_eq!(strip_timestamp(&a), strip_timestamp(&b));

    let env_driven = bin()
        .args(base)
        .env("DRAZINLAB_JOBS", "4")
        .output()
        .unwrap();
    let c = String::from_utf8(env_driven.stdout).unwrap();
    assert_eq!(strip_timestamp(&a), strip_timestamp(&c));
}

#[test]
fn search_batch_round_trips_into_verify() {
    let out = scratch_path("batch.json");
    let output = run(&[
        "search",
        "--field",
        "q",
        "--dim",
        "3",
        "--mode",
        "block",
        "--count",
        "3",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());

    let verify = run(&["verify", "--in", out.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    let doc = stdout_json(&verify);
    assert_eq!(doc["results"].as_array().unwrap().len(), 3);
    assert_eq!(doc["all_hold"], true);
}

#[test]
fn search_sampling_modes_respect_flags() {
    let output = run(&[
        "search",
        "--field",
        "gf:5",
        "--dim",
        "3",
        "--mode",
        "commuting",
        "--count",
        "4",
        "--seed",
        "42",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    for p in doc["pairs"].as_array().unwrap() {
        assert_eq!(p["flags"]["commutes"], true);
    }

    // block construction cannot produce 1x1 noncommuting witnesses
    let output = run(&[
        "search", "--field", "gf:5", "--dim", "1", "--mode", "block", "--count", "1",
    ]);
    assert_eq!(output.status.code(), Some(5));
}

#[test]
fn lemmas_table_and_error_classes() {
    let input = scratch_file("pair.json", CANONICAL_PAIR);
    let output = run(&["lemmas", "--in", input.to_str().unwrap(), "--depth", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = stdout_json(&output);
    assert_eq!(doc["all_hold"], true);
    assert!(doc["reports"].as_array().unwrap().len() > 20);
    let table = String::from_utf8(output.stderr).unwrap();
    assert!(table.contains("residual_sum_nilpotent"));
    assert!(table.contains("all identities hold"));

    let skew = scratch_file("pair.json", SKEW_PAIR);
    assert_eq!(
        run(&["lemmas", "--in", skew.to_str().unwrap(), "--depth", "4"])
            .status
            .code(),
        Some(0)
    );

    let junk = scratch_file("junk.json", "{");
    assert_eq!(
        run(&["lemmas", "--in", junk.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let bad = scratch_file("pair.json", UNCONDITIONED_PAIR);
    assert_eq!(
        run(&["lemmas", "--in", bad.to_str().unwrap()])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn reports_round_trip_through_their_schema() {
    let input = scratch_file("pair.json", CANONICAL_PAIR);
    let output = run(&["verify", "--in", input.to_str().unwrap()]);
    let doc = stdout_json(&output);
    // re-serializing the parsed document must reproduce the bytes exactly
    let text = String::from_utf8(output.stdout.clone()).unwrap();
    let reparsed = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(text, reparsed);
}
