//! End-to-end tests of the binary: exit codes, formats, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn polycirc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycirc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_text_and_json() {
    let out = polycirc(&["classify", "--bits", "0001", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("class: general"));
    assert!(text.contains("polymorphisms: and"));

    let out = polycirc(&["classify", "--bits", "0001", "--n", "2", "--json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["polymorphisms"][0], "and");
}

#[test]
fn optimal_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "xor.tt", "n=2\n0110\n");

    let out = polycirc(&["optimal", "--table", &table]);
    assert!(out.status.success());
    let circuit_text = stdout(&out);
    let circuit = write(dir.path(), "xor.circ", &circuit_text);

    let out = polycirc(&["verify-circuit", "--table", &table, "--circuit", &circuit]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("size 4"));

    // the same circuit does not compute AND
    let and_table = write(dir.path(), "and.tt", "n=2\n0001\n");
    let out = polycirc(&["verify-circuit", "--table", &and_table, "--circuit", &circuit]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("mismatch at row"));
}

#[test]
fn optimal_budget_exhaustion_prints_none() {
    let out = polycirc(&["optimal", "--bits", "0110", "--n", "2", "--max-size", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn synth_defaults_to_a_detected_operation() {
    let out = polycirc(&["synth", "--bits", "0001", "--n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("output"));

    // asking for an operation that is not a polymorphism is an error
    let out = polycirc(&["synth", "--bits", "0110", "--n", "2", "--op", "and"]);
    assert_eq!(out.status.code(), Some(2));

    // multi-output synthesis
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "multi.tt", "n=2\n0001\n0011\n");
    let out = polycirc(&["synth", "--table", &table, "--op", "and"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("outputs"));
}

#[test]
fn cover_pipeline_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "and.tt", "n=2\n0001\n");

    let out = polycirc(&["optimal", "--table", &table]);
    let circuit = write(dir.path(), "and.circ", &stdout(&out));
    let out = polycirc(&["cover-from-circuit", "--table", &table, "--circuit", &circuit]);
    assert!(out.status.success());
    let cover = write(dir.path(), "and.cover", &stdout(&out));

    let out = polycirc(&["cover-check", "--table", &table, "--cover", &cover]);
    assert!(out.status.success());

    // the empty cover is invalid and prints an uncovered witness
    let empty = write(dir.path(), "empty.cover", "n=2 flavor=pol\n");
    let out = polycirc(&["cover-check", "--table", &table, "--cover", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("->"));

    let out = polycirc(&["circuit-from-cover", "--table", &table, "--cover", &cover]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("g3 = AND g1 g2"));
}

#[test]
fn tsvnd_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "xor.tt", "n=2\n0110\n");
    let out = polycirc(&["optimal", "--table", &table]);
    let circuit = write(dir.path(), "xor.circ", &stdout(&out));
    let out = polycirc(&[
        "cover-from-circuit",
        "--table",
        &table,
        "--circuit",
        &circuit,
        "--flavor",
        "pol",
    ]);
    let cover = write(dir.path(), "xor.cover", &stdout(&out));

    let out = polycirc(&["tsvnd-build", "--table", &table, "--cover", &cover]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("n=2 m="));
    let tsvnd = write(dir.path(), "xor.tsvnd", &stdout(&out));

    let out = polycirc(&["tsvnd-check", "--table", &table, "--tsvnd", &tsvnd]);
    assert!(out.status.success());

    let out = polycirc(&["tsvnd-to-cover", "--table", &table, "--tsvnd", &tsvnd]);
    assert!(out.status.success());
    let extracted = write(dir.path(), "xor2.cover", &stdout(&out));
    let out = polycirc(&["cover-check", "--table", &table, "--cover", &extracted]);
    assert!(out.status.success());

    // split the program form and merge it back
    let out = polycirc(&[
        "tsvnd-build",
        "--table",
        &table,
        "--cover",
        &cover,
        "--program-form",
    ]);
    let program_form = write(dir.path(), "xor_pf.tsvnd", &stdout(&out));
    let nd = dir.path().join("xor.nd");
    let cond = dir.path().join("xor.cond");
    let out = polycirc(&[
        "nd-split",
        "--tsvnd",
        &program_form,
        "--out-nd",
        nd.to_str().unwrap(),
        "--out-cond",
        cond.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = polycirc(&["nd-merge", "--nd", nd.to_str().unwrap(), "--cond", cond.to_str().unwrap()]);
    assert!(out.status.success());
    let merged = write(dir.path(), "xor_merged.tsvnd", &stdout(&out));
    let out = polycirc(&["tsvnd-check", "--table", &table, "--tsvnd", &merged]);
    assert!(out.status.success());

    // a non-single-valued circuit fails the check with exit 1
    let broken = write(dir.path(), "broken.tsvnd", "n=2 m=1\n");
    let out = polycirc(&["tsvnd-check", "--table", &table, "--tsvnd", &broken]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_runs_and_is_byte_deterministic() {
    let out = polycirc(&["sweep", "--n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("failed=0"));

    let a = polycirc(&["sweep", "--n", "2", "--json"]);
    let b = polycirc(&["sweep", "--n", "2", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["summary"]["failed"], 0);
}

#[test]
fn usage_and_precondition_errors_exit_2() {
    // missing table
    let out = polycirc(&["classify"]);
    assert_eq!(out.status.code(), Some(2));

    // --bits without --n
    let out = polycirc(&["classify", "--bits", "0001"]);
    assert_eq!(out.status.code(), Some(2));

    // malformed table file
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.tt", "n=2\n001\n");
    let out = polycirc(&["classify", "--table", &bad]);
    assert_eq!(out.status.code(), Some(2));

    // infeasible sweep arity
    let out = polycirc(&["sweep", "--n", "4", "--checks", "s4"]);
    assert_eq!(out.status.code(), Some(2));

    // reserved basis flag rejects anything else
    let out = polycirc(&["optimal", "--bits", "0001", "--n", "2", "--basis", "nand"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown flag (clap usage error)
    let out = polycirc(&["classify", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
}
