use std::path::{Path, PathBuf};
use std::process::Command;

use fspt::cli::run;
use fspt::cocycle::{cohomologous, CocycleJson};
use fspt::spt::{index_equal, IndexJson};
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fspt").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn index_of_fixtures() {
    let r1 = json(&["index", "--in", &fixture("system_r1_trivial.json")]);
    assert_eq!(r1["kappa"], 1);
    let kramers = json(&["index", "--in", &fixture("system_r0_time_reversal_kramers.json")]);
    assert_eq!(kramers["kappa"], 0);
    assert_eq!(kramers["q"], serde_json::json!([0, 0]));
}

#[test]
fn index_output_reingests() {
    let path = fixture("system_r0_pauli_klein.json");
    let (_, first, _) = call(&["index", "--in", &path]);
    let parsed: IndexJson = serde_json::from_str(&first).unwrap();
    let cocycle_file = scratch("pauli_index_cocycle.json");
    std::fs::write(&cocycle_file, serde_json::to_string(&parsed.cocycle).unwrap()).unwrap();
    let check = json(&["cocycle-check", "--in", cocycle_file.to_str().unwrap()]);
    assert_eq!(check["valid"], true, "{check}");

    let index = parsed.clone().into_index(None).unwrap();
    let again: IndexJson = serde_json::from_str(&serde_json::to_string(&index.to_json()).unwrap()).unwrap();
    assert!(index_equal(&index, &again.into_index(None).unwrap()));
    let text = std::fs::read_to_string(fixture("cocycle_pauli_klein.json")).unwrap();
    let pauli = serde_json::from_str::<CocycleJson>(&text).unwrap().into_cocycle(None).unwrap();
    assert!(cohomologous(&index.cls, &pauli, None, 1e-8).unwrap().cohomologous);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["index", "--in", "system_r0_pauli_klein.json"],
        vec!["fmps-rho", "--in", "mps_pauli_d2_m2.json", "--l", "1"],
        vec!["fmps-index", "--in", "mps_pauli_d2_m2.json", "--in2", "sym_pauli_klein.json"],
        vec!["z8-table", "--table"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["index"]).0, 2);
    assert_eq!(call(&["index", "--in", "/nonexistent/system.json"]).0, 2);

    let (code, _, err) = call(&["group-check", "--in", &fixture("group_broken.json")]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: NotAssociative"), "{err}");

    let (code, _, err) = call(&["index", "--in", &fixture("system_not_balanced.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("NotBalanced"), "{err}");

    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "{\"n\": 2, \"table\": [[0, 1],\n [1, 0]").unwrap();
    let (code, _, err) = call(&["group-check", "--in", garbage.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{err}");

    let mps = fixture("mps_majorana.json");
    assert_eq!(call(&["fmps-expect", "--in", &mps, "--word", "[[1,0],"]).0, 2);
}

#[test]
fn cohomologous_reports_modulus_and_caveat() {
    let pauli = fixture("cocycle_pauli_klein.json");
    let trivial = fixture("cocycle_trivial_klein.json");
    let same = json(&["cohomologous", "--in", &pauli, "--in2", &pauli]);
    assert_eq!(same["cohomologous"], true);
    assert!(same["witness"].is_array());
    let differ = json(&["cohomologous", "--in", &pauli, "--in2", &trivial]);
    assert_eq!(differ["cohomologous"], false);
    assert_eq!(differ["modulus"], 8);
    assert!(differ["caveat"].is_string());
}

#[test]
fn stacking_agrees_with_the_law() {
    let tr = fixture("system_r1_time_reversal.json");
    let out = json(&["stack", "--in", &tr, "--in2", &tr]);
    assert_eq!(out["agree"], true);
    assert_eq!(out["index"]["kappa"], 0);
}

#[test]
fn fmps_commands() {
    let mps = fixture("mps_majorana.json");
    let valid = json(&["fmps-validate", "--in", &mps]);
    assert_eq!(valid["valid"], true);
    let value = json(&["fmps-expect", "--in", &mps, "--word", "[[1,0],[0,1]]"]);
    let text = value.to_string();
    assert!(text.contains("0.25"), "{text}");

    let rho = json(&["fmps-rho", "--in", &fixture("mps_even_d1_m2.json"), "--l", "2"]);
    assert_eq!(rho["footer"]["passed"], true, "{rho}");

    let idx =
        json(&["fmps-index", "--in", &fixture("mps_pauli_d2_m2.json"), "--in2", &fixture("sym_pauli_klein.json")]);
    assert_eq!(idx["kappa"], 0);
    assert_eq!(idx["q"], serde_json::json!([0, 0, 1, 1]));
}

#[test]
fn binary_matches_library_entry_point() {
    let path = fixture("system_r1_time_reversal.json");
    let output = Command::new(env!("CARGO_BIN_EXE_fspt")).args(["index", "--in", &path]).output().unwrap();
    assert!(output.status.success());
    let (_, expected, _) = call(&["index", "--in", &path]);
    assert_eq!(String::from_utf8(output.stdout).unwrap(), expected);

    let output = Command::new(env!("CARGO_BIN_EXE_fspt")).args(["bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let output = Command::new(env!("CARGO_BIN_EXE_fspt"))
        .args(["group-check", "--in", &fixture("group_broken.json")])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}
