//! End-to-end tests against the compiled `bilat` binary: exit codes, output
//! shapes, and file handling. Fixtures live in per-test temp dirs; the only
//! shared input is the proof corpus shipped at the repository root.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bilat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("stdout is JSON")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// The four-rule base used as the running example everywhere: r follows
/// (positively and negatively) from p with q refuted, p is an axiom, and s
/// discharges the refutation-assumption q.
const EXAMPLE_BASE: &str = r#"{
  "rules": [
    { "name": "R1",
      "premises": [ { "atom": "p", "polarity": "+" }, { "atom": "q", "polarity": "-" } ],
      "conclusion": "r", "conclusionPolarity": "+" },
    { "name": "R2",
      "premises": [ { "atom": "p", "polarity": "+" }, { "atom": "q", "polarity": "-" } ],
      "conclusion": "r", "conclusionPolarity": "-" },
    { "name": "R3", "premises": [], "conclusion": "p", "conclusionPolarity": "+" },
    { "name": "R4",
      "premises": [ { "atom": "r", "polarity": "+", "dischargedRefutations": ["q"] } ],
      "conclusion": "s", "conclusionPolarity": "+" }
  ]
}"#;

fn write_example_base(dir: &Path) -> PathBuf {
    let path = dir.join("base.json");
    fs::write(&path, EXAMPLE_BASE).expect("write base");
    path
}

// ---------------------------------------------------------------------------
// derive / check-atomic

#[test]
fn derive_refutation_from_example_base() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "r",
        "--polarity",
        "-",
        "--refutations",
        "q",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("derivable: [] ; [q] |-- r"), "{text}");
    assert!(text.contains("rule R2"), "{text}");
    assert!(text.contains("assume q -"), "{text}");
}

#[test]
fn derive_underivable_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "q",
        "--polarity",
        "+",
        "--proofs",
        "p",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not derivable: [p] ; [] |-+ q"));
}

#[test]
fn derive_json_has_stable_shape() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "s",
        "--polarity",
        "+",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["command"], "derive");
    assert_eq!(v["derivable"], true);
    assert_eq!(v["sequent"]["conclusion"], "s");
    assert_eq!(v["sequent"]["polarity"], "+");
    assert_eq!(v["witness"]["kind"], "rule");
    assert_eq!(v["witness"]["rule"], "R4");
}

#[test]
fn seed_is_echoed_into_json() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "p",
        "--polarity",
        "+",
        "--json",
        "--seed",
        "11",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["seed"], 11);
}

#[test]
fn out_flag_writes_the_document_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let target = dir.path().join("result.json");
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "p",
        "--polarity",
        "+",
        "--json",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["derivable"], true);
}

#[test]
fn check_atomic_validates_a_derive_witness() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "derive",
        "--base",
        base.to_str().unwrap(),
        "--goal",
        "s",
        "--polarity",
        "+",
        "--json",
    ]);
    let witness = json(&out)["witness"].clone();
    let ded_path = dir.path().join("ded.json");
    fs::write(&ded_path, serde_json::to_string(&witness).unwrap()).unwrap();
    let out = bilat(&[
        "check-atomic",
        "--base",
        base.to_str().unwrap(),
        "--deduction",
        ded_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("checked: [] ; [] |-+ s"));
}

#[test]
fn check_atomic_rejects_a_foreign_deduction() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    // R5 does not exist in the base.
    let ded_path = dir.path().join("ded.json");
    fs::write(&ded_path, r#"{"kind":"rule","rule":"R5","children":[]}"#).unwrap();
    let out = bilat(&[
        "check-atomic",
        "--base",
        base.to_str().unwrap(),
        "--deduction",
        ded_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check failed"));
}

// ---------------------------------------------------------------------------
// check-nd

#[test]
fn check_nd_accepts_a_corpus_proof() {
    let proof = corpus_dir().join("thm_imp_refl.json");
    let out = bilat(&["check-nd", "--proof", proof.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "checked: [] ; [] |-+ p -> p\n");
}

#[test]
fn check_nd_rejects_a_broken_proof_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // AndIPlus needs two children.
    fs::write(
        &path,
        r#"{"kind":"apply","rule":"AndIPlus","conclusion":"p & q",
           "children":[{"kind":"assume","formula":"p","polarity":"+"}]}"#,
    )
    .unwrap();
    let out = bilat(&["check-nd", "--proof", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("check failed"));
}

// ---------------------------------------------------------------------------
// dual

#[test]
fn dual_formula_is_involutive_on_printed_output() {
    let out = bilat(&["dual", "--formula", "(p <- q) -> bot"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "top <- (q -> p)\n");
    let back = bilat(&["dual", "--formula", "top <- (q -> p)"]);
    assert_eq!(stdout(&back), "(p <- q) -> bot\n");
}

#[test]
fn dual_requires_exactly_one_input() {
    let out = bilat(&["dual"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("exactly one"));
    let out = bilat(&["dual", "--formula", "p", "--base", "x.json"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn dual_base_swaps_rule_polarities() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&["dual", "--base", base.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    // R3 was a proof axiom for p; its dual is a refutation axiom.
    let rule = v["result"]["rules"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "R3^D")
        .expect("R3^D present in the dual base");
    assert_eq!(rule["conclusionPolarity"], "-");
    assert_eq!(rule["conclusion"], "p");
}

// ---------------------------------------------------------------------------
// kripke

const TWO_WORLD_MODEL: &str = r#"{
  "worlds": ["w0", "w1"],
  "order": [["w0", "w1"]],
  "vplus": { "w0": [], "w1": ["p"] },
  "vminus": { "w0": ["q"], "w1": ["q"] }
}"#;

#[test]
fn kripke_check_validates_and_tests_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(&path, TWO_WORLD_MODEL).unwrap();
    let out = bilat(&["kripke-check", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("model ok: 2 world(s)"));

    // q is refuted everywhere, so q -> bot is not *refuted* anywhere: the
    // refutation clause needs q proved, which w0 lacks.
    let out = bilat(&[
        "kripke-check",
        "--model",
        path.to_str().unwrap(),
        "--formula",
        "q -> bot",
        "--polarity",
        "-",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not forced at world w0"));

    let out = bilat(&[
        "kripke-check",
        "--model",
        path.to_str().unwrap(),
        "--formula",
        "q",
        "--polarity",
        "-",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("forced at every world"));
}

#[test]
fn kripke_check_rejects_non_persistent_models() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    // p proved at w0 but lost at w1 above it.
    fs::write(
        &path,
        r#"{"worlds":["w0","w1"],"order":[["w0","w1"]],
            "vplus":{"w0":["p"],"w1":[]},"vminus":{"w0":[],"w1":[]}}"#,
    )
    .unwrap();
    let out = bilat(&["kripke-check", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("invalid model"));
}

#[test]
fn kripke_check_needs_formula_and_polarity_together() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    fs::write(&path, TWO_WORLD_MODEL).unwrap();
    let out = bilat(&[
        "kripke-check",
        "--model",
        path.to_str().unwrap(),
        "--formula",
        "p",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn countermodel_found_for_excluded_middle() {
    let out = bilat(&[
        "kripke-countermodel",
        "--formula",
        "p | (p -> bot)",
        "--polarity",
        "+",
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert!(v["model"]["worlds"].as_array().unwrap().len() <= 3);
    assert!(v["witnessWorld"].is_string());
}

#[test]
fn no_countermodel_for_a_provable_formula() {
    let out = bilat(&[
        "kripke-countermodel",
        "--formula",
        "p -> p",
        "--polarity",
        "+",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["found"], false);
}

// ---------------------------------------------------------------------------
// simulation

#[test]
fn simulate_build_emits_base_and_mapping() {
    let out = bilat(&["simulate-build", "--formula", "p -> q", "--json"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert!(!v["base"]["rules"].as_array().unwrap().is_empty());
    assert!(v["mapping"].as_object().is_some());
}

#[test]
fn simulate_build_out_writes_base_and_mapping_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sim.json");
    let out = bilat(&[
        "simulate-build",
        "--formula",
        "p -> q",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("wrote"));
    let base: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert!(base["rules"].is_array());
    let sidecar = dir.path().join("sim.mapping.json");
    let mapping: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert!(mapping.is_object());
}

#[test]
fn simulate_translate_round_trips_a_corpus_proof() {
    let dir = tempfile::tempdir().unwrap();
    let proof = corpus_dir().join("flex_or_elim.json");
    let out = bilat(&[
        "simulate-translate",
        "--proof",
        proof.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["direction"], "nd-to-atomic");
    // The atomic sequent mirrors the source judgment through the mapping.
    assert_eq!(v["sequent"]["polarity"], "-");

    let ded_path = dir.path().join("atomic.json");
    fs::write(&ded_path, serde_json::to_string(&v["result"]).unwrap()).unwrap();
    let out = bilat(&[
        "simulate-translate",
        "--formula",
        "top <- ((p | q) -> r)",
        "--deduction",
        ded_path.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["direction"], "atomic-to-nd");
    assert_eq!(v["judgment"]["conclusion"], "p | q -> r");
    assert_eq!(v["judgment"]["polarity"], "-");
    assert_eq!(v["judgment"]["gamma"][0], "p | q");
    assert_eq!(v["judgment"]["delta"][0], "r");
}

#[test]
fn simulate_translate_deduction_requires_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let ded_path = dir.path().join("atomic.json");
    fs::write(&ded_path, r#"{"kind":"assume","atom":"p","polarity":"+"}"#).unwrap();
    let out = bilat(&[
        "simulate-translate",
        "--deduction",
        ded_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("--formula"));
}

// ---------------------------------------------------------------------------
// bes-support / harmony

const COLLAPSE_BASE: &str = r#"{
  "rules": [
    { "name": "P_p", "premises": [
        { "atom": "p", "polarity": "+", "dischargedProofs": ["p"] },
        { "atom": "p", "polarity": "+", "dischargedProofs": ["q"] } ],
      "conclusion": "p", "conclusionPolarity": "+" },
    { "name": "N_p", "premises": [
        { "atom": "p", "polarity": "-", "dischargedProofs": ["p"] },
        { "atom": "p", "polarity": "-", "dischargedProofs": ["q"] } ],
      "conclusion": "p", "conclusionPolarity": "-" },
    { "name": "P_q", "premises": [
        { "atom": "q", "polarity": "+", "dischargedProofs": ["p"] },
        { "atom": "q", "polarity": "+", "dischargedProofs": ["q"] } ],
      "conclusion": "q", "conclusionPolarity": "+" },
    { "name": "N_q", "premises": [
        { "atom": "q", "polarity": "-", "dischargedProofs": ["p"] },
        { "atom": "q", "polarity": "-", "dischargedProofs": ["q"] } ],
      "conclusion": "q", "conclusionPolarity": "-" },
    { "name": "P_r", "premises": [
        { "atom": "r", "polarity": "+", "dischargedProofs": ["p"] },
        { "atom": "r", "polarity": "+", "dischargedProofs": ["q"] } ],
      "conclusion": "r", "conclusionPolarity": "+" },
    { "name": "N_r", "premises": [
        { "atom": "r", "polarity": "-", "dischargedProofs": ["p"] },
        { "atom": "r", "polarity": "-", "dischargedProofs": ["q"] } ],
      "conclusion": "r", "conclusionPolarity": "-" }
  ]
}"#;

#[test]
fn bes_support_exit_codes_cover_all_three_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());

    // p is an axiom: holds, exit 0.
    let out = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "p",
        "--polarity",
        "+",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("HOLDS"));

    // Absurdity never holds over a finite base: a fresh atom witnesses it.
    let out = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "bot",
        "--polarity",
        "+",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.starts_with("FAILS (clause bot+"), "{text}");

    // A base whose rules close off every candidate violation leaves the
    // bounded search empty-handed.
    let closed = dir.path().join("closed.json");
    fs::write(&closed, COLLAPSE_BASE).unwrap();
    let out = bilat(&[
        "bes-support",
        "--base",
        closed.to_str().unwrap(),
        "--formula",
        "p | q",
        "--polarity",
        "+",
        "--budget",
        "0,1,1,1",
    ]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    assert!(stdout(&out).contains("UNKNOWN (bounded search exhausted"));
}

#[test]
fn bes_support_json_carries_the_full_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "bot",
        "--polarity",
        "+",
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["command"], "bes-support");
    assert_eq!(v["verdict"]["outcome"], "fails");
    assert_eq!(v["verdict"]["witness"]["clause"], "bot+");
    // The witnessing atom is fresh: not one of the base's atoms.
    let atom = v["verdict"]["witness"]["atom"].as_str().unwrap();
    assert!(!["p", "q", "r", "s"].contains(&atom), "{atom}");
}

#[test]
fn naive_flag_switches_clause_readings() {
    // Proof axioms for every atom in sight and no refutation rules: the
    // naive reading of absurdity is satisfied, the bilateral one is not.
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("axioms.json");
    fs::write(
        &base,
        r#"{"rules":[
            {"name":"A1","premises":[],"conclusion":"p","conclusionPolarity":"+"},
            {"name":"A2","premises":[],"conclusion":"q","conclusionPolarity":"+"},
            {"name":"A3","premises":[],"conclusion":"r","conclusionPolarity":"+"}]}"#,
    )
    .unwrap();
    let naive = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "bot",
        "--polarity",
        "+",
        "--budget",
        "0,0,1,1",
        "--naive",
    ]);
    assert_eq!(code(&naive), 0, "{}", stdout(&naive));
    let standard = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "bot",
        "--polarity",
        "+",
        "--budget",
        "0,0,1,1",
    ]);
    assert_eq!(code(&standard), 1, "{}", stdout(&standard));
}

#[test]
fn harmony_reports_consistency_on_the_example_base() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "harmony",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "p -> p",
        "--polarity",
        "+",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["report"]["violation"], false);
    assert_eq!(v["report"]["primal"]["outcome"], "holds");
    assert_eq!(v["report"]["dual"]["outcome"], "holds");
}

// ---------------------------------------------------------------------------
// corpus-run

#[test]
fn corpus_run_passes_on_the_shipped_corpus() {
    let out = bilat(&["corpus-run", corpus_dir().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("checked 18, passed 18, failed 0"), "{text}");
}

#[test]
fn corpus_run_names_the_corrupt_file_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        corpus_dir().join("thm_top.json"),
        dir.path().join("thm_top.json"),
    )
    .unwrap();
    fs::copy(
        corpus_dir().join("thm_top.expect.json"),
        dir.path().join("thm_top.expect.json"),
    )
    .unwrap();
    fs::write(dir.path().join("broken.json"), "{ not json").unwrap();
    fs::write(
        dir.path().join("broken.expect.json"),
        r#"{"polarity":"+","conclusion":"top"}"#,
    )
    .unwrap();
    let out = bilat(&["corpus-run", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("broken.json"), "{text}");
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("checked 2, passed 1, failed 1"), "{text}");
}

#[test]
fn corpus_run_flags_a_missing_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        corpus_dir().join("thm_top.json"),
        dir.path().join("orphan.json"),
    )
    .unwrap();
    let out = bilat(&["corpus-run", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("missing sidecar"));
}

#[test]
fn corpus_run_flags_a_judgment_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(
        corpus_dir().join("thm_top.json"),
        dir.path().join("thm_top.json"),
    )
    .unwrap();
    fs::write(
        dir.path().join("thm_top.expect.json"),
        r#"{"polarity":"-","conclusion":"top"}"#,
    )
    .unwrap();
    let out = bilat(&["corpus-run", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("judgment mismatch"));
}

#[test]
fn corpus_run_on_an_empty_directory_is_a_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = bilat(&["corpus-run", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("checked 0, passed 0, failed 0"));
}

#[test]
fn corpus_run_on_a_missing_directory_exits_three() {
    let out = bilat(&["corpus-run", "/nonexistent/certainly/missing"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("error:"));
}

// ---------------------------------------------------------------------------
// argument and input errors

#[test]
fn missing_input_file_exits_three_and_names_the_file() {
    let out = bilat(&["check-nd", "--proof", "/nonexistent/proof.json"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("/nonexistent/proof.json"));
}

#[test]
fn malformed_formula_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "p -> ",
        "--polarity",
        "+",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("--formula"));
}

#[test]
fn malformed_budget_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let base = write_example_base(dir.path());
    let out = bilat(&[
        "bes-support",
        "--base",
        base.to_str().unwrap(),
        "--formula",
        "p",
        "--polarity",
        "+",
        "--budget",
        "1,2",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("--budget"));
}

#[test]
fn unknown_flag_exits_three() {
    let out = bilat(&["derive", "--bogus"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn help_exits_zero() {
    let out = bilat(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bes-support"));
}
