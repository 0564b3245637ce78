//! Golden behavior of the binary: pinned lines, exit codes, and byte
//! stability of the JSON surface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_qlab"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// gen + wedge fixtures shared by most tests.
fn fixtures(dir: &Path) {
    for args in [
        ["gen", "chain", "2", "--out", "c2.json"],
        ["gen", "boolean", "2", "--out", "b2.json"],
    ] {
        assert_eq!(code(&run_in(dir, &args)), 0);
    }
}

#[test]
fn gen_chain_prints_the_summary_and_writes_pinned_covers() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["gen", "chain", "4", "--out", "c4.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "name=chain(4) n=4 join-irreducibles=3 distributive=true\n"
    );
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c4.json")).unwrap())
            .unwrap();
    assert_eq!(file["n"], 4);
    assert_eq!(file["covers"], serde_json::json!([[0, 1], [1, 2], [2, 3]]));
}

#[test]
fn gen_reports_boolean_atoms_and_diamond_non_distributivity() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["gen", "boolean", "3", "--out", "b3.json"]);
    assert_eq!(
        stdout(&out),
        "name=boolean(3) n=8 join-irreducibles=3 distributive=true\n"
    );
    let out = run_in(dir.path(), &["gen", "m3", "--out", "m3.json"]);
    assert!(stdout(&out).contains("distributive=false"));
}

#[test]
fn wedge_methods_emit_identical_pair_lists() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let fast = run_in(
        dir.path(),
        &["wedge", "b2.json", "--method", "fast", "--out", "fast.json"],
    );
    let oracle = run_in(
        dir.path(),
        &[
            "wedge",
            "b2.json",
            "--method",
            "oracle",
            "--out",
            "oracle.json",
        ],
    );
    assert_eq!(code(&fast), 0);
    assert_eq!(code(&oracle), 0);
    let read = |name: &str| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap()
    };
    assert_eq!(read("fast.json")["pairs"], read("oracle.json")["pairs"]);
}

#[test]
fn compose_reproduces_the_boolean_2_projection_example() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("topbar.json"),
        "{\"lattice\":\"boolean(2)\",\"image\":[1,1,1,1]}\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("id.json"),
        "{\"lattice\":\"boolean(2)\",\"image\":[0,1,2,3]}\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["compose", "--op", "dot", "topbar.json", "id.json"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "lattice=boolean(2) op=dot image=[0,1,1,1] sup-preserving=true meet-preserving=false\n"
    );
}

#[test]
fn laws_dot_prints_the_quantale_verdict() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "laws",
            "c2.json",
            "--structure",
            "dot",
            "--mode",
            "exhaustive",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("associativity: PASS"));
    assert!(text.ends_with("quantale: PASS\n"));
}

#[test]
fn laws_circ_reports_the_expected_refutation_without_failing_the_run() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run_in(dir.path(), &["laws", "c2.json", "--structure", "circ"]);
    assert_eq!(code(&out), 0, "informational rows must not set exit 1");
    let text = stdout(&out);
    assert!(text.contains("sup-distributivity: FAIL (informational)"));
    assert!(text.contains("quantale: FAIL"));
}

#[test]
fn audit_suspect_claims_fail_loudly_but_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run_in(dir.path(), &["audit", "c2.json", "--claims", "Cor 3.13(4)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("FAIL Cor 3.13(4)"));
    assert!(text.contains("counterexample:"));
    assert!(text.contains("theorem-failures=0"));
}

#[test]
fn audit_skips_wedge_claims_on_the_diamond() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run_in(dir.path(), &["gen", "m3", "--out", "m3.json"]);
    assert_eq!(code(&gen), 0);
    let out = run_in(dir.path(), &["audit", "m3.json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("SKIP"));
    assert!(text.contains("not distributive"));
    assert!(text.contains("theorem-failures=0"));
}

#[test]
fn audit_rejects_unknown_claim_ids_as_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run_in(dir.path(), &["audit", "c2.json", "--claims", "Lemma 9.9"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown claim id"));
}

#[test]
fn json_surfaces_are_byte_stable_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let args = [
        "audit",
        "c2.json",
        "--claims",
        "all",
        "--mode",
        "sample",
        "--samples",
        "50",
        "--seed",
        "9",
        "--format",
        "json",
    ];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));

    let laws = [
        "laws",
        "c2.json",
        "--structure",
        "bullet",
        "--format",
        "json",
    ];
    let a = run_in(dir.path(), &laws);
    let b = run_in(dir.path(), &laws);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn audit_report_files_load_back_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "audit",
            "c2.json",
            "--claims",
            "Prop 3.7,Thm 3.8",
            "--out",
            "report.json",
        ],
    );
    assert_eq!(code(&out), 0);
    let reports = qlab_core::files::load_reports(&dir.path().join("report.json")).unwrap();
    let ids: Vec<&str> = reports.iter().map(|r| r.claim_id.as_str()).collect();
    assert_eq!(ids, vec!["Prop 3.7", "Thm 3.8"]);
    assert!(reports.iter().all(|r| r.verdict.is_pass()));
}

#[test]
fn the_size_cap_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(bin())
        .args(["gen", "chain", "5"])
        .env("QLAB_LIMIT", "4")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("exceeds the configured limit 4"));
}

#[test]
fn compose_needs_a_resolvable_lattice() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("g.json"),
        "{\"lattice\":\"mystery\",\"image\":[0]}\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["compose", "--op", "circ", "g.json", "g.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("pass --lattice"));
}

#[test]
fn replay_confirms_saved_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let audited = run_in(
        dir.path(),
        &[
            "audit",
            "c2.json",
            "--claims",
            "Cor 3.10(5),Cor 3.13(4)",
            "--out",
            "rep.json",
        ],
    );
    assert_eq!(code(&audited), 0);
    let out = run_in(dir.path(), &["replay", "rep.json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("REPLAY Cor 3.10(5)"));
    assert!(text.contains("REPLAY Cor 3.13(4)"));
    assert!(text.contains("confirmed=2 stale=0"));
}

#[test]
fn replay_flags_doctored_witnesses_and_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let audited = run_in(
        dir.path(),
        &[
            "audit",
            "c2.json",
            "--claims",
            "Cor 3.13(4)",
            "--out",
            "rep.json",
        ],
    );
    assert_eq!(code(&audited), 0);

    // Swap the stored witness f=[1,1] for [0,1]; the equivalence then holds
    // for the pair and the saved violation must stop reproducing.
    let raw = std::fs::read_to_string(dir.path().join("rep.json")).unwrap();
    let mut reports: serde_json::Value = serde_json::from_str(&raw).unwrap();
    let witness = &mut reports[0]["verdict"]["counterexample"]["witnesses"][0];
    assert_eq!(witness["name"], "f");
    witness["value"]["image"] = serde_json::json!([0, 1]);
    std::fs::write(
        dir.path().join("doctored.json"),
        serde_json::to_string_pretty(&reports).unwrap(),
    )
    .unwrap();

    let out = run_in(dir.path(), &["replay", "doctored.json"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("STALE  Cor 3.13(4)"));
    assert!(text.contains("confirmed=0 stale=1"));
}

#[test]
fn replay_resolves_file_only_lattices_through_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["gen", "product", "c2.json", "c2.json", "--out", "p.json"],
        )),
        0
    );
    let audited = run_in(
        dir.path(),
        &[
            "audit",
            "p.json",
            "--claims",
            "Cor 3.13(4)",
            "--out",
            "rep.json",
        ],
    );
    assert_eq!(code(&audited), 0);

    let bare = run_in(dir.path(), &["replay", "rep.json"]);
    assert_eq!(code(&bare), 2);
    assert!(stderr(&bare).contains("cannot resolve lattice"));

    let resolved = run_in(dir.path(), &["replay", "rep.json", "--lattice", "p.json"]);
    assert_eq!(code(&resolved), 0);
    assert!(stdout(&resolved).contains("confirmed=1 stale=0"));
}
