use std::path::PathBuf;

use labeled_simplicity::fixtures;
use labeled_simplicity_cli::{run, AnalysisReport, EXIT_ERROR, EXIT_OK, EXIT_OUT_OF_SCOPE};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.lg", env!("CARGO_MANIFEST_DIR"))
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{name}.json"))
}

fn lgsimple(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lgsimple").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn exit_codes() {
    let (code, out, _) = lgsimple(&["analyze", &fixture("G2")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("simple: yes"), "{out}");

    let (code, out, _) = lgsimple(&["analyze", &fixture("G7")]);
    assert_eq!(code, EXIT_OUT_OF_SCOPE);
    assert_eq!(
        out.trim(),
        "outside theorem scope (not weakly left-resolving)"
    );

    let (code, out, _) = lgsimple(&["analyze", "--json", &fixture("G7")]);
    assert_eq!(code, EXIT_OUT_OF_SCOPE);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["in_scope"], false);

    let (code, _, err) = lgsimple(&["analyze", "missing.lg"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("missing.lg"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lg");
    std::fs::write(&bad, "vertices: v\nedge v a\n").unwrap();
    let (code, _, err) = lgsimple(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 2"), "{err}");

    let sink = dir.path().join("sink.lg");
    std::fs::write(&sink, "vertices: v w\nedge v a w\nedge v b v\n").unwrap();
    let (code, out, _) = lgsimple(&["analyze", sink.to_str().unwrap()]);
    assert_eq!(code, EXIT_OUT_OF_SCOPE);
    assert!(out.contains("sinks: w"), "{out}");

    let (code, _, err) = lgsimple(&["fuzz", "--n", "0"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("--n"), "{err}");

    let (code, _, _) = lgsimple(&["frobnicate"]);
    assert_eq!(code, EXIT_ERROR);
    let (code, out, _) = lgsimple(&["--help"]);
    assert_eq!(code, EXIT_OK);
    let _ = out;
}

#[test]
fn json_goldens() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in fixtures::NAMES.iter().filter(|&&n| n != "G7") {
        let (code, out, err) = lgsimple(&["analyze", "--json", &fixture(name)]);
        assert_eq!(code, EXIT_OK, "{name}: {err}");
        let got = without_timing(serde_json::from_str(&out).unwrap());
        let path = golden(name);
        if update {
            std::fs::write(&path, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
            continue;
        }
        let want: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn report_shape() {
    let (_, out, _) = lgsimple(&["analyze", "--json", &fixture("G3")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["simple"], false);
    assert_eq!(
        v["witnesses"]["disagreeable"]["set"],
        serde_json::json!(["v1"])
    );
    assert_eq!(v["witnesses"]["disagreeable"]["word"], "aab");
    for key in [
        "graph",
        "atoms",
        "validation",
        "disagreeable",
        "strongly_cofinal",
        "cycles_without_exit",
        "proper_hereditary_saturated",
        "domain_condition",
        "simple",
        "condition_c",
        "consistent",
        "witnesses",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }

    let (_, out, _) = lgsimple(&["analyze", "--json", &fixture("G2")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["simple"], true);
    let w = v["witnesses"].as_object().unwrap();
    assert!(w.values().all(Value::is_null));
    assert_eq!(w.len(), 4);

    let (_, out, _) = lgsimple(&["analyze", "--json", &fixture("G5")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witnesses"]["disagreeable"]["word"], "e1.e2");
}

#[test]
fn report_round_trips() {
    for name in fixtures::NAMES.iter().filter(|&&n| n != "G7") {
        let (_, out, _) = lgsimple(&[
            "analyze",
            "--json",
            "--verify-witness",
            "--max-loop-len",
            "3",
            &fixture(name),
        ]);
        let report: AnalysisReport = serde_json::from_str(&out).unwrap();
        let again = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(
            serde_json::from_str::<AnalysisReport>(&again).unwrap(),
            report
        );
        assert_eq!(again.trim(), out.trim());
    }
}

#[test]
fn witnesses_replay_on_every_fixture() {
    for name in fixtures::NAMES.iter().filter(|&&n| n != "G7") {
        let (code, out, _) = lgsimple(&["analyze", "--json", "--verify-witness", &fixture(name)]);
        assert_eq!(code, EXIT_OK, "{name}");
        let report: AnalysisReport = serde_json::from_str(&out).unwrap();
        let replay = report.witness_replay.unwrap();
        assert!(replay.iter().all(|e| e.ok), "{name}: {replay:?}");
        let expected = report.cycles_without_exit.len()
            + [
                report.witnesses.disagreeable.is_some(),
                report.witnesses.strongly_cofinal.is_some(),
                report.witnesses.proper_hereditary_saturated.is_some(),
                report.witnesses.domain_condition.is_some(),
            ]
            .iter()
            .filter(|&&b| b)
            .count();
        assert_eq!(replay.len(), expected, "{name}");
    }
}

#[test]
fn tampered_witness_fails_replay() {
    let g = fixtures::load("G2");
    let atoms = labeled_simplicity::stable_partition(&g);
    let (_, out, _) = lgsimple(&["analyze", "--json", &fixture("G2")]);
    let mut report: AnalysisReport = serde_json::from_str(&out).unwrap();
    report.witnesses.disagreeable = Some(labeled_simplicity_cli::report::DisagreeWitness {
        set: vec!["v".into()],
        word: "a".into(),
    });
    let replay = labeled_simplicity_cli::replay_witnesses(&g, &atoms, &report);
    assert_eq!(replay.len(), 1);
    assert!(!replay[0].ok);
    assert!(
        replay[0]
            .error
            .as_deref()
            .unwrap()
            .contains("emits 2 words"),
        "{replay:?}"
    );
}

#[test]
fn loop_listing_marks_type_two_exit() {
    let (code, out, _) = lgsimple(&["analyze", "--max-loop-len", "1", &fixture("G10")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("(a, {u}): exit II"), "{out}");
    let (code, _, _) = lgsimple(&["analyze", "--max-loop-len", "0", &fixture("G10")]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn atoms_command() {
    let (code, out, _) = lgsimple(&["atoms", &fixture("G3")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out,
        "level 1: {v1} {v2, v3}\nlevel 2: {v1} {v2} {v3}\nstabilized at level 2 with 3 atoms\n"
    );
}

#[test]
fn fuzz_command() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("dumps");
    let (code, out, _) = lgsimple(&[
        "fuzz",
        "--n",
        "1",
        "--max-vertices",
        "1",
        "--seed",
        "7",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("1 graphs checked"), "{out}");
    assert!(!out_dir.exists());

    let (code, out, _) = lgsimple(&[
        "fuzz",
        "--n",
        "20",
        "--seed",
        "3",
        "--json",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let s: labeled_simplicity_cli::FuzzSummary = serde_json::from_str(&out).unwrap();
    assert_eq!(s.checked + s.skipped, 20);
    assert_eq!(s.violations, 0);
}
