use std::process::{Command, Output};

const FLAGSHIP: &str = "(q,q^4;q^5) (q^6,q^9;q^15)^2";

fn qdissect(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qdissect"));
    cmd.args(args).env_remove("QDISSECT_ORDER");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn qdissect")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn expand_prints_exponent_coefficient_lines() {
    let out = qdissect(&["expand", "(q,q^4;q^5)", "--order", "12"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let expected = "0 1\n1 -1\n4 -1\n5 1\n6 -1\n7 1\n9 -1\n10 2\n11 -2\n12 1\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn expand_json_matches_the_series_schema() {
    let out = qdissect(&["expand", FLAGSHIP, "--order", "8", "--json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["lo"], 0);
    assert_eq!(v["order"], 8);
    let coeffs = v["coeffs"].as_array().expect("coeffs array");
    // Pairs [exponent, decimal-string], nonzero, increasing.
    let mut last = i64::MIN;
    for pair in coeffs {
        let e = pair[0].as_i64().expect("integer exponent");
        let c = pair[1].as_str().expect("string coefficient");
        assert!(e > last);
        assert_ne!(c, "0");
        last = e;
    }
    // The progression exponents 3 and 8 are absent.
    let exps: Vec<i64> = coeffs.iter().map(|p| p[0].as_i64().unwrap()).collect();
    assert_eq!(exps, vec![0, 1, 4, 5, 6, 7]);
}

#[test]
fn parse_errors_exit_two_and_stay_off_stdout() {
    let out = qdissect(&["expand", "(q;q^1)"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("parse error at byte 2"));

    let out = qdissect(&["expand", "(q,q^3;q^5)"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exponents do not sum to modulus"));
}

#[test]
fn usage_errors_exit_two() {
    let out = qdissect(&["expand", FLAGSHIP, "--no-such-flag"], &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = qdissect(&["verify", FLAGSHIP, "--mod", "5", "--residue", "7"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("residue"));
}

#[test]
fn verify_splits_exit_codes_by_outcome() {
    let ok = qdissect(
        &["verify", FLAGSHIP, "--mod", "5", "--residue", "3", "--order", "300"],
        &[],
    );
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("status: verified"));

    let bad = qdissect(
        &["verify", FLAGSHIP, "--mod", "5", "--residue", "1", "--order", "300"],
        &[],
    );
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("status: refuted"));
    assert!(text.contains("first counterexample: n=1, coefficient -1"));
}

#[test]
fn prove_certifies_and_reports_groups() {
    let out = qdissect(
        &["prove", FLAGSHIP, "--mod", "5", "--residue", "3", "--order", "200", "--json"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["status"], "certified");
    assert_eq!(v["first_counterexample"], serde_json::Value::Null);
    let groups = v["groups"].as_array().expect("groups");
    assert_eq!(groups.len(), 2);
    for g in groups {
        assert_eq!(g["t"], 5);
        assert_eq!(g["r"], 3);
        assert_eq!(g["mode"], "certified");
        assert_eq!(g["status"], "cancelled");
        assert_eq!(g["residual_first_exponent"], serde_json::Value::Null);
        assert!(!g["pairing"].as_array().unwrap().is_empty());
    }
}

#[test]
fn prove_refutes_with_the_verifier_counterexample() {
    let out = qdissect(
        &["prove", FLAGSHIP, "--mod", "5", "--residue", "1", "--order", "200", "--json"],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["first_counterexample"]["n"], 1);
    assert_eq!(v["first_counterexample"]["coeff"], "-1");
}

#[test]
fn prove_rejects_unsupported_powers_with_exit_three() {
    let out = qdissect(
        &["prove", "(-q,-q^4;q^5) (q^3,q^7;q^10)^3", "--mod", "5", "--residue", "2"],
        &[],
    );
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("status: inapplicable"));
    assert!(text.contains("reason: unsupported theta power 3"));
}

#[test]
fn catalog_json_summary_is_frozen() {
    let out = qdissect(&["catalog", "--order", "400", "--json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["claims"].as_array().unwrap().len(), 65);
    assert_eq!(v["summary"]["certified"], 59);
    assert_eq!(v["summary"]["verified"], 6);
    assert_eq!(v["summary"]["refuted"], 0);
    assert_eq!(v["summary"]["inapplicable"], 0);
    for c in v["claims"].as_array().unwrap() {
        let id = c["id"].as_str().unwrap();
        if id.starts_with("sec1-") {
            assert_eq!(c["status"], "verified", "{id}");
            assert_eq!(c["prover"], "inapplicable", "{id}");
        } else {
            assert_eq!(c["status"], "certified", "{id}");
            assert!(c.get("prover").is_none(), "{id}");
        }
    }
}

#[test]
fn catalog_runs_are_byte_deterministic() {
    let a = qdissect(&["catalog", "--order", "300", "--json"], &[]);
    let b = qdissect(&["catalog", "--order", "300", "--json"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let a = qdissect(&["scan", "--family", "e"], &[]);
    let b = qdissect(&["scan", "--family", "e"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn order_flag_beats_environment_beats_default() {
    let env = qdissect(
        &["verify", FLAGSHIP, "--mod", "5", "--residue", "3"],
        &[("QDISSECT_ORDER", "60")],
    );
    assert!(stdout(&env).contains("order: 60"));

    let flag = qdissect(
        &["verify", FLAGSHIP, "--mod", "5", "--residue", "3", "--order", "90"],
        &[("QDISSECT_ORDER", "60")],
    );
    assert!(stdout(&flag).contains("order: 90"));

    let bad = qdissect(
        &["verify", FLAGSHIP, "--mod", "5", "--residue", "3"],
        &[("QDISSECT_ORDER", "sixty")],
    );
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("QDISSECT_ORDER"));
}

#[test]
fn scan_accepts_builtin_names_and_template_files() {
    let out = qdissect(&["scan", "--family", "e"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("findings: 7"));
    assert!(text.contains("e: (q,q^6;q^7) (q^9,q^12;q^21) vanishes on 7n+4 [certified] [new-empirical]"));

    let out = qdissect(&["scan", "--family", "nope"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no built-in family"));

    // A template file drives the same scanner; this one pins the family to a
    // single known row.
    let dir = std::env::temp_dir().join(format!("qdissect-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tiny.json");
    std::fs::write(
        &path,
        r#"{
  "name": "tiny",
  "first":  {"signs": "plus", "modulus": 7, "offset_min": 1, "offset_max": 1, "power": 1},
  "second": {"signs": "plus", "modulus": 21, "offset_min": 2, "offset_max": 2, "power": 1},
  "t": 7,
  "order": 200
}"#,
    )
    .unwrap();
    let out = qdissect(&["scan", "--family", path.to_str().unwrap(), "--json"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["family"], "tiny");
    assert_eq!(rows[0]["spec"], "(q,q^6;q^7) (q^2,q^19;q^21)");
    assert_eq!(rows[0]["t"], 7);
    assert_eq!(rows[0]["r"], 5);
    assert_eq!(rows[0]["status"], "certified");
    assert_eq!(rows[0]["novelty"], "known");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn expand_round_trips_through_its_own_spec_echo() {
    // prove/verify echo the normalized spec; feeding it back must parse.
    let out = qdissect(
        &["verify", "(q^19, q^2 ;q^21) (-q, -q^6; q^7)", "--mod", "7", "--residue", "5", "--order", "100"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let spec_line = text.lines().find(|l| l.starts_with("spec: ")).unwrap();
    let normalized = spec_line.trim_start_matches("spec: ");
    assert_eq!(normalized, "(q^2,q^19;q^21) (-q,-q^6;q^7)");
    let again = qdissect(
        &["verify", normalized, "--mod", "7", "--residue", "5", "--order", "100"],
        &[],
    );
    assert_eq!(again.status.code(), Some(0));
    assert!(stdout(&again).contains(spec_line));
}

#[test]
fn closed_stdout_reader_does_not_panic() {
    // A reader that stops early (`qdissect ... | head`) closes the pipe while
    // output is still flowing. The order below produces a few hundred KB, well
    // past the pipe buffer, so the writer always outlives the dropped reader.
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_qdissect"))
        .args(["expand", "(q,q^4;q^5)(q^2,q^3;q^5)", "--order", "10000"])
        .env_remove("QDISSECT_ORDER")
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qdissect");
    drop(child.stdout.take());
    let code = child.wait().expect("wait").code();
    assert_eq!(code, Some(141), "expected the conventional broken-pipe exit");
    let mut err = String::new();
    use std::io::Read;
    child
        .stderr
        .take()
        .expect("stderr handle")
        .read_to_string(&mut err)
        .expect("read stderr");
    assert_eq!(err, "", "broken pipe must not produce a panic message");
}
