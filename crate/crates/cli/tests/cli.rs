// Copyright 2026 The qss-rs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qss"))
        .args(args)
        .output()
        .expect("qss runs")
}

fn scenario(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("scenarios");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_error_line(o: &Output, code: i32, kind: &str, tag: &str) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(
        err.starts_with(&format!("qss: error[{kind}]: {tag}")),
        "{err}"
    );
}

#[test]
fn demo_prints_the_worked_example() {
    let o = qss(&["demo"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(3,2) -> (0,3) -> (2,4) -> (2,4)"), "{out}");
    assert!(out.contains("measured r = 2 in basis q = 4"));
    assert!(out.contains("s = 3 (H2 verified)"));
    assert!(out.contains("s1=2 (P1) s2=2 (P2) s3=1 (P3) s4=1 (P4)"));
}

#[test]
fn demo_seed_changes_only_the_seed_field() {
    let a: Value = serde_json::from_str(&stdout(&qss(&["demo", "--json"]))).unwrap();
    let b: Value = serde_json::from_str(&stdout(&qss(&["demo", "--json", "--seed", "7"]))).unwrap();
    assert_eq!(a["seed"], 0);
    assert_eq!(b["seed"], 7);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("seed");
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn demo_json_matches_schema() {
    let text = stdout(&qss(&["demo", "--json"]));
    let top: Vec<&str> = text
        .lines()
        .filter_map(|l| l.strip_prefix("  \"")?.split('"').next())
        .collect();
    assert_eq!(
        top,
        [
            "schema",
            "scenario",
            "d",
            "msp",
            "set",
            "shares",
            "lambda",
            "commitments",
            "rounds",
            "q_i",
            "r_i",
            "recovered",
            "verdicts",
            "seed"
        ]
    );
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "qss-transcript/1");
    assert_eq!(v["d"], 5);
    assert_eq!(v["set"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["q_i"], 4);
    assert_eq!(v["r_i"], 2);
    assert_eq!(v["recovered"]["secret"], 3);
    assert_eq!(v["verdicts"]["dealer"], "accept");
    assert_eq!(v["verdicts"]["h1_verified"], true);
    assert_eq!(v["verdicts"]["h2_verified"], true);
    for h in ["h1", "h2"] {
        let s = v["commitments"][h].as_str().unwrap();
        assert_eq!(s.len(), 64);
        assert!(s.chars().all(|c| c.is_ascii_hexdigit()));
    }
    let rounds = v["rounds"].as_array().unwrap();
    assert_eq!(rounds[0]["sender"], "dealer");
    assert_eq!(rounds[0]["label"], serde_json::json!([3, 2]));
    assert_eq!(rounds[3]["sender"], "P3");
    assert_eq!(rounds[3]["label"], serde_json::json!([2, 4]));
}

#[test]
fn run_writes_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = qss(&[
        "run",
        &scenario("worked_example.json"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["recovered"]["secret"], 3);
}

#[test]
fn run_is_byte_identical_for_equal_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        let o = qss(&[
            "run",
            &scenario("realized.json"),
            "--seed",
            "99",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        files.push(std::fs::read(out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let other = stdout(&qss(&["run", &scenario("realized.json"), "--seed", "100"]));
    assert_ne!(
        String::from_utf8(files[0].clone()).unwrap().trim(),
        other.trim()
    );
}

#[test]
fn unauthorized_set_is_rejected() {
    let o = qss(&["run", &scenario("unauthorized.json")]);
    assert_error_line(&o, 2, "validation", "NotAuthorized");
}

#[test]
fn forged_share_aborts_with_h2_mismatch() {
    let o = qss(&["run", &scenario("forged_share.json")]);
    assert_error_line(&o, 3, "abort", "SecretHashMismatch");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdicts"]["dealer"], "accept");
    assert_eq!(v["verdicts"]["h2_verified"], false);
    assert_eq!(v["tamper"]["type"], "forged-share");
}

#[test]
fn fake_unitary_aborts_at_the_dealer() {
    let o = qss(&["run", &scenario("fake_unitary.json")]);
    assert_error_line(&o, 3, "abort", "DealerAbort");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["r_i"], 3);
    assert_eq!(v["recovered"], Value::Null);
}

#[test]
fn parse_errors_report_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        "{\n  \"schema\": \"qss-scenario/1\",\n  \"d\": 5,\n  \"matrix\": [[1, 2],\n}\n",
    )
    .unwrap();
    let o = qss(&["run", path.to_str().unwrap()]);
    assert_error_line(&o, 2, "parse", "Parse");
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn invalid_modulus_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d9.json");
    let text = std::fs::read_to_string(scenario("trivial.json"))
        .unwrap()
        .replace("\"d\": 3", "\"d\": 9");
    std::fs::write(&path, text).unwrap();
    assert_error_line(
        &qss(&["run", path.to_str().unwrap()]),
        2,
        "validation",
        "Field",
    );
}

#[test]
fn missing_file_and_bad_usage() {
    assert_error_line(&qss(&["run", "/nonexistent/x.json"]), 2, "io", "Read");
    assert_error_line(&qss(&["frobnicate"]), 2, "usage", "Usage");
    assert_error_line(
        &qss(&[
            "attack",
            &scenario("worked_example.json"),
            "--type",
            "bogus",
        ]),
        2,
        "usage",
        "Usage",
    );
}

#[test]
fn help_succeeds() {
    let o = qss(&["attack", "--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("--trials"));
}

#[test]
fn verify_msp_flags_the_mismatch() {
    let o = qss(&["verify-msp", &scenario("worked_example.json")]);
    assert_error_line(&o, 2, "validation", "MspMismatch");
    assert!(stderr(&o).contains("{P1,P2}"));
    let table = stdout(&o);
    let fails: Vec<_> = table.lines().filter(|l| l.ends_with("FAIL")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with("{P1,P2} "));
}

#[test]
fn verify_msp_passes_on_realized_and_trivial() {
    for name in ["realized.json", "trivial.json"] {
        let o = qss(&["verify-msp", &scenario(name)]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert!(stdout(&o).contains("checks passed"));
    }
    let v: Value = serde_json::from_str(&stdout(&qss(&[
        "verify-msp",
        &scenario("trivial.json"),
        "--json",
    ])))
    .unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn attack_collusion_reports_perfect_privacy() {
    let o = qss(&["attack", &scenario("collusion.json"), "--type", "collusion"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("coalition {P3,P4}: perfect privacy: identical distributions"));
}

#[test]
fn attack_collusion_rejects_authorized_coalition() {
    let o = qss(&[
        "attack",
        &scenario("collusion.json"),
        "--type",
        "collusion",
        "--coalition",
        "1,2",
    ]);
    assert_error_line(&o, 2, "validation", "NotUnauthorized");
}

#[test]
fn attack_entangle_finds_no_informative_attack() {
    let o = qss(&[
        "attack",
        &scenario("worked_example.json"),
        "--type",
        "entangle-measure",
        "--trials",
        "100",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 zero-disturbance informative attacks found"));
}

#[test]
fn attack_intercept_resend_json() {
    let o = qss(&[
        "attack",
        &scenario("intercept_resend.json"),
        "--type",
        "intercept-resend",
        "--trials",
        "20000",
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "qss-attack/1");
    assert_eq!(v["attack"]["type"], "intercept-resend");
    let rate = &v["attack"]["stats"]["eve_correct_basis_rate"];
    assert_eq!(rate["total"], 20000);
    let value = rate["value"].as_f64().unwrap();
    let radius = rate["radius_3sigma"].as_f64().unwrap();
    assert!((value - 0.2).abs() < radius, "{value} ± {radius}");
}

#[test]
fn attack_forgery_catches_fake_unitary() {
    let o = qss(&[
        "attack",
        &scenario("fake_unitary.json"),
        "--type",
        "forgery",
        "--trials",
        "200",
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["attack"]["stats"]["trials"], 200);
    assert_eq!(v["attack"]["stats"]["undetected"], 0);
}

#[test]
fn attack_forgery_without_tamper_is_rejected() {
    let o = qss(&[
        "attack",
        &scenario("worked_example.json"),
        "--type",
        "forgery",
    ]);
    assert_error_line(&o, 2, "validation", "AttackConfig");
}

#[test]
fn attack_output_is_deterministic() {
    let args = [
        "attack",
        &scenario("intercept_resend.json"),
        "--type",
        "intercept-resend",
        "--trials",
        "500",
        "--json",
    ];
    assert_eq!(qss(&args).stdout, qss(&args).stdout);
}
