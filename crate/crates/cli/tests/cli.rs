use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn sdmds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdmds"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn field_info() {
    let out = sdmds(&["field-info", "--p", "3", "--deg", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["modulus"], "x^2+1");
    assert_eq!(v["generator"], "x+1");
    assert_eq!(v["q"], 9);

    assert_eq!(code(&sdmds(&["field-info", "--p", "2", "--deg", "3"])), 2);
    assert_eq!(code(&sdmds(&["field-info", "--p", "9", "--deg", "1"])), 2);
}

#[test]
fn construct_small() {
    let out = sdmds(&[
        "construct",
        "--q",
        "9",
        "--theorem",
        "T1i",
        "--m",
        "4",
        "--t",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["n"], 4);
    assert_eq!(v["verification"]["self_dual"], true);
    assert_eq!(v["construction"]["label"], "T1i(m=4,t=1)");
}

#[test]
fn construct_example_length_426() {
    let out = sdmds(&[
        "construct",
        "--q",
        "22801",
        "--theorem",
        "T1i",
        "--m",
        "6",
        "--t",
        "71",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["n"], 426);
    assert_eq!(v["verification"]["self_dual"], true);
}

#[test]
fn excluded_case_names_the_clause() {
    let out = sdmds(&[
        "construct",
        "--q",
        "25",
        "--theorem",
        "T1ii",
        "--m",
        "2",
        "--t",
        "2",
    ]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["error"], "HypothesisViolated");
    let clause = v["clause"].as_str().unwrap();
    assert!(clause.contains("t is even, m is even and r≡1 (mod 4)"));
    assert!(String::from_utf8_lossy(&out.stderr).contains(clause));

    // r = 3 is 3 mod 4, so the same tuple is fine over F_9
    let out = sdmds(&[
        "construct",
        "--q",
        "9",
        "--theorem",
        "T1ii",
        "--m",
        "2",
        "--t",
        "2",
    ]);
    assert_eq!(code(&out), 0);
}

#[test]
fn invalid_inputs() {
    assert_eq!(
        code(&sdmds(&[
            "construct",
            "--q",
            "9",
            "--theorem",
            "T1i",
            "--m",
            "4"
        ])),
        2
    );
    assert_eq!(
        code(&sdmds(&[
            "construct",
            "--q",
            "12",
            "--theorem",
            "T4",
            "--e",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&sdmds(&[
            "construct",
            "--q",
            "9",
            "--theorem",
            "T9",
            "--e",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&sdmds(&[
            "construct",
            "--q",
            "9",
            "--theorem",
            "T1i",
            "--m",
            "8",
            "--t",
            "1"
        ])),
        2
    );
}

#[test]
fn too_large_exits_3() {
    let out = sdmds(&[
        "construct",
        "--p",
        "5",
        "--deg",
        "27",
        "--theorem",
        "T5",
        "--k",
        "3",
        "--t",
        "31",
        "--e",
        "7",
    ]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout_json(&out)["error"], "TooLargeToMaterialize");
}

#[test]
fn construct_verify_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let p = path.to_str().unwrap();
    let out = sdmds(&[
        "construct",
        "--q",
        "9",
        "--theorem",
        "T1ii",
        "--m",
        "4",
        "--t",
        "1",
        "--out",
        p,
    ]);
    assert_eq!(code(&out), 0);

    let out = sdmds(&["verify", "--in", p, "--mds"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["mds"], true);
    assert_eq!(v["min_distance"], 4);

    let text = fs::read_to_string(&path).unwrap();
    let mut art: Value = serde_json::from_str(&text).unwrap();
    let x = art["G"][0][1].as_u64().unwrap();
    art["G"][0][1] = Value::from((x + 1) % 9);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, art.to_string()).unwrap();
    assert_eq!(code(&sdmds(&["verify", "--in", bad.to_str().unwrap()])), 4);

    let cut = dir.path().join("cut.json");
    fs::write(&cut, &text[..text.len() / 3]).unwrap();
    assert_eq!(code(&sdmds(&["verify", "--in", cut.to_str().unwrap()])), 2);
    assert_eq!(code(&sdmds(&["verify", "--in", "/nonexistent/x.json"])), 2);
}

#[test]
fn artifacts_are_byte_identical() {
    let args = ["construct", "--q", "81", "--theorem", "T4", "--e", "2"];
    let a = sdmds(&args);
    let b = sdmds(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn census() {
    let out = sdmds(&[
        "census",
        "--q",
        "9",
        "--rows",
        "all",
        "--list",
        "--spot-check-bound",
        "16",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let lengths: Vec<u64> = serde_json::from_value(v["lengths"].clone()).unwrap();
    assert!(lengths.contains(&10));
    assert_eq!(v["spot_checks"]["4"], "ok");

    let out = sdmds(&["census", "--q", "6889", "--rows", "prior"]);
    let v = stdout_json(&out);
    assert_eq!(v["count"], v["prior_count"]);
    assert_eq!(v["union_count"], 702);

    assert_eq!(code(&sdmds(&["census", "--q", "16"])), 2);
    assert_eq!(code(&sdmds(&["census", "--q", "21"])), 2);
}
