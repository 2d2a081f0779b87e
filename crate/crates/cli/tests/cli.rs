use std::process::{Command, Output};

use serde_json::Value;

fn explab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_explab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn classify_builtins() {
    for (alg, dim) in [("galilean", 1), ("milne:3", 6), ("phase-space:2", 6)] {
        let out = explab(&["classify", "--algebra", alg]);
        assert_eq!(code(&out), 0, "{alg}");
        let v = json(&out);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["result"]["quotient_dim"], dim, "{alg}");
    }
}

#[test]
fn classify_output_is_stable_across_runs_and_threads() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_explab"))
            .args(["classify", "--algebra", "milne:3"])
            .env("EXPLAB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert_eq!(one, run("1"));
    assert_eq!(one, run("4"));
}

#[test]
fn json_reports_round_trip_byte_identical() {
    for args in [
        vec!["classify", "--algebra", "milne:2"],
        vec!["verify", "--suite", "galilean", "--samples", "50"],
        vec!["exponent", "--group", "milne:2", "--theta", "milne-schrodinger:1", "--all-pairs"],
    ] {
        let out = explab(&args);
        let text = String::from_utf8(out.stdout).unwrap();
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap() + "\n", text, "{args:?}");
    }
}

#[test]
fn timing_only_on_request() {
    let plain = json(&explab(&["classify", "--algebra", "galilean"]));
    assert!(plain.get("timing_ms").is_none());
    let timed = json(&explab(&["classify", "--algebra", "galilean", "--timing"]));
    assert!(timed["timing_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn algebra_spec_files() {
    let dir = std::env::temp_dir().join(format!("explab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let good = dir.join("heisenberg.json");
    std::fs::write(
        &good,
        r#"{ "labels": ["p", "q", "z"], "brackets": [ { "lhs": "p", "rhs": "q", "out": [["z", "1"]] } ] }"#,
    )
    .unwrap();
    let out = explab(&["classify", "--algebra", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["quotient_dim"], 2);

    let malformed = dir.join("malformed.json");
    std::fs::write(&malformed, "{ \"labels\": [\"a\",\n  \"b\"\n  \"brackets\": [] }").unwrap();
    let out = explab(&["classify", "--algebra", malformed.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let broken = dir.join("broken.json");
    std::fs::write(
        &broken,
        r#"{ "labels": ["x", "y", "z"],
             "brackets": [ { "lhs": "x", "rhs": "y", "out": [["x", "1"]] },
                           { "lhs": "y", "rhs": "z", "out": [["y", "1"]] } ] }"#,
    )
    .unwrap();
    let out = explab(&["classify", "--algebra", broken.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Jacobi") && err.contains("(x, y, z)"), "{err}");

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["verify", "--suite", "nope"],
        vec!["classify", "--algebra", "milne:0"],
        vec!["classify", "--algebra", "galilean", "--degree", "-1"],
        vec!["verify", "--suite", "galilean", "--samples", "0"],
        vec!["exponent", "--group", "galilean", "--theta", "milne-schrodinger:1", "--pair", "b1,d1"],
        vec!["exponent", "--group", "galilean", "--theta", "galilean-mass:1", "--pair", "b1,x9"],
        vec!["exponent", "--group", "galilean", "--theta", "galilean-mass:1"],
    ] {
        assert_eq!(code(&explab(&args)), 2, "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_explab"))
        .args(["classify", "--algebra", "galilean"])
        .env("EXPLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_suites_pass() {
    let v = json(&explab(&["verify", "--suite", "galilean", "--seed", "7"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["input"]["seed"], 7);
    assert_eq!(v["input"]["samples"], 1000);
    for check in v["result"]["checks"].as_array().unwrap() {
        if check["name"] != "time_independence" {
            assert!(check["value"].as_f64().unwrap() <= 1e-12);
        }
    }
    for suite in ["milne:2", "bundle", "schrodinger", "h-group"] {
        let out = explab(&["verify", "--suite", suite, "--samples", "200"]);
        assert_eq!(code(&out), 0, "{suite}");
    }
    let v = json(&explab(&["verify", "--suite", "schrodinger"]));
    assert_eq!(v["result"]["details"]["sweep"]["best_ratio"], 1.0);
}

#[test]
fn exponent_examples() {
    let v = json(&explab(&["exponent", "--group", "galilean", "--theta", "galilean-mass:2", "--pair", "b1,d1"]));
    let e = &v["result"]["entries"][0];
    assert!((e["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let v = json(&explab(&["exponent", "--group", "galilean", "--theta", "galilean-mass:2", "--pair", "b1,b2"]));
    assert!(v["result"]["entries"][0]["value"].as_f64().unwrap().abs() < 1e-12);
    let out = explab(&["exponent", "--group", "milne:2", "--theta", "milne-schrodinger:1", "--all-pairs"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["entries"].as_array().unwrap().len(), 13 * 12 / 2);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("explab-out-{}.txt", std::process::id()));
    let out = explab(&["verify", "--suite", "bundle", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("PASS isometry"));
    std::fs::remove_file(path).unwrap();
}
