//! End-to-end runs of the `cayley-spectra` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-spectra"))
        .args(args)
        .env_remove("CAYLEY_SPECTRA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_out(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let o = bin(&all);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn spectrum_of_the_cube() {
    let o = bin(&["spectrum", "Z2^3", "e1,e2,e3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("integral: {3^1, 1^3, -1^3, -3^1}"));
    let v = json_out(&["spectrum", "Z2^3", "e1,e2,e3"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["verdict"]["verdict"], "integral");
    assert_eq!(v["result"]["verdict"]["spectrum"]["-1"], 3);
}

#[test]
fn spectrum_of_the_octagon_is_not_integral() {
    let o = bin(&["spectrum", "D4", "x,xy"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("non-integral"));
    assert!(out.contains("1.414213562") && out.contains("-1.414213562"));
    for method in ["exact-rank", "char-poly", "group-algebra"] {
        let v = json_out(&["spectrum", "D4", "x,xy", "--method", method]);
        assert_eq!(v["result"]["verdict"]["verdict"], "non-integral", "{method}");
        assert_eq!(v["result"]["verdict"]["integer_eigenspace_total"], 4);
    }
}

#[test]
fn empty_subset_of_the_trivial_group() {
    let o = bin(&["spectrum", "Z1", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("integral: {0^1}"));
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["spectrum", "D4", "y"]).status.code(), Some(3));
    assert_eq!(bin(&["spectrum", "D4", "1"]).status.code(), Some(3));
    assert_eq!(bin(&["spectrum", "Z0", ""]).status.code(), Some(2));
    assert_eq!(bin(&["spectrum", "D4", "w"]).status.code(), Some(2));
    assert_eq!(bin(&["catalog", "show", "Z0"]).status.code(), Some(2));
    assert_eq!(bin(&["catalog", "list", "--order", "13"]).status.code(), Some(2));
    assert_eq!(bin(&["check", "Z36", "cis"]).status.code(), Some(4));
    assert_eq!(bin(&["check", "Z4", "integral"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn check_examples() {
    for (g, p, want) in [
        ("Dic12", "cayley-integral", true),
        ("Z9", "cis", true),
        ("SL2_3", "cayley-integral", false),
    ] {
        let v = json_out(&["check", g, p, "--threads", "2"]);
        assert_eq!(v["result"]["holds"], want, "{g} {p}");
        assert_eq!(v["result"]["witnesses"].as_array().unwrap().is_empty(), want);
    }
    let o = bin(&["check", "D4", "cis", "--no-reduce"]);
    assert!(stdout(&o).contains("witness"));
}

#[test]
fn check_with_checkpoint_file() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("q8z2.json");
    let cp_arg = cp.to_str().unwrap();
    let first = json_out(&["check", "Q8xZ2", "cayley-integral", "--checkpoint", cp_arg]);
    assert!(cp.exists());
    let again = json_out(&["check", "Q8xZ2", "cayley-integral", "--checkpoint", cp_arg]);
    assert_eq!(first["result"]["holds"], again["result"]["holds"]);
    assert_eq!(first["result"]["stats"], again["result"]["stats"]);
    let o = bin(&["check", "Z4^2", "cayley-integral", "--checkpoint", cp_arg]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn catalog_list_and_show() {
    let o = bin(&["catalog", "list", "--order", "8"]);
    assert_eq!(stdout(&o).lines().count(), 5);
    let v = json_out(&["catalog", "list"]);
    assert_eq!(v["result"].as_array().unwrap().len(), 24);
    let v = json_out(&["catalog", "show", "Q8"]);
    let names: Vec<&str> = v["result"]["names"].as_array().unwrap().iter().map(|n| n.as_str().unwrap()).collect();
    assert_eq!(names, ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]);
    assert_eq!(v["result"]["table"].as_array().unwrap().len(), 8);
    let text = stdout(&bin(&["catalog", "show", "Q8"]));
    assert_eq!(text.lines().count(), 8 + 3);
}

#[test]
fn verify_report_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s4.json");
    let o = bin(&["verify", "s4-transitive", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let report = cayley_spectra::verify::VerificationReport::from_json(&text).unwrap();
    assert!(report.pass);
    assert_eq!(report.schema, 1);
    assert_eq!(report.to_json().unwrap() + "\n", text);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["suite"], "s4-transitive");
    assert!(v["groups"][0]["group_expr"].is_string());
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let strip = |mut v: Value| {
        v["wall_time_ms"] = Value::Null;
        v["config"]["threads"] = Value::Null;
        for g in v["groups"].as_array_mut().unwrap() {
            g["wall_time_ms"] = Value::Null;
        }
        for c in v["checks"].as_array_mut().unwrap() {
            c["wall_time_ms"] = Value::Null;
        }
        v
    };
    for suite in ["cis", "lifts"] {
        let one = strip(json_out(&["verify", suite, "--threads", "1"]));
        let four = strip(json_out(&["verify", suite, "--threads", "4"]));
        assert_eq!(one, four, "{suite}");
        assert_eq!(one["pass"], true);
    }
}

#[test]
fn threads_fall_back_to_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cayley-spectra"))
        .args(["verify", "ds", "--json", "-"])
        .env("CAYLEY_SPECTRA_THREADS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["threads"], 3);
}
