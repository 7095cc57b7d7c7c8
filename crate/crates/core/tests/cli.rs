use std::process::Command;

use serde_json::Value;

fn ordlab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ordlab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = ordlab(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}: {out}"))
}

#[test]
fn parse_relation_is_bit_exact() {
    let (code, out, _) = ordlab(&["--n", "2", "parse", "b^-1 a b"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"r\":\"2/2^0\",\"s\":0}\n");
}

#[test]
fn member_at_sqrt2() {
    let v = json(&["--n", "2", "member", "--cone", "P+", "--base", "quad:0,1,2", "--elem", "b"]);
    assert_eq!(v, serde_json::json!({"member": false}));
    let v = json(&["--n", "2", "member", "--cone", "P-", "--base", "quad:0,1,2", "--elem", "b"]);
    assert_eq!(v["member"], true);
    let v = json(&["member", "--cone", "Q+-", "--base", "rat:0", "--elem", "b"]);
    assert_eq!(v["member"], true);
}

#[test]
fn check_all_passes_for_n2() {
    let (code, out, err) = ordlab(&["--n", "2", "check-all", "--radius", "5"]);
    assert_eq!(code, 0, "{out}{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["outcome"] == "pass"));
}

#[test]
fn check_all_reports_the_short_ball_for_n10() {
    // the stabilizer of 5/6 has no nontrivial element shorter than 11 letters when n = 10
    let (code, out, _) = ordlab(&["--n", "10", "check-all", "--radius", "3", "--samples", "20", "--stage", "16"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["outcome"] == "fail").collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["name"].as_str().unwrap().starts_with("distinctness"));
}

#[test]
fn same_argv_same_bytes() {
    let args = ["--n", "3", "--seed", "11", "check-all", "--radius", "3", "--samples", "40", "--stage", "20"];
    assert_eq!(ordlab(&args), ordlab(&args));
}

#[test]
fn group_surface() {
    assert_eq!(json(&["mul", "a", "b"]), serde_json::json!({"r": "1/2^0", "s": 1}));
    assert_eq!(json(&["inv", "a b"]), serde_json::json!({"r": "-2/2^0", "s": -1}));
    assert_eq!(json(&["normalize", "6/2^2"]), serde_json::json!({"m": "3", "k": 1, "text": "3/2^1"}));
    assert_eq!(json(&["nadic", "add", "1/2^1", "1/2^1"]), serde_json::json!({"m": "1", "k": 0}));
    let ball = json(&["ball", "--radius", "2"]);
    assert_eq!(ball.as_array().unwrap().len(), 17);
    let en = json(&["--n", "3", "enumerate", "--count", "5"]);
    assert_eq!(en[0], serde_json::json!({"r": "0/3^0", "s": 0}));
}

#[test]
fn action_surface() {
    let v = json(&["act", "--elem", "b", "--point", "rat:1"]);
    assert_eq!(v, serde_json::json!({"kind": "rat", "p": "1", "q": "2"}));
    assert_eq!(json(&["fix", "a b"])["fixed"], "2");
    assert_eq!(json(&["stab", "rat:1/3"]), serde_json::json!({"r": "-1/2^0", "s": -2}));
    let v = json(&["orbit-eq", "rat:1/3", "rat:2/3"]);
    assert_eq!(v["equivalent"], true);
    assert_eq!(json(&["orbit-eq", "rat:1/3", "rat:1/5"])["equivalent"], false);
    assert_eq!(json(&["compare", "quad:0,1,2", "7/5"])["sign"], "positive");
    assert_eq!(json(&["digits", "rat:1/3", "--count", "6"])["digits"], "010101");
    let (code, _, _) = ordlab(&["act", "--elem", "b", "--point", "stream:sqrt:2"]);
    assert_eq!(code, 2);
}

#[test]
fn cone_surface() {
    let v = json(&["conjugate", "--cone", "Q++", "--base", "rat:1/3", "--by", "a"]);
    assert_eq!(v, serde_json::json!({"tag": "Q++", "base": {"kind": "rat", "p": "4", "q": "3"}}));
    assert_eq!(json(&["reverse", "--cone", "Pinf+-"])["tag"], "Pinf-+");
    assert_eq!(json(&["order", "--cone", "Pinf++", "a", "b"])["order"], "less");
    let v = json(&["cone-from-action", "--points", "rat:0;rat:1", "--elem", "b"]);
    assert_eq!(v["member"], false);
    let v = json(&["identify", "--cone", "P+", "--base", "quad:0,1,2"]);
    assert_eq!(v["tags"], serde_json::json!(["P+"]));
    assert_eq!(v["width"], "1/16");
    let v = json(&["identify", "--cone", "{\"tag\":\"Q++\",\"base\":{\"kind\":\"rat\",\"p\":1,\"q\":3}}"]);
    assert_eq!(v["exact_base"], "1/3");
    let v = json(&["check-cone", "--cone", "P-", "--base", "quad:0,1,3", "--radius", "4"]);
    assert_eq!(v["passed"], true);
    let (code, _, err) = ordlab(&["member", "--cone", "P+", "--base", "rat:1/2", "--elem", "a"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn realize_json_and_csv() {
    let v = json(&["realize", "--cone", "Pinf++", "--stage", "8"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 8);
    let tags: Vec<f64> = entries
        .iter()
        .map(|e| {
            let t = e["tag"].as_str().unwrap();
            let (m, k) = t.split_once("/2^").unwrap();
            m.parse::<f64>().unwrap() / 2f64.powi(k.parse().unwrap())
        })
        .collect();
    assert!(tags.windows(2).all(|w| w[0] < w[1]), "{tags:?}");
    let (code, csv, _) = ordlab(&["--format", "csv", "realize", "--cone", "P+", "--base", "quad:0,1,2", "--stage", "10"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("index,element,tag,approx"));
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn equivalence_surface() {
    assert_eq!(json(&["reduce", "rat:1/3"]), serde_json::json!({"pre": "", "period": "01"}));
    assert_eq!(json(&["reduce", "rat:5/4"]), serde_json::json!({"pre": "01", "period": "0"}));
    assert_eq!(json(&["--n", "3", "reduce", "rat:1/2"]), serde_json::json!({"pre": "", "period": "1"}));
    assert_eq!(json(&["--n", "12", "reduce", "rat:1/5"])["period"], serde_json::json!([2, 4, 9, 7]));
    let v = json(&["tail-eq", "rat:1/3", "rat:2/3"]);
    assert_eq!(v, serde_json::json!({"decision": "equivalent", "p": 0, "q": 1, "exact": true}));
    assert_eq!(json(&["tail-eq", "rat:1/3", "rat:1/5"])["decision"], "not-equivalent");
    assert_eq!(json(&["witness", "rat:1/3", "rat:1/3", "--p", "0", "--q", "0"]), serde_json::json!({"r": "0/2^0", "s": 0}));
    let v = json(&["roundtrip", "rat:1/3", "--elem", "b^2"]);
    assert_eq!(v["witness"], serde_json::json!({"p": 0, "q": 2}));
    assert_eq!(v["passed"], true);
    let (code, _, _) = ordlab(&["witness", "rat:1/3", "rat:1/5", "--p", "0", "--q", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(ordlab(&["no-such-verb"]).0, 2);
    assert_eq!(ordlab(&["--n", "1", "parse", "a"]).0, 2);
    assert_eq!(ordlab(&["--budget", "15", "parse", "a"]).0, 2);
    let (code, _, err) = ordlab(&["parse", "a^{1/3}"]);
    assert_eq!(code, 2);
    assert!(err.contains("Z[1/2]"), "{err}");
    let (code, out, _) = ordlab(&["--budget", "16", "tail-eq", "stream:sqrt:2", "stream:sqrt:3"]);
    assert_eq!(code, 3);
    assert_eq!(out.trim(), "{\"decision\":\"unknown\"}");
}

#[test]
fn text_format() {
    let (code, out, _) = ordlab(&["--format", "text", "check-cone", "--cone", "Pinf--", "--radius", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("passed") && l.ends_with("true")), "{out}");
}
