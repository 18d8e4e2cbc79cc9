use std::path::PathBuf;
use std::process::{Command, Output};

use elliptic_schubert::harness::docs::{BilleyDoc, ClassTableDoc, PipeDreamsDoc, PolyDoc};
use elliptic_schubert::harness::ReportDocument;
use elliptic_schubert::theta::{SymbolTable, ThetaExpr};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellschub")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

fn code(args: &[&str]) -> Option<i32> {
    run(args).status.code()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("valid schema")
}

fn assert_conforms(name: &str, doc: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name}: {}", msgs.join("; "));
}

fn entry(doc: &Value, u: &str) -> Value {
    doc["entries"].as_array().unwrap().iter().find(|e| e["u"] == u).expect("entry")["value"].clone()
}

fn gl2_atoms() -> (std::sync::Arc<SymbolTable>, ThetaExpr, ThetaExpr) {
    let t = SymbolTable::numbered(2, 2);
    let (l, z) = (t.parse_vector("l1-l2").unwrap(), t.parse_vector("z1-z2").unwrap());
    let h = t.hbar_vector();
    let p = ThetaExpr::p(&l, &z, &h).unwrap();
    let q = ThetaExpr::q(&l, &z, &h).unwrap();
    (t, p, q)
}

#[test]
fn localize_rank_one_simple_reflection() {
    let doc = ok_json(&["localize", "--type", "A", "--rank", "2", "--w", "21"]);
    assert_conforms("class-table", &doc);
    let (t, _, q) = gl2_atoms();
    assert_eq!(entry(&doc, "21")["expr"], q.display(&t).to_string());
    assert_eq!(entry(&doc, "12")["zero"], true);
}

#[test]
fn localize_identity_class() {
    let doc = ok_json(&["localize", "--rank", "2", "--w", "12", "--mode", "symbolic"]);
    assert_conforms("class-table", &doc);
    let (t, p, _) = gl2_atoms();
    assert_eq!(entry(&doc, "12")["expr"], "1");
    // b_{s, id} = P(lambda, z_alpha), not zero.
    assert_eq!(entry(&doc, "21")["expr"], p.display(&t).to_string());
}

#[test]
fn localize_parabolic_vanishes_off_minimal_representatives() {
    let doc = ok_json(&["localize", "--rank", "3", "--w", "213", "--parabolic", "2,1"]);
    assert_conforms("class-table", &doc);
    assert!(doc["entries"].as_array().unwrap().iter().all(|e| e["value"]["zero"] == true));

    let doc = ok_json(&["localize", "--rank", "3", "--w", "132", "--parabolic", "2,1"]);
    for (a, b) in [("132", "312"), ("231", "321")] {
        assert_eq!(entry(&doc, a)["expr"], entry(&doc, b)["expr"], "coset of {a}");
    }
    for u in ["123", "213"] {
        assert_eq!(entry(&doc, u)["zero"], true);
    }
}

#[test]
fn billey_term_counts() {
    let doc = ok_json(&["billey", "--word", "1,2,1", "--w", "213"]);
    assert_conforms("billey", &doc);
    assert_eq!(doc["term_count"], 2);

    let doc = ok_json(&["billey", "--rank", "3", "--word", "1", "--w", "321"]);
    assert_eq!(doc["term_count"], 0);
    assert_eq!(doc["value"]["expr"], "0");
}

/// `s_{i_1} ... s_{i_k} v` on `GL_n` coordinates.
fn act(word: &[usize], v: [i32; 4]) -> Vec<i32> {
    let mut v = v;
    for &i in word.iter().rev() {
        v.swap(i - 1, i);
    }
    v.to_vec()
}

#[test]
fn billey_worked_example_roots() {
    let doc = ok_json(&["billey", "--word", "1,2,3,2,1,3", "--w", "2134", "--subset", "2,4,5"]);
    assert_conforms("billey", &doc);
    let e = |i: usize| {
        let mut v = [0; 4];
        v[i - 1] = 1;
        v[i] = -1;
        v
    };
    let beta = [
        act(&[], e(1)),
        act(&[1], e(2)),
        act(&[1, 2], e(3)),
        act(&[1, 2, 3], e(2)),
        act(&[1, 2, 3, 2], e(1)),
        act(&[1, 2, 3, 2, 1], e(3)),
    ];
    let gamma = [
        act(&[1, 2, 2], e(1)),
        act(&[1, 2], e(2)),
        act(&[1, 2], e(3)),
        act(&[1], e(2)),
        act(&[], e(1)),
        act(&[], e(3)),
    ];
    let terms = doc["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    let factors = terms[0]["factors"].as_array().unwrap();
    for (j, f) in factors.iter().enumerate() {
        let get = |k: &str| serde_json::from_value::<Vec<i32>>(f[k].clone()).unwrap();
        assert_eq!(get("beta"), beta[j], "beta_{}", j + 1);
        assert_eq!(get("gamma"), gamma[j], "gamma_{}", j + 1);
        assert_eq!(f["in_subset"], [2, 4, 5].contains(&(j + 1)));
    }
}

#[test]
fn pipe_dream_examples() {
    let doc = ok_json(&["gpd", "--n", "4", "--w", "4321"]);
    assert_conforms("pipe-dreams", &doc);
    assert_eq!(doc["count"], 1);

    let doc = ok_json(&["gpd", "--n", "3", "--w", "132"]);
    assert_conforms("pipe-dreams", &doc);
    let tilings: Vec<Vec<String>> = doc["pipe_dreams"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| serde_json::from_value(p["tiles"].clone()).unwrap())
        .collect();
    assert!(tilings.contains(&vec!["BXJ".to_string(), "JIO".into(), "HJO".into()]));
}

#[test]
fn poly_longest_latex() {
    let doc = ok_json(&["poly", "--n", "3", "--w", "321"]);
    assert_conforms("poly", &doc);
    let n = 3;
    let mut factors = Vec::new();
    for i in 1..=n {
        for j in 1..=n - i {
            factors.push(format!("Q(\\lambda_{{{i}}}-\\lambda_{{{}}},-x_{{{i}}}+y_{{{j}}})", n + 1 - j));
        }
        factors.push(format!("P(\\lambda_{{{i}}},-x_{{{i}}}+y_{{{}}})", n + 1 - i));
    }
    let latex = doc["latex"].as_str().unwrap();
    assert!(latex.ends_with(&factors.join(" ")), "{latex}");
}

#[test]
fn verify_examples_pass() {
    assert_eq!(code(&["verify", "--suite", "ybe", "--rank", "2"]), Some(0));
    let out = run(&["verify", "--suite", "mirror", "--rank", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_conforms("report", &doc);
    assert_eq!(doc["status"], "pass");
}

#[test]
fn verify_failure_names_the_check() {
    let out = run(&["verify", "--suite", "klimit"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("klimit/weight_table/same_block"), "{err}");
    assert!(err.contains("limiting weight table"), "{err}");
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--suite", "all", "--seed", "42"]);
    let b = run(&["verify", "--suite", "all", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_conforms("report", &doc);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["localize", "--rank", "3", "--w", "4321"]), Some(2));
    assert_eq!(code(&["localize", "--rank", "3", "--w", "123", "--mode", "exact"]), Some(2));
    assert_eq!(code(&["localize", "--rank", "3", "--w", "123", "--trunc", "0"]), Some(2));
    assert_eq!(code(&["localize", "--type", "E", "--rank", "8", "--w", "1"]), Some(2));
    assert_eq!(code(&["billey", "--word", "1,x", "--w", "12"]), Some(2));
    assert_eq!(code(&["verify", "--suite", "nope"]), Some(2));
    assert_eq!(code(&["verify", "--suite", "klimit", "--slope", "-1"]), Some(2));
    assert_eq!(code(&["localize", "--bogus"]), Some(2));
    assert_eq!(code(&["gpd", "--n", "7", "--w", "1234567"]), Some(4));
}

#[test]
fn formats_and_out_file() {
    let dir = std::env::temp_dir().join(format!("ellschub-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["localize", "--rank", "2", "--w", "21", "--out", p]), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "elliptic-schubert/class-table/v1");
    for f in ["ascii", "latex"] {
        let out = run(&["gpd", "--n", "2", "--w", "21", "--format", f]);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn documents_round_trip() {
    fn check<T: serde::Serialize + serde::de::DeserializeOwned>(v: Value) {
        let t: T = serde_json::from_value(v.clone()).expect("parses");
        assert_eq!(serde_json::to_value(&t).unwrap(), v);
    }
    check::<ClassTableDoc>(ok_json(&["localize", "--rank", "3", "--w", "231", "--mode", "symbolic", "--trunc", "2"]));
    check::<ClassTableDoc>(ok_json(&["localize", "--rank", "3", "--w", "132", "--parabolic", "2,1"]));
    check::<BilleyDoc>(ok_json(&["billey", "--word", "1,2,1", "--w", "213"]));
    check::<PipeDreamsDoc>(ok_json(&["gpd", "--n", "3", "--w", "123"]));
    check::<PolyDoc>(ok_json(&["poly", "--n", "3", "--w", "231"]));
    check::<PolyDoc>(ok_json(&["poly", "--n", "3", "--w", "231", "--parabolic", "2,1"]));
    let out = run(&["verify", "--suite", "gpd"]);
    check::<ReportDocument>(serde_json::from_slice(&out.stdout).unwrap());
}
