use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Loads a schema with every sibling `$ref` inlined.
fn schema(name: &str) -> Value {
    let text = std::fs::read_to_string(root().join("docs/schema").join(name)).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    inline(&mut v);
    if let Value::Object(m) = &mut v {
        m.remove("$id");
    }
    v
}

fn inline(v: &mut Value) {
    match v {
        Value::Object(m) => {
            if let Some(Value::String(r)) = m.get("$ref") {
                *v = schema(&r.clone());
                return;
            }
            m.values_mut().for_each(inline);
        }
        Value::Array(a) => a.iter_mut().for_each(inline),
        _ => {}
    }
}

fn run(args: &[&str]) -> (Option<i32>, Value) {
    let o = Command::new(env!("CARGO_BIN_EXE_qcs"))
        .current_dir(root())
        .args(args)
        .args(["--format", "json"])
        .env_remove("QCS_PRIMES")
        .output()
        .unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    (o.status.code(), serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}")))
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let s = schema(schema_name);
    let validator = jsonschema::validator_for(&s).unwrap_or_else(|e| panic!("{schema_name}: {e}"));
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

#[test]
fn outputs_match_schemas() {
    let cases: &[(&str, &[&str])] = &[
        ("validate-report.v1.json", &["validate", "-i", "fixtures/dp1.quiver"]),
        ("cs-function.v1.json", &["cs-function", "-i", "fixtures/p2.quiver", "-d", "1,1,1"]),
        ("count-report.v1.json", &["count", "mc", "-i", "fixtures/c3.quiver", "-d", "2", "-p", "2,3"]),
        ("count-report.v1.json", &["count", "framed", "-i", "fixtures/toy.quiver", "-d", "1,1", "-p", "2"]),
        ("count-report.v1.json", &["count", "hn", "-i", "fixtures/toy.quiver", "-d", "1,1", "-p", "2", "--charge=-1:1,1:1"]),
        ("series.v1.json", &["series", "c", "-i", "fixtures/c3.quiver", "-N", "2", "--motives", "fixtures/c3.motives.json"]),
        ("series.v1.json", &["series", "semistable", "-i", "fixtures/toy.quiver", "-N", "2", "--charge=-1:1,1:1"]),
        ("verify-report.v1.json", &["verify", "dimred", "-i", "fixtures/c3.quiver", "-d", "2", "-p", "2"]),
        ("verify-report.v1.json", &["verify", "hilb-consistency", "-i", "fixtures/p2.quiver", "-N", "2"]),
        ("error.v1.json", &["count", "mc", "-i", "fixtures/missing.quiver", "-d", "1", "-p", "2"]),
    ];
    for (name, args) in cases {
        let (code, out) = run(args);
        assert!(code.is_some_and(|c| c <= 2), "{args:?}");
        assert_valid(name, &out);
    }
}

#[test]
fn motive_fixture_matches_schema() {
    let text = std::fs::read_to_string(root().join("fixtures/c3.motives.json")).unwrap();
    assert_valid("motive-file.v1.json", &serde_json::from_str(&text).unwrap());
}

#[test]
fn schemas_reject_malformed_output() {
    let bad = serde_json::json!([{ "quiver": "c3", "d": [2], "q": 2, "kind": "mc", "elapsed": 0.1 }]);
    let s = schema("count-report.v1.json");
    assert!(!jsonschema::validator_for(&s).unwrap().is_valid(&bad));
}
