use qshuffle_web::{nichols_json, stats_json, table_json, MAX_DEGREE};
use serde_json::Value;

const S3_MINUS: &str =
    r#"{"type":"group_class","group":{"perm_generators":[[2,1,3],[1,3,2]]},"class_reps":["(12)"],"cocycle":-1}"#;

#[test]
fn table_matches_cli_layout() {
    let v: Value = serde_json::from_str(&table_json(S3_MINUS, "wordlen", 5).unwrap()).unwrap();
    let tsv = v["tsv"].as_str().unwrap();
    assert!(tsv.starts_with("\tA0\tA1"));
    assert!(tsv.contains("Gr4\t\t\t\t\t\t9\n"));
    assert_eq!(v["check"]["pass"], true);
}

#[test]
fn broken_spec_returns_report() {
    let bad = r#"{"type":"matrix","R":[[1,1,0,0],[0,0,1,0],[0,1,0,0],[0,0,0,1]]}"#;
    let v: Value = serde_json::from_str(&table_json(bad, "wordlen", 3).unwrap()).unwrap();
    assert_eq!(v["check"]["pass"], false);
    assert!(v.get("tsv").is_none());
}

#[test]
fn nichols_and_stats() {
    let p: Value = serde_json::from_str(&nichols_json(S3_MINUS, 6).unwrap()).unwrap();
    assert_eq!(p["dims"], serde_json::json!([1, 3, 4, 3, 1]));
    let s: Value = serde_json::from_str(&stats_json(S3_MINUS, 5).unwrap()).unwrap();
    assert_eq!(s["rows"][4]["a_over_n"], "-56/135");
    assert!(stats_json(S3_MINUS, MAX_DEGREE + 1).is_err());
    assert!(table_json(S3_MINUS, "bogus", 3).is_err());
}
