use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qshuffle"))
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn table(spec_file: &str, nmax: &str, filtration: &str) -> String {
    let (code, out, err) = run(&["table", "--spec", &spec(spec_file), "--nmax", nmax, "--filtration", filtration]);
    assert_eq!(code, 0, "{err}");
    out
}

#[test]
fn figure_goldens() {
    let cases = [
        ("zeta3.json", "8", "wordlen", "figure1_wordlen_zeta3.tsv"),
        ("trivial3.json", "5", "wordlen", "figure2_wordlen_trivial3.tsv"),
        ("s3_plus.json", "5", "wordlen", "figure3_wordlen_s3_plus.tsv"),
        ("s3_minus.json", "5", "wordlen", "figure3_wordlen_s3_minus.tsv"),
        ("zeta3.json", "8", "weight", "figure5_weight_zeta3.tsv"),
        ("s3_plus.json", "5", "weight", "figure6_weight_s3_plus.tsv"),
    ];
    for (s, n, f, g) in cases {
        assert_eq!(table(s, n, f), golden(g), "{g}");
    }
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = run(&["check", "--spec", &spec("s3_minus.json")]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.split('\t').nth(1) == Some("pass")));

    let (code, out, _) = run(&["check", "--spec", &spec("broken_swap.json"), "--format", "json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    let yb = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "yang_baxter").unwrap();
    assert_eq!(yb["pass"], false);
    assert!(yb["detail"].as_str().unwrap().contains("triple (1, 2, 2)"));

    let empty = r#"{"type":"group_class","group":{"perm_generators":[[2,1,3],[1,3,2]]},"class_reps":[]}"#;
    let (code, _, _) = run(&["check", "--spec", empty]);
    assert_eq!(code, 2);

    let (code, _, _) = run(&["check", "--spec", "{not json"]);
    assert_eq!(code, 2);
}

#[test]
fn guard_refuses_cleanly() {
    let (code, out, err) = run(&["hurwitz", "--spec", &spec("s3_minus.json"), "--nmax", "10"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("--force"));
}

#[test]
fn hurwitz_json_is_deterministic() {
    let args = ["hurwitz", "--spec", &spec("s3_minus.json"), "--nmax", "4", "--seed", "7", "--mode", "modular"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["orbit_check"], true);
    assert_eq!(v["convergence_check"], true);
    assert_eq!(v["constants"]["epsilon"], "3/10");
}

#[test]
fn json_outputs_parse() {
    for sub in ["table", "stats", "nichols", "hurwitz", "homology"] {
        let (code, out, err) = run(&[sub, "--spec", &spec("s3_minus.json"), "--nmax", "3", "--format", "json"]);
        assert_eq!(code, 0, "{sub}: {err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v.is_object(), "{sub}");
    }
    assert!(table("s3_minus.json", "4", "weighted:0,1,2,3").starts_with("\tA0\t"), "tsv is the default table format");
}

#[test]
fn stats_decimal_rendering() {
    let (code, out, _) = run(&["stats", "--spec", &spec("s3_minus.json"), "--decimal"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let row5 = &v["rows"][4];
    assert_eq!(row5["n"], 5);
    assert_eq!(row5["a_over_n"].as_f64().unwrap(), -0.414815);
    assert_eq!(v["monotone_ok"], true);

    let (_, out, _) = run(&["stats", "--spec", &spec("s3_plus.json")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][4]["a_over_n"], "-2/135");
}

#[test]
fn trivial_one_dimensional_table() {
    let (code, out, _) = run(&["table", "--spec", r#"{"type":"trivial","dim":1}"#, "--nmax", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "\tA0\tA1\tA2\tA3\tA4\nGr0\t1\t1\t1\t1\t1\n");
}

#[test]
fn weighted_table_is_nested() {
    let (code, out, _) =
        run(&["table", "--spec", &spec("s3_minus.json"), "--nmax", "4", "--filtration", "weighted:0,1,2,3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "weighted");
    assert_eq!(v["f"], serde_json::json!([0, 1, 2, 3]));
    let mut sums = [0u64; 5];
    for e in v["entries"].as_array().unwrap() {
        assert!(e["index"].as_i64().unwrap() >= 0);
        sums[e["n"].as_u64().unwrap() as usize] += e["gr_dim"].as_u64().unwrap();
    }
    assert_eq!(sums, [1, 3, 9, 27, 81]);

    let (code, _, _) = run(&["table", "--spec", &spec("s3_minus.json"), "--nmax", "4", "--filtration", "weighted:1,1,1,1"]);
    assert_eq!(code, 2);
}

#[test]
fn nichols_generated_input_has_zero_statistic() {
    // q = 2 is not a root of unity, so the whole algebra is generated in degree 1
    let s = r#"{"type":"diagonal","q":[[2]]}"#;
    let (code, out, _) = run(&["stats", "--spec", s, "--nmax", "6"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    for r in v["rows"].as_array().unwrap() {
        assert_eq!(r["a"], "0");
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("qshuffle-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, format!("# defaults\nspec = {}\nnmax = 3\nformat = json\n", spec("s3_minus.json"))).unwrap();
    let (code, out, _) = run(&["nichols", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dims"], serde_json::json!([1, 3, 4, 3]));
    let (_, out, _) = run(&["nichols", "--config", cfg.to_str().unwrap(), "--nmax", "6", "--format", "tsv"]);
    assert!(out.contains("# top_degree\t4"));

    let outfile = dir.join("t.tsv");
    let (code, out, _) =
        run(&["table", "--spec", &spec("zeta3.json"), "--nmax", "8", "--out", outfile.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&outfile).unwrap(), golden("figure1_wordlen_zeta3.tsv"));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let (code, _, _) = run(&["table", "--config", cfg.to_str().unwrap(), "--spec", &spec("zeta3.json")]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).ok();
}
