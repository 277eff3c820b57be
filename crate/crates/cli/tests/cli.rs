use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fqhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqhyper")).args(args).current_dir(root()).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn validate(schema: &str, v: &Value) {
    let text = std::fs::read_to_string(root().join("schemas").join(schema)).unwrap();
    let s: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&s).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

#[test]
fn analyze_extremal_cubic() {
    let o = fqhyper(&["analyze", "inputs/extremal-cubic-f2.txt", "--field", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    validate("analyze.schema.json", &v);
    assert_eq!(v["report"]["point_count"], 27);
    assert_eq!(v["report"]["theta"], 27);
    assert_eq!(v["report"]["theta_equality"], true);
    assert_eq!(v["report"]["nonsingular"], true);
    assert_eq!(v["report"]["witness"]["base_count"], 5);
    assert_eq!(v["report"]["witness"]["base_nonsingular"], true);
    assert_eq!(v["tangent_sections"].as_array().unwrap().len(), 27);
    // byte-identical reruns
    assert_eq!(o.stdout, fqhyper(&["analyze", "inputs/extremal-cubic-f2.txt", "--field", "2"]).stdout);
}

#[test]
fn analyze_quadrics() {
    let o = fqhyper(&["analyze", "inputs/parabolic-quadric-f2.txt", "--field", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    validate("analyze.schema.json", &v);
    assert_eq!(v["report"]["point_count"], 15);
    assert_eq!(v["thas_invariant"], 1);
    assert_eq!(v["lines"].as_array().unwrap().len(), 15);

    let o = fqhyper(&["analyze", "inputs/hermitian-cubic-f4.txt", "--field", "4", "--format", "text"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("points: 165"));
}

#[test]
fn analyze_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "x0^2 + x1").unwrap();
    assert_eq!(code(&fqhyper(&["analyze", bad.to_str().unwrap(), "--field", "2"])), 2);
    std::fs::write(&bad, "x0^2 + + x1").unwrap();
    assert_eq!(code(&fqhyper(&["analyze", bad.to_str().unwrap(), "--field", "2"])), 2);
    assert_eq!(code(&fqhyper(&["analyze", "inputs/quadric-f2.txt", "--field", "6"])), 2);
    let cone = dir.path().join("cone.txt");
    std::fs::write(&cone, "x0^2*x1 + x2^3").unwrap();
    let o = fqhyper(&["analyze", cone.to_str().unwrap(), "--field", "2", "--require-nonsingular"]);
    assert_eq!(code(&o), 3);
    let o = fqhyper(&["analyze", cone.to_str().unwrap(), "--field", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn theta_and_table() {
    assert_eq!(stdout(&fqhyper(&["theta", "3", "3", "2"])).trim(), "27");
    assert_eq!(stdout(&fqhyper(&["theta", "3", "4", "4"])).trim(), "245");
    assert_eq!(code(&fqhyper(&["theta", "4", "3", "2"])), 3);
    let o = fqhyper(&["theta", "3", "3", "2", "--format", "json"]);
    assert_eq!(json(&o)["theta"], 27);

    let o = fqhyper(&["table", "--n", "3", "--d", "2..5", "--q", "2..4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.contains(&"3,3,2,27,31,31"));
    let o = fqhyper(&["table", "--n", "3,5", "--d", "2", "--q", "2..6", "--format", "json"]);
    let v = json(&o);
    validate("table.schema.json", &v);
    // q = 6 is skipped
    assert_eq!(v.as_array().unwrap().len(), 8);
}

#[test]
fn shipped_families_match_builtins() {
    for name in ["flagship", "quadrics"] {
        let o = fqhyper(&["family", name]);
        let v = json(&o);
        validate("family.schema.json", &v);
        let file: Value =
            serde_json::from_str(&std::fs::read_to_string(root().join(format!("families/{name}.json"))).unwrap())
                .unwrap();
        assert_eq!(v, file, "{name}");
    }
    assert_eq!(code(&fqhyper(&["family", "nope"])), 2);
}

fn search(dir: &Path, family: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out = dir.join("out.jsonl");
    let mut args = vec!["search", family, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    (fqhyper(&args), out)
}

fn summary_of(out: &Path) -> Value {
    let mut p = out.as_os_str().to_owned();
    p.push(".summary.json");
    serde_json::from_str(&std::fs::read_to_string(PathBuf::from(p)).unwrap()).unwrap()
}

#[test]
fn quadric_search_and_merge() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = search(dir.path(), "families/quadrics.json", &["--threshold", "0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("exceptional=0"));
    let summary = summary_of(&out);
    validate("search-summary.schema.json", &summary);
    let records = std::fs::read_to_string(&out).unwrap();
    for line in records.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        validate("search-record.schema.json", &r);
        if r["category"] == "extremal" || r["category"] == "exceptional" {
            assert_eq!(r["points"], 15);
        }
    }

    let sharded = dir.path().join("sharded");
    std::fs::create_dir(&sharded).unwrap();
    let mut parts = Vec::new();
    for i in 0..3 {
        let p = sharded.join(format!("part{i}.jsonl"));
        let shard = format!("{i}/3");
        let o = fqhyper(&["search", "families/quadrics.json", "--out", p.to_str().unwrap(), "--shard", &shard]);
        assert_eq!(code(&o), 0);
        parts.push(p);
    }
    let merged = dir.path().join("merged.jsonl");
    let mut args = vec!["merge", "--out", merged.to_str().unwrap()];
    args.extend(parts.iter().map(|p| p.to_str().unwrap()));
    let o = fqhyper(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&merged).unwrap(), records);
    assert_eq!(summary_of(&merged), summary);
    // a missing shard is a hard error
    let o = fqhyper(&["merge", "--out", merged.to_str().unwrap(), parts[0].to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}

#[test]
fn search_usage_and_quarantine() {
    let dir = tempfile::tempdir().unwrap();
    let (o, _) = search(dir.path(), "families/quadrics.json", &["--shard", "2/2"]);
    assert_eq!(code(&o), 2);
    let (o, _) = search(dir.path(), "inputs/quadric-f2.txt", &[]);
    assert_eq!(code(&o), 2);
    let cubics = dir.path().join("cubics.json");
    let spec = r#"{"field": "2", "ambient_dim": 2, "degree": 3, "fixed": "0",
        "slots": ["x0^3", "x0^2*x1", "x0*x1^2", "x1^3", "x0^2*x2", "x0*x1*x2", "x1^2*x2", "x0*x2^2", "x1*x2^2", "x2^3"]}"#;
    std::fs::write(&cubics, spec).unwrap();
    // plane cubics need S-pairs of degree 3
    let (o, out) = search(dir.path(), cubics.to_str().unwrap(), &["--degree-cap", "2"]);
    assert_eq!(code(&o), 5);
    assert!(summary_of(&out)["counters"]["quarantined"].as_u64().unwrap() > 0);
}

#[test]
fn flagship_search() {
    let dir = tempfile::tempdir().unwrap();
    let (o, out) = search(dir.path(), "families/flagship.json", &["--threshold", "27"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o);
    assert!(line.contains("exceptional=0"), "{line}");
    assert!(line.contains("quarantined=0"), "{line}");
    let s = summary_of(&out);
    assert!(s["counters"]["extremal"].as_u64().unwrap() > 0);
}

#[test]
fn pencil_statistics() {
    let o =
        fqhyper(&["pencil", "inputs/quadric-f2.txt", "--field", "2", "--line", "(1:0:0:0:0)", "--line", "(0:0:1:0:0)"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    validate("pencil.schema.json", &v);
    assert_eq!(v["planes"].as_array().unwrap().len(), 7);
    assert_eq!(v["nonsingular"], true);
    // every tangent section of a quadric is a cone
    assert_eq!(v["cone_points"], 15);
    assert_eq!(v["bound_hypotheses_hold"], false);
    assert_eq!(v["delta"], 0);
    // each plane meets X in l and a residual rational line
    assert_eq!(v["sigma"], 7);

    let o =
        fqhyper(&["pencil", "inputs/quadric-f2.txt", "--field", "2", "--line", "(1:0:0:0:0)", "--line", "(0:1:0:0:0)"]);
    assert_eq!(code(&o), 3);

    // nonsingular cubic over F_3 without cone points: the bounds apply
    let o = fqhyper(&[
        "pencil",
        "inputs/cubic-with-line-f3.txt",
        "--field",
        "3",
        "--line",
        "(0:0:0:1:0)",
        "--line",
        "(0:0:0:0:1)",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    validate("pencil.schema.json", &v);
    assert_eq!(v["planes"].as_array().unwrap().len(), 13);
    assert_eq!(v["bound_hypotheses_hold"], true);
    assert_eq!(v["within_omega_bound"], true);
    assert_eq!(v["within_sigma_bound"], true);
}
