use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use polymmp::document::InputDocument;
use polymmp::horospherical::{fan_from_polytope, BDivisor, PolarizedEmbedding, PolytopeView};
use polymmp::Rat;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn polymmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polymmp")).args(args).output().unwrap()
}

fn run_on(cmd: &str, input: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    polymmp(&args)
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn edited(name: &str, edit: impl FnOnce(&mut Value)) -> (tempfile::TempDir, PathBuf) {
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    edit(&mut doc);
    write_doc(&doc.to_string())
}

fn write_doc(text: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("input.json");
    std::fs::write(&path, text).unwrap();
    (dir, path)
}

fn intervals(report: &Value) -> Vec<String> {
    report["classes"].as_array().unwrap().iter().map(|c| c["interval"].as_str().unwrap().to_string()).collect()
}

#[test]
fn run_json_report() {
    let r = json(&run_on("run", &fixture("ex_toric1"), &["--format", "json"]));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "run");
    assert_eq!(intervals(&r), ["[0,1)", "[1,2)", "{2}"]);
    let kinds: Vec<&str> = r["steps"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["divisorial", "mori_fibration"]);
}

#[test]
fn run_text_report() {
    let out = run_on("run", &fixture("ex_horo5"), &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("polymmp report v1 (run)"));
    assert!(text.contains("flip at eps = 1"));
}

#[test]
fn classes_of_the_general_cut() {
    let r = json(&run_on("classes", &fixture("ex_toric2"), &["--format", "json"]));
    assert_eq!(intervals(&r), ["[0,1/2)", "{1/2}", "(1/2,3/2)", "[3/2,2)", "{2}"]);
    assert!(r.get("steps").is_none());
}

#[test]
fn both_oracles_agree() {
    for name in ["ex_toric2", "ex_horo5"] {
        let r = json(&run_on("run", &fixture(name), &["--format", "json", "--oracle", "both"]));
        assert_eq!(r["oracle"]["mode"], "both");
        assert_eq!(r["oracle"]["agreed"], true);
        let brute: Vec<String> =
            r["oracle"]["intervals"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        assert_eq!(brute, intervals(&r));
    }
}

#[test]
fn check_and_fiber() {
    let c = json(&run_on("check", &fixture("ex_toric1"), &["--format", "json"]));
    assert_eq!(c["input"]["flags"]["q_factorial"], true);
    assert_eq!(c["genericity"]["q_factorial_generic"], false);
    let f = json(&run_on("fiber", &fixture("ex_toric2"), &["--format", "json"]));
    assert_eq!(f["terminal"]["z_dim"], 1);
    assert!(f.get("classes").is_none());
}

#[test]
fn report_written_to_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on("run", &fixture("ex_horo1"), &["--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(intervals(&written), ["[0,1)", "[1,4/3)", "{4/3}"]);
}

#[test]
fn render_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run_on("render", &fixture("ex_horo5"), &["--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svgs: Vec<PathBuf> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "svg"))
        .collect();
    assert_eq!(svgs.len(), 4);
    assert!(std::fs::read_to_string(&svgs[0]).unwrap().contains("<svg"));
    let out = run_on("render", &fixture("ex_toric1"), &["--out", d, "--image", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(dir.path().join("vertices.csv")).unwrap();
    assert!(reader.records().count() > 0);
}

#[test]
fn empty_polytope_is_not_ample() {
    let (_d, path) = edited("ex_toric1", |doc| doc["divisor"]["g_stable"][0] = Value::from(-10));
    assert_eq!(run_on("run", &path, &[]).status.code(), Some(5));
}

#[test]
fn bad_schema_and_unreadable_input() {
    let (_d, path) = edited("ex_toric1", |doc| doc["schema_version"] = Value::from(9));
    assert_eq!(run_on("run", &path, &[]).status.code(), Some(3));
    let (_d, path) = write_doc("{ not json");
    assert_eq!(run_on("run", &path, &[]).status.code(), Some(3));
    assert_eq!(run_on("run", Path::new("/nonexistent/input.json"), &[]).status.code(), Some(3));
}

#[test]
fn invalid_fan_is_an_invariant_error() {
    let (_d, path) = edited("ex_toric1", |doc| doc["cones"][0]["rays"][0] = Value::from(17));
    assert_eq!(run_on("run", &path, &[]).status.code(), Some(4));
}

#[test]
fn clap_usage_errors() {
    assert_eq!(polymmp(&["run"]).status.code(), Some(2));
    assert_eq!(polymmp(&["frobnicate"]).status.code(), Some(2));
}

/// The general cut at its flipping parameter, written as a standalone input.
fn non_gorenstein_input() -> String {
    let text = std::fs::read_to_string(fixture("ex_toric2")).unwrap();
    let e = InputDocument::from_json(&text).unwrap().to_embedding().unwrap();
    let rows = e.rows().unwrap();
    let eps = Rat::frac(1, 2);
    let rhs = e.b_tilde().add(&rows.c_tilde.scale(&eps));
    let all: Vec<usize> = (0..rows.len()).collect();
    let view = PolytopeView::new(&rows, rhs.clone(), &all, eps).unwrap();
    let fan = fan_from_polytope(&view, &rows);
    let divisor = BDivisor { g_stable: rhs.iter().map(|b| -b.clone()).collect(), colors: Default::default() };
    let y = PolarizedEmbedding::new(e.space.clone(), e.rays.clone(), fan, divisor).unwrap();
    InputDocument::from_embedding(&y, Some("flipping fiber".into())).to_json()
}

#[test]
fn non_gorenstein_input_is_refused_but_checkable() {
    let (_d, path) = write_doc(&non_gorenstein_input());
    assert_eq!(run_on("run", &path, &[]).status.code(), Some(6));
    let c = json(&run_on("check", &path, &["--format", "json"]));
    assert_eq!(c["input"]["flags"]["q_gorenstein"], false);
    assert!(c["message"].as_str().unwrap().contains("not Q-Gorenstein"));
}
