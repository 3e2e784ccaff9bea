use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pww_core::ggb::archive_from_xml;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn pww(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pww")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_writes_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("euler.pww.json");
    let o = pww(&["prove", path(&data("euler.dsl")), "--goal", "coll O G H", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("stopped=fixpoint"), "{stderr}");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("{\n  \"formatVersion\": \"pww-1\""));
}

#[test]
fn prove_to_stdout_and_quiet() {
    let o = pww(&["prove", path(&data("midline.dsl")), "-q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let doc = pww_core::proof::ProofDocument::from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(doc.steps.len(), 3);
}

#[test]
fn check_refutes_with_witness() {
    let o = pww(&["check", path(&data("scalene.dsl")), "--goal", "cong A B A C"]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("counter-witness"));
    assert!(stdout.contains("A = ("));
}

#[test]
fn check_holds() {
    let o = pww(&["check", path(&data("euler.dsl")), "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn refuted_prove_skips_saturation() {
    let o = pww(&["prove", path(&data("scalene.dsl")), "--goal", "perp A B A C"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8(o.stderr).unwrap().contains("levels="));
}

#[test]
fn unknown_when_not_derived() {
    // The Euler line needs more than one level.
    let o = pww(&["prove", path(&data("euler.dsl")), "--max-level", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("stopped=levelcap"));
}

#[test]
fn input_errors() {
    assert_eq!(pww(&["prove", path(&data("malformed.dsl")), "--goal", "coll A B X"]).status.code(), Some(3));
    assert_eq!(pww(&["check", path(&data("scalene.dsl"))]).status.code(), Some(3));
    assert_eq!(pww(&["check", path(&data("scalene.dsl")), "--goal", "coll A B Z"]).status.code(), Some(3));
    assert_eq!(pww(&["check", "/nonexistent.dsl", "--goal", "coll A B C"]).status.code(), Some(3));
    assert_eq!(pww(&["prove", path(&data("euler.dsl")), "--max-facts", "0"]).status.code(), Some(3));
}

#[test]
fn relate_lists_relations() {
    let o = pww(&["relate", path(&data("midline.dsl")), "--select", "A,B,C,M,N"]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().any(|l| l == "para B C M N"), "{stdout}");
    assert!(stdout.lines().any(|l| l == "midp M A B"), "{stdout}");
}

#[test]
fn convert_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ggb = dir.path().join("euler.ggb");
    let o = pww(&["convert", path(&data("euler.dsl")), "--to", "ggb", "--out", path(&ggb)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read(&ggb).unwrap().starts_with(b"PK"));
    let o = pww(&["convert", path(&ggb)]);
    assert_eq!(o.status.code(), Some(0));
    let dsl = String::from_utf8(o.stdout).unwrap();
    assert!(dsl.contains("point A"));
    // The imported construction proves the same theorem.
    let back = dir.path().join("back.dsl");
    fs::write(&back, &dsl).unwrap();
    for input in [&ggb, &back] {
        let o = pww(&["prove", path(input), "--goal", "coll O G H", "-q"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unsupported_archive_exits_four() {
    let xml = r#"<geogebra format="5.0"><construction>
<element type="point" label="A"><coords x="0" y="0" z="1"/></element>
<element type="point" label="B"><coords x="1" y="0" z="1"/></element>
<element type="point" label="C"><coords x="0" y="1" z="1"/></element>
<command name="Ellipse"><input a0="A" a1="B" a2="C"/><output a0="e"/></command>
<element type="conic" label="e"/>
</construction></geogebra>"#;
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("figure.ggb");
    fs::write(&file, archive_from_xml(xml).unwrap()).unwrap();
    let o = pww(&["convert", path(&file), "--to", "dsl"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("Ellipse"));
    let o = pww(&["convert", path(&file), "--explain-unsupported"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8(o.stderr).unwrap().contains("OrthogonalLine"));
}

#[test]
fn render_embeds_document() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("m.json");
    assert_eq!(pww(&["prove", path(&data("midline.dsl")), "--out", path(&json)]).status.code(), Some(0));
    let viewer = dir.path().join("viewer");
    fs::create_dir(&viewer).unwrap();
    fs::write(viewer.join("viewer.js"), "console.log('viewer');").unwrap();
    let html = dir.path().join("m.html");
    let o = pww(&["render", path(&json), "--viewer", path(&viewer), "--out", path(&html)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let page = fs::read_to_string(&html).unwrap();
    assert!(page.contains("id=\"pww-document\""));
    assert!(page.contains("console.log('viewer');"));
    let o = pww(&["render", path(&json), "--viewer", path(&dir.path().join("missing"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("build the viewer"));
}

#[test]
fn seeded_runs_are_identical() {
    let a = pww(&["prove", path(&data("euler.dsl")), "--seed", "7", "-q"]);
    let b = pww(&["prove", path(&data("euler.dsl")), "--seed", "7", "-q"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
