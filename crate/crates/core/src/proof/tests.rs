use super::*;
use crate::construction::parse_source;
use crate::engine::{prove, rederive, Justification, SaturationLimits};
use crate::numeric::instantiate;

const EULER: &str = "point A, B, C\ncircumcenter O A B C\ncentroid G A B C\northocenter H A B C\ngoal coll O G H\n";

fn document(src: &str) -> (Construction, ProofRun, ProofDocument) {
    let s = parse_source(src).unwrap();
    let run = prove(&s.construction, &s.goals[0], &SaturationLimits::default(), 0, &Tolerances::default()).unwrap();
    let doc = document_for_run(&s.construction, &run).unwrap();
    (s.construction, run, doc)
}

#[test]
fn midline_document() {
    let (_, _, doc) = document("point A, B, C\nmidpoint M A B\nmidpoint N A C\ngoal para M N B C\n");
    assert_eq!(doc.steps.len(), 3);
    assert_eq!(doc.steps[0].rule, "construction");
    assert_eq!(doc.steps[2].rule, "R03");
    assert_eq!(doc.steps[2].deps, vec![0, 1]);
    assert_eq!(doc.steps[2].caption, "Midsegment: {B}{C} ∥ {M}{N}");
    let marks = &doc.steps[2].highlight.parallel_marks;
    assert_eq!(marks.len(), 2);
    assert_eq!(marks[0].mark_class, marks[1].mark_class);
}

#[test]
fn seeded_goal_is_a_single_step() {
    let (_, _, doc) = document("point A, B\nmidpoint M A B\ngoal cong M A M B\n");
    assert_eq!(doc.steps.len(), 1);
    assert!(doc.steps[0].caption.starts_with("Given: "));
    assert!(doc.steps[0].deps.is_empty());
}

#[test]
fn euler_document() {
    let (_, _, doc) = document(EULER);
    assert!(doc.steps.len() <= 40, "{} steps", doc.steps.len());
    for (i, s) in doc.steps.iter().enumerate() {
        assert!(s.deps.iter().all(|&d| d < i));
        assert!(!s.caption.is_empty());
    }
    assert_eq!(doc.goal.text, "G, H, O are collinear");
    let text = doc.to_json();
    assert!(text.ends_with("}\n"));
    let back = ProofDocument::from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_json(), text);
}

#[test]
fn numbers_keep_full_precision() {
    let (_, _, doc) = document(EULER);
    let back = ProofDocument::from_json(&doc.to_json()).unwrap();
    for (a, b) in doc.witness.iter().zip(&back.witness) {
        if let (WitnessObject::Point { x: xa, y: ya, .. }, WitnessObject::Point { x: xb, y: yb, .. }) = (a, b) {
            assert_eq!(xa.0.to_bits(), xb.0.to_bits());
            assert_eq!(ya.0.to_bits(), yb.0.to_bits());
        }
    }
}

#[test]
fn pruned_steps_rederive_on_fresh_witnesses() {
    let (c, run, _) = document(EULER);
    let dag = run.store.dag();
    let pruned = extract_proof(dag, run.root.unwrap()).unwrap();
    let tol = Tolerances::default();
    let ws: Vec<_> = (500..503).map(|seed| instantiate(&c, seed, &tol).unwrap()).collect();
    for &id in &pruned.nodes {
        let node = dag.node(id);
        if matches!(node.justification, Justification::ConstructionSemantics { .. }) {
            continue;
        }
        let premises: Vec<Fact> = dag.premises(id).iter().map(|&p| dag.node(p).fact.clone()).collect();
        assert!(rederive(&ws, &tol, &premises, &node.justification, &node.fact), "{}", node.fact);
    }
}

#[test]
fn missing_goal_is_rejected() {
    let (_, _, mut doc) = document("point A, B, C\nmidpoint M A B\nmidpoint N A C\ngoal para M N B C\n");
    doc.steps.pop();
    assert!(matches!(doc.validate(), Err(ProofError::GoalMissing(_))));
}

#[test]
fn forward_dependency_is_rejected() {
    let (_, _, mut doc) = document("point A, B, C\nmidpoint M A B\nmidpoint N A C\ngoal para M N B C\n");
    doc.steps[0].deps.push(2);
    assert!(matches!(doc.validate(), Err(ProofError::BadDependency { step: 0, dep: 2 })));
}

#[test]
fn unproved_run_has_no_document() {
    let s = parse_source("point A, B, C\ngoal cong A B A C").unwrap();
    let run = prove(&s.construction, &s.goals[0], &SaturationLimits::default(), 0, &Tolerances::default()).unwrap();
    assert!(matches!(document_for_run(&s.construction, &run), Err(ProofError::NotProved)));
}

#[test]
fn html_embeds_document() {
    let (_, _, doc) = document(EULER);
    let assets = ViewerAssets { script: "window.x = '</script>';".into(), style: Some("body{}".into()) };
    let html = render_html(&doc, &assets);
    assert!(html.starts_with("<!DOCTYPE html>"));
    assert!(html.contains("<meta charset=\"utf-8\"/>"));
    let open = format!("<script type=\"application/json\" id=\"{DOCUMENT_ELEMENT_ID}\">");
    let start = html.find(&open).unwrap() + open.len();
    let end = start + html[start..].find("</script>").unwrap();
    let payload = html[start..end].replace("<\\/", "</");
    assert_eq!(ProofDocument::from_json(&payload).unwrap(), doc);
    assert_eq!(html.matches("</script>").count(), 2);
}

#[test]
fn missing_assets_point_to_build() {
    let err = ViewerAssets::load(std::path::Path::new("/nonexistent/viewer")).unwrap_err();
    assert!(err.to_string().contains("build the viewer"));
}

#[test]
fn caption_titles() {
    assert_eq!(caption_title("construction"), "Given");
    assert_eq!(caption_title("R03"), "Midsegment");
    assert_eq!(caption_title("chase"), "Chase");
}
