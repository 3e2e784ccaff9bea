//! Proof documents: the goal's derivation pruned from the DAG, laid out as
//! visual steps, and serialized as `pww-1` JSON or a self-contained HTML page.
//!
//! The JSON schema is described in `docs/pww-1.md`.

mod extract;
mod html;
mod linearize;

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::construction::Construction;
use crate::engine::{FactId, ProofRun};
use crate::fact::{Fact, Predicate};
use crate::label::Label;
use crate::numeric::{eval_fact, Geometry, NumericModel, Tolerances};

pub use extract::{extract_proof, PrunedDag};
pub use html::{render_html, ViewerAssets, DOCUMENT_ELEMENT_ID};
pub use linearize::{caption_title, linearize};

pub const FORMAT_VERSION: &str = "pww-1";

/// A float written with 17 significant digits, so it reads back exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite coordinate"));
        }
        let raw = serde_json::value::RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Num)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocFact {
    pub predicate: Predicate,
    pub args: Vec<Label>,
    pub text: String,
}

impl DocFact {
    pub fn to_fact(&self) -> Option<Fact> {
        Fact::new(self.predicate, self.args.clone()).ok()
    }
}

impl From<&Fact> for DocFact {
    fn from(f: &Fact) -> Self {
        DocFact { predicate: f.predicate(), args: f.args().to_vec(), text: f.render() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CircleMark {
    pub center: Option<Label>,
    pub through: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AngleMark {
    pub vertex: Label,
    pub ray1: Label,
    pub ray2: Label,
    pub mark_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TickMark {
    pub segment: [Label; 2],
    pub tick_class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParallelMark {
    pub line: [Label; 2],
    pub mark_class: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Highlight {
    pub points: Vec<Label>,
    pub segments: Vec<[Label; 2]>,
    pub lines: Vec<[Label; 2]>,
    pub circles: Vec<CircleMark>,
    pub angle_marks: Vec<AngleMark>,
    pub tick_marks: Vec<TickMark>,
    pub parallel_marks: Vec<ParallelMark>,
}

impl Highlight {
    fn labels(&self) -> impl Iterator<Item = &Label> {
        self.points
            .iter()
            .chain(self.segments.iter().flatten())
            .chain(self.lines.iter().flatten())
            .chain(self.circles.iter().flat_map(|c| c.center.iter().chain(&c.through)))
            .chain(self.angle_marks.iter().flat_map(|m| [&m.vertex, &m.ray1, &m.ray2]))
            .chain(self.tick_marks.iter().flat_map(|m| &m.segment))
            .chain(self.parallel_marks.iter().flat_map(|m| &m.line))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofStep {
    pub id: usize,
    /// A rule code, `construction` or `chase`.
    #[serde(rename = "ruleId")]
    pub rule: String,
    #[serde(rename = "introducedFacts")]
    pub facts: Vec<DocFact>,
    pub deps: Vec<usize>,
    pub highlight: Highlight,
    pub caption: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocStep {
    pub kind: String,
    pub label: Label,
    pub args: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WitnessObject {
    Point { label: Label, free: bool, x: Num, y: Num },
    Line { label: Label, free: bool, point: [Num; 2], dir: [Num; 2] },
    Circle { label: Label, free: bool, center: [Num; 2], radius: Num },
}

impl WitnessObject {
    pub fn label(&self) -> &Label {
        match self {
            WitnessObject::Point { label, .. }
            | WitnessObject::Line { label, .. }
            | WitnessObject::Circle { label, .. } => label,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub levels: usize,
    pub total_facts_explored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProofDocument {
    #[serde(rename = "formatVersion")]
    pub version: String,
    pub construction: Vec<DocStep>,
    pub witness: Vec<WitnessObject>,
    pub goal: DocFact,
    pub steps: Vec<ProofStep>,
    pub stats: Stats,
}

#[derive(Debug, thiserror::Error)]
pub enum ProofError {
    #[error("node {node} cites premise {premise}, which does not precede it")]
    Dangling { node: FactId, premise: FactId },
    #[error("the goal was not derived")]
    NotProved,
    #[error("proof has no steps")]
    NoSteps,
    #[error("last step does not introduce the goal {0}")]
    GoalMissing(String),
    #[error("step {step} depends on step {dep}, which does not come earlier")]
    BadDependency { step: usize, dep: usize },
    #[error("step {step} has id {id}")]
    BadId { step: usize, id: usize },
    #[error("step {step} mentions `{label}`, which is not in the construction")]
    UnknownLabel { step: usize, label: Label },
    #[error("step {step} states {fact}, which is false on the witness")]
    FalseFact { step: usize, fact: String },
    #[error("unsupported document version `{0}`")]
    Version(String),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Assets(String),
}

fn witness_objects(c: &Construction, w: &NumericModel) -> Vec<WitnessObject> {
    let xy = |v: crate::numeric::Vec2| [Num(v.x), Num(v.y)];
    c.steps()
        .iter()
        .filter_map(|s| {
            let o = w.object(&s.label)?;
            let (label, free) = (s.label.clone(), o.free);
            Some(match o.geometry {
                Geometry::Point(p) => WitnessObject::Point { label, free, x: Num(p.x), y: Num(p.y) },
                Geometry::Line { point, dir } => WitnessObject::Line { label, free, point: xy(point), dir: xy(dir) },
                Geometry::Circle { center, radius } => {
                    WitnessObject::Circle { label, free, center: xy(center), radius: Num(radius) }
                }
            })
        })
        .collect()
}

/// Assembles a document and checks all of its invariants, re-evaluating
/// every displayed fact on `w`.
pub fn build_document(
    c: &Construction,
    w: &NumericModel,
    steps: Vec<ProofStep>,
    goal: &Fact,
    stats: Stats,
) -> Result<ProofDocument, ProofError> {
    let doc = ProofDocument {
        version: FORMAT_VERSION.to_string(),
        construction: c
            .steps()
            .iter()
            .map(|s| DocStep { kind: s.kind.keyword().to_string(), label: s.label.clone(), args: s.args.clone() })
            .collect(),
        witness: witness_objects(c, w),
        goal: DocFact::from(goal),
        steps,
        stats,
    };
    doc.validate()?;
    let tol = Tolerances::default();
    for step in &doc.steps {
        for f in &step.facts {
            let fact = f.to_fact().ok_or_else(|| ProofError::FalseFact { step: step.id, fact: f.text.clone() })?;
            if !eval_fact(w, &fact, &tol) {
                return Err(ProofError::FalseFact { step: step.id, fact: f.text.clone() });
            }
        }
    }
    Ok(doc)
}

impl ProofDocument {
    /// Structural invariants: ids, dependency order, goal placement and
    /// label scope.
    pub fn validate(&self) -> Result<(), ProofError> {
        if self.version != FORMAT_VERSION {
            return Err(ProofError::Version(self.version.clone()));
        }
        let last = self.steps.last().ok_or(ProofError::NoSteps)?;
        let goal = self.goal.to_fact();
        if !last.facts.iter().any(|f| f.to_fact() == goal) {
            return Err(ProofError::GoalMissing(self.goal.text.clone()));
        }
        let labels: BTreeSet<&Label> = self.construction.iter().map(|s| &s.label).collect();
        for (i, step) in self.steps.iter().enumerate() {
            if step.id != i {
                return Err(ProofError::BadId { step: i, id: step.id });
            }
            if let Some(&dep) = step.deps.iter().find(|&&d| d >= i) {
                return Err(ProofError::BadDependency { step: i, dep });
            }
            let mentioned = step.facts.iter().flat_map(|f| &f.args).chain(step.highlight.labels());
            for l in mentioned {
                if !labels.contains(l) {
                    return Err(ProofError::UnknownLabel { step: i, label: l.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<ProofDocument, ProofError> {
        let doc: ProofDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }
}

/// Document for a successful engine run.
pub fn document_for_run(c: &Construction, run: &ProofRun) -> Result<ProofDocument, ProofError> {
    let root = run.root.ok_or(ProofError::NotProved)?;
    let dag = run.store.dag();
    let pruned = extract_proof(dag, root)?;
    let w = run.store.witness();
    let steps = linearize(dag, &pruned, w);
    let stats = Stats { levels: run.report.levels, total_facts_explored: run.store.len() };
    build_document(c, w, steps, &dag.node(root).fact, stats)
}

#[cfg(test)]
mod tests;
