//! Construction model: straight-line programs over labeled points, lines and
//! circles, plus the goal statements checked against them.

mod parse;
mod semantics;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fact::{Fact, Predicate};
use crate::label::Label;

pub use parse::{parse_construction, parse_source, print, print_with_goal, ParseError, ParseErrorKind, Source};
pub use semantics::{carrier_points, seed_facts, SeededFact};

/// What a step defines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjectType {
    Point,
    Line,
    Circle,
}

impl fmt::Display for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectType::Point => "point",
            ObjectType::Line => "line",
            ObjectType::Circle => "circle",
        })
    }
}

/// Expected type of a step argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgType {
    Point,
    Line,
    /// A line or a circle.
    Carrier,
}

impl ArgType {
    fn accepts(self, t: ObjectType) -> bool {
        match self {
            ArgType::Point => t == ObjectType::Point,
            ArgType::Line => t == ObjectType::Line,
            ArgType::Carrier => t != ObjectType::Point,
        }
    }
}

impl fmt::Display for ArgType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArgType::Point => "point",
            ArgType::Line => "line",
            ArgType::Carrier => "line or circle",
        })
    }
}

/// The primitive construction steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    /// `point P`
    FreePoint,
    /// `on P l`: a point free to move on a line or circle.
    PointOn,
    /// `midpoint M A B`
    Midpoint,
    /// `line l A B`
    LineThrough,
    /// `parallel l P m`: through `P`, parallel to `m`.
    ParallelLine,
    /// `perpendicular l P m`: through `P`, perpendicular to `m`.
    PerpLine,
    /// `perpbisector l A B`
    PerpBisector,
    /// `intersect P l m`: meet of two lines.
    Intersect,
    /// `circumcircle c A B C`
    Circumcircle,
    /// `circle c O A`: center `O` through `A`.
    CircleCenterThrough,
}

impl StepKind {
    pub const ALL: [StepKind; 10] = [
        StepKind::FreePoint,
        StepKind::PointOn,
        StepKind::Midpoint,
        StepKind::LineThrough,
        StepKind::ParallelLine,
        StepKind::PerpLine,
        StepKind::PerpBisector,
        StepKind::Intersect,
        StepKind::Circumcircle,
        StepKind::CircleCenterThrough,
    ];

    /// Keyword in the construction language.
    pub fn keyword(self) -> &'static str {
        match self {
            StepKind::FreePoint => "point",
            StepKind::PointOn => "on",
            StepKind::Midpoint => "midpoint",
            StepKind::LineThrough => "line",
            StepKind::ParallelLine => "parallel",
            StepKind::PerpLine => "perpendicular",
            StepKind::PerpBisector => "perpbisector",
            StepKind::Intersect => "intersect",
            StepKind::Circumcircle => "circumcircle",
            StepKind::CircleCenterThrough => "circle",
        }
    }

    pub fn from_keyword(word: &str) -> Option<StepKind> {
        StepKind::ALL.into_iter().find(|k| k.keyword() == word)
    }

    pub fn defines(self) -> ObjectType {
        match self {
            StepKind::FreePoint | StepKind::PointOn | StepKind::Midpoint | StepKind::Intersect => {
                ObjectType::Point
            }
            StepKind::LineThrough
            | StepKind::ParallelLine
            | StepKind::PerpLine
            | StepKind::PerpBisector => ObjectType::Line,
            StepKind::Circumcircle | StepKind::CircleCenterThrough => ObjectType::Circle,
        }
    }

    pub fn arg_types(self) -> &'static [ArgType] {
        use ArgType::*;
        match self {
            StepKind::FreePoint => &[],
            StepKind::PointOn => &[Carrier],
            StepKind::Midpoint | StepKind::LineThrough | StepKind::PerpBisector => &[Point, Point],
            StepKind::ParallelLine | StepKind::PerpLine => &[Point, Line],
            StepKind::Intersect => &[Line, Line],
            StepKind::Circumcircle => &[Point, Point, Point],
            StepKind::CircleCenterThrough => &[Point, Point],
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// One construction step: defines `label` from earlier objects `args`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub kind: StepKind,
    pub label: Label,
    pub args: Vec<Label>,
}

impl Step {
    pub fn new(kind: StepKind, label: Label, args: Vec<Label>) -> Step {
        Step { kind, label, args }
    }

    pub fn free(label: Label) -> Step {
        Step::new(StepKind::FreePoint, label, Vec::new())
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.keyword(), self.label)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// An ordered list of steps. Every step references only labels defined by
/// earlier steps; [`validate`] reports violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Construction {
    steps: Vec<Step>,
}

impl Construction {
    pub fn from_steps(steps: Vec<Step>) -> Construction {
        Construction { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn free_points(&self) -> impl Iterator<Item = &Label> {
        self.steps.iter().filter(|s| s.kind == StepKind::FreePoint).map(|s| &s.label)
    }

    pub fn points(&self) -> impl Iterator<Item = &Label> {
        self.steps.iter().filter(|s| s.kind.defines() == ObjectType::Point).map(|s| &s.label)
    }

    pub fn step_of(&self, label: &Label) -> Option<(usize, &Step)> {
        self.steps.iter().enumerate().find(|(_, s)| &s.label == label)
    }

    pub fn object_type(&self, label: &Label) -> Option<ObjectType> {
        self.step_of(label).map(|(_, s)| s.kind.defines())
    }

    /// Same step kinds in the same order with the same reference graph; labels
    /// may differ by a consistent renaming.
    pub fn is_isomorphic(&self, other: &Construction) -> bool {
        if self.steps.len() != other.steps.len() {
            return false;
        }
        let mut map: HashMap<&Label, &Label> = HashMap::new();
        for (a, b) in self.steps.iter().zip(&other.steps) {
            if a.kind != b.kind || a.args.len() != b.args.len() {
                return false;
            }
            for (x, y) in a.args.iter().zip(&b.args) {
                if map.get(x) != Some(&y) {
                    return false;
                }
            }
            map.insert(&a.label, &b.label);
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    DuplicateLabel,
    ForwardReference,
    UndefinedReference,
    TypeMismatch,
    ArityMismatch,
    DegenerateArguments,
    NoFreePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub step: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step, self.message)
    }
}

/// Checks the structural invariants of a construction. An empty result means
/// the construction is well formed.
pub fn validate(c: &Construction) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let all: HashSet<&Label> = c.steps.iter().map(|s| &s.label).collect();
    let mut defined: HashMap<&Label, ObjectType> = HashMap::new();
    let mut push = |step: usize, kind: DiagnosticKind, message: String| {
        out.push(Diagnostic { step, kind, message })
    };

    for (i, step) in c.steps.iter().enumerate() {
        let types = step.kind.arg_types();
        if types.len() != step.args.len() {
            push(
                i,
                DiagnosticKind::ArityMismatch,
                format!("`{}` takes {} arguments, got {}", step.kind, types.len(), step.args.len()),
            );
        } else {
            for (arg, want) in step.args.iter().zip(types) {
                match defined.get(arg) {
                    Some(&t) if want.accepts(t) => {}
                    Some(&t) => push(
                        i,
                        DiagnosticKind::TypeMismatch,
                        format!("`{arg}` is a {t}, expected a {want}"),
                    ),
                    None if all.contains(arg) => push(
                        i,
                        DiagnosticKind::ForwardReference,
                        format!("`{arg}` is used before it is defined"),
                    ),
                    None => push(
                        i,
                        DiagnosticKind::UndefinedReference,
                        format!("`{arg}` is never defined"),
                    ),
                }
            }
            let repeated = step
                .args
                .iter()
                .enumerate()
                .any(|(k, a)| step.args[..k].contains(a));
            if repeated {
                push(
                    i,
                    DiagnosticKind::DegenerateArguments,
                    format!("`{step}` repeats an argument"),
                );
            }
        }
        if defined.insert(&step.label, step.kind.defines()).is_some() {
            push(i, DiagnosticKind::DuplicateLabel, format!("`{}` is defined twice", step.label));
        }
    }
    if c.free_points().next().is_none() {
        push(0, DiagnosticKind::NoFreePoint, "a construction needs at least one free point".into());
    }
    out
}

/// A conjectured relation between points of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoalStatement {
    pub predicate: Predicate,
    pub args: Vec<Label>,
}

impl GoalStatement {
    pub fn to_fact(&self) -> Fact {
        Fact::new(self.predicate, self.args.clone()).expect("goal arity checked at parse time")
    }
}

impl From<&Fact> for GoalStatement {
    fn from(f: &Fact) -> Self {
        GoalStatement { predicate: f.predicate(), args: f.args().to_vec() }
    }
}

impl fmt::Display for GoalStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoalError {
    #[error("empty goal")]
    Empty,
    #[error(transparent)]
    UnknownPredicate(#[from] crate::fact::UnknownPredicate),
    #[error("unresolved label `{0}`")]
    UnresolvedLabel(String),
    #[error("`{0}` is not a point")]
    NotAPoint(String),
    #[error("{pred} takes {expected} points, got {got}")]
    Arity { pred: Predicate, expected: usize, got: usize },
}

/// Parses `"<pred> <label>..."` and resolves the labels against `c`.
pub fn parse_goal(text: &str, c: &Construction) -> Result<GoalStatement, GoalError> {
    let mut tokens = text.split(|ch: char| ch.is_whitespace() || ch == ',').filter(|t| !t.is_empty());
    let pred: Predicate = tokens.next().ok_or(GoalError::Empty)?.parse()?;
    let names: Vec<&str> = tokens.collect();
    if names.len() != pred.arity() {
        return Err(GoalError::Arity { pred, expected: pred.arity(), got: names.len() });
    }
    let mut args = Vec::with_capacity(names.len());
    for name in names {
        let label = Label::new(name).ok_or_else(|| GoalError::UnresolvedLabel(name.into()))?;
        match c.object_type(&label) {
            None => return Err(GoalError::UnresolvedLabel(name.into())),
            Some(ObjectType::Point) => args.push(label),
            Some(_) => return Err(GoalError::NotAPoint(name.into())),
        }
    }
    Ok(GoalStatement { predicate: pred, args })
}
