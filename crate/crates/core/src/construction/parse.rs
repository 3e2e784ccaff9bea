//! The construction language: one statement per line, `#` starts a comment.
//!
//! ```text
//! point A, B, C
//! circumcenter O A B C
//! centroid G A B C
//! orthocenter H A B C
//! goal coll O G H
//! ```
//!
//! Macros (`circumcenter`, `centroid`, `orthocenter`, `foot`, `median`) expand
//! into primitive steps whose intermediate objects get `_`-prefixed names.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{parse_goal, ArgType, Construction, GoalError, GoalStatement, ObjectType, Step, StepKind};
use crate::label::Label;

/// Directive emitted by [`print`] so that printed constructions containing
/// generated names parse back unchanged.
const ALLOW_RESERVED: &str = "#% allow-reserved";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("`{0}` is already defined")]
    DuplicateLabel(String),
    #[error("undefined reference `{0}`")]
    UndefinedReference(String),
    #[error("`{keyword}` takes {expected} arguments, got {got}")]
    Arity { keyword: String, expected: usize, got: usize },
    #[error("`{name}` is a {found}, expected a {expected}")]
    TypeMismatch { name: String, found: ObjectType, expected: ArgType },
    #[error("degenerate step (identical arguments): {0}")]
    Degenerate(String),
    #[error("labels starting with `_` are reserved: `{0}`")]
    ReservedLabel(String),
    #[error("a construction needs at least one free point")]
    NoFreePoint,
    #[error("goal: {0}")]
    Goal(GoalError),
}

/// A parsed source file: the construction plus any `goal` lines it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Source {
    pub construction: Construction,
    pub goals: Vec<GoalStatement>,
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (i, ch) in line.char_indices() {
        column += 1;
        let sep = ch.is_whitespace() || ch == ',';
        match (sep, start) {
            (true, Some((s, col))) => {
                out.push(Token { text: &line[s..i], column: col });
                start = None;
            }
            (false, None) => start = Some((i, column)),
            _ => {}
        }
    }
    if let Some((s, col)) = start {
        out.push(Token { text: &line[s..], column: col });
    }
    out
}

/// Appends the primitive steps of one statement.
type Expander = fn(&mut Builder, Label, &[Label]);

struct Builder {
    steps: Vec<Step>,
    types: HashMap<Label, ObjectType>,
    allow_reserved: bool,
    line: usize,
}

impl Builder {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn label(&self, tok: Token<'_>) -> Result<Label, ParseError> {
        let label = Label::new(tok.text).ok_or_else(|| {
            self.err(tok.column, ParseErrorKind::Syntax(format!("invalid label `{}`", tok.text)))
        })?;
        if label.is_generated() && !self.allow_reserved {
            return Err(self.err(tok.column, ParseErrorKind::ReservedLabel(tok.text.into())));
        }
        Ok(label)
    }

    fn fresh_target(&self, tok: Token<'_>) -> Result<Label, ParseError> {
        let label = self.label(tok)?;
        if self.types.contains_key(&label) {
            return Err(self.err(tok.column, ParseErrorKind::DuplicateLabel(tok.text.into())));
        }
        Ok(label)
    }

    fn reference(&self, tok: Token<'_>, want: ArgType) -> Result<Label, ParseError> {
        let label = self.label(tok)?;
        match self.types.get(&label) {
            None => Err(self.err(tok.column, ParseErrorKind::UndefinedReference(tok.text.into()))),
            Some(&t) if want.accepts(t) => Ok(label),
            Some(&t) => Err(self.err(
                tok.column,
                ParseErrorKind::TypeMismatch { name: tok.text.into(), found: t, expected: want },
            )),
        }
    }

    /// Name for a macro intermediate: `base`, or `base_2`, `base_3`, ... when
    /// taken.
    fn generated(&self, base: &str) -> Label {
        let mut name = base.to_string();
        let mut n = 2;
        while self.types.contains_key(&Label::new(&name).expect("generated label")) {
            name = format!("{base}_{n}");
            n += 1;
        }
        Label::new(&name).expect("generated label")
    }

    fn push(&mut self, kind: StepKind, label: Label, args: Vec<Label>) {
        self.types.insert(label.clone(), kind.defines());
        self.steps.push(Step::new(kind, label, args));
    }

    fn push_generated(&mut self, kind: StepKind, base: &str, args: Vec<Label>) -> Label {
        let label = self.generated(base);
        self.push(kind, label.clone(), args);
        label
    }

    fn check_arity(&self, keyword: Token<'_>, args: &[Token<'_>], expected: usize) -> Result<(), ParseError> {
        if args.len() != expected {
            return Err(self.err(
                keyword.column,
                ParseErrorKind::Arity { keyword: keyword.text.into(), expected, got: args.len() },
            ));
        }
        Ok(())
    }

    fn check_distinct(&self, keyword: Token<'_>, labels: &[&Label], line: &str) -> Result<(), ParseError> {
        let repeated = labels.iter().enumerate().any(|(i, a)| labels[..i].contains(a));
        if repeated {
            return Err(self.err(keyword.column, ParseErrorKind::Degenerate(line.trim().into())));
        }
        Ok(())
    }

    fn statement(&mut self, toks: &[Token<'_>], raw: &str) -> Result<(), ParseError> {
        let keyword = toks[0];
        let args = &toks[1..];
        if keyword.text == "point" {
            if args.is_empty() {
                return Err(self.err(keyword.column, ParseErrorKind::Syntax("`point` needs a label".into())));
            }
            for &tok in args {
                let label = self.fresh_target(tok)?;
                self.push(StepKind::FreePoint, label, Vec::new());
            }
            return Ok(());
        }
        if let Some(kind) = StepKind::from_keyword(keyword.text) {
            let types = kind.arg_types();
            self.check_arity(keyword, args, types.len() + 1)?;
            let target = self.fresh_target(args[0])?;
            let refs = args[1..]
                .iter()
                .zip(types)
                .map(|(&t, &want)| self.reference(t, want))
                .collect::<Result<Vec<_>, _>>()?;
            self.check_distinct(keyword, &refs.iter().collect::<Vec<_>>(), raw)?;
            self.push(kind, target, refs);
            return Ok(());
        }
        use ArgType::{Line, Point};
        let (pattern, expand): (&[ArgType], Expander) = match keyword.text {
            "circumcenter" => (&[Point, Point, Point], expand_circumcenter),
            "centroid" => (&[Point, Point, Point], expand_centroid),
            "orthocenter" => (&[Point, Point, Point], expand_orthocenter),
            "median" => (&[Point, Point, Point], expand_median),
            "foot" => (&[Point, Line], expand_foot),
            other => {
                return Err(self.err(
                    keyword.column,
                    ParseErrorKind::Syntax(format!("unknown statement `{other}`")),
                ))
            }
        };
        self.check_arity(keyword, args, pattern.len() + 1)?;
        let target = self.fresh_target(args[0])?;
        let refs = args[1..]
            .iter()
            .zip(pattern)
            .map(|(&t, &want)| self.reference(t, want))
            .collect::<Result<Vec<_>, _>>()?;
        self.check_distinct(keyword, &refs.iter().collect::<Vec<_>>(), raw)?;
        expand(self, target, &refs);
        Ok(())
    }
}

fn expand_circumcenter(b: &mut Builder, o: Label, r: &[Label]) {
    let (a, bb, c) = (&r[0], &r[1], &r[2]);
    let p1 = b.push_generated(StepKind::PerpBisector, "_p1", vec![a.clone(), bb.clone()]);
    let p2 = b.push_generated(StepKind::PerpBisector, "_p2", vec![bb.clone(), c.clone()]);
    b.push(StepKind::Intersect, o, vec![p1, p2]);
}

fn expand_centroid(b: &mut Builder, g: Label, r: &[Label]) {
    let (a, bb, c) = (&r[0], &r[1], &r[2]);
    let ma = b.push_generated(StepKind::Midpoint, "_Ma", vec![bb.clone(), c.clone()]);
    let mb = b.push_generated(StepKind::Midpoint, "_Mb", vec![a.clone(), c.clone()]);
    let la = b.push_generated(StepKind::LineThrough, "_ma", vec![a.clone(), ma]);
    let lb = b.push_generated(StepKind::LineThrough, "_mb", vec![bb.clone(), mb]);
    b.push(StepKind::Intersect, g, vec![la, lb]);
}

fn expand_orthocenter(b: &mut Builder, h: Label, r: &[Label]) {
    let (a, bb, c) = (&r[0], &r[1], &r[2]);
    let la = b.push_generated(StepKind::LineThrough, "_a", vec![bb.clone(), c.clone()]);
    let lb = b.push_generated(StepKind::LineThrough, "_b", vec![a.clone(), c.clone()]);
    let h1 = b.push_generated(StepKind::PerpLine, "_h1", vec![a.clone(), la]);
    let h2 = b.push_generated(StepKind::PerpLine, "_h2", vec![bb.clone(), lb]);
    b.push(StepKind::Intersect, h, vec![h1, h2]);
}

fn expand_median(b: &mut Builder, m: Label, r: &[Label]) {
    let (a, bb, c) = (&r[0], &r[1], &r[2]);
    let mid = b.push_generated(StepKind::Midpoint, "_M", vec![bb.clone(), c.clone()]);
    b.push(StepKind::LineThrough, m, vec![a.clone(), mid]);
}

fn expand_foot(b: &mut Builder, f: Label, r: &[Label]) {
    let (p, line) = (&r[0], &r[1]);
    let q = b.push_generated(StepKind::PerpLine, "_q", vec![p.clone(), line.clone()]);
    b.push(StepKind::Intersect, f, vec![q, line.clone()]);
}

/// Parses a source file, expanding macros and resolving `goal` lines.
pub fn parse_source(text: &str) -> Result<Source, ParseError> {
    let mut builder = Builder { steps: Vec::new(), types: HashMap::new(), allow_reserved: false, line: 0 };
    let mut goal_lines: Vec<(usize, usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        builder.line = idx + 1;
        if raw.trim() == ALLOW_RESERVED {
            builder.allow_reserved = true;
            continue;
        }
        let code = raw.split('#').next().unwrap_or("");
        let toks = tokenize(code);
        if toks.is_empty() {
            continue;
        }
        if toks[0].text == "goal" {
            let rest = code[code.find("goal").unwrap() + 4..].to_string();
            goal_lines.push((idx + 1, toks[0].column, rest));
            continue;
        }
        builder.statement(&toks, code)?;
    }

    let construction = Construction::from_steps(builder.steps);
    if construction.free_points().next().is_none() {
        return Err(ParseError { line: 0, column: 0, kind: ParseErrorKind::NoFreePoint });
    }
    let goals = goal_lines
        .into_iter()
        .map(|(line, column, rest)| {
            parse_goal(&rest, &construction)
                .map_err(|e| ParseError { line, column, kind: ParseErrorKind::Goal(e) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Source { construction, goals })
}

pub fn parse_construction(text: &str) -> Result<Construction, ParseError> {
    parse_source(text).map(|s| s.construction)
}

/// Prints the primitive steps of a construction in the construction language.
pub fn print(c: &Construction) -> String {
    Printed(c, None).to_string()
}

/// Like [`print`], followed by a `goal` line.
pub fn print_with_goal(c: &Construction, goal: &GoalStatement) -> String {
    Printed(c, Some(goal)).to_string()
}

struct Printed<'a>(&'a Construction, Option<&'a GoalStatement>);

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let generated: HashSet<_> = self.0.steps().iter().filter(|s| s.label.is_generated()).collect();
        if !generated.is_empty() {
            writeln!(f, "{ALLOW_RESERVED}")?;
        }
        for step in self.0.steps() {
            writeln!(f, "{step}")?;
        }
        if let Some(goal) = self.1 {
            writeln!(f, "goal {goal}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fact::Predicate;
    use crate::label::l;

    pub(crate) const EULER: &str = "\
# Euler line
point A, B, C
circumcenter O A B C
centroid G A B C
orthocenter H A B C
goal coll O G H
";

    #[test]
    fn direct_mapping() {
        let c = parse_construction("point A\npoint B\nmidpoint M A B").unwrap();
        assert_eq!(
            c.steps(),
            &[
                Step::free(l("A")),
                Step::free(l("B")),
                Step::new(StepKind::Midpoint, l("M"), vec![l("A"), l("B")]),
            ]
        );
    }

    #[test]
    fn euler_desugaring() {
        let src = parse_source(EULER).unwrap();
        let steps = src.construction.steps();
        assert_eq!(steps.iter().filter(|s| s.kind == StepKind::FreePoint).count(), 3);
        // circumcenter 3 + centroid 5 + orthocenter 5
        assert_eq!(steps.len() - 3, 13);
        assert_eq!(src.goals.len(), 1);
        assert_eq!(src.goals[0].predicate, Predicate::Coll);
        assert_eq!(src.goals[0].args, vec![l("O"), l("G"), l("H")]);
        for s in steps {
            let user = ["A", "B", "C", "O", "G", "H"].contains(&s.label.as_str());
            assert_eq!(s.label.is_generated(), !user, "{s}");
        }
        assert!(super::super::validate(&src.construction).is_empty());
    }

    #[test]
    fn repeated_macros_get_unique_names() {
        let c = parse_construction("point A B C D\ncircumcenter O A B C\ncircumcenter P A B D").unwrap();
        let labels: Vec<&str> = c.steps().iter().map(|s| s.label.as_str()).collect();
        assert!(labels.contains(&"_p1") && labels.contains(&"_p1_2"));
        assert!(super::super::validate(&c).is_empty());
    }

    #[test]
    fn degenerate_midpoint() {
        let e = parse_construction("point A\nmidpoint M A A").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Degenerate(_)));
    }

    #[test]
    fn error_positions() {
        let e = parse_construction("point A\nmidpoint M A  X").unwrap_err();
        assert_eq!((e.line, e.column), (2, 15));
        assert_eq!(e.kind, ParseErrorKind::UndefinedReference("X".into()));

        let e = parse_construction("point A, B\npoint A").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateLabel("A".into()));

        let e = parse_construction("point A B\nmidpoint M A").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 3, got: 2, .. }));

        let e = parse_construction("point _A").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ReservedLabel(_)));

        let e = parse_construction("point A B\nline l A B\nmidpoint M A l").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::TypeMismatch { .. }));

        let e = parse_construction("point A\nsquare s A").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        let e = parse_construction("# nothing\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NoFreePoint);
    }

    #[test]
    fn goal_errors_carry_line() {
        let e = parse_source("point A B C\ngoal coll A B X").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Goal(GoalError::UnresolvedLabel(_))));
    }

    #[test]
    fn foot_and_median() {
        let c = parse_construction("point A B C\nline l B C\nfoot F A l\nmedian m A B C").unwrap();
        let kinds: Vec<StepKind> = c.steps().iter().map(|s| s.kind).collect();
        assert_eq!(
            &kinds[4..],
            &[StepKind::PerpLine, StepKind::Intersect, StepKind::Midpoint, StepKind::LineThrough]
        );
    }

    #[test]
    fn print_parse_is_idempotent_on_euler() {
        let once = parse_construction(EULER).unwrap();
        let twice = parse_construction(&print(&once)).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn comments_and_commas() {
        let c = parse_construction("point A,B , C # three\n\n  # only comment\ncircle c A B").unwrap();
        assert_eq!(c.len(), 4);
    }
}
