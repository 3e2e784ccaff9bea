use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Cursor, Read};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{GgbError, GgbImport, Unsupported, XML_MEMBER};
use crate::construction::{validate, Construction, ObjectType, Step, StepKind};
use crate::label::Label;
use crate::numeric::Vec2;

#[derive(Clone, Debug, Default)]
struct Element {
    kind: String,
    label: String,
    coords: Option<(f64, f64, f64)>,
}

#[derive(Clone, Debug, Default)]
struct Command {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

#[derive(Clone, Debug)]
enum Item {
    Element(Element),
    Command(Command),
    Expression(String),
}

fn attrs(e: &BytesStart<'_>) -> Result<BTreeMap<String, String>, GgbError> {
    let mut out = BTreeMap::new();
    for a in e.attributes() {
        let a = a.map_err(|err| GgbError::Xml(err.to_string()))?;
        let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
        let value = a.unescape_value().map_err(|err| GgbError::Xml(err.to_string()))?;
        out.insert(key, value.into_owned());
    }
    Ok(out)
}

/// `a0, a1, …` attributes in index order.
fn indexed(map: &BTreeMap<String, String>) -> Vec<String> {
    let mut v: Vec<(usize, String)> = map
        .iter()
        .filter_map(|(k, v)| k.strip_prefix('a')?.parse().ok().map(|i: usize| (i, v.clone())))
        .collect();
    v.sort();
    v.into_iter().map(|(_, s)| s).collect()
}

fn parse_items(xml: &str) -> Result<Vec<Item>, GgbError> {
    let mut reader = Reader::from_str(xml);
    reader.config_mut().trim_text(true);
    let mut items = Vec::new();
    let mut element: Option<Element> = None;
    let mut command: Option<Command> = None;
    let mut in_construction = false;
    let xml_err = |e: quick_xml::Error| GgbError::Xml(e.to_string());
    loop {
        let ev = reader.read_event().map_err(xml_err)?;
        let (e, empty) = match &ev {
            Event::Start(e) => (e.clone(), false),
            Event::Empty(e) => (e.clone(), true),
            Event::End(e) => {
                match e.name().as_ref() {
                    b"construction" => in_construction = false,
                    b"element" => items.extend(element.take().map(Item::Element)),
                    b"command" => items.extend(command.take().map(Item::Command)),
                    _ => {}
                }
                continue;
            }
            Event::Eof => break,
            _ => continue,
        };
        let name = e.name();
        match name.as_ref() {
            b"macro" if !empty => {
                reader.read_to_end(name).map_err(xml_err)?;
            }
            b"construction" => in_construction = !empty,
            _ if !in_construction => {}
            b"element" => {
                let a = attrs(&e)?;
                let el = Element {
                    kind: a.get("type").cloned().unwrap_or_default(),
                    label: a.get("label").cloned().unwrap_or_default(),
                    coords: None,
                };
                if empty {
                    items.push(Item::Element(el));
                } else {
                    element = Some(el);
                }
            }
            b"coords" => {
                if let Some(el) = element.as_mut().filter(|el| el.coords.is_none()) {
                    let a = attrs(&e)?;
                    let num = |k: &str| -> Result<f64, GgbError> {
                        a.get(k)
                            .ok_or_else(|| GgbError::Xml(format!("coords of `{}` lack `{k}`", el.label)))?
                            .parse()
                            .map_err(|_| GgbError::Xml(format!("bad `{k}` coordinate of `{}`", el.label)))
                    };
                    let z = if a.contains_key("z") { num("z")? } else { 1.0 };
                    el.coords = Some((num("x")?, num("y")?, z));
                }
            }
            b"command" => {
                let a = attrs(&e)?;
                let c = Command { name: a.get("name").cloned().unwrap_or_default(), ..Default::default() };
                if empty {
                    items.push(Item::Command(c));
                } else {
                    command = Some(c);
                }
            }
            b"input" | b"output" => {
                if let Some(c) = command.as_mut() {
                    let list = indexed(&attrs(&e)?);
                    if name.as_ref() == b"input" {
                        c.inputs = list;
                    } else {
                        c.outputs = list;
                    }
                }
            }
            b"expression" => {
                let a = attrs(&e)?;
                items.push(Item::Expression(a.get("label").cloned().unwrap_or_default()));
            }
            _ => {}
        }
    }
    Ok(items)
}

/// Maps GeoGebra labels (which may contain primes, braces, subscripts) to
/// valid, non-reserved construction labels.
#[derive(Default)]
struct Labels {
    map: HashMap<String, Label>,
    used: HashSet<Label>,
}

impl Labels {
    fn get(&mut self, raw: &str) -> Label {
        if let Some(l) = self.map.get(raw) {
            return l.clone();
        }
        let mut base = String::new();
        for c in raw.chars().filter(|c| !matches!(c, '{' | '}')) {
            let c = match c {
                '\'' => 'p',
                c if c.is_ascii_alphanumeric() => c,
                _ => '_',
            };
            if !(c == '_' && base.ends_with('_')) {
                base.push(c);
            }
        }
        base = base.trim_matches('_').to_string();
        if !base.starts_with(|c: char| c.is_ascii_alphabetic()) {
            base = format!("g{base}");
        }
        let mut cand = Label::new(&base).expect("sanitized label");
        let mut n = 2;
        while self.used.contains(&cand) {
            cand = Label::new(&format!("{base}_{n}")).expect("sanitized label");
            n += 1;
        }
        self.used.insert(cand.clone());
        self.map.insert(raw.to_string(), cand.clone());
        cand
    }

    fn known(&self, raw: &str) -> Option<&Label> {
        self.map.get(raw)
    }
}

/// Counts from one pass over the archive's construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanReport {
    pub commands: usize,
    pub free_elements: usize,
    pub mapped: usize,
    pub unsupported: Vec<Unsupported>,
}

struct Mapped {
    steps: Vec<Step>,
    hint: HashMap<Label, Vec2>,
    report: ScanReport,
}

fn map_command(
    c: &Command,
    labels: &mut Labels,
    types: &HashMap<Label, ObjectType>,
) -> Result<Step, Unsupported> {
    let unsupported = |reason: String| Unsupported { name: c.name.clone(), reason };
    let mut inputs = Vec::new();
    for raw in &c.inputs {
        match labels.known(raw) {
            Some(l) if types.contains_key(l) => inputs.push((l.clone(), types[l])),
            _ => return Err(unsupported(format!("input `{raw}` is not a supported object"))),
        }
    }
    let outputs: Vec<&String> = c.outputs.iter().filter(|o| !o.is_empty()).collect();
    if outputs.len() != 1 || c.outputs.len() != 1 {
        return Err(unsupported(format!("expected one output, found {}", c.outputs.len())));
    }
    use ObjectType::{Circle, Line, Point};
    let shape: Vec<ObjectType> = inputs.iter().map(|(_, t)| *t).collect();
    let kind = match (c.name.as_str(), shape.as_slice()) {
        ("Point", [Line | Circle]) => StepKind::PointOn,
        ("Midpoint", [Point, Point]) => StepKind::Midpoint,
        ("Line" | "Segment", [Point, Point]) => StepKind::LineThrough,
        ("Line", [Point, Line]) => StepKind::ParallelLine,
        ("OrthogonalLine", [Point, Line]) => StepKind::PerpLine,
        ("LineBisector", [Point, Point]) => StepKind::PerpBisector,
        ("Intersect", [Line, Line]) => StepKind::Intersect,
        ("Circle", [Point, Point, Point]) => StepKind::Circumcircle,
        ("Circle", [Point, Point]) => StepKind::CircleCenterThrough,
        (name, _) if super::supported_commands().iter().any(|s| s.name == name) => {
            let shape: Vec<&str> = shape
                .iter()
                .map(|t| match t {
                    Point => "point",
                    Line => "line",
                    Circle => "circle",
                })
                .collect();
            return Err(unsupported(format!("unsupported input shape ({})", shape.join(", "))));
        }
        _ => return Err(unsupported("command not in the supported subset".into())),
    };
    let label = labels.get(outputs[0]);
    Ok(Step::new(kind, label, inputs.into_iter().map(|(l, _)| l).collect()))
}

fn map_items(items: &[Item]) -> Mapped {
    let outputs: HashSet<&str> = items
        .iter()
        .flat_map(|it| match it {
            Item::Command(c) => c.outputs.iter().map(String::as_str).collect::<Vec<_>>(),
            Item::Expression(l) => vec![l.as_str()],
            Item::Element(_) => Vec::new(),
        })
        .collect();
    let mut labels = Labels::default();
    let mut types: HashMap<Label, ObjectType> = HashMap::new();
    let mut out = Mapped { steps: Vec::new(), hint: HashMap::new(), report: ScanReport::default() };
    for it in items {
        match it {
            Item::Element(el) if !outputs.contains(el.label.as_str()) => {
                out.report.free_elements += 1;
                match (el.kind.as_str(), el.coords) {
                    ("point", Some((x, y, z))) if z != 0.0 => {
                        let l = labels.get(&el.label);
                        out.hint.insert(l.clone(), Vec2::new(x / z, y / z));
                        types.insert(l.clone(), ObjectType::Point);
                        out.steps.push(Step::free(l));
                        out.report.mapped += 1;
                    }
                    ("point", _) => out.report.unsupported.push(Unsupported {
                        name: "Point".into(),
                        reason: format!("free point `{}` has no finite coordinates", el.label),
                    }),
                    (kind, _) => out.report.unsupported.push(Unsupported {
                        name: format!("element type `{kind}`"),
                        reason: format!("free object `{}` is not a point", el.label),
                    }),
                }
            }
            Item::Element(el) => {
                if let (Some(l), Some((x, y, z))) = (labels.known(&el.label), el.coords) {
                    if el.kind == "point" && z != 0.0 {
                        out.hint.insert(l.clone(), Vec2::new(x / z, y / z));
                    }
                }
            }
            Item::Command(c) => {
                out.report.commands += 1;
                match map_command(c, &mut labels, &types) {
                    Ok(step) => {
                        types.insert(step.label.clone(), step.kind.defines());
                        out.steps.push(step);
                        out.report.mapped += 1;
                    }
                    Err(u) => out.report.unsupported.push(u),
                }
            }
            Item::Expression(label) => {
                out.report.commands += 1;
                out.report.unsupported.push(Unsupported {
                    name: "expression".into(),
                    reason: format!("`{label}` is defined by an algebraic expression"),
                });
            }
        }
    }
    out
}

fn read_xml(bytes: &[u8]) -> Result<String, GgbError> {
    let mut zip = zip::ZipArchive::new(Cursor::new(bytes)).map_err(|e| GgbError::NotZip(e.to_string()))?;
    let mut member = match zip.by_name(XML_MEMBER) {
        Ok(m) => m,
        Err(zip::result::ZipError::FileNotFound) => return Err(GgbError::MissingXml),
        Err(e) => return Err(GgbError::NotZip(e.to_string())),
    };
    let mut xml = String::new();
    member.read_to_string(&mut xml).map_err(|e| GgbError::Xml(e.to_string()))?;
    Ok(xml)
}

/// Counts commands, free elements, mapped steps and unsupported items.
/// `mapped + unsupported.len() == commands + free_elements` always holds.
pub fn scan(bytes: &[u8]) -> Result<ScanReport, GgbError> {
    let xml = read_xml(bytes)?;
    Ok(map_items(&parse_items(&xml)?).report)
}

pub fn import_ggb(bytes: &[u8]) -> Result<GgbImport, GgbError> {
    let xml = read_xml(bytes)?;
    let mapped = map_items(&parse_items(&xml)?);
    if !mapped.report.unsupported.is_empty() {
        return Err(GgbError::Unsupported(mapped.report.unsupported));
    }
    let construction = Construction::from_steps(mapped.steps);
    if construction.free_points().next().is_none() {
        return Err(GgbError::Empty);
    }
    if let Some(d) = validate(&construction).first() {
        return Err(GgbError::Invalid(d.to_string()));
    }
    Ok(GgbImport { construction, hint: mapped.hint })
}
