use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{Cursor, Write};

use quick_xml::escape::escape;
use zip::write::SimpleFileOptions;

use super::{GgbError, XML_MEMBER};
use crate::construction::{Construction, StepKind};
use crate::label::Label;
use crate::numeric::{Geometry, NumericModel};

const HEADER: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<geogebra format="5.0" app="classic" xsi:noNamespaceSchemaLocation="http://www.geogebra.org/apps/xsd/ggb.xsd" xmlns="" xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance">
<construction title="" author="" date="">
"#;

const FOOTER: &str = "</construction>\n</geogebra>\n";

/// GeoGebra rejects labels starting with `_`; generated labels get fresh
/// `auxN` names instead.
fn export_names(c: &Construction) -> HashMap<Label, String> {
    let taken: HashSet<&str> = c.steps().iter().map(|s| s.label.as_str()).collect();
    let mut n = 0;
    let mut names = HashMap::new();
    for s in c.steps() {
        let name = if s.label.is_generated() {
            loop {
                n += 1;
                let cand = format!("aux{n}");
                if !taken.contains(cand.as_str()) {
                    break cand;
                }
            }
        } else {
            s.label.as_str().to_string()
        };
        names.insert(s.label.clone(), name);
    }
    names
}

fn command_name(kind: StepKind) -> &'static str {
    match kind {
        StepKind::FreePoint | StepKind::PointOn => "Point",
        StepKind::Midpoint => "Midpoint",
        StepKind::LineThrough | StepKind::ParallelLine => "Line",
        StepKind::PerpLine => "OrthogonalLine",
        StepKind::PerpBisector => "LineBisector",
        StepKind::Intersect => "Intersect",
        StepKind::Circumcircle | StepKind::CircleCenterThrough => "Circle",
    }
}

fn element(out: &mut String, label: &str, g: &Geometry, show_label: bool) {
    let label = escape(label);
    let show = format!("\t<show object=\"true\" label=\"{show_label}\"/>\n");
    match *g {
        Geometry::Point(p) => {
            let _ = write!(
                out,
                "<element type=\"point\" label=\"{label}\">\n{show}\t<coords x=\"{}\" y=\"{}\" z=\"1\"/>\n</element>\n",
                p.x, p.y
            );
        }
        Geometry::Line { point, dir } => {
            let n = dir.perp();
            let _ = write!(
                out,
                "<element type=\"line\" label=\"{label}\">\n{show}\t<coords x=\"{}\" y=\"{}\" z=\"{}\"/>\n</element>\n",
                n.x,
                n.y,
                -n.dot(point)
            );
        }
        Geometry::Circle { center, radius } => {
            let a2 = center.dot(center) - radius * radius;
            let _ = write!(
                out,
                "<element type=\"conic\" label=\"{label}\">\n{show}\t<matrix A0=\"1\" A1=\"1\" A2=\"{a2}\" A3=\"0\" A4=\"{}\" A5=\"{}\"/>\n</element>\n",
                -center.x,
                -center.y
            );
        }
    }
}

/// The `geogebra.xml` text for `c` with coordinates from `w`.
pub fn export_xml(c: &Construction, w: &NumericModel) -> Result<String, GgbError> {
    if c.free_points().next().is_none() {
        return Err(GgbError::Empty);
    }
    let names = export_names(c);
    let mut out = String::from(HEADER);
    for s in c.steps() {
        let obj = w.object(&s.label).ok_or_else(|| GgbError::Witness(s.label.clone()))?;
        if s.kind != StepKind::FreePoint {
            let _ = writeln!(out, "<command name=\"{}\">", command_name(s.kind));
            out.push_str("\t<input");
            for (i, a) in s.args.iter().enumerate() {
                let _ = write!(out, " a{i}=\"{}\"", escape(names[a].as_str()));
            }
            out.push_str("/>\n");
            let _ = writeln!(out, "\t<output a0=\"{}\"/>\n</command>", escape(names[&s.label].as_str()));
        }
        element(&mut out, &names[&s.label], &obj.geometry, !s.label.is_generated());
    }
    out.push_str(FOOTER);
    Ok(out)
}

/// Wraps an XML document into a `.ggb` archive.
pub fn archive_from_xml(xml: &str) -> Result<Vec<u8>, GgbError> {
    let mut zip = zip::ZipWriter::new(Cursor::new(Vec::new()));
    let opts = SimpleFileOptions::default().compression_method(zip::CompressionMethod::Deflated);
    let err = |e: zip::result::ZipError| GgbError::Write(e.to_string());
    zip.start_file(XML_MEMBER, opts).map_err(err)?;
    zip.write_all(xml.as_bytes()).map_err(|e| GgbError::Write(e.to_string()))?;
    Ok(zip.finish().map_err(err)?.into_inner())
}

pub fn export_ggb(c: &Construction, w: &NumericModel) -> Result<Vec<u8>, GgbError> {
    archive_from_xml(&export_xml(c, w)?)
}
