//! Reading and writing GeoGebra `.ggb` archives for the supported command
//! subset.
//!
//! A `.ggb` file is a ZIP archive whose `geogebra.xml` member lists
//! `<element>` objects (with coordinates) and the `<command>`s that define
//! dependent objects. Free points become `point` steps and their coordinates
//! the witness hint; every other object must come from a supported command.

mod read;
mod write;

use std::collections::HashMap;
use std::fmt;

use crate::construction::StepKind;
use crate::label::Label;
use crate::numeric::Vec2;

pub use read::{import_ggb, scan, ScanReport};
pub use write::{archive_from_xml, export_ggb, export_xml};

pub const XML_MEMBER: &str = "geogebra.xml";

/// Input shape of a supported command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signature {
    /// An `<element type="point">` that no command defines.
    FreeElement,
    Carrier,
    PointPoint,
    PointLine,
    LineLine,
    PointPointPoint,
}

impl Signature {
    pub fn describe(self) -> &'static str {
        match self {
            Signature::FreeElement => "free point element",
            Signature::Carrier => "(line or circle)",
            Signature::PointPoint => "(point, point)",
            Signature::PointLine => "(point, line)",
            Signature::LineLine => "(line, line)",
            Signature::PointPointPoint => "(point, point, point)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportedCommand {
    pub name: &'static str,
    pub signature: Signature,
    pub target: StepKind,
}

impl fmt::Display for SupportedCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} → {}", self.name, self.signature.describe(), self.target.keyword())
    }
}

const SUPPORTED: [SupportedCommand; 11] = [
    SupportedCommand { name: "Point", signature: Signature::FreeElement, target: StepKind::FreePoint },
    SupportedCommand { name: "Point", signature: Signature::Carrier, target: StepKind::PointOn },
    SupportedCommand { name: "Midpoint", signature: Signature::PointPoint, target: StepKind::Midpoint },
    SupportedCommand { name: "Line", signature: Signature::PointPoint, target: StepKind::LineThrough },
    SupportedCommand { name: "Line", signature: Signature::PointLine, target: StepKind::ParallelLine },
    SupportedCommand { name: "Segment", signature: Signature::PointPoint, target: StepKind::LineThrough },
    SupportedCommand { name: "OrthogonalLine", signature: Signature::PointLine, target: StepKind::PerpLine },
    SupportedCommand { name: "LineBisector", signature: Signature::PointPoint, target: StepKind::PerpBisector },
    SupportedCommand { name: "Intersect", signature: Signature::LineLine, target: StepKind::Intersect },
    SupportedCommand { name: "Circle", signature: Signature::PointPointPoint, target: StepKind::Circumcircle },
    SupportedCommand {
        name: "Circle",
        signature: Signature::PointPoint,
        target: StepKind::CircleCenterThrough,
    },
];

/// The fixed list of commands the codec understands.
pub fn supported_commands() -> &'static [SupportedCommand] {
    &SUPPORTED
}

/// Something in the archive that has no counterpart in the construction
/// language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unsupported {
    pub name: String,
    pub reason: String,
}

impl fmt::Display for Unsupported {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.reason)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GgbError {
    #[error("not a ZIP archive: {0}")]
    NotZip(String),
    #[error("archive has no {XML_MEMBER}")]
    MissingXml,
    #[error("malformed {XML_MEMBER}: {0}")]
    Xml(String),
    #[error("unsupported GeoGebra content: {}", list(.0))]
    Unsupported(Vec<Unsupported>),
    #[error("invalid construction in archive: {0}")]
    Invalid(String),
    #[error("construction needs at least one free point")]
    Empty,
    #[error("witness does not match the construction: missing `{0}`")]
    Witness(Label),
    #[error("cannot write archive: {0}")]
    Write(String),
}

fn list(items: &[Unsupported]) -> String {
    items.iter().map(|u| u.to_string()).collect::<Vec<_>>().join(", ")
}

/// An imported construction plus the coordinates found in the archive.
#[derive(Clone, Debug)]
pub struct GgbImport {
    pub construction: crate::construction::Construction,
    pub hint: HashMap<Label, Vec2>,
}
