use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Name of a point, line or circle in a construction.
///
/// Labels match `[A-Za-z_][A-Za-z0-9_]*`. A leading underscore marks a name
/// generated while expanding a macro; the parser rejects such names in user
/// input.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Option<Label> {
        if Self::is_valid(name) {
            Some(Label(Arc::from(name)))
        } else {
            None
        }
    }

    pub fn is_valid(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// True for names reserved for macro expansion.
    pub fn is_generated(&self) -> bool {
        self.0.starts_with('_')
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Label::new(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid label `{s}`")))
    }
}

/// Shorthand used throughout the tests.
#[cfg(test)]
pub(crate) fn l(name: &str) -> Label {
    Label::new(name).expect("valid test label")
}
