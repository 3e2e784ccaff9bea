use std::fs;
use std::path::Path;

use super::{ProofDocument, ProofError};

/// Id of the element holding the embedded document.
pub const DOCUMENT_ELEMENT_ID: &str = "pww-document";

/// Prebuilt viewer bundle. Its contents are opaque here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewerAssets {
    pub script: String,
    pub style: Option<String>,
}

impl ViewerAssets {
    /// Loads `viewer.js` (and `viewer.css` when present) from a directory, or
    /// a single script file.
    pub fn load(path: &Path) -> Result<ViewerAssets, ProofError> {
        let missing = |p: &Path| {
            ProofError::Assets(format!(
                "viewer bundle not found at {}; build the viewer first (npm run build in viewer/) or pass --viewer",
                p.display()
            ))
        };
        if path.is_dir() {
            let js = path.join("viewer.js");
            let script = fs::read_to_string(&js).map_err(|_| missing(&js))?;
            let style = fs::read_to_string(path.join("viewer.css")).ok();
            Ok(ViewerAssets { script, style })
        } else {
            let script = fs::read_to_string(path).map_err(|_| missing(path))?;
            Ok(ViewerAssets { script, style: None })
        }
    }
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

// A raw-text element ends at the first `</`, so every occurrence is broken up.
fn escape_raw(s: &str) -> String {
    s.replace("</", "<\\/")
}

/// Single-file page with the document and the viewer inlined.
pub fn render_html(doc: &ProofDocument, assets: &ViewerAssets) -> String {
    let json = doc.to_json();
    let title = escape_text(&doc.goal.text);
    let mut out = String::new();
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n");
    out.push_str("<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\"/>\n");
    out.push_str(&format!("<title>Proof of {title}</title>\n"));
    if let Some(style) = &assets.style {
        out.push_str(&format!("<style>\n{}\n</style>\n", escape_raw(style)));
    }
    out.push_str("</head>\n<body>\n<div id=\"pww-root\"></div>\n");
    out.push_str(&format!(
        "<script type=\"application/json\" id=\"{DOCUMENT_ELEMENT_ID}\">\n{}</script>\n",
        escape_raw(&json)
    ));
    out.push_str(&format!("<script>\n{}\n</script>\n", escape_raw(&assets.script)));
    out.push_str("</body>\n</html>\n");
    out
}
