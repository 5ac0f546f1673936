//! SVG figure rendering. Everything here builds plain SVG strings with no
//! drawing dependency, formatted deterministically so figures are
//! byte-stable across runs and platforms.

pub mod colormap;
pub mod density_plot;
pub mod heatmap;

/// Escapes text for use in SVG/XML content or attribute values.
pub(crate) fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Fixed two-decimal coordinate formatting keeps output byte-stable.
pub(crate) fn coord(v: f64) -> String {
    format!("{v:.2}")
}
