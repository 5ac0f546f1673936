//! Trust matrix heatmap.
//!
//! Rows are the actor's answer, columns the oracle's answer, cell color the
//! expected trust under the viridis ramp. Cells with no observations are
//! hatched gray rather than painted as zero trust.

use crate::metrics::TrustMatrix;
use crate::render::colormap::{hex, text_color_on, viridis};
use crate::render::{coord, xml_escape};

/// Cells per side above which per-cell text annotations are dropped; the
/// numbers stop being readable long before this.
const ANNOTATION_CLASS_LIMIT: usize = 40;
const COLORBAR_SLICES: usize = 64;

#[derive(Debug, Clone)]
pub struct HeatmapOptions {
    pub cell_size: f64,
    /// Draw the trust value and support count inside each cell. Ignored
    /// when there are more than 40 classes.
    pub annotate: bool,
    pub title: Option<String>,
}

impl Default for HeatmapOptions {
    fn default() -> Self {
        HeatmapOptions {
            cell_size: 48.0,
            annotate: true,
            title: None,
        }
    }
}

pub fn render_trust_matrix(matrix: &TrustMatrix, options: &HeatmapOptions) -> String {
    let k = matrix.class_count();
    let s = options.cell_size.clamp(8.0, 96.0);
    let annotate = options.annotate && k <= ANNOTATION_CLASS_LIMIT && s >= 28.0;
    let labels = matrix.label_space();

    let longest = labels.names().iter().map(|n| n.chars().count()).max();
    let label_px = (longest.unwrap_or(1).min(18) as f64) * 7.0 + 10.0;
    let title_h = if options.title.is_some() { 30.0 } else { 6.0 };
    let left = 30.0 + label_px;
    let top = title_h + 24.0 + label_px * 0.75;
    let grid_w = k as f64 * s;
    let grid_h = k as f64 * s;
    let bar_x = left + grid_w + 20.0;
    let width = bar_x + 14.0 + 64.0;
    let height = top + grid_h + 18.0;

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="Helvetica, Arial, sans-serif">"#,
        coord(width),
        coord(height),
        coord(width),
        coord(height)
    ));
    svg.push('\n');
    svg.push_str(concat!(
        r##"<defs><pattern id="undef" width="6" height="6" patternUnits="userSpaceOnUse">"##,
        r##"<rect width="6" height="6" fill="#e9e9e9"/>"##,
        r##"<path d="M0 6 L6 0" stroke="#b3b3b3" stroke-width="1"/>"##,
        r##"</pattern></defs>"##,
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<rect width="{}" height="{}" fill="#ffffff"/>"##,
        coord(width),
        coord(height)
    ));
    svg.push('\n');

    if let Some(title) = &options.title {
        svg.push_str(&format!(
            r##"<text x="{}" y="20" font-size="15" text-anchor="middle" fill="#1b1b1b">{}</text>"##,
            coord(left + grid_w / 2.0),
            xml_escape(title)
        ));
        svg.push('\n');
    }

    // Axis captions.
    svg.push_str(&format!(
        r##"<text x="{}" y="{}" font-size="12" text-anchor="middle" fill="#444444">oracle answer</text>"##,
        coord(left + grid_w / 2.0),
        coord(title_h + 12.0)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<text x="12" y="{}" font-size="12" text-anchor="middle" fill="#444444" transform="rotate(-90 12 {})">actor answer</text>"##,
        coord(top + grid_h / 2.0),
        coord(top + grid_h / 2.0)
    ));
    svg.push('\n');

    // Class labels.
    for (i, name) in labels.names().iter().enumerate() {
        let cx = left + (i as f64 + 0.5) * s;
        let cy = top - 6.0;
        svg.push_str(&format!(
            r##"<text x="{x}" y="{y}" font-size="11" text-anchor="start" fill="#1b1b1b" transform="rotate(-45 {x} {y})">{t}</text>"##,
            x = coord(cx),
            y = coord(cy),
            t = xml_escape(name)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<text x="{}" y="{}" font-size="11" text-anchor="end" fill="#1b1b1b">{}</text>"##,
            coord(left - 8.0),
            coord(top + (i as f64 + 0.5) * s + 4.0),
            xml_escape(name)
        ));
        svg.push('\n');
    }

    // Cells.
    for actor in 0..k {
        for oracle in 0..k {
            let x = left + oracle as f64 * s;
            let y = top + actor as f64 * s;
            match matrix.value(actor, oracle) {
                Some(value) => {
                    let rgb = viridis(value);
                    svg.push_str(&format!(
                        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#ffffff" stroke-width="1"/>"##,
                        coord(x),
                        coord(y),
                        coord(s),
                        coord(s),
                        hex(rgb)
                    ));
                    svg.push('\n');
                    if annotate {
                        let text_fill = text_color_on(rgb);
                        svg.push_str(&format!(
                            r##"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="{}">{:.3}</text>"##,
                            coord(x + s / 2.0),
                            coord(y + s / 2.0),
                            text_fill,
                            value
                        ));
                        svg.push('\n');
                        svg.push_str(&format!(
                            r##"<text x="{}" y="{}" font-size="9" text-anchor="middle" fill="{}">n={}</text>"##,
                            coord(x + s / 2.0),
                            coord(y + s / 2.0 + 12.0),
                            text_fill,
                            matrix.support(actor, oracle)
                        ));
                        svg.push('\n');
                    }
                }
                None => {
                    svg.push_str(&format!(
                        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="url(#undef)" stroke="#ffffff" stroke-width="1"/>"##,
                        coord(x),
                        coord(y),
                        coord(s),
                        coord(s)
                    ));
                    svg.push('\n');
                }
            }
        }
    }

    // Colorbar, low trust at the bottom.
    let slice_h = grid_h / COLORBAR_SLICES as f64;
    for i in 0..COLORBAR_SLICES {
        let value = (i as f64 + 0.5) / COLORBAR_SLICES as f64;
        let y = top + grid_h - (i as f64 + 1.0) * slice_h;
        svg.push_str(&format!(
            r##"<rect x="{}" y="{}" width="14" height="{}" fill="{}"/>"##,
            coord(bar_x),
            coord(y),
            coord(slice_h + 0.5),
            hex(viridis(value))
        ));
        svg.push('\n');
    }
    svg.push_str(&format!(
        r##"<rect x="{}" y="{}" width="14" height="{}" fill="none" stroke="#666666" stroke-width="1"/>"##,
        coord(bar_x),
        coord(top),
        coord(grid_h)
    ));
    svg.push('\n');
    for (frac, label) in [(0.0, "0.0"), (0.5, "0.5"), (1.0, "1.0")] {
        let y = top + grid_h * (1.0 - frac);
        svg.push_str(&format!(
            r##"<text x="{}" y="{}" font-size="10" fill="#444444">{}</text>"##,
            coord(bar_x + 19.0),
            coord(y + 3.0),
            label
        ));
        svg.push('\n');
    }
    svg.push_str(&format!(
        r##"<text x="{x}" y="{y}" font-size="11" fill="#444444" text-anchor="middle" transform="rotate(-90 {x} {y})">expected trust</text>"##,
        x = coord(bar_x + 44.0),
        y = coord(top + grid_h / 2.0)
    ));
    svg.push('\n');

    svg.push_str("</svg>\n");
    svg
}
