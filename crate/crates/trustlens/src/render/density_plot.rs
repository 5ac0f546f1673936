//! Trust density figures.
//!
//! Histograms draw as step outlines along the bin edges, kernel estimates
//! as polylines through the evaluation grid. A conditional plot overlays
//! the unconditional curve with the prior-scaled correct and incorrect
//! partitions, which stack to the unconditional curve by construction.

use crate::density::{ConditionalDensityPair, Density, DensityKind};
use crate::render::{coord, xml_escape};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 46.0;

const COLOR_ALL: &str = "#6b7280";
const COLOR_CORRECT: &str = "#2563eb";
const COLOR_INCORRECT: &str = "#dc2626";

struct Series<'a> {
    name: &'a str,
    color: &'a str,
    density: &'a Density,
}

pub fn render_density(density: &Density, title: Option<&str>) -> String {
    render(
        &[Series {
            name: "trust",
            color: COLOR_CORRECT,
            density,
        }],
        title,
        false,
    )
}

pub fn render_conditional_densities(pair: &ConditionalDensityPair, title: Option<&str>) -> String {
    render(
        &[
            Series {
                name: "all",
                color: COLOR_ALL,
                density: &pair.unconditional,
            },
            Series {
                name: "correct",
                color: COLOR_CORRECT,
                density: &pair.correct,
            },
            Series {
                name: "incorrect",
                color: COLOR_INCORRECT,
                density: &pair.incorrect,
            },
        ],
        title,
        true,
    )
}

/// Rounds up to two significant digits so the axis covers the data with a
/// label that reads cleanly.
fn nice_ceiling(max_value: f64) -> f64 {
    if !(max_value.is_finite() && max_value > 0.0) {
        return 1.0;
    }
    let exponent = max_value.log10().floor() as i32;
    let base = 10f64.powi(exponent - 1);
    (max_value / base).ceil() * base
}

fn x_pixel(t: f64) -> f64 {
    LEFT + t * (WIDTH - LEFT - RIGHT)
}

fn y_pixel(v: f64, y_max: f64) -> f64 {
    let ph = HEIGHT - TOP - BOTTOM;
    TOP + ph - (v / y_max) * ph
}

fn series_path(density: &Density, y_max: f64) -> String {
    match density.kind() {
        DensityKind::Histogram => {
            // Step outline along the bin edges.
            let bins = density.values().len();
            let mut d = String::new();
            for (b, &v) in density.values().iter().enumerate() {
                let x0 = x_pixel(b as f64 / bins as f64);
                let x1 = x_pixel((b + 1) as f64 / bins as f64);
                let y = y_pixel(v, y_max);
                if b == 0 {
                    d.push_str(&format!("M {} {}", coord(x0), coord(y)));
                } else {
                    d.push_str(&format!(" V {}", coord(y)));
                }
                d.push_str(&format!(" H {}", coord(x1)));
            }
            format!(r##"<path d="{d}" fill="none""##)
        }
        DensityKind::Kernel => {
            let points: Vec<String> = density
                .grid()
                .iter()
                .zip(density.values())
                .map(|(&t, &v)| format!("{},{}", coord(x_pixel(t)), coord(y_pixel(v, y_max))))
                .collect();
            format!(r##"<polyline points="{}" fill="none""##, points.join(" "))
        }
    }
}

fn render(series: &[Series<'_>], title: Option<&str>, legend: bool) -> String {
    let y_max = nice_ceiling(
        series
            .iter()
            .flat_map(|s| s.density.values().iter().copied())
            .fold(0.0, f64::max),
    );
    let kind = series[0].density.kind();

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif">"#,
        w = coord(WIDTH),
        h = coord(HEIGHT)
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<rect width="{}" height="{}" fill="#ffffff"/>"##,
        coord(WIDTH),
        coord(HEIGHT)
    ));
    svg.push('\n');

    if let Some(title) = title {
        svg.push_str(&format!(
            r##"<text x="{}" y="24" font-size="15" text-anchor="middle" fill="#1b1b1b">{}</text>"##,
            coord((LEFT + WIDTH - RIGHT) / 2.0),
            xml_escape(title)
        ));
        svg.push('\n');
    }

    // Gridlines and ticks.
    for i in 0..=4 {
        let frac = i as f64 / 4.0;
        let x = x_pixel(frac);
        svg.push_str(&format!(
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#e3e3e3" stroke-width="1"/>"##,
            coord(TOP),
            coord(HEIGHT - BOTTOM),
            x = coord(x)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<text x="{}" y="{}" font-size="11" text-anchor="middle" fill="#444444">{:.2}</text>"##,
            coord(x),
            coord(HEIGHT - BOTTOM + 16.0),
            frac
        ));
        svg.push('\n');

        let v = frac * y_max;
        let y = y_pixel(v, y_max);
        svg.push_str(&format!(
            r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#e3e3e3" stroke-width="1"/>"##,
            coord(LEFT),
            coord(WIDTH - RIGHT),
            y = coord(y)
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r##"<text x="{}" y="{}" font-size="11" text-anchor="end" fill="#444444">{:.3}</text>"##,
            coord(LEFT - 8.0),
            coord(y + 4.0),
            v
        ));
        svg.push('\n');
    }

    // Frame.
    svg.push_str(&format!(
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#666666" stroke-width="1"/>"##,
        coord(LEFT),
        coord(TOP),
        coord(WIDTH - LEFT - RIGHT),
        coord(HEIGHT - TOP - BOTTOM)
    ));
    svg.push('\n');

    // Axis captions.
    svg.push_str(&format!(
        r##"<text x="{}" y="{}" font-size="12" text-anchor="middle" fill="#444444">trust</text>"##,
        coord((LEFT + WIDTH - RIGHT) / 2.0),
        coord(HEIGHT - 10.0)
    ));
    svg.push('\n');
    let y_caption = match kind {
        DensityKind::Histogram => "probability mass per bin",
        DensityKind::Kernel => "density",
    };
    svg.push_str(&format!(
        r##"<text x="16" y="{y}" font-size="12" text-anchor="middle" fill="#444444" transform="rotate(-90 16 {y})">{c}</text>"##,
        y = coord((TOP + HEIGHT - BOTTOM) / 2.0),
        c = y_caption
    ));
    svg.push('\n');

    // Curves, unconditional first so the partitions draw on top.
    for s in series {
        svg.push_str(&series_path(s.density, y_max));
        svg.push_str(&format!(
            r##" stroke="{}" stroke-width="2"/>"##,
            s.color
        ));
        svg.push('\n');
    }

    if legend {
        let lx = WIDTH - RIGHT - 124.0;
        let mut ly = TOP + 14.0;
        for s in series {
            svg.push_str(&format!(
                r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{}" stroke-width="3"/>"##,
                coord(lx),
                coord(lx + 22.0),
                s.color,
                y = coord(ly)
            ));
            svg.push('\n');
            svg.push_str(&format!(
                r##"<text x="{}" y="{}" font-size="11" fill="#1b1b1b">{}</text>"##,
                coord(lx + 28.0),
                coord(ly + 4.0),
                xml_escape(s.name)
            ));
            svg.push('\n');
            ly += 16.0;
        }
    }

    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{conditional_densities_from_parts, trust_density, DensityConfig};

    #[test]
    fn nice_ceiling_covers_and_rounds() {
        assert!((nice_ceiling(0.0731) - 0.074).abs() < 1e-12);
        assert_eq!(nice_ceiling(1.0), 1.0);
        assert_eq!(nice_ceiling(0.0), 1.0);
        assert!(nice_ceiling(3.21) >= 3.21);
    }

    #[test]
    fn histogram_renders_as_step_path() {
        let d = trust_density(&[0.1, 0.9], &DensityConfig::Histogram { bins: 4 }).unwrap();
        let svg = render_density(&d, Some("sample"));
        assert!(svg.contains("<path"));
        assert!(svg.contains(" H "));
        assert!(svg.contains("probability mass per bin"));
        assert!(svg.contains("sample"));
    }

    #[test]
    fn kernel_renders_as_polyline() {
        let d = trust_density(
            &[0.3, 0.7],
            &DensityConfig::Kernel {
                bandwidth: Some(0.1),
                grid_size: 64,
            },
        )
        .unwrap();
        let svg = render_density(&d, None);
        assert!(svg.contains("<polyline"));
        assert!(svg.contains(">density<"));
    }

    #[test]
    fn conditional_plot_has_three_curves_and_a_legend() {
        let pair = conditional_densities_from_parts(
            &[0.9, 0.8],
            &[0.1],
            &DensityConfig::Histogram { bins: 10 },
        )
        .unwrap();
        let svg = render_conditional_densities(&pair, Some("class a"));
        assert_eq!(svg.matches("<path").count(), 3);
        for name in ["all", "correct", "incorrect"] {
            assert!(svg.contains(&format!(">{name}<")), "legend entry {name}");
        }
        assert!(svg.contains(COLOR_ALL));
        assert!(svg.contains(COLOR_CORRECT));
        assert!(svg.contains(COLOR_INCORRECT));
    }

    #[test]
    fn titles_are_escaped() {
        let d = trust_density(&[0.5], &DensityConfig::Histogram { bins: 5 }).unwrap();
        let svg = render_density(&d, Some("a < b"));
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn output_is_deterministic() {
        let d = trust_density(&[0.2, 0.4, 0.8], &DensityConfig::Histogram { bins: 8 }).unwrap();
        assert_eq!(
            render_density(&d, Some("t")),
            render_density(&d, Some("t"))
        );
    }
}
