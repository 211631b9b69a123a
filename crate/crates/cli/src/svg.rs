//! Deterministic SVG plots.
//!
//! Output is a pure function of the plot spec: fixed viewport, fixed
//! palette, fixed number formatting. Identical input yields byte-identical
//! SVG, so plots can be golden-file tested.
//!
//! Data coordinates map to viewport pixels by the affine transform
//!
//! ```text
//! px = MARGIN_LEFT + (x - xmin) / (xmax - xmin) * plot_width
//! py = MARGIN_TOP  + (ymax - y) / (ymax - ymin) * plot_height
//! ```
//!
//! where `[xmin, xmax] x [ymin, ymax]` is the exact bounding box of all
//! series data (degenerate ranges are widened by 0.5 on each side, and an
//! empty plot uses [0, 1]).

use std::fmt::Write as _;

use crate::error::CliError;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
pub const MARGIN_LEFT: f64 = 60.0;
pub const MARGIN_RIGHT: f64 = 20.0;
pub const MARGIN_TOP: f64 = 20.0;
pub const MARGIN_BOTTOM: f64 = 45.0;

pub const PLOT_WIDTH: f64 = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
pub const PLOT_HEIGHT: f64 = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    "#bcbd22", "#e377c2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Line,
    Scatter,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub kind: SeriesKind,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn line(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            kind: SeriesKind::Line,
            points,
        }
    }

    pub fn scatter(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            name: name.into(),
            kind: SeriesKind::Scatter,
            points,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Range of all series data along one axis, widened if degenerate.
fn data_range(series: &[Series], axis: usize) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for s in series {
        for p in &s.points {
            let v = if axis == 0 { p.0 } else { p.1 };
            min = min.min(v);
            max = max.max(v);
        }
    }
    if min > max {
        return (0.0, 1.0);
    }
    if min == max {
        return (min - 0.5, max + 0.5);
    }
    (min, max)
}

fn nice_step(range: f64, target: usize) -> f64 {
    let raw = range / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let factor = if normalized <= 1.5 {
        1.0
    } else if normalized <= 3.0 {
        2.0
    } else if normalized <= 7.0 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn ticks(min: f64, max: f64) -> (Vec<f64>, usize) {
    let step = nice_step(max - min, 5);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let mut v = (min / step).ceil() * step;
    let mut out = Vec::new();
    while v <= max + step * 1e-9 {
        // Normalize -0.0 so labels are stable.
        out.push(v + 0.0);
        v += step;
    }
    (out, decimals)
}

/// Renders the plot. Fails on any NaN or infinite data point, naming the
/// series and point index.
pub fn render_plot(spec: &PlotSpec) -> Result<String, CliError> {
    for series in &spec.series {
        for (i, (x, y)) in series.points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(CliError::Usage(format!(
                    "non-finite data point in series '{}' at index {i}",
                    series.name
                )));
            }
        }
    }

    let (xmin, xmax) = data_range(&spec.series, 0);
    let (ymin, ymax) = data_range(&spec.series, 1);
    let to_px = |x: f64| MARGIN_LEFT + (x - xmin) / (xmax - xmin) * PLOT_WIDTH;
    let to_py = |y: f64| MARGIN_TOP + (ymax - y) / (ymax - ymin) * PLOT_HEIGHT;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<clipPath id="plot-area"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
        px(MARGIN_LEFT),
        px(MARGIN_TOP),
        px(PLOT_WIDTH),
        px(PLOT_HEIGHT)
    );

    // Frame.
    let x0 = MARGIN_LEFT;
    let x1 = MARGIN_LEFT + PLOT_WIDTH;
    let y0 = MARGIN_TOP;
    let y1 = MARGIN_TOP + PLOT_HEIGHT;
    let _ = writeln!(
        svg,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333333" stroke-width="1"/>"##,
        px(x0),
        px(y0),
        px(PLOT_WIDTH),
        px(PLOT_HEIGHT)
    );

    // Ticks and labels.
    let (xticks, xdec) = ticks(xmin, xmax);
    for t in &xticks {
        let p = to_px(*t);
        let _ = writeln!(
            svg,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#333333" stroke-width="1"/>"##,
            px(p),
            px(y1),
            px(y1 + 5.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{:.*}</text>"#,
            px(p),
            px(y1 + 18.0),
            xdec,
            t
        );
    }
    let (yticks, ydec) = ticks(ymin, ymax);
    for t in &yticks {
        let p = to_py(*t);
        let _ = writeln!(
            svg,
            r##"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="#333333" stroke-width="1"/>"##,
            px(p),
            px(x0 - 5.0),
            px(x0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="end">{:.*}</text>"#,
            px(x0 - 8.0),
            px(p + 4.0),
            ydec,
            t
        );
    }

    // Title and axis labels.
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="14" font-family="monospace" font-size="13" text-anchor="middle">{}</text>"#,
        px(WIDTH / 2.0),
        escape(&spec.title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="monospace" font-size="12" text-anchor="middle">{}</text>"#,
        px(MARGIN_LEFT + PLOT_WIDTH / 2.0),
        px(HEIGHT - 8.0),
        escape(&spec.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" font-family="monospace" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        px(MARGIN_TOP + PLOT_HEIGHT / 2.0),
        px(MARGIN_TOP + PLOT_HEIGHT / 2.0),
        escape(&spec.y_label)
    );

    // Series, clipped to the plot area.
    let _ = writeln!(svg, r#"<g clip-path="url(#plot-area)">"#);
    for (i, series) in spec.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match series.kind {
            SeriesKind::Line => {
                if series.points.is_empty() {
                    continue;
                }
                let mut d = String::new();
                for (j, (x, y)) in series.points.iter().enumerate() {
                    let cmd = if j == 0 { 'M' } else { 'L' };
                    let _ = write!(d, "{}{},{} ", cmd, px(to_px(*x)), px(to_py(*y)));
                }
                let _ = writeln!(
                    svg,
                    r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                    d.trim_end()
                );
            }
            SeriesKind::Scatter => {
                for (x, y) in &series.points {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{}" cy="{}" r="2.5" fill="{color}" fill-opacity="0.6"/>"#,
                        px(to_px(*x)),
                        px(to_py(*y))
                    );
                }
            }
        }
    }
    let _ = writeln!(svg, "</g>");

    // Legend, top-right inside the frame.
    for (i, series) in spec.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let ly = MARGIN_TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/>"#,
            px(x1 - 150.0),
            px(ly - 9.0)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11">{}</text>"#,
            px(x1 - 136.0),
            px(ly),
            escape(&series.name)
        );
    }

    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
