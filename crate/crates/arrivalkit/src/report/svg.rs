//! Dependency-free SVG 1.1 plots: histogram bars and convergence curves.
//!
//! The markup is hand-written and fully deterministic — coordinates are
//! rounded to two decimals and no smoothing is applied, so rendered files
//! are stable byte for byte and suitable as golden fixtures.

use std::fmt::Write as _;

use crate::analysis::{Histogram, ThreadCurvePoint};

use super::ReportError;

/// What to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Vertical bars per x value; multiple series render side by side.
    Histogram,
    /// Polyline with point markers per series.
    Curve,
}

/// One named data series of (x, y) points.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Observed fractions (and the theoretical overlay, when present) of a
/// histogram as plot series keyed by bin start.
pub fn histogram_series(hist: &Histogram) -> Vec<Series> {
    let xs = |i: usize| hist.origin + i as f64 * hist.bin_width;
    let mut series = vec![Series {
        name: "observed".to_string(),
        points: hist
            .observed_fractions()
            .iter()
            .enumerate()
            .map(|(i, &f)| (xs(i), f))
            .collect(),
    }];
    if let Some(theoretical) = &hist.theoretical {
        series.push(Series {
            name: "theoretical".to_string(),
            points: theoretical
                .iter()
                .enumerate()
                .map(|(i, &p)| (xs(i), p))
                .collect(),
        });
    }
    series
}

/// The CoV column of a convergence curve as a plot series.
pub fn curve_series(name: &str, points: &[ThreadCurvePoint]) -> Series {
    Series {
        name: name.to_string(),
        points: points
            .iter()
            .filter_map(|p| p.cov_drt.map(|cv| (p.thread_count as f64, cv)))
            .collect(),
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 4] = ["#4c9e4c", "#e0c341", "#4472c4", "#d2691e"];

fn fmt_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{:.0}", v.round())
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn c2(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders a standalone SVG document for the given series.
///
/// Histograms draw each x position as a group of side-by-side bars (one per
/// series); curves draw a marker-decorated polyline per series. Axis ranges
/// come straight from the data.
pub fn render_svg(kind: PlotKind, title: &str, series: &[Series]) -> Result<String, ReportError> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(ReportError::EmptySeries);
    }

    let points = || series.iter().flat_map(|s| s.points.iter().copied());
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in points() {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    // Bars always start at zero; pad degenerate ranges.
    if kind == PlotKind::Histogram {
        y_min = 0.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    // For histograms leave room on the right for the last bar group.
    let bar_slot = if kind == PlotKind::Histogram {
        min_gap(series).unwrap_or(1.0)
    } else {
        0.0
    };
    let x_span = (x_max - x_min) + bar_slot;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / x_span * plot_w;
    let sy = move |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        c2(WIDTH / 2.0),
        escape(title)
    );

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        c2(x0),
        c2(MARGIN_TOP),
        c2(x0),
        c2(y0)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        c2(x0),
        c2(y0),
        c2(WIDTH - MARGIN_RIGHT),
        c2(y0)
    );

    // Five ticks per axis, value-labelled.
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let xp = sx(xv);
        let _ = writeln!(
            out,
            r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>"#,
            c2(xp),
            c2(y0),
            c2(y0 + 5.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            c2(xp),
            c2(y0 + 20.0),
            fmt_tick(xv)
        );

        let yv = y_min + f * (y_max - y_min);
        let yp = sy(yv);
        let _ = writeln!(
            out,
            r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" stroke="black"/>"#,
            c2(yp),
            c2(x0 - 5.0),
            c2(x0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            c2(x0 - 9.0),
            c2(yp + 4.0),
            fmt_tick(yv)
        );
    }

    // Data.
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        match kind {
            PlotKind::Histogram => {
                // The group of bars for one x value spans 80% of a bin slot,
                // split evenly between the series.
                let bar_data = bar_slot * 0.8 / series.len() as f64;
                for &(x, y) in &s.points {
                    let left = sx(x + si as f64 * bar_data);
                    let w_screen = bar_data / x_span * plot_w;
                    let top = sy(y);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                        c2(left),
                        c2(top),
                        c2(w_screen),
                        c2(y0 - top),
                        color
                    );
                }
            }
            PlotKind::Curve => {
                let path: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(x, y)| format!("{},{}", c2(sx(x)), c2(sy(y))))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                    path.join(" "),
                    color
                );
                for &(x, y) in &s.points {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{}" cy="{}" r="3" fill="{}"/>"#,
                        c2(sx(x)),
                        c2(sy(y)),
                        color
                    );
                }
            }
        }
        // Legend entry.
        let lx = WIDTH - MARGIN_RIGHT - 150.0;
        let ly = MARGIN_TOP + 16.0 * si as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/>"#,
            c2(lx),
            c2(ly),
            color
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            c2(lx + 14.0),
            c2(ly + 9.0),
            escape(&s.name)
        );
    }

    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn min_gap(series: &[Series]) -> Option<f64> {
    let mut xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.windows(2).map(|w| w[1] - w[0]).min_by(f64::total_cmp)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_series_is_an_error() {
        assert!(render_svg(PlotKind::Curve, "t", &[]).is_err());
        let empty = Series {
            name: "e".into(),
            points: vec![],
        };
        assert!(render_svg(PlotKind::Histogram, "t", &[empty]).is_err());
    }

    #[test]
    fn curve_svg_contains_polyline_and_markers() {
        let s = Series {
            name: "cov".into(),
            points: vec![(1.0, 0.58), (10.0, 0.96), (200.0, 1.0)],
        };
        let svg = render_svg(PlotKind::Curve, "CoV vs threads", &[s]).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn histogram_svg_draws_side_by_side_bars() {
        let observed = Series {
            name: "observed".into(),
            points: vec![(0.0, 0.13), (1.0, 0.27), (2.0, 0.27)],
        };
        let theoretical = Series {
            name: "theoretical".into(),
            points: vec![(0.0, 0.1353), (1.0, 0.2707), (2.0, 0.2707)],
        };
        let svg = render_svg(PlotKind::Histogram, "counts", &[observed, theoretical]).unwrap();
        assert_eq!(svg.matches("<rect").count(), 1 + 6 + 2); // background + bars + legend
    }

    #[test]
    fn rendering_is_deterministic() {
        let s = Series {
            name: "x".into(),
            points: vec![(1.0, 2.0), (2.0, 3.0)],
        };
        let a = render_svg(PlotKind::Curve, "t", std::slice::from_ref(&s)).unwrap();
        let b = render_svg(PlotKind::Curve, "t", &[s]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn titles_are_escaped() {
        let s = Series {
            name: "a<b".into(),
            points: vec![(0.0, 1.0)],
        };
        let svg = render_svg(PlotKind::Curve, "x < y & z", &[s]).unwrap();
        assert!(svg.contains("x &lt; y &amp; z"));
        assert!(svg.contains("a&lt;b"));
    }
}
