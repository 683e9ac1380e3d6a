//! SVG 1.1 rendering of a report's figure data.
//!
//! Two square panels of `PANEL` drawing units side by side. A panel showing
//! the window `[-w, w]^2` maps `(x, y)` to
//! `(left + (x + w) * PANEL / (2w), top + (w - y) * PANEL / (2w))`, with
//! exact rationals converted to `f64` only at this last step and printed
//! with three decimals.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kernel::{format_scalar, to_f64, Point, Scalar};
use crate::report::{AnalysisReport, FigureData};

pub const PANEL: f64 = 400.0;
pub const MARGIN: f64 = 20.0;
const TITLE: f64 = 24.0;

const CELL_FILL: &str = "#9ecae1";
const CONE_FILL: &str = "#fdd0a2";
const HULL_FILL: &str = "#c7e9c0";
const DOT: &str = "#252525";
const ORIGIN: &str = "#d62728";

struct Frame {
    left: f64,
    top: f64,
    half: f64,
}

impl Frame {
    fn map(&self, p: &Point) -> (f64, f64) {
        let s = PANEL / (2.0 * self.half);
        (
            self.left + (to_f64(p.x()) + self.half) * s,
            self.top + (self.half - to_f64(p.y())) * s,
        )
    }

    fn polygon(&self, out: &mut String, pts: &[Point], fill: &str, stroke: &str) {
        if pts.len() < 2 {
            return;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="1"/>"#,
            coords.join(" ")
        );
    }

    fn dots(&self, out: &mut String, pts: &[Point], r: f64, fill: &str) {
        for p in pts {
            let (x, y) = self.map(p);
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="{fill}"/>"#
            );
        }
    }

    fn axes(&self, out: &mut String) {
        let (x0, y0) = self.map(&Point::origin(2));
        let _ = writeln!(
            out,
            r##"<g stroke="#969696" stroke-width="0.5"><line x1="{:.3}" y1="{y0:.3}" x2="{:.3}" y2="{y0:.3}"/><line x1="{x0:.3}" y1="{:.3}" x2="{x0:.3}" y2="{:.3}"/></g>"##,
            self.left,
            self.left + PANEL,
            self.top,
            self.top + PANEL
        );
    }

    fn border(&self, out: &mut String) {
        let _ = writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{PANEL:.3}" height="{PANEL:.3}" fill="none" stroke="black" stroke-width="1"/>"#,
            self.left, self.top
        );
    }

    fn title(&self, out: &mut String, text: &str) {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="13">{}</text>"#,
            self.left,
            self.top - 8.0,
            escape(text)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn frame(left: f64, half: &Scalar) -> Frame {
    Frame {
        left,
        top: MARGIN + TITLE,
        half: to_f64(half),
    }
}

/// Draws the figure of a report. Fails when the report has no figure
/// (non-planar data or figures switched off).
pub fn render_svg(report: &AnalysisReport) -> Result<String> {
    let fig = report
        .figure
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("the report carries no planar figure".into()))?;
    Ok(render_figure(&report.spec.name, fig))
}

pub fn render_figure(name: &str, fig: &FigureData) -> String {
    let width = 3.0 * MARGIN + 2.0 * PANEL;
    let height = 2.0 * MARGIN + TITLE + PANEL;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let left = frame(MARGIN, &fig.cell_half_width);
    left.title(
        &mut out,
        &format!(
            "{name}: cell V at R = {} ({:?})",
            format_scalar(&fig.radius),
            fig.cell_kind
        ),
    );
    left.polygon(&mut out, &fig.cone_polygon, CONE_FILL, "none");
    left.polygon(&mut out, &fig.cell_polygon, CELL_FILL, "#08519c");
    left.axes(&mut out);
    left.dots(&mut out, &fig.generator_points, 3.0, DOT);
    left.dots(&mut out, &[Point::origin(2)], 3.5, ORIGIN);
    left.border(&mut out);

    let right = frame(2.0 * MARGIN + PANEL, &fig.reciprocal_half_width);
    right.title(
        &mut out,
        &format!(
            "convex reciprocal C, {} extreme points",
            fig.reciprocal_hull.len()
        ),
    );
    right.polygon(&mut out, &fig.reciprocal_hull, HULL_FILL, "#006d2c");
    right.axes(&mut out);
    right.dots(&mut out, &fig.reciprocal_points, 2.0, DOT);
    right.dots(&mut out, &[Point::origin(2)], 3.0, ORIGIN);
    right.border(&mut out);

    out.push_str("</svg>\n");
    out
}
