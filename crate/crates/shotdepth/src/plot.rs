//! SVG charts of experiment tables.

use std::path::Path;

use shotdepth_core::ppsim::{PowerTable, Type1Table};
use shotdepth_core::TestMethod;
use svg::node::element::{Group, Line, Polyline, Rectangle, Text};
use svg::Document;

use crate::DataError;

const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 240.0;
const MARGIN: f64 = 48.0;

fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn text(x: f64, y: f64, s: impl Into<String>, anchor: &str, size: u32) -> Text {
    Text::new(s.into())
        .set("x", x)
        .set("y", y)
        .set("text-anchor", anchor)
        .set("font-family", "sans-serif")
        .set("font-size", size)
}

fn line(x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) -> Line {
    Line::new().set("x1", x1).set("y1", y1).set("x2", x2).set("y2", y2).set("stroke", stroke).set("stroke-width", 1)
}

/// Linear map of an interval onto panel pixels.
#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
}

impl Axis {
    fn at(&self, v: f64) -> f64 {
        let span = if self.hi > self.lo { self.hi - self.lo } else { 1.0 };
        self.p0 + (v - self.lo) / span * (self.p1 - self.p0)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn frame(title: &str, x: Axis, y: Axis, x_label: &str, y_label: &str) -> Group {
    let (left, right, bottom, top) = (x.p0, x.p1, y.p0, y.p1);
    let mut g = Group::new()
        .add(line(left, bottom, right, bottom, "black"))
        .add(line(left, bottom, left, top, "black"))
        .add(text((left + right) / 2.0, top - 10.0, title, "middle", 13))
        .add(text((left + right) / 2.0, bottom + 32.0, x_label, "middle", 11))
        .add(
            text(left - 36.0, (top + bottom) / 2.0, y_label, "middle", 11)
                .set("transform", format!("rotate(-90 {} {})", left - 36.0, (top + bottom) / 2.0)),
        );
    for k in 0..=4 {
        let v = y.lo + (y.hi - y.lo) * k as f64 / 4.0;
        let py = y.at(v);
        g = g.add(line(left - 4.0, py, left, py, "black")).add(text(left - 6.0, py + 4.0, tick_label(v), "end", 10));
    }
    g
}

fn legend(x0: f64, y0: f64, labels: &[String]) -> Group {
    let mut g = Group::new();
    for (i, label) in labels.iter().enumerate() {
        let y = y0 + 14.0 * i as f64;
        g = g.add(line(x0, y - 4.0, x0 + 16.0, y - 4.0, color(i)).set("stroke-width", 2)).add(text(
            x0 + 20.0,
            y,
            label.clone(),
            "start",
            10,
        ));
    }
    g
}

/// Rejection counts and mean p-values against noise magnitude for one
/// design, one curve per method.
pub fn power_chart(table: &PowerTable, design: &str) -> Document {
    let methods: Vec<TestMethod> = {
        let mut m: Vec<TestMethod> = table.rows.iter().filter(|r| r.design == design).map(|r| r.method).collect();
        m.sort();
        m.dedup();
        m
    };
    let mags: Vec<f64> = {
        let mut v: Vec<f64> = table.rows.iter().filter(|r| r.design == design).map(|r| r.magnitude).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    };
    let kind = table.rows.first().map(|r| r.kind.name()).unwrap_or("noise");
    let max_tests = table.rows.iter().map(|r| r.tests).max().unwrap_or(1).max(1) as f64;
    let (x_lo, x_hi) = (mags.first().copied().unwrap_or(0.0), mags.last().copied().unwrap_or(1.0));

    let width = 2.0 * (PANEL_W + 2.0 * MARGIN) + 110.0;
    let height = PANEL_H + 2.0 * MARGIN;
    let mut doc = Document::new()
        .set("viewBox", (0, 0, width, height))
        .set("width", width)
        .set("height", height)
        .add(Rectangle::new().set("width", width).set("height", height).set("fill", "white"));

    for panel in 0..2 {
        let left = MARGIN + panel as f64 * (PANEL_W + 2.0 * MARGIN);
        let x = Axis { lo: x_lo, hi: x_hi, p0: left, p1: left + PANEL_W };
        let (y, title, y_label) = if panel == 0 {
            (Axis { lo: 0.0, hi: max_tests, p0: MARGIN + PANEL_H, p1: MARGIN }, "Rejections", "rejections")
        } else {
            (Axis { lo: 0.0, hi: 1.0, p0: MARGIN + PANEL_H, p1: MARGIN }, "Average p-value", "mean p")
        };
        let mut g = frame(&format!("{title} ({design})"), x, y, kind, y_label);
        for &m in &mags {
            let px = x.at(m);
            g = g.add(line(px, y.p0, px, y.p0 + 4.0, "black")).add(text(px, y.p0 + 16.0, tick_label(m), "middle", 10));
        }
        for (i, &method) in methods.iter().enumerate() {
            let pts: Vec<String> = table
                .series(design, method)
                .into_iter()
                .map(|(mag, rej, mean_p)| {
                    let v = if panel == 0 { rej as f64 } else { mean_p };
                    format!("{:.2},{:.2}", x.at(mag), y.at(v))
                })
                .collect();
            g = g.add(
                Polyline::new()
                    .set("points", pts.join(" "))
                    .set("fill", "none")
                    .set("stroke", color(i))
                    .set("stroke-width", 2),
            );
        }
        doc = doc.add(g);
    }
    let labels: Vec<String> = methods.iter().map(|m| m.name().to_string()).collect();
    doc.add(legend(width - 100.0, MARGIN + 10.0, &labels))
}

/// Rejection rates with confidence whiskers, grouped by design, and a
/// dashed line at the nominal level.
pub fn type1_chart(table: &Type1Table) -> Document {
    let mut designs: Vec<&str> = Vec::new();
    for r in &table.rows {
        if !designs.contains(&r.design.as_str()) {
            designs.push(&r.design);
        }
    }
    let mut methods: Vec<TestMethod> = table.rows.iter().map(|r| r.method).collect();
    methods.sort();
    methods.dedup();

    let top = table.rows.iter().map(|r| r.ci_high).fold(table.alpha * 2.0, f64::max).min(1.0);
    let width = PANEL_W + 2.0 * MARGIN + 110.0;
    let height = PANEL_H + 2.0 * MARGIN;
    let x = Axis { lo: 0.0, hi: designs.len().max(1) as f64, p0: MARGIN, p1: MARGIN + PANEL_W };
    let y = Axis { lo: 0.0, hi: top, p0: MARGIN + PANEL_H, p1: MARGIN };
    let mut g = frame("Type I error rate", x, y, "design", "rejection rate");

    let slot = (x.p1 - x.p0) / designs.len().max(1) as f64;
    let bar = slot * 0.8 / methods.len().max(1) as f64;
    for (d, design) in designs.iter().enumerate() {
        let base = x.p0 + slot * d as f64 + slot * 0.1;
        g = g.add(text(base + slot * 0.4, y.p0 + 16.0, design.to_string(), "middle", 10));
        for (i, &method) in methods.iter().enumerate() {
            let Some(r) = table.row(design, method) else { continue };
            let bx = base + bar * i as f64;
            let cx = bx + bar / 2.0;
            let py = y.at(r.rate().min(top));
            g = g
                .add(
                    Rectangle::new()
                        .set("x", bx + 1.0)
                        .set("y", py)
                        .set("width", (bar - 2.0).max(1.0))
                        .set("height", y.p0 - py)
                        .set("fill", color(i)),
                )
                .add(line(cx, y.at(r.ci_low), cx, y.at(r.ci_high.min(top)), "black"))
                .add(line(cx - 3.0, y.at(r.ci_low), cx + 3.0, y.at(r.ci_low), "black"))
                .add(line(cx - 3.0, y.at(r.ci_high.min(top)), cx + 3.0, y.at(r.ci_high.min(top)), "black"));
        }
    }
    let pa = y.at(table.alpha);
    g = g.add(line(x.p0, pa, x.p1, pa, "#444").set("stroke-dasharray", "5,4"));

    let labels: Vec<String> = methods.iter().map(|m| m.name().to_string()).collect();
    Document::new()
        .set("viewBox", (0, 0, width, height))
        .set("width", width)
        .set("height", height)
        .add(Rectangle::new().set("width", width).set("height", height).set("fill", "white"))
        .add(g)
        .add(legend(width - 100.0, MARGIN + 10.0, &labels))
}

pub fn save(doc: &Document, path: &Path) -> Result<(), DataError> {
    svg::save(path, doc).map_err(|e| DataError::Io { path: path.to_path_buf(), source: e })
}
