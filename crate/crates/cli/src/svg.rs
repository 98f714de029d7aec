//! Static log-scale renderings of partitions and band plans.

use std::fmt::Write;

use logpart::BandPlan;

use crate::num;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 200.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 740.0;
const AXIS_Y: f64 = 120.0;
/// Labels beyond this many are thinned to keep them legible.
const MAX_LABELS: usize = 24;

struct LogAxis {
    lo: f64,
    span: f64,
}

impl LogAxis {
    fn new(lo: f64, hi: f64) -> Self {
        let lo = lo.log10();
        Self {
            lo,
            span: hi.log10() - lo,
        }
    }

    fn x(&self, v: f64) -> f64 {
        LEFT + (RIGHT - LEFT) * (v.log10() - self.lo) / self.span
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{AXIS_Y}" x2="{RIGHT}" y2="{AXIS_Y}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="190" font-family="sans-serif" font-size="11" text-anchor="middle">log10 scale</text>"#,
        WIDTH / 2.0
    );
}

fn ticks(out: &mut String, axis: &LogAxis, points: &[f64]) {
    let stride = points.len().div_ceil(MAX_LABELS).max(1);
    for (i, &p) in points.iter().enumerate() {
        let x = axis.x(p);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.3}" y1="{}" x2="{x:.3}" y2="{}" stroke="black" stroke-width="1.5"/>"#,
            AXIS_Y - 10.0,
            AXIS_Y + 10.0
        );
        if i % stride == 0 || i == points.len() - 1 {
            let _ = writeln!(
                out,
                r#"<text x="{x:.3}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
                AXIS_Y + 26.0,
                num::short(p)
            );
        }
    }
}

pub fn partition(points: &[f64]) -> String {
    let (lo, hi) = (points[0], points[points.len() - 1]);
    let axis = LogAxis::new(lo, hi);
    let mut out = String::new();
    let title = format!(
        "[{}, {}] in {} log-equispaced sub-intervals",
        num::short(lo),
        num::short(hi),
        points.len() - 1
    );
    header(&mut out, &title);
    for &p in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{AXIS_Y}" r="3" fill="steelblue"/>"#,
            axis.x(p)
        );
    }
    ticks(&mut out, &axis, points);
    out.push_str("</svg>\n");
    out
}

pub fn bands(plan: &BandPlan) -> String {
    let edges = plan.edges();
    let axis = LogAxis::new(plan.range.lo(), plan.range.hi());
    let mut out = String::new();
    let title = format!(
        "{} bands over [{}, {}], relative width {} <= {}",
        plan.n,
        num::short(plan.range.lo()),
        num::short(plan.range.hi()),
        plan.rule,
        num::short(plan.epsilon)
    );
    header(&mut out, &title);
    for (k, b) in plan.bands.iter().enumerate() {
        let (x0, x1) = (axis.x(b.lo), axis.x(b.hi));
        let fill = if k % 2 == 0 { "#9ecae1" } else { "#deebf7" };
        let _ = writeln!(
            out,
            r#"<rect x="{x0:.3}" y="{}" width="{:.3}" height="20" fill="{fill}" stroke="none"/>"#,
            AXIS_Y - 30.0,
            x1 - x0
        );
    }
    ticks(&mut out, &axis, &edges);
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
