//! SVG rendering of a polygon, its dead regions and a path.

use std::fmt::Write;

use crate::dead_region::DeadRegion;
use crate::geom::{bounds_of, Point};
use crate::ic::IcResult;
use crate::path::PiecewisePath;

const SIZE: f64 = 1000.0;
const MARGIN: f64 = 40.0;

struct Frame {
    lo: Point,
    scale: f64,
    offset: Point,
}

impl Frame {
    fn new(points: &[Point]) -> Self {
        let (lo, hi) = bounds_of(points);
        let span = (hi - lo).x.max((hi - lo).y).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let offset = Point::new(
            0.5 * (SIZE - (hi.x - lo.x) * scale),
            0.5 * (SIZE - (hi.y - lo.y) * scale),
        );
        Frame { lo, scale, offset }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let x = self.offset.x + (p.x - self.lo.x) * self.scale;
        let y = SIZE - (self.offset.y + (p.y - self.lo.y) * self.scale);
        (x, y)
    }

    fn coords(&self, pts: &[Point]) -> String {
        let mut out = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{},{}", q(x), q(y));
        }
        out
    }
}

/// Three-decimal quantization with negative zero folded.
fn q(v: f64) -> String {
    let s = format!("{:.3}", v);
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn region_points(region: &DeadRegion, delta: f64) -> Vec<Point> {
    let mut ring: Vec<Point> = Vec::new();
    for piece in &region.boundary {
        for (_, p) in piece.flatten(delta) {
            if ring.last() != Some(&p) {
                ring.push(p);
            }
        }
    }
    if ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    ring
}

fn region_group(
    out: &mut String,
    frame: &Frame,
    class: &str,
    color: &str,
    regions: &[DeadRegion],
    delta: f64,
) {
    if regions.is_empty() {
        return;
    }
    let _ = writeln!(
        out,
        r#"<g class="{class}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="1">"#
    );
    for r in regions {
        let _ = writeln!(
            out,
            r#"<polygon points="{}"/>"#,
            frame.coords(&region_points(r, delta))
        );
    }
    out.push_str("</g>\n");
}

fn path_points(path: &PiecewisePath, delta: f64) -> Vec<Point> {
    path.flatten(delta).into_iter().map(|(_, p, _)| p).collect()
}

/// Renders the instance and, when present, the computed regions and path.
pub fn render(polygon: &[Point], s: Point, t: Point, result: Option<&IcResult>) -> String {
    let frame = Frame::new(polygon);
    let (lo, hi) = bounds_of(polygon);
    let delta = 1e-4 * (hi - lo).norm();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1000 1000" width="1000" height="1000">"#
    );
    out.push_str("<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    let _ = writeln!(
        out,
        r##"<polygon class="polygon" points="{}" fill="#f4f4f4" stroke="black" stroke-width="2"/>"##,
        frame.coords(polygon)
    );
    if let Some(r) = result {
        region_group(
            &mut out,
            &frame,
            "regions-s",
            "#1f5fd6",
            &r.regions.s,
            delta,
        );
        region_group(
            &mut out,
            &frame,
            "regions-t",
            "#d62728",
            &r.regions.t,
            delta,
        );
        if let Some(path) = &r.path {
            let _ = writeln!(
                out,
                "<g class=\"path\" fill=\"none\" stroke=\"#8e24aa\" stroke-width=\"3\">\n<polyline points=\"{}\"/>\n</g>",
                frame.coords(&path_points(path, delta))
            );
        }
    }
    for (label, p) in [("s", s), ("t", t)] {
        let (x, y) = frame.map(p);
        let _ = writeln!(
            out,
            r#"<circle class="marker-{label}" cx="{}" cy="{}" r="6" fill="black"/>"#,
            q(x),
            q(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="22" font-family="sans-serif">{label}</text>"#,
            q(x + 9.0),
            q(y - 9.0)
        );
    }
    out.push_str("</svg>\n");
    out
}
