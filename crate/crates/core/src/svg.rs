//! Static SVG drawings of a tree, a shortcut and the pairs realizing the diameter.

use std::fmt::Write;

use crate::augmented::{AugmentedDiagnosis, Endpoint};
use crate::diameter::backbone;
use crate::tree::{GeometricTree, Point, Shortcut, TreePoint};

struct Frame {
    min_x: f64,
    max_y: f64,
    unit: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        (p.x - self.min_x, self.max_y - p.y)
    }
}

fn num(v: f64) -> String {
    let s = format!("{:.6}", if v == 0.0 { 0.0 } else { v });
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn at(tree: &GeometricTree, tp: &TreePoint) -> Option<Point> {
    tree.point_coordinates(tp).ok().map(|(x, y)| Point::new(x, y))
}

fn endpoint_at(tree: &GeometricTree, shortcut: Option<&Shortcut>, e: &Endpoint) -> Option<Point> {
    match e {
        Endpoint::Leaf(id) => tree.coordinates(*id),
        Endpoint::OnTree(tp) => at(tree, tp),
        Endpoint::OnShortcut(f) => {
            let s = shortcut?;
            Some(at(tree, &s.p)?.lerp(at(tree, &s.q)?, *f))
        }
    }
}

/// Render the tree as an SVG 1.1 document. The backbone is drawn thicker, the
/// shortcut dashed, and endpoints of the diagnosis' achieving pairs as circles.
/// Output depends only on the inputs.
pub fn render_svg(tree: &GeometricTree, shortcut: Option<&Shortcut>, diagnosis: Option<&AugmentedDiagnosis>) -> String {
    let pts: Vec<Point> = tree.vertex_ids().iter().filter_map(|&v| tree.coordinates(v)).collect();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &pts {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = 0.05 * extent;
    let frame = Frame { min_x: min_x - margin, max_y: max_y + margin, unit: extent / 200.0 };
    let (w, h) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        num(w),
        num(h),
        num(600.0 * w / w.max(h)),
        num(600.0 * h / w.max(h))
    );
    let stroke = frame.unit;

    let bd = backbone(tree);
    let bb: Vec<(f64, f64)> =
        bd.backbone_path.points.iter().filter_map(|tp| at(tree, tp)).map(|p| frame.map(p)).collect();
    if bb.len() >= 2 {
        let list: Vec<String> = bb.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        let _ = writeln!(
            out,
            r##"<polyline class="backbone" points="{}" fill="none" stroke="#f4a742" stroke-width="{}" stroke-linecap="round"/>"##,
            list.join(" "),
            num(4.0 * stroke)
        );
    }

    let _ = writeln!(out, r#"<g class="edges" stroke="black" stroke-width="{}">"#, num(stroke));
    for (u, v) in tree.edges() {
        if let (Some(a), Some(b)) = (tree.coordinates(u), tree.coordinates(v)) {
            let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
            let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2));
        }
    }
    let _ = writeln!(out, "</g>");

    if let Some(s) = shortcut {
        if let (Some(p), Some(q)) = (at(tree, &s.p), at(tree, &s.q)) {
            let ((x1, y1), (x2, y2)) = (frame.map(p), frame.map(q));
            let _ = writeln!(
                out,
                r##"<line class="shortcut" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#2060d0" stroke-width="{}" stroke-dasharray="{} {}"/>"##,
                num(x1),
                num(y1),
                num(x2),
                num(y2),
                num(1.5 * stroke),
                num(4.0 * stroke),
                num(3.0 * stroke)
            );
        }
    }

    if let Some(d) = diagnosis.filter(|d| !d.achieving_pairs.is_empty()) {
        let _ = writeln!(out, r##"<g class="pairs" fill="#d02020">"##);
        for pair in &d.achieving_pairs {
            for e in [&pair.u, &pair.v] {
                if let Some(p) = endpoint_at(tree, shortcut, e) {
                    let (x, y) = frame.map(p);
                    let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}"/>"#, num(x), num(y), num(3.0 * stroke));
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}
