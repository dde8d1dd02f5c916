//! Static SVG plots of results, for people reading reports.
//!
//! Curve models are drawn as their image `(f, h)` in the plane with
//! double points as filled discs and folds as crosses. Surface models get
//! the projections `f` of their fold curves with cusps marked.

use std::fmt::Write;

use crate::domain::DomainPoint;
use crate::multipoint::{FoldCurve, ResolvedPointSet};
use crate::prim_map::PrimMapModel;

const SIZE: f64 = 480.0;
const PAD: f64 = 24.0;
const PALETTE: [&str; 6] = ["#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#2c3e50"];

struct Frame {
    lo: [f64; 2],
    scale: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() {
            return Self { lo: [-1.0, -1.0], scale: (SIZE - 2.0 * PAD) / 2.0 };
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        Self { lo, scale: (SIZE - 2.0 * PAD) / span }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (PAD + (p[0] - self.lo[0]) * self.scale, SIZE - PAD - (p[1] - self.lo[1]) * self.scale)
    }
}

fn polyline(out: &mut String, frame: &Frame, pts: &[[f64; 2]], closed: bool, colour: &str) {
    if pts.is_empty() {
        return;
    }
    let tag = if closed { "polygon" } else { "polyline" };
    let coords: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(out, r#"<{tag} points="{}" fill="none" stroke="{colour}" stroke-width="1.2"/>"#, coords.join(" "));
}

fn disc(out: &mut String, frame: &Frame, p: [f64; 2], colour: &str) {
    let (x, y) = frame.map(p);
    let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{colour}"/>"#);
}

fn cross(out: &mut String, frame: &Frame, p: [f64; 2], colour: &str) {
    let (x, y) = frame.map(p);
    let _ = writeln!(
        out,
        r#"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="{colour}" stroke-width="2"/>"#,
        x - 5.0,
        y - 5.0,
        x + 5.0,
        y + 5.0,
        x - 5.0,
        y + 5.0,
        x + 5.0,
        y - 5.0
    );
}

fn document(title: &str, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n\
         <title>{title}</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

fn xy(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

/// Plane curve `(f, h)` with its double points and folds.
pub fn curve_plot(model: &PrimMapModel, double_points: &ResolvedPointSet, folds: &ResolvedPointSet) -> String {
    let samples = 720;
    let pts: Vec<[f64; 2]> = (0..samples)
        .map(|k| xy(&model.eval(&DomainPoint(vec![std::f64::consts::TAU * k as f64 / samples as f64]))))
        .collect();
    let frame = Frame::fit(&pts);
    let mut body = String::new();
    polyline(&mut body, &frame, &pts, true, "black");
    for p in &double_points.points {
        disc(&mut body, &frame, xy(&p.target), "#c0392b");
    }
    for p in &folds.points {
        cross(&mut body, &frame, xy(&p.target), "#2471a3");
    }
    document(&model.name, &body)
}

/// Fold curves of a surface model projected by `f`, cusps as crosses.
pub fn fold_plot(model: &PrimMapModel, curves: &[FoldCurve], cusps: Option<&ResolvedPointSet>) -> String {
    document(&model.name, &surface_body(model, curves, cusps, &[]))
}

/// Fold-curve images, cusps, and extra coloured paths, in a frame fitted
/// to all of them.
fn surface_body(
    model: &PrimMapModel,
    curves: &[FoldCurve],
    cusps: Option<&ResolvedPointSet>,
    paths: &[Vec<[f64; 2]>],
) -> String {
    let images: Vec<Vec<[f64; 2]>> = curves.iter().map(|c| c.points.iter().map(|p| xy(&model.f(p))).collect()).collect();
    let all: Vec<[f64; 2]> = images.iter().chain(paths).flatten().copied().collect();
    let frame = Frame::fit(&all);
    let mut body = String::new();
    for (img, c) in images.iter().zip(curves) {
        polyline(&mut body, &frame, img, c.closed, "black");
    }
    for p in cusps.map(|s| s.points.as_slice()).unwrap_or_default() {
        cross(&mut body, &frame, xy(&p.target), "#2471a3");
    }
    for (n, path) in paths.iter().enumerate() {
        polyline(&mut body, &frame, path, false, PALETTE[n % PALETTE.len()]);
    }
    body
}

/// Curve models: arcs drawn in the square `(θ_1, θ_2) ∈ [0, 2π)²`, split
/// where they wrap around. Surface models: the images `f(x_1)` of the
/// arcs over the fold-curve plot.
pub fn arc_plot(
    model: &PrimMapModel,
    arcs: &[crate::bordism::CobordismArc],
    curves: &[FoldCurve],
    cusps: Option<&ResolvedPointSet>,
) -> String {
    if model.source_dim() == 1 {
        let tau = std::f64::consts::TAU;
        let frame = Frame::fit(&[[0.0, 0.0], [tau, tau]]);
        let mut body = String::new();
        polyline(&mut body, &frame, &[[0.0, 0.0], [tau, 0.0], [tau, tau], [0.0, tau]], true, "#bbbbbb");
        for (n, arc) in arcs.iter().enumerate() {
            let mut piece: Vec<[f64; 2]> = Vec::new();
            for s in &arc.polyline {
                let p = [s.tuple[0].0[0], s.tuple.get(1).map_or(0.0, |q| q.0[0])];
                if let Some(last) = piece.last() {
                    if (p[0] - last[0]).abs() > 3.0 || (p[1] - last[1]).abs() > 3.0 {
                        polyline(&mut body, &frame, &piece, false, PALETTE[n % PALETTE.len()]);
                        piece.clear();
                    }
                }
                piece.push(p);
            }
            polyline(&mut body, &frame, &piece, false, PALETTE[n % PALETTE.len()]);
        }
        return document(&format!("{} arcs", model.name), &body);
    }
    let paths: Vec<Vec<[f64; 2]>> =
        arcs.iter().map(|a| a.polyline.iter().map(|s| xy(&model.f(&s.tuple[0]))).collect()).collect();
    document(&format!("{} arcs", model.name), &surface_body(model, curves, cusps, &paths))
}
