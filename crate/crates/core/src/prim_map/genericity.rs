//! Numerical margins standing in for the genericity hypotheses.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::domain::DomainPoint;
use crate::multipoint::{Analyzer, Strata};
use crate::solve::min_singular_value;
use crate::tolerances::Tolerances;

use super::PrimMapModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Generic,
    Rejected,
}

/// Margins; `None` means there was nothing to measure (vacuously fine).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Margins {
    /// Smallest singular value of `dg` over the samples.
    pub immersion: f64,
    /// Curves: `|sin|` of the angle between the branches at double points.
    /// Surfaces: `|det|` of the unit normals at triple points and the
    /// angle between a fold image and the sheet it crosses.
    pub transversality: Option<f64>,
    /// Curves: `min(|f''|, |h'|)` at folds. Surfaces: `min(|∇ det df|,
    /// |dh(v)|)` along fold curves, `v` the unit kernel direction.
    pub fold: Option<f64>,
    /// Surfaces: `|det|` of the Jacobian of the cusp equations.
    pub cusp: Option<f64>,
    /// Distance to the excluded coincidences (see [`genericity_report`]).
    pub gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityReport {
    pub margins: Margins,
    pub thresholds: [f64; 5],
    pub verdict: Verdict,
    /// Which margins fell below their threshold.
    pub failed: Vec<String>,
}

fn sigma_min_dg(model: &PrimMapModel, p: &DomainPoint) -> f64 {
    let jet = model.jet(p);
    let n = model.source_dim();
    let m = jet.g.len();
    let mut d = DMatrix::zeros(m, n);
    for c in 0..m {
        let grad = jet.g[c].gradient();
        for a in 0..n {
            d[(c, a)] = grad[a];
        }
    }
    min_singular_value(&d)
}

fn immersion_margin(model: &PrimMapModel, resolution: usize) -> f64 {
    let grid = model.domain.grid(resolution);
    let mut best = (f64::INFINITY, 0);
    for (k, p) in grid.points.iter().enumerate() {
        let s = sigma_min_dg(model, p);
        if s < best.0 {
            best = (s, k);
        }
    }
    // local refinement around the worst sample
    let centre = &grid.points[best.1];
    let n = model.source_dim();
    let steps = 16i32;
    let offsets: Vec<Vec<f64>> = if n == 1 {
        (-steps..=steps).map(|a| vec![grid.spacing * a as f64 / steps as f64]).collect()
    } else {
        let mut v = Vec::new();
        for a in -4i32..=4 {
            for b in -4i32..=4 {
                v.push(vec![grid.spacing * a as f64 / 4.0, grid.spacing * b as f64 / 4.0]);
            }
        }
        v
    };
    offsets
        .iter()
        .map(|o| sigma_min_dg(model, &model.domain.retract(centre, o)))
        .fold(best.0, f64::min)
}

fn min_opt(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.min(x)))
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normal(model: &PrimMapModel, p: &DomainPoint) -> [f64; 3] {
    let j = model.jet(p);
    let gu = [j.g[0].derivative(1, 0), j.g[1].derivative(1, 0), j.g[2].derivative(1, 0)];
    let gv = [j.g[0].derivative(0, 1), j.g[1].derivative(0, 1), j.g[2].derivative(0, 1)];
    unit(cross(gu, gv))
}

/// All `θ ≠ c` with `f(θ) = f(c)` on a curve model.
fn same_value_points(model: &PrimMapModel, c: &DomainPoint, resolution: usize, exclude: f64) -> Vec<DomainPoint> {
    let grid = model.domain.grid(resolution);
    let fc = model.f(c)[0];
    let vals: Vec<f64> = grid.points.iter().map(|p| model.f(p)[0] - fc).collect();
    let n = vals.len();
    let mut out = Vec::new();
    for k in 0..n {
        let (a, b) = (vals[k], vals[(k + 1) % n]);
        if a * b > 0.0 {
            continue;
        }
        let w = if a == b { 0.0 } else { a / (a - b) };
        let mut theta = grid.points[k].0[0] + w * grid.spacing;
        for _ in 0..30 {
            let j = model.jet(&model.domain.canonicalize(&[theta]));
            let (v, d) = (j.g[0].value() - fc, j.g[0].derivative(1, 0));
            if d.abs() < 1e-14 {
                break;
            }
            theta -= v / d;
            if v.abs() < 1e-15 {
                break;
            }
        }
        let p = model.domain.canonicalize(&[theta]);
        if model.domain.distance(&p, c) > exclude {
            out.push(p);
        }
    }
    out
}

/// Margins of one model, computed by dense sampling plus the point sets
/// of `analyzer`.
///
/// The gap margin collects the coincidences excluded for generic maps:
/// on curves, a fold `c` whose `f`-fibre meets the curve again at the same
/// height (a fold sitting on a double point) and two double points with
/// the same image (a triple point); on surfaces, the distance between
/// distinct points of the zero-dimensional sets.
pub fn genericity_report_with(analyzer: &Analyzer<'_>) -> GenericityReport {
    let model = analyzer.model;
    let tol = &analyzer.tol;
    let n = model.source_dim();
    let resolution = if n == 1 { tol.curve_grid } else { tol.surface_grid };
    let mut margins = Margins {
        immersion: immersion_margin(model, resolution),
        transversality: None,
        fold: None,
        cusp: None,
        gap: None,
    };
    if n == 1 {
        if let Ok(Strata::Points(folds)) = analyzer.strata(1) {
            for p in &folds.points {
                let j = model.jet(&p.tuple[0]);
                let fpp = j.g[0].derivative(2, 0).abs();
                let hp = j.g[1].derivative(1, 0).abs();
                margins.fold = min_opt(margins.fold, fpp.min(hp));
                let hc = j.g[1].value();
                for q in same_value_points(model, &p.tuple[0], resolution, tol.tube_radius) {
                    margins.gap = min_opt(margins.gap, (model.height(&q) - hc).abs());
                }
            }
        }
        if let Ok((_, targets)) = analyzer.multiple_points(2) {
            for p in &targets.points {
                let a = model.jet(&p.tuple[0]);
                let b = model.jet(&p.tuple[1]);
                let ta = [a.g[0].derivative(1, 0), a.g[1].derivative(1, 0)];
                let tb = [b.g[0].derivative(1, 0), b.g[1].derivative(1, 0)];
                let sin = (ta[0] * tb[1] - ta[1] * tb[0]).abs() / (ta[0].hypot(ta[1]) * tb[0].hypot(tb[1]));
                margins.transversality = min_opt(margins.transversality, sin);
            }
            for (x, p) in targets.points.iter().enumerate() {
                for q in &targets.points[x + 1..] {
                    let d = p.target.iter().zip(&q.target).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
                    margins.gap = min_opt(margins.gap, d);
                }
            }
        }
    } else {
        for curve in analyzer.fold_curve_list() {
            for p in &curve.points {
                let j = model.jet(p);
                let d = j.fold_function();
                let grad = d.gradient().iter().map(|x| x * x).sum::<f64>().sqrt();
                let v = j.kernel();
                let (v0, v1) = (v[0].value(), v[1].value());
                let h = j.height();
                let dh = (h.derivative(1, 0) * v0 + h.derivative(0, 1) * v1).abs() / v0.hypot(v1);
                margins.fold = min_opt(margins.fold, grad.min(dh));
            }
        }
        let mut isolated: Vec<DomainPoint> = Vec::new();
        if let Ok(Strata::Points(cusps)) = analyzer.strata(2) {
            for p in &cusps.points {
                let j = model.jet(&p.tuple[0]);
                let funcs = j.stratum_functions(2);
                let (a, b) = (funcs[0].gradient(), funcs[1].gradient());
                margins.cusp = min_opt(margins.cusp, (a[0] * b[1] - a[1] * b[0]).abs());
                isolated.push(p.tuple[0].clone());
            }
        }
        if let Ok(mixed) = analyzer.mixed(3, 2) {
            for p in &mixed.points {
                let j = model.jet(&p.tuple[0]);
                // the fold curve's image is tangent to dg(w) with w ⟂ ∇det
                let grad = j.fold_function().gradient();
                let w = [-grad[1], grad[0]];
                let tangent = unit([0, 1, 2].map(|c| j.g[c].derivative(1, 0) * w[0] + j.g[c].derivative(0, 1) * w[1]));
                let nrm = normal(model, &p.tuple[1]);
                let s = (tangent[0] * nrm[0] + tangent[1] * nrm[1] + tangent[2] * nrm[2]).abs();
                margins.transversality = min_opt(margins.transversality, s);
                isolated.push(p.tuple[0].clone());
            }
        }
        if let Ok((_, triples)) = analyzer.multiple_points(3) {
            for p in &triples.points {
                let ns: Vec<[f64; 3]> = p.tuple.iter().map(|x| normal(model, x)).collect();
                let det = ns[0][0] * (ns[1][1] * ns[2][2] - ns[1][2] * ns[2][1])
                    - ns[0][1] * (ns[1][0] * ns[2][2] - ns[1][2] * ns[2][0])
                    + ns[0][2] * (ns[1][0] * ns[2][1] - ns[1][1] * ns[2][0]);
                margins.transversality = min_opt(margins.transversality, det.abs());
                isolated.extend(p.tuple.iter().cloned());
            }
        }
        for (x, p) in isolated.iter().enumerate() {
            for q in &isolated[x + 1..] {
                let d = model.domain.distance(p, q);
                // the same point can appear in several sets
                if d > tol.dedup_radius {
                    margins.gap = min_opt(margins.gap, d);
                }
            }
        }
    }
    let thresholds =
        [tol.immersion_margin, tol.transversality_margin, tol.fold_margin, tol.cusp_margin, tol.gap_margin];
    let named = [
        ("immersion", Some(margins.immersion)),
        ("transversality", margins.transversality),
        ("fold", margins.fold),
        ("cusp", margins.cusp),
        ("gap", margins.gap),
    ];
    let failed: Vec<String> = named
        .iter()
        .zip(thresholds)
        .filter(|((_, v), t)| v.is_some_and(|v| !(v > *t)))
        .map(|((name, _), _)| name.to_string())
        .collect();
    let verdict = if failed.is_empty() { Verdict::Generic } else { Verdict::Rejected };
    GenericityReport { margins, thresholds, verdict, failed }
}

/// Standalone entry point: margins on grids of `resolution` samples per
/// axis with the thresholds in `tol`.
pub fn genericity_report(model: &PrimMapModel, resolution: usize, tol: &Tolerances) -> GenericityReport {
    let mut tol = tol.clone();
    if model.source_dim() == 1 {
        tol.curve_grid = resolution;
    } else {
        tol.surface_grid = resolution;
    }
    genericity_report_with(&Analyzer::new(model, tol))
}
