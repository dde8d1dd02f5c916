//! Multiple points of the lift, strata of the projection and the mixed
//! sets `Λ^r_i`, all at dimension 0 (plus traced fold curves on surfaces).
//!
//! Every search follows the same pattern: a coarse geometric sweep
//! proposes candidates, Newton refines them on the full defining system,
//! and the survivors are canonicalized and deduplicated. Candidates whose
//! Newton run does not converge are kept as warnings.

use std::cell::OnceCell;
use std::cmp::Ordering;

use serde::Serialize;

use crate::continuation::{trace, unit_tangent, Control, TraceParams};
use crate::domain::DomainPoint;
use crate::mesh::{segment_triangle, Mesh};
use crate::prim_map::PrimMapModel;
use crate::solve::{newton, Condition, Part, System};
use crate::tolerances::Tolerances;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum SetKind {
    /// `M̃_r`: tuples `(x_1, [x_2 … x_r])`.
    MultiplePoints { r: usize },
    /// `Ñ_r`: unordered tuples.
    TargetPoints { r: usize },
    Stratum { j: usize },
    Mixed { r: usize, i: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedPoint {
    pub label: String,
    pub tuple: Vec<DomainPoint>,
    /// `g(x_1)`.
    pub target: Vec<f64>,
    #[serde(serialize_with = "crate::report::decimal")]
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub grid: usize,
    pub candidates: usize,
    pub newton_iterations: usize,
    pub discarded_near_diagonal: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedPointSet {
    pub kind: SetKind,
    pub model: String,
    pub points: Vec<ResolvedPoint>,
    pub provenance: Provenance,
}

impl ResolvedPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest separation between two entries of one tuple.
    pub fn min_separation(&self, model: &PrimMapModel) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.points {
            for a in 0..p.tuple.len() {
                for b in a + 1..p.tuple.len() {
                    best = best.min(model.domain.distance(&p.tuple[a], &p.tuple[b]));
                }
            }
        }
        best
    }
}

/// A traced component of `Σ^1(f)` on a surface.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoldCurve {
    pub points: Vec<DomainPoint>,
    pub closed: bool,
    #[serde(serialize_with = "crate::report::decimal")]
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Strata {
    Points(ResolvedPointSet),
    Curves { j: usize, curves: Vec<FoldCurve>, provenance: Provenance },
}

/// Lazily computed point sets of one model.
pub struct Analyzer<'a> {
    pub model: &'a PrimMapModel,
    pub tol: Tolerances,
    curve_folds: OnceCell<ResolvedPointSet>,
    fold_curves: OnceCell<(Vec<FoldCurve>, Provenance)>,
    cusps: OnceCell<ResolvedPointSet>,
    multiple: OnceCell<(ResolvedPointSet, ResolvedPointSet)>,
    surface_mixed: OnceCell<ResolvedPointSet>,
    mesh: OnceCell<Mesh>,
}

fn lex(model: &PrimMapModel, a: &[DomainPoint], b: &[DomainPoint]) -> Ordering {
    for (p, q) in a.iter().zip(b) {
        let o = model.domain.compare(p, q);
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// `(x_1, sorted x_2 … x_i)`.
pub fn canonical_tuple(model: &PrimMapModel, tuple: &[DomainPoint]) -> Vec<DomainPoint> {
    let mut rest: Vec<DomainPoint> = tuple[1..].to_vec();
    rest.sort_by(|a, b| model.domain.compare(a, b));
    let mut out = vec![tuple[0].clone()];
    out.extend(rest);
    out
}

fn sorted_tuple(model: &PrimMapModel, tuple: &[DomainPoint]) -> Vec<DomainPoint> {
    let mut all = tuple.to_vec();
    all.sort_by(|a, b| model.domain.compare(a, b));
    all
}

fn same_tuple(model: &PrimMapModel, a: &[DomainPoint], b: &[DomainPoint], radius: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| model.domain.distance(p, q) <= radius)
}

fn tuple_min_separation(model: &PrimMapModel, tuple: &[DomainPoint]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..tuple.len() {
        for b in a + 1..tuple.len() {
            best = best.min(model.domain.distance(&tuple[a], &tuple[b]));
        }
    }
    best
}

fn fmt_tuple(tuple: &[DomainPoint]) -> String {
    let parts: Vec<String> = tuple
        .iter()
        .map(|p| {
            let c: Vec<String> = p.0.iter().map(|x| format!("{x:.6}")).collect();
            format!("({})", c.join(", "))
        })
        .collect();
    parts.join(" ")
}

/// Collects refined solutions for one set.
struct Collector<'m> {
    model: &'m PrimMapModel,
    tol: &'m Tolerances,
    system: System,
    /// Canonical form applied before deduplication.
    unordered: bool,
    found: Vec<Vec<DomainPoint>>,
    prov: Provenance,
}

impl<'m> Collector<'m> {
    fn new(model: &'m PrimMapModel, tol: &'m Tolerances, system: System, unordered: bool, grid: usize) -> Self {
        Self { model, tol, system, unordered, found: Vec::new(), prov: Provenance { grid, ..Default::default() } }
    }

    fn offer(&mut self, candidate: Vec<DomainPoint>, origin: &str) {
        self.prov.candidates += 1;
        let out = newton(self.model, &self.system, &candidate, self.tol.residual, 40, 0.25);
        self.prov.newton_iterations += out.iterations;
        if !out.converged {
            // candidates that drift into the fat diagonal are not failures
            if tuple_min_separation(self.model, &out.tuple) < 10.0 * self.tol.tube_radius {
                self.prov.discarded_near_diagonal += 1;
            } else {
                self.prov.warnings.push(format!(
                    "newton did not converge from {origin} candidate {} (residual {:.3e})",
                    fmt_tuple(&candidate),
                    out.residual
                ));
            }
            return;
        }
        if tuple_min_separation(self.model, &out.tuple) < self.tol.tube_radius {
            self.prov.discarded_near_diagonal += 1;
            return;
        }
        let tuple = if self.unordered {
            sorted_tuple(self.model, &out.tuple)
        } else {
            canonical_tuple(self.model, &out.tuple)
        };
        if !self.found.iter().any(|t| same_tuple(self.model, t, &tuple, self.tol.dedup_radius)) {
            self.found.push(tuple);
        }
    }

    fn finish(self, kind: SetKind, prefix: &str) -> ResolvedPointSet {
        let model = self.model;
        let mut tuples = self.found;
        tuples.sort_by(|a, b| lex(model, a, b));
        let points = tuples
            .into_iter()
            .enumerate()
            .map(|(k, tuple)| {
                let residual = self.system.residual(model, &tuple);
                ResolvedPoint { label: format!("{prefix}{k}"), target: model.eval(&tuple[0]), tuple, residual }
            })
            .collect();
        ResolvedPointSet { kind, model: model.name.clone(), points, provenance: self.prov }
    }
}

fn relabel(set: &ResolvedPointSet, kind: SetKind, prefix: &str) -> ResolvedPointSet {
    let mut out = set.clone();
    out.kind = kind;
    for (k, p) in out.points.iter_mut().enumerate() {
        p.label = format!("{prefix}{k}");
    }
    out
}

impl<'a> Analyzer<'a> {
    pub fn new(model: &'a PrimMapModel, tol: Tolerances) -> Self {
        Self {
            model,
            tol,
            curve_folds: OnceCell::new(),
            fold_curves: OnceCell::new(),
            cusps: OnceCell::new(),
            multiple: OnceCell::new(),
            surface_mixed: OnceCell::new(),
            mesh: OnceCell::new(),
        }
    }

    fn check_dimension(&self, r: usize) -> Result<()> {
        let dim = self.model.multiple_point_dim(r);
        if dim != 0 || r < 2 {
            return Err(Error::Dimension { n: self.model.source_dim(), k: self.model.k(), r, dim });
        }
        Ok(())
    }

    /// `(M̃_r, Ñ_r)`.
    pub fn multiple_points(&self, r: usize) -> Result<(ResolvedPointSet, ResolvedPointSet)> {
        self.check_dimension(r)?;
        Ok(self
            .multiple
            .get_or_init(|| {
                let unordered = if self.model.source_dim() == 1 { self.curve_double_points() } else { self.triple_points() };
                expand_resolved(self.model, &unordered, r)
            })
            .clone())
    }

    pub fn strata(&self, j: usize) -> Result<Strata> {
        match (self.model.source_dim(), j) {
            (1, 1) => Ok(Strata::Points(self.curve_folds().clone())),
            (2, 1) => {
                let (curves, prov) = self.fold_curves();
                Ok(Strata::Curves { j, curves: curves.clone(), provenance: prov.clone() })
            }
            (2, 2) => Ok(Strata::Points(self.cusps().clone())),
            (n, j) => Err(Error::UnsupportedStratum { n, j }),
        }
    }

    /// `Λ^r_i`.
    pub fn mixed(&self, r: usize, i: usize) -> Result<ResolvedPointSet> {
        self.check_dimension(r)?;
        if i == 0 || i > r {
            return Err(Error::contract(format!("mixed set index i = {i} outside 1..={r}")));
        }
        let kind = SetKind::Mixed { r, i };
        let prefix = format!("L{i}-");
        if i == r {
            return Ok(relabel(&self.multiple_points(r)?.0, kind, &prefix));
        }
        if i == 1 {
            return match self.strata(r - 1)? {
                Strata::Points(set) => Ok(relabel(&set, kind, &prefix)),
                Strata::Curves { .. } => Err(Error::UnsupportedStratum { n: self.model.source_dim(), j: r - 1 }),
            };
        }
        // only (n, r, i) = (2, 3, 2) remains in the dimension-0 regime
        Ok(relabel(self.surface_mixed(), kind, &prefix))
    }

    /// Folds of a curve model: sign changes of `f'` refined by Newton.
    fn curve_folds(&self) -> &ResolvedPointSet {
        self.curve_folds.get_or_init(|| {
            let model = self.model;
            let grid = model.domain.grid(self.tol.curve_grid);
            let values: Vec<f64> = grid.points.iter().map(|p| model.jet(p).fold_function().value()).collect();
            let system = System::new(1, vec![Condition::Stratum { a: 0, level: 1 }]);
            let mut col = Collector::new(model, &self.tol, system, false, self.tol.curve_grid);
            let n = values.len();
            for k in 0..n {
                let (va, vb) = (values[k], values[(k + 1) % n]);
                let start = if va == 0.0 {
                    Some(grid.points[k].0[0])
                } else if va * vb < 0.0 {
                    Some(grid.points[k].0[0] + grid.spacing * va / (va - vb))
                } else {
                    None
                };
                if let Some(theta) = start {
                    col.offer(vec![model.domain.canonicalize(&[theta])], "sign-change");
                }
            }
            col.finish(SetKind::Stratum { j: 1 }, "fold-")
        })
    }

    /// Unordered double points of a curve model from crossings of its
    /// sampled polyline.
    fn curve_double_points(&self) -> ResolvedPointSet {
        let model = self.model;
        let grid = model.domain.grid(self.tol.curve_grid);
        let n = grid.points.len();
        let pts: Vec<[f64; 2]> = grid
            .points
            .iter()
            .map(|p| {
                let g = model.eval(p);
                [g[0], g[1]]
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        let lo = |k: usize| pts[k][0].min(pts[(k + 1) % n][0]);
        let hi = |k: usize| pts[k][0].max(pts[(k + 1) % n][0]);
        order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)).then(a.cmp(&b)));
        let system = System::new(2, vec![Condition::EqualImage { a: 0, b: 1, part: Part::Full }]);
        let mut col = Collector::new(model, &self.tol, system, true, self.tol.curve_grid);
        let mut active: Vec<usize> = Vec::new();
        let mut hits = Vec::new();
        for &k in &order {
            let x = lo(k);
            active.retain(|&a| hi(a) >= x);
            for &a in &active {
                let adjacent = (a + 1) % n == k || (k + 1) % n == a || a == k;
                if adjacent {
                    continue;
                }
                if let Some((s, t)) = segment_crossing(pts[a], pts[(a + 1) % n], pts[k], pts[(k + 1) % n]) {
                    let (i, j) = if a < k { (a, k) } else { (k, a) };
                    let (si, sj) = if a < k { (s, t) } else { (t, s) };
                    hits.push((i, j, si, sj));
                }
            }
            active.push(k);
        }
        hits.sort_by_key(|h| (h.0, h.1));
        for (i, j, s, t) in hits {
            let a = model.domain.canonicalize(&[grid.points[i].0[0] + s * grid.spacing]);
            let b = model.domain.canonicalize(&[grid.points[j].0[0] + t * grid.spacing]);
            col.offer(vec![a, b], "polyline-crossing");
        }
        col.finish(SetKind::TargetPoints { r: 2 }, "N2-")
    }

    fn mesh(&self) -> &Mesh {
        self.mesh.get_or_init(|| Mesh::build(self.model, &self.model.domain.grid(self.tol.surface_grid)))
    }

    /// Unordered triple points of a surface model: crossing segments of
    /// two mesh triangles that pierce a third.
    fn triple_points(&self) -> ResolvedPointSet {
        let model = self.model;
        let mesh = self.mesh();
        let min_sep = 3.0 * mesh.spacing;
        let system = System::new(
            3,
            vec![
                Condition::EqualImage { a: 0, b: 1, part: Part::Full },
                Condition::EqualImage { a: 0, b: 2, part: Part::Full },
            ],
        );
        let mut col = Collector::new(model, &self.tol, system, true, self.tol.surface_grid);
        let mut candidates = Vec::new();
        for (a, b, crossing) in mesh.crossing_pairs(model, min_sep) {
            if crossing.len() < 2 {
                continue;
            }
            let (p0, p1) = (crossing[0], crossing[1]);
            for c in mesh.near_segment(p0.pos, p1.pos) {
                let far = |t: usize| model.domain.distance(&mesh.centroids[c], &mesh.centroids[t]) >= min_sep;
                if c == a || c == b || !far(a) || !far(b) {
                    continue;
                }
                if let Some((s, u, v)) = segment_triangle(p0.pos, p1.pos, mesh.corners(c)) {
                    let mix = |x: [f64; 3], y: [f64; 3]| [0, 1, 2].map(|k| (1.0 - s) * x[k] + s * y[k]);
                    let xa = mesh.domain_point(model, a, mix(p0.bary_a, p1.bary_a));
                    let xb = mesh.domain_point(model, b, mix(p0.bary_b, p1.bary_b));
                    let xc = mesh.domain_point(model, c, [1.0 - u - v, u, v]);
                    candidates.push(sorted_tuple(model, &[xa, xb, xc]));
                }
            }
        }
        candidates.sort_by(|x, y| lex(model, x, y));
        candidates.dedup_by(|x, y| same_tuple(model, x, y, 1e-12));
        for cand in candidates {
            col.offer(cand, "mesh-triple");
        }
        col.finish(SetKind::TargetPoints { r: 3 }, "N3-")
    }

    /// Fold curves of a surface model: marching-squares seeds on the
    /// sign of `det df`, each traced by continuation until it closes.
    fn fold_curves(&self) -> &(Vec<FoldCurve>, Provenance) {
        self.fold_curves.get_or_init(|| {
            let model = self.model;
            let grid = model.domain.grid(self.tol.surface_grid);
            let mut prov = Provenance { grid: self.tol.surface_grid, ..Default::default() };
            let mut seeds = Vec::new();
            for cell in grid.cells() {
                let corners: Vec<&DomainPoint> = cell.iter().map(|&(i, j)| grid.at(i, j)).collect();
                let base = corners[0];
                let offsets: Vec<Vec<f64>> = corners.iter().map(|c| model.domain.log(base, c)).collect();
                let d: Vec<f64> =
                    offsets.iter().map(|o| model.point_jet(base, o).fold_function().value()).collect();
                for e in 0..4 {
                    let (p, q) = (e, (e + 1) % 4);
                    if d[p] * d[q] < 0.0 || d[p] == 0.0 {
                        let w = if d[p] == 0.0 { 0.0 } else { d[p] / (d[p] - d[q]) };
                        let y: Vec<f64> = (0..2).map(|k| offsets[p][k] + w * (offsets[q][k] - offsets[p][k])).collect();
                        seeds.push(model.domain.retract(base, &y));
                    }
                }
            }
            let system = System::new(1, vec![Condition::Stratum { a: 0, level: 1 }]);
            let h = (grid.spacing / 3.0).min(self.tol.step);
            let params =
                TraceParams { step: h, min_step: self.tol.min_step, max_arclength: self.tol.max_arclength, tol: 1e-11 };
            let mut curves: Vec<FoldCurve> = Vec::new();
            for seed in seeds {
                prov.candidates += 1;
                let near = curves.iter().any(|c| {
                    c.points.iter().any(|p| model.domain.distance(p, &seed) < 1.5 * grid.spacing)
                });
                if near {
                    continue;
                }
                let start = newton(model, &system, std::slice::from_ref(&seed), 1e-11, 30, grid.spacing);
                prov.newton_iterations += start.iterations;
                if !start.converged {
                    prov.warnings.push(format!("fold seed {} did not converge", fmt_tuple(&[seed])));
                    continue;
                }
                let p0 = start.tuple[0].clone();
                if curves.iter().any(|c| c.points.iter().any(|p| model.domain.distance(p, &p0) < 1.5 * grid.spacing)) {
                    continue;
                }
                let Some(dir) = unit_tangent(model, &system, &start.tuple) else {
                    prov.warnings.push(format!("fold seed {} is singular", fmt_tuple(&[p0])));
                    continue;
                };
                let mut closed = false;
                let tr = trace(model, &system, &start.tuple, &dir, &params, |_, cur, len| {
                    if len > 10.0 * h && model.domain.distance(&cur[0], &p0) < 0.75 * h {
                        closed = true;
                        Control::Stop
                    } else {
                        Control::Continue
                    }
                });
                let mut points: Vec<DomainPoint> = tr.samples.into_iter().map(|mut s| s.remove(0)).collect();
                if closed {
                    points.pop();
                } else {
                    prov.warnings.push(format!(
                        "fold curve from {} did not close ({:?} after arclength {:.3})",
                        fmt_tuple(&[p0]),
                        tr.end,
                        tr.arclength
                    ));
                }
                curves.push(FoldCurve { points, closed, max_residual: tr.max_residual });
            }
            // deterministic order: by the lexicographically smallest vertex
            for c in &mut curves {
                rotate_to_min(model, c);
            }
            curves.sort_by(|a, b| model.domain.compare(&a.points[0], &b.points[0]));
            (curves, prov)
        })
    }

    /// Cusps: sign changes of the tangency function along the fold
    /// curves, refined on `(det df, ∇det·v) = 0`.
    fn cusps(&self) -> &ResolvedPointSet {
        self.cusps.get_or_init(|| {
            let model = self.model;
            let (curves, fold_prov) = self.fold_curves();
            let system = System::new(1, vec![Condition::Stratum { a: 0, level: 2 }]);
            let mut col = Collector::new(model, &self.tol, system, false, self.tol.surface_grid);
            col.prov.warnings.extend(fold_prov.warnings.iter().cloned());
            for curve in curves {
                let m = curve.points.len();
                let segs = if curve.closed { m } else { m.saturating_sub(1) };
                for k in 0..segs {
                    let p = &curve.points[k];
                    let q = &curve.points[(k + 1) % m];
                    let off = model.domain.log(p, q);
                    let tp = model.point_jet(p, &[0.0, 0.0]).cusp_function().value();
                    let tq = model.point_jet(p, &off).cusp_function().value();
                    if tp == 0.0 || tp * tq < 0.0 {
                        let w = if tp == 0.0 { 0.0 } else { tp / (tp - tq) };
                        let y = [w * off[0], w * off[1]];
                        col.offer(vec![model.domain.retract(p, &y)], "fold-curve");
                    }
                }
            }
            col.finish(SetKind::Stratum { j: 2 }, "cusp-")
        })
    }

    /// `Λ^3_2` on surfaces: fold points `x_1` with `g(x_1) = g(x_2)`, seeded
    /// where the image of a fold curve pierces a mesh triangle.
    fn surface_mixed(&self) -> &ResolvedPointSet {
        self.surface_mixed.get_or_init(|| {
            let model = self.model;
            let mesh = self.mesh();
            let (curves, _) = self.fold_curves();
            let system = System::new(
                2,
                vec![Condition::Stratum { a: 0, level: 1 }, Condition::EqualImage { a: 0, b: 1, part: Part::Full }],
            );
            let mut col = Collector::new(model, &self.tol, system, false, self.tol.surface_grid);
            let min_sep = 3.0 * mesh.spacing;
            let mut candidates = Vec::new();
            for curve in curves {
                let m = curve.points.len();
                let segs = if curve.closed { m } else { m.saturating_sub(1) };
                let imgs: Vec<[f64; 3]> = curve
                    .points
                    .iter()
                    .map(|p| {
                        let g = model.eval(p);
                        [g[0], g[1], g[2]]
                    })
                    .collect();
                for k in 0..segs {
                    let (p, q) = (&curve.points[k], &curve.points[(k + 1) % m]);
                    for t in mesh.near_segment(imgs[k], imgs[(k + 1) % m]) {
                        if model.domain.distance(&mesh.centroids[t], p) < min_sep {
                            continue;
                        }
                        if let Some((s, u, v)) = segment_triangle(imgs[k], imgs[(k + 1) % m], mesh.corners(t)) {
                            let off = model.domain.log(p, q);
                            let x1 = model.domain.retract(p, &[s * off[0], s * off[1]]);
                            let x2 = mesh.domain_point(model, t, [1.0 - u - v, u, v]);
                            candidates.push(vec![x1, x2]);
                        }
                    }
                }
            }
            candidates.sort_by(|x, y| lex(model, x, y));
            for cand in candidates {
                col.offer(cand, "fold-image-crossing");
            }
            col.finish(SetKind::Mixed { r: 3, i: 2 }, "L2-")
        })
    }

    /// Every fold curve vertex, for diagnostics and plots.
    pub fn fold_curve_list(&self) -> &[FoldCurve] {
        &self.fold_curves().0
    }
}

fn rotate_to_min(model: &PrimMapModel, c: &mut FoldCurve) {
    if !c.closed || c.points.is_empty() {
        return;
    }
    let mut best = 0;
    for k in 1..c.points.len() {
        if model.domain.compare(&c.points[k], &c.points[best]) == Ordering::Less {
            best = k;
        }
    }
    c.points.rotate_left(best);
}

/// Parameters `(s, t)` where segments `p0p1` and `q0q1` cross.
fn segment_crossing(p0: [f64; 2], p1: [f64; 2], q0: [f64; 2], q1: [f64; 2]) -> Option<(f64, f64)> {
    let d = [p1[0] - p0[0], p1[1] - p0[1]];
    let e = [q1[0] - q0[0], q1[1] - q0[1]];
    let den = d[0] * e[1] - d[1] * e[0];
    if den == 0.0 {
        return None;
    }
    let w = [q0[0] - p0[0], q0[1] - p0[1]];
    let s = (w[0] * e[1] - w[1] * e[0]) / den;
    let t = (w[0] * d[1] - w[1] * d[0]) / den;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
        Some((s, t))
    } else {
        None
    }
}

/// `M̃_r` from `Ñ_r`: every choice of the distinguished entry.
fn expand_resolved(model: &PrimMapModel, unordered: &ResolvedPointSet, r: usize) -> (ResolvedPointSet, ResolvedPointSet) {
    let mut tuples = Vec::new();
    for p in &unordered.points {
        for first in 0..p.tuple.len() {
            let mut t = vec![p.tuple[first].clone()];
            t.extend(p.tuple.iter().enumerate().filter(|&(k, _)| k != first).map(|(_, x)| x.clone()));
            tuples.push((canonical_tuple(model, &t), p.residual));
        }
    }
    tuples.sort_by(|a, b| lex(model, &a.0, &b.0));
    let points = tuples
        .into_iter()
        .enumerate()
        .map(|(k, (tuple, residual))| ResolvedPoint {
            label: format!("M{r}-{k}"),
            target: model.eval(&tuple[0]),
            tuple,
            residual,
        })
        .collect();
    let resolved = ResolvedPointSet {
        kind: SetKind::MultiplePoints { r },
        model: model.name.clone(),
        points,
        provenance: unordered.provenance.clone(),
    };
    (resolved, unordered.clone())
}

pub fn find_multiple_points(
    model: &PrimMapModel,
    r: usize,
    tol: &Tolerances,
) -> Result<(ResolvedPointSet, ResolvedPointSet)> {
    Analyzer::new(model, tol.clone()).multiple_points(r)
}

pub fn find_strata(model: &PrimMapModel, j: usize, tol: &Tolerances) -> Result<Strata> {
    Analyzer::new(model, tol.clone()).strata(j)
}

pub fn find_mixed(model: &PrimMapModel, r: usize, i: usize, tol: &Tolerances) -> Result<ResolvedPointSet> {
    Analyzer::new(model, tol.clone()).mixed(r, i)
}

/// `|M̃_r| = r |Ñ_r|` and every target of `Ñ_r` has exactly `r` resolved
/// tuples above it.
pub fn covering_check(resolved: &ResolvedPointSet, targets: &ResolvedPointSet) -> bool {
    let r = match targets.kind {
        SetKind::TargetPoints { r } => r,
        _ => targets.points.first().map_or(1, |p| p.tuple.len()),
    };
    if resolved.points.len() != r * targets.points.len() {
        return false;
    }
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-8);
    let mut used = vec![false; resolved.points.len()];
    for t in &targets.points {
        let mut above = 0;
        for (k, p) in resolved.points.iter().enumerate() {
            if !used[k] && close(&p.target, &t.target) {
                used[k] = true;
                above += 1;
            }
        }
        if above != r {
            return false;
        }
    }
    used.iter().all(|&u| u)
}
