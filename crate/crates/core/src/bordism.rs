//! The parity chain across `Λ^r_1 … Λ^r_r` and the arcs of the
//! one-dimensional cobordism joining consecutive mixed sets.
//!
//! An arc at level `i` lives in tuples `(x_1, …, x_i)` with
//! `x_1 ∈ Σ^{1_{r-i}}(f)`, `f(x_1) = … = f(x_i)`, equal heights of
//! `x_2 … x_i` and slack `h(x_1) - h(x_2) ≥ 0`. It ends either where the
//! slack vanishes (a point of `Λ^r_i`) or where `x_1` collides with some
//! `x_j` (a point of `Λ^r_{i-1}` after deleting the duplicate).

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::continuation::{trace, unit_tangent, Control, TraceEnd, TraceParams};
use crate::domain::DomainPoint;
use crate::multipoint::{canonical_tuple, covering_check, Analyzer, ResolvedPointSet, Strata};
use crate::prim_map::{genericity_report_with, GenericityReport, PrimMapModel, TrigPoly, Verdict};
use crate::solve::{newton, Condition, Part, System};
use crate::tolerances::Tolerances;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Solver warnings or an unfinished trace; no verdict.
    Inconclusive,
    /// The model failed its genericity margins.
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCount {
    pub i: usize,
    pub count: usize,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityReport {
    pub model: String,
    pub r: usize,
    pub levels: Vec<LevelCount>,
    pub verdict: Outcome,
    pub genericity: GenericityReport,
    /// `|M̃_r| = r |Ñ_r|` with matching fibres.
    pub covering: Option<bool>,
    pub sets: Vec<ResolvedPointSet>,
    pub warnings: Vec<String>,
}

impl ParityReport {
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.count).collect()
    }
}

/// The dimension-0 value of `r` for a model (`n - (r-1)(k+1) = 0`).
pub fn natural_r(model: &PrimMapModel) -> usize {
    model.source_dim() / (model.k() + 1) + 1
}

pub fn parity_chain(analyzer: &Analyzer<'_>, r: usize) -> Result<ParityReport> {
    let model = analyzer.model;
    let dim = model.multiple_point_dim(r);
    if dim != 0 {
        return Err(Error::Dimension { n: model.source_dim(), k: model.k(), r, dim });
    }
    let genericity = genericity_report_with(analyzer);
    let mut report = ParityReport {
        model: model.name.clone(),
        r,
        levels: Vec::new(),
        verdict: Outcome::Rejected,
        genericity,
        covering: None,
        sets: Vec::new(),
        warnings: Vec::new(),
    };
    if report.genericity.verdict == Verdict::Rejected {
        return Ok(report);
    }
    for i in 1..=r {
        let set = analyzer.mixed(r, i)?;
        report.levels.push(LevelCount { i, count: set.len(), parity: (set.len() % 2) as u8 });
        report.warnings.extend(set.provenance.warnings.iter().cloned());
        report.sets.push(set);
    }
    let (resolved, targets) = analyzer.multiple_points(r)?;
    report.covering = Some(covering_check(&resolved, &targets));
    report.warnings.sort();
    report.warnings.dedup();
    let parity = report.levels[0].parity;
    report.verdict = if !report.warnings.is_empty() {
        Outcome::Inconclusive
    } else if report.levels.iter().all(|l| l.parity == parity) && report.covering == Some(true) {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(report)
}

/// Which boundary an arc ends on.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Endpoint {
    /// `i` for a slack-zero end, `i - 1` for a collision end.
    pub level: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcSample {
    pub tuple: Vec<DomainPoint>,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CobordismArc {
    pub i: usize,
    pub endpoint_a: Endpoint,
    pub endpoint_b: Endpoint,
    pub arclength: f64,
    #[serde(serialize_with = "crate::report::decimal")]
    pub max_residual: f64,
    /// Samples along the arc (thinned to at most a few hundred).
    pub polyline: Vec<ArcSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CobordismReport {
    pub model: String,
    pub r: usize,
    pub i: usize,
    pub upper_count: usize,
    pub lower_count: usize,
    pub arcs: Vec<CobordismArc>,
    pub verdict: Outcome,
    pub issues: Vec<String>,
}

fn arc_system(r: usize, i: usize) -> System {
    let mut conditions = Vec::new();
    if r > i {
        conditions.push(Condition::Stratum { a: 0, level: r - i });
    }
    for b in 1..i {
        conditions.push(Condition::EqualImage { a: 0, b, part: Part::Projection });
    }
    for b in 2..i {
        conditions.push(Condition::Slack { a: 1, b });
    }
    System::new(i, conditions)
}

fn slack(model: &PrimMapModel, tuple: &[DomainPoint]) -> f64 {
    model.height(&tuple[0]) - model.height(&tuple[1])
}

/// Gradient of the slack in the stacked chart coordinates.
fn slack_gradient(model: &PrimMapModel, tuple: &[DomainPoint]) -> DVector<f64> {
    let n = model.source_dim();
    let mut g = DVector::zeros(tuple.len() * n);
    for (k, sign) in [(0usize, 1.0), (1, -1.0)] {
        let grad = model.jet(&tuple[k]).height().gradient();
        for a in 0..n {
            g[k * n + a] = sign * grad[a];
        }
    }
    g
}

/// Euclidean length of the step between two tuples in stacked chart
/// coordinates.
fn tuple_step(model: &PrimMapModel, a: &[DomainPoint], b: &[DomainPoint]) -> f64 {
    a.iter().zip(b).map(|(p, q)| model.domain.distance(p, q).powi(2)).sum::<f64>().sqrt()
}

fn tuple_distance(model: &PrimMapModel, a: &[DomainPoint], b: &[DomainPoint]) -> f64 {
    a.iter().zip(b).map(|(p, q)| model.domain.distance(p, q)).fold(0.0, f64::max)
}

enum End {
    Reached(Endpoint),
    Unfinished(String),
}

struct Tracer<'a> {
    model: &'a PrimMapModel,
    tol: &'a Tolerances,
    i: usize,
    system: System,
    upper: &'a ResolvedPointSet,
    lower: &'a ResolvedPointSet,
}

impl<'a> Tracer<'a> {
    fn params(&self) -> TraceParams {
        TraceParams {
            step: self.tol.step,
            min_step: self.tol.min_step,
            max_arclength: self.tol.max_arclength,
            tol: 1e-11,
        }
    }

    /// Closest point of `set` to `tuple` (compared in canonical form).
    fn nearest(&self, set: &ResolvedPointSet, tuple: &[DomainPoint]) -> Option<(String, f64)> {
        let canon = canonical_tuple(self.model, tuple);
        set.points
            .iter()
            .map(|p| (p.label.clone(), tuple_distance(self.model, &p.tuple, &canon)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// The end and, when it was reached, the boundary tuple itself.
    fn classify_slack_zero(&self, prev: &[DomainPoint], cur: &[DomainPoint]) -> (End, Option<Vec<DomainPoint>>) {
        let mut sys = self.system.clone();
        sys.conditions.push(Condition::Slack { a: 0, b: 1 });
        let guess = if slack(self.model, prev).abs() < slack(self.model, cur).abs() { prev } else { cur };
        let out = newton(self.model, &sys, guess, self.tol.residual, 40, self.tol.step);
        if !out.converged {
            return (End::Unfinished(format!("slack-zero refinement failed (residual {:.3e})", out.residual)), None);
        }
        match self.nearest(self.upper, &out.tuple) {
            Some((label, d)) if d <= 1e3 * self.tol.dedup_radius => {
                (End::Reached(Endpoint { level: self.i, label }), Some(out.tuple))
            }
            Some((label, d)) => (End::Unfinished(format!("slack-zero end is {d:.3e} from nearest point {label}")), None),
            None => (End::Unfinished("slack-zero end but the upper set is empty".to_string()), None),
        }
    }

    fn classify_collision(&self, cur: &[DomainPoint], j: usize) -> (End, Option<Vec<DomainPoint>>) {
        let model = self.model;
        let mid = {
            let d = model.domain.log(&cur[0], &cur[j]);
            let half: Vec<f64> = d.iter().map(|x| 0.5 * x).collect();
            model.domain.retract(&cur[0], &half)
        };
        let mut reduced = vec![mid];
        reduced.extend(cur.iter().enumerate().filter(|&(k, _)| k != 0 && k != j).map(|(_, p)| p.clone()));
        match self.nearest(self.lower, &reduced) {
            Some((label, d)) if d <= self.tol.endpoint_match => {
                let point = self.lower.points.iter().find(|p| p.label == label).expect("label from this set");
                (End::Reached(Endpoint { level: self.i - 1, label }), Some(collided(&point.tuple)))
            }
            Some((label, d)) => (End::Unfinished(format!("collision end is {d:.3e} from nearest point {label}")), None),
            None => (End::Unfinished("collision end but the lower set is empty".to_string()), None),
        }
    }

    /// Trace from `start` along `direction`; returns the far end and the
    /// samples, which finish on the boundary tuple when one was reached.
    fn run(&self, start: &[DomainPoint], direction: &DVector<f64>) -> (End, Vec<Vec<DomainPoint>>, f64, f64) {
        let model = self.model;
        let mut end: Option<(End, Option<Vec<DomainPoint>>)> = None;
        let start_len = self.tol.seed_separation * 2.0;
        let tr = trace(model, &self.system, start, direction, &self.params(), |prev, cur, len| {
            // the slack also vanishes on the diagonal, so a sign change
            // right next to a collision belongs to the collision
            let near = self.tol.collision_radius.max(2.0 * self.tol.step);
            let crossed = slack(model, cur) < 0.0 && len > self.tol.min_step;
            for j in 1..cur.len() {
                let sep = model.domain.distance(&cur[0], &cur[j]);
                let was = model.domain.distance(&prev[0], &prev[j]);
                let collided = sep < self.tol.collision_radius || (crossed && sep.min(was) < near);
                if collided && len > start_len {
                    end = Some(self.classify_collision(cur, j));
                    return Control::Stop;
                }
                for k in j + 1..cur.len() {
                    if model.domain.distance(&cur[j], &cur[k]) < self.tol.collision_radius {
                        end = Some((End::Unfinished("two non-distinguished entries collided".to_string()), None));
                        return Control::Stop;
                    }
                }
            }
            if crossed {
                end = Some(self.classify_slack_zero(prev, cur));
                return Control::Stop;
            }
            Control::Continue
        });
        let mut samples = tr.samples;
        let mut arclength = tr.arclength;
        let end = match (end, tr.end) {
            (Some((e, boundary)), _) => {
                if let Some(b) = boundary {
                    // the step that detected the boundary may have overshot it
                    while samples.len() > 1 && samples.last().is_some_and(|t| slack(model, t) < 0.0) {
                        let dropped = samples.pop().expect("nonempty");
                        arclength -= tuple_step(model, &dropped, samples.last().expect("nonempty"));
                    }
                    if let Some(last) = samples.last() {
                        arclength += tuple_step(model, last, &b);
                    }
                    samples.push(b);
                }
                e
            }
            (None, TraceEnd::ExceededLength) => End::Unfinished("arc exceeded the maximal arclength".to_string()),
            (None, other) => End::Unfinished(format!("trace stopped: {other:?}")),
        };
        (end, samples, arclength, tr.max_residual)
    }

    /// Seeds next to a lower point: `x_1` and a new entry straddling it at
    /// separation `seed_separation`, with positive slack.
    fn collision_seeds(&self, lower: &[DomainPoint]) -> Vec<Vec<DomainPoint>> {
        let model = self.model;
        let n = model.source_dim();
        let c = &lower[0];
        let dir: Vec<f64> = if n == 1 {
            vec![1.0]
        } else {
            let v = model.jet(c).kernel();
            let (a, b) = (v[0].value(), v[1].value());
            let norm = a.hypot(b);
            vec![a / norm, b / norm]
        };
        let mut seeds: Vec<Vec<DomainPoint>> = Vec::new();
        for radius in [self.tol.seed_separation, self.tol.seed_separation * 0.5] {
            let mut sys = self.system.clone();
            sys.conditions.push(Condition::Separation { a: 0, b: 1, radius });
            for sign in [1.0, -1.0] {
                for alpha in [0.5, 1.0 / 3.0, 2.0 / 3.0] {
                    let y1: Vec<f64> = dir.iter().map(|d| sign * alpha * radius * d).collect();
                    let y2: Vec<f64> = dir.iter().map(|d| -sign * (1.0 - alpha) * radius * d).collect();
                    let mut tuple = vec![model.domain.retract(c, &y1), model.domain.retract(c, &y2)];
                    tuple.extend(lower[1..].iter().cloned());
                    let out = newton(model, &sys, &tuple, self.tol.residual, 40, radius);
                    if !out.converged || slack(model, &out.tuple) <= 0.0 {
                        continue;
                    }
                    let sep = model.domain.distance(&out.tuple[0], &out.tuple[1]);
                    if (sep - radius).abs() > 0.1 * radius || model.domain.distance(&out.tuple[0], c) > 2.0 * radius {
                        continue;
                    }
                    let canon = canonical_tuple(model, &out.tuple);
                    if !seeds.iter().any(|s| tuple_distance(model, s, &canon) < 0.25 * radius) {
                        seeds.push(canon);
                    }
                }
            }
            if !seeds.is_empty() {
                break;
            }
        }
        seeds
    }
}

/// A lower point `(y_1, y_2, …)` as a boundary tuple of the level above:
/// `(y_1, y_1, y_2, …)`.
fn collided(lower: &[DomainPoint]) -> Vec<DomainPoint> {
    let mut out = vec![lower[0].clone()];
    out.extend(lower.iter().cloned());
    out
}

/// Put `tuple` in the order used by the arc equations: the collided entry
/// (the one nearest `x_1`) right after `x_1`.
fn reorder_for_trace(model: &PrimMapModel, tuple: &[DomainPoint]) -> Vec<DomainPoint> {
    let mut out = tuple.to_vec();
    let j = (1..out.len())
        .min_by(|&a, &b| model.domain.distance(&out[0], &out[a]).total_cmp(&model.domain.distance(&out[0], &out[b])))
        .unwrap_or(1);
    out.swap(1, j);
    out
}

fn thin(model: &PrimMapModel, samples: &[Vec<DomainPoint>], limit: usize) -> Vec<ArcSample> {
    let stride = samples.len().div_ceil(limit).max(1);
    let mut out: Vec<ArcSample> = samples
        .iter()
        .step_by(stride)
        .map(|t| ArcSample { tuple: t.clone(), slack: slack(model, t) })
        .collect();
    if let Some(last) = samples.last() {
        if !(samples.len() - 1).is_multiple_of(stride) {
            out.push(ArcSample { tuple: last.clone(), slack: slack(model, last) });
        }
    }
    out
}

pub fn trace_cobordism(analyzer: &Analyzer<'_>, r: usize, i: usize) -> Result<CobordismReport> {
    let model = analyzer.model;
    if i < 2 || i > r {
        return Err(Error::contract(format!("trace level i = {i} outside 2..={r}")));
    }
    let upper = analyzer.mixed(r, i)?;
    let lower = analyzer.mixed(r, i - 1)?;
    let mut report = CobordismReport {
        model: model.name.clone(),
        r,
        i,
        upper_count: upper.len(),
        lower_count: lower.len(),
        arcs: Vec::new(),
        verdict: Outcome::Pass,
        issues: Vec::new(),
    };
    if genericity_report_with(analyzer).verdict == Verdict::Rejected {
        report.verdict = Outcome::Rejected;
        return Ok(report);
    }
    let tracer = Tracer { model, tol: &analyzer.tol, i, system: arc_system(r, i), upper: &upper, lower: &lower };

    struct Run {
        from: Endpoint,
        end: End,
        samples: Vec<Vec<DomainPoint>>,
        arclength: f64,
        max_residual: f64,
    }
    let mut runs: Vec<Run> = Vec::new();
    for p in &upper.points {
        let from = Endpoint { level: i, label: p.label.clone() };
        let start = p.tuple.clone();
        let Some(t) = unit_tangent(model, &tracer.system, &start) else {
            runs.push(Run { from, end: End::Unfinished("singular start".into()), samples: vec![], arclength: 0.0, max_residual: 0.0 });
            continue;
        };
        let grad = slack_gradient(model, &start);
        let dir = if t.dot(&grad) < 0.0 { -t } else { t };
        let (end, samples, arclength, max_residual) = tracer.run(&start, &dir);
        runs.push(Run { from, end, samples, arclength, max_residual });
    }
    for p in &lower.points {
        let from = Endpoint { level: i - 1, label: p.label.clone() };
        let seeds = tracer.collision_seeds(&p.tuple);
        if seeds.len() != 1 {
            runs.push(Run {
                from,
                end: End::Unfinished(format!("found {} collision seeds, expected 1", seeds.len())),
                samples: vec![],
                arclength: 0.0,
                max_residual: 0.0,
            });
            continue;
        }
        let start = reorder_for_trace(model, &seeds[0]);
        let Some(t) = unit_tangent(model, &tracer.system, &start) else {
            runs.push(Run { from, end: End::Unfinished("singular seed".into()), samples: vec![], arclength: 0.0, max_residual: 0.0 });
            continue;
        };
        // leave the collision: separation of x_1 and x_2 grows
        let n = model.source_dim();
        let d = model.domain.log(&start[0], &start[1]);
        let mut away = DVector::zeros(start.len() * n);
        for a in 0..n {
            away[a] = -d[a];
            away[n + a] = d[a];
        }
        let dir = if t.dot(&away) < 0.0 { -t } else { t };
        let (end, mut samples, mut arclength, max_residual) = tracer.run(&start, &dir);
        let origin = collided(&p.tuple);
        arclength += tuple_step(model, &origin, &start);
        samples.insert(0, origin);
        runs.push(Run { from, end, samples, arclength, max_residual });
    }

    let index = |e: &Endpoint| runs.iter().position(|r| &r.from == e);
    let mut paired = vec![false; runs.len()];
    for k in 0..runs.len() {
        match &runs[k].end {
            End::Unfinished(msg) => {
                report.issues.push(format!("from {}: {msg}", runs[k].from.label));
                if report.verdict == Outcome::Pass {
                    report.verdict = Outcome::Inconclusive;
                }
            }
            End::Reached(to) => {
                if to == &runs[k].from {
                    report.issues.push(format!("arc from {} returned to itself", to.label));
                    report.verdict = Outcome::Fail;
                    continue;
                }
                let Some(back) = index(to) else {
                    report.issues.push(format!("arc from {} reached unknown endpoint {}", runs[k].from.label, to.label));
                    report.verdict = Outcome::Fail;
                    continue;
                };
                let consistent = matches!(&runs[back].end, End::Reached(e) if e == &runs[k].from);
                if !consistent {
                    let reason = match &runs[back].end {
                        End::Reached(e) => format!("reached {}", e.label),
                        End::Unfinished(m) => m.clone(),
                    };
                    report.issues.push(format!(
                        "pairing is not an involution: {} -> {} but {} {}",
                        runs[k].from.label, to.label, to.label, reason
                    ));
                    if matches!(runs[back].end, End::Reached(_)) {
                        report.verdict = Outcome::Fail;
                    }
                    continue;
                }
                if paired[k] || paired[back] {
                    continue;
                }
                paired[k] = true;
                paired[back] = true;
                let run = &runs[k];
                let residual_ok = run.max_residual <= analyzer.tol.arc_residual;
                if !residual_ok {
                    report.issues.push(format!("arc from {} has residual {:.3e}", run.from.label, run.max_residual));
                    report.verdict = Outcome::Inconclusive;
                }
                report.arcs.push(CobordismArc {
                    i,
                    endpoint_a: run.from.clone(),
                    endpoint_b: to.clone(),
                    arclength: run.arclength,
                    max_residual: run.max_residual,
                    polyline: thin(model, &run.samples, 256),
                });
            }
        }
    }
    if report.verdict == Outcome::Pass && 2 * report.arcs.len() != upper.len() + lower.len() {
        report.issues.push(format!(
            "{} arcs for {} + {} endpoints",
            report.arcs.len(),
            upper.len(),
            lower.len()
        ));
        report.verdict = Outcome::Fail;
    }
    let warnings = upper.provenance.warnings.len() + lower.provenance.warnings.len();
    if warnings > 0 && report.verdict == Outcome::Pass {
        report.issues.push(format!("{warnings} solver warnings in the endpoint sets"));
        report.verdict = Outcome::Inconclusive;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerCheck {
    pub euler_characteristic: i64,
    /// Folds on curves, cusps on surfaces.
    pub count: usize,
    pub pass: bool,
}

/// Curves: an even number of folds. Surfaces: the number of cusps is
/// congruent to the Euler characteristic mod 2.
pub fn euler_cross_check(analyzer: &Analyzer<'_>) -> Result<EulerCheck> {
    let model = analyzer.model;
    let chi = model.domain.euler_characteristic();
    let j = if model.source_dim() == 1 { 1 } else { 2 };
    let Strata::Points(set) = analyzer.strata(j)? else {
        return Err(Error::UnsupportedStratum { n: model.source_dim(), j });
    };
    let expected = if model.source_dim() == 1 { 0 } else { chi.rem_euclid(2) as usize };
    Ok(EulerCheck { euler_characteristic: chi, count: set.len(), pass: set.len() % 2 == expected })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSample {
    pub index: usize,
    pub f: TrigPoly,
    pub h: TrigPoly,
    pub genericity: Verdict,
    pub failed_margins: Vec<String>,
    pub counts: Vec<usize>,
    pub parities: Vec<u8>,
    pub chain: Outcome,
    pub covering: Option<bool>,
    pub euler: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub count: usize,
    pub max_degree: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub rejection_rate: f64,
    pub chain_failures: usize,
    pub covering_failures: usize,
    pub euler_failures: usize,
    pub inconclusive: usize,
    pub samples: Vec<SweepSample>,
}

/// Random trigonometric curve number `index` of a sweep: each sample gets
/// its own ChaCha stream, so samples are independent of scheduling.
pub fn random_trig_curve(seed: u64, index: usize, max_degree: usize) -> PrimMapModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let poly = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(1..=max_degree.max(1));
        let cos: Vec<f64> = (0..=d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let sin: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        TrigPoly::new(cos, sin)
    };
    let f = poly(&mut rng);
    let h = poly(&mut rng);
    PrimMapModel::trig_curve(f, h)
}

pub fn sweep(count: usize, seed: u64, max_degree: usize, tol: &Tolerances) -> SweepReport {
    let samples: Vec<SweepSample> = (0..count)
        .into_par_iter()
        .map(|index| {
            let model = random_trig_curve(seed, index, max_degree);
            let analyzer = Analyzer::new(&model, tol.clone());
            let (f, h) = match &model.family {
                crate::prim_map::Family::Trig { f, h } => (f.clone(), h.clone()),
                _ => unreachable!("sweeps draw trig curves"),
            };
            let mut sample = SweepSample {
                index,
                f,
                h,
                genericity: Verdict::Rejected,
                failed_margins: vec![],
                counts: vec![],
                parities: vec![],
                chain: Outcome::Rejected,
                covering: None,
                euler: None,
            };
            match parity_chain(&analyzer, 2) {
                Ok(rep) => {
                    sample.genericity = rep.genericity.verdict;
                    sample.failed_margins = rep.genericity.failed.clone();
                    sample.counts = rep.counts();
                    sample.parities = rep.levels.iter().map(|l| l.parity).collect();
                    sample.chain = rep.verdict;
                    sample.covering = rep.covering;
                    if rep.genericity.verdict == Verdict::Generic {
                        sample.euler = euler_cross_check(&analyzer).ok().map(|e| e.pass);
                    }
                }
                Err(_) => sample.chain = Outcome::Inconclusive,
            }
            sample
        })
        .collect();
    let accepted = samples.iter().filter(|s| s.genericity == Verdict::Generic).count();
    let rejected = count - accepted;
    let acc = || samples.iter().filter(|s| s.genericity == Verdict::Generic);
    SweepReport {
        seed,
        count,
        max_degree,
        accepted,
        rejected,
        rejection_rate: if count == 0 { 0.0 } else { rejected as f64 / count as f64 },
        chain_failures: acc().filter(|s| s.chain == Outcome::Fail).count(),
        covering_failures: acc().filter(|s| s.covering != Some(true)).count(),
        euler_failures: acc().filter(|s| s.euler != Some(true)).count(),
        inconclusive: acc().filter(|s| s.chain == Outcome::Inconclusive).count(),
        samples,
    }
}
