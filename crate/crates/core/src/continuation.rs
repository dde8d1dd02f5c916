//! Predictor-corrector tracing of one-dimensional solution sets.

use nalgebra::DVector;

use crate::domain::DomainPoint;
use crate::prim_map::PrimMapModel;
use crate::solve::{apply_step, cofactor_null_vector, newton, System};

#[derive(Clone, Debug)]
pub struct TraceParams {
    pub step: f64,
    pub min_step: f64,
    pub max_arclength: f64,
    /// Corrector tolerance.
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEnd {
    /// The monitor asked to stop.
    Stopped,
    ExceededLength,
    /// The step size fell below the minimum.
    StepFailure,
    /// The Jacobian lost rank.
    Singular,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub samples: Vec<Vec<DomainPoint>>,
    pub arclength: f64,
    pub end: TraceEnd,
    pub max_residual: f64,
}

/// Unit tangent of the solution curve at `tuple`, in chart coordinates.
pub fn unit_tangent(model: &PrimMapModel, system: &System, tuple: &[DomainPoint]) -> Option<DVector<f64>> {
    let (_, jac) = system.evaluate(model, tuple);
    let t = cofactor_null_vector(&jac);
    let norm = t.norm();
    let scale = jac.row_iter().map(|r| r.norm()).fold(1.0, f64::max);
    if !(norm > 1e-12 * scale.powi(jac.nrows() as i32)) {
        return None;
    }
    Some(t / norm)
}

/// Chart displacement from `from` to `to`, expressed around `to`.
fn arrival_direction(model: &PrimMapModel, from: &[DomainPoint], to: &[DomainPoint]) -> DVector<f64> {
    let mut out = Vec::new();
    for (p, q) in from.iter().zip(to) {
        out.extend(model.domain.log(q, p).into_iter().map(|x| -x));
    }
    DVector::from_vec(out)
}

fn chart_displacement(model: &PrimMapModel, from: &[DomainPoint], to: &[DomainPoint]) -> DVector<f64> {
    let mut out = Vec::new();
    for (p, q) in from.iter().zip(to) {
        out.extend(model.domain.log(p, q));
    }
    DVector::from_vec(out)
}

/// Trace the curve `system = 0` from `start` in the direction whose chart
/// coordinates have positive inner product with `direction`. After every
/// accepted step `monitor(previous, current, arclength)` decides whether
/// to go on.
pub fn trace(
    model: &PrimMapModel,
    system: &System,
    start: &[DomainPoint],
    direction: &DVector<f64>,
    params: &TraceParams,
    mut monitor: impl FnMut(&[DomainPoint], &[DomainPoint], f64) -> Control,
) -> Trace {
    let mut current = start.to_vec();
    let mut samples = vec![current.clone()];
    let mut arclength = 0.0;
    let mut max_residual = system.residual(model, &current);
    let mut h = params.step;
    let Some(mut tangent) = unit_tangent(model, system, &current) else {
        return Trace { samples, arclength, end: TraceEnd::Singular, max_residual };
    };
    if tangent.dot(direction) < 0.0 {
        tangent = -tangent;
    }
    loop {
        if arclength > params.max_arclength {
            return Trace { samples, arclength, end: TraceEnd::ExceededLength, max_residual };
        }
        let predicted = apply_step(model, &current, &(&tangent * h), 1.0);
        let corrected = newton(model, system, &predicted, params.tol, 12, h);
        let mut accepted = None;
        if corrected.converged {
            let disp = chart_displacement(model, &current, &corrected.tuple);
            let len = disp.norm();
            if len > 0.0 && len < 2.0 * h && disp.dot(&tangent) > 0.8 * len {
                if let Some(mut t_new) = unit_tangent(model, system, &corrected.tuple) {
                    let arrival = arrival_direction(model, &current, &corrected.tuple);
                    if t_new.dot(&arrival) < 0.0 {
                        t_new = -t_new;
                    }
                    if t_new.dot(&arrival) > 0.8 * arrival.norm() {
                        accepted = Some((corrected.tuple, t_new, len, corrected.residual));
                    }
                }
            }
        }
        match accepted {
            Some((next, t_new, len, res)) => {
                arclength += len;
                max_residual = max_residual.max(res);
                let control = monitor(&current, &next, arclength);
                samples.push(next.clone());
                current = next;
                tangent = t_new;
                if control == Control::Stop {
                    return Trace { samples, arclength, end: TraceEnd::Stopped, max_residual };
                }
                h = (h * 1.5).min(params.step);
            }
            None => {
                h *= 0.5;
                if h < params.min_step {
                    return Trace { samples, arclength, end: TraceEnd::StepFailure, max_residual };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prim_map::builtin_model;
    use crate::solve::{Condition, Part};
    use std::f64::consts::{PI, TAU};

    #[test]
    fn round_circle_arc() {
        // cos θ1 = cos θ2 from the fold pair near 0 towards larger θ1
        let m = builtin_model("round_circle", &[]).unwrap();
        let sys = System::new(2, vec![Condition::EqualImage { a: 0, b: 1, part: Part::Projection }]);
        let start = vec![DomainPoint(vec![0.3]), DomainPoint(vec![TAU - 0.3])];
        let params = TraceParams { step: 0.01, min_step: 1e-8, max_arclength: 10.0, tol: 1e-11 };
        let tr = trace(&m, &sys, &start, &DVector::from_vec(vec![1.0, -1.0]), &params, |_, cur, _| {
            if cur[0].0[0] > PI - 0.2 {
                Control::Stop
            } else {
                Control::Continue
            }
        });
        assert_eq!(tr.end, TraceEnd::Stopped);
        for s in &tr.samples {
            let sum = (s[0].0[0] + s[1].0[0]).rem_euclid(TAU);
            assert!(sum.min(TAU - sum) < 1e-9, "{s:?}");
        }
        assert!(tr.max_residual < 1e-10);
    }
}
