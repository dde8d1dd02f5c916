//! Newton iteration on stacked point conditions.
//!
//! An unknown is a tuple of domain points; each point contributes `n`
//! chart coordinates. Conditions are evaluated from the jets of every
//! point in its own chart, so Jacobian columns are exact.

use nalgebra::{DMatrix, DVector};

use crate::domain::DomainPoint;
use crate::prim_map::{PointJet, PrimMapModel};

/// Which coordinates of `g` an [`Condition::EqualImage`] compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    /// All of `g`.
    Full,
    /// `f`, i.e. all but the height.
    Projection,
    /// The height alone.
    Height,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Condition {
    EqualImage { a: usize, b: usize, part: Part },
    /// `x_a ∈ Σ^{1_level}(f)`.
    Stratum { a: usize, level: usize },
    /// `h(x_a) = h(x_b)`.
    Slack { a: usize, b: usize },
    /// `|x_a - x_b|^2 = radius^2` in the chart of `x_a`.
    Separation { a: usize, b: usize, radius: f64 },
}

impl Condition {
    fn rows(&self, model: &PrimMapModel) -> usize {
        let m = model.ambient_dim();
        match *self {
            Condition::EqualImage { part: Part::Full, .. } => m,
            Condition::EqualImage { part: Part::Projection, .. } => m - 1,
            Condition::EqualImage { part: Part::Height, .. } => 1,
            Condition::Stratum { level, .. } => level,
            Condition::Slack { .. } | Condition::Separation { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub points: usize,
    pub conditions: Vec<Condition>,
}

/// Value and gradient of one scalar equation in a single point's chart.
fn gradient_row(j: &crate::jet::Jet, n: usize) -> [f64; 2] {
    let g = j.gradient();
    if n == 1 {
        [g[0], 0.0]
    } else {
        g
    }
}

impl System {
    pub fn new(points: usize, conditions: Vec<Condition>) -> Self {
        Self { points, conditions }
    }

    pub fn equations(&self, model: &PrimMapModel) -> usize {
        self.conditions.iter().map(|c| c.rows(model)).sum()
    }

    pub fn unknowns(&self, model: &PrimMapModel) -> usize {
        self.points * model.source_dim()
    }

    /// Residual vector and Jacobian at `tuple`.
    pub fn evaluate(&self, model: &PrimMapModel, tuple: &[DomainPoint]) -> (DVector<f64>, DMatrix<f64>) {
        let n = model.source_dim();
        let jets: Vec<PointJet> = tuple.iter().map(|p| model.jet(p)).collect();
        let rows = self.equations(model);
        let mut f = DVector::zeros(rows);
        let mut jac = DMatrix::zeros(rows, self.points * n);
        let mut row = 0;
        let put = |row: usize, point: usize, grad: [f64; 2], sign: f64, jac: &mut DMatrix<f64>| {
            for a in 0..n {
                jac[(row, point * n + a)] += sign * grad[a];
            }
        };
        for cond in &self.conditions {
            match *cond {
                Condition::EqualImage { a, b, part } => {
                    let m = model.ambient_dim();
                    let comps: Vec<usize> = match part {
                        Part::Full => (0..m).collect(),
                        Part::Projection => (0..m - 1).collect(),
                        Part::Height => vec![m - 1],
                    };
                    for c in comps {
                        f[row] = jets[a].g[c].value() - jets[b].g[c].value();
                        put(row, a, gradient_row(&jets[a].g[c], n), 1.0, &mut jac);
                        put(row, b, gradient_row(&jets[b].g[c], n), -1.0, &mut jac);
                        row += 1;
                    }
                }
                Condition::Stratum { a, level } => {
                    for func in jets[a].stratum_functions(level) {
                        f[row] = func.value();
                        put(row, a, gradient_row(&func, n), 1.0, &mut jac);
                        row += 1;
                    }
                }
                Condition::Slack { a, b } => {
                    let (ha, hb) = (jets[a].height(), jets[b].height());
                    f[row] = ha.value() - hb.value();
                    put(row, a, gradient_row(&ha, n), 1.0, &mut jac);
                    put(row, b, gradient_row(&hb, n), -1.0, &mut jac);
                    row += 1;
                }
                Condition::Separation { a, b, radius } => {
                    let d = model.domain.log(&tuple[a], &tuple[b]);
                    f[row] = d.iter().map(|x| x * x).sum::<f64>() - radius * radius;
                    let mut g = [0.0; 2];
                    for (k, x) in d.iter().enumerate() {
                        g[k] = 2.0 * x;
                    }
                    put(row, a, g, -1.0, &mut jac);
                    put(row, b, g, 1.0, &mut jac);
                    row += 1;
                }
            }
        }
        (f, jac)
    }

    pub fn residual(&self, model: &PrimMapModel, tuple: &[DomainPoint]) -> f64 {
        self.evaluate(model, tuple).0.amax()
    }
}

/// Move every point of `tuple` by `-step` (chart coordinates).
pub fn apply_step(model: &PrimMapModel, tuple: &[DomainPoint], step: &DVector<f64>, sign: f64) -> Vec<DomainPoint> {
    let n = model.source_dim();
    tuple
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let y: Vec<f64> = (0..n).map(|a| sign * step[i * n + a]).collect();
            model.domain.retract(p, &y)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub tuple: Vec<DomainPoint>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Newton iteration for a square or underdetermined system (minimum-norm
/// steps in the latter case). `max_step` caps each step's length.
pub fn newton(
    model: &PrimMapModel,
    system: &System,
    start: &[DomainPoint],
    tol: f64,
    max_iter: usize,
    max_step: f64,
) -> NewtonOutcome {
    let mut tuple = start.to_vec();
    let mut residual = f64::INFINITY;
    for it in 0..max_iter {
        let (f, jac) = system.evaluate(model, &tuple);
        residual = f.amax();
        if !residual.is_finite() {
            break;
        }
        if residual <= tol * 1e-3 {
            return NewtonOutcome { tuple, residual, iterations: it, converged: true };
        }
        let Some(mut step) = solve_step(&jac, &f) else {
            break;
        };
        let len = step.norm();
        if len > max_step {
            step *= max_step / len;
        }
        tuple = apply_step(model, &tuple, &step, -1.0);
        if len < 1e-15 {
            break;
        }
    }
    let final_res = system.residual(model, &tuple);
    if final_res.is_finite() {
        residual = final_res;
    }
    NewtonOutcome { tuple, residual, iterations: max_iter, converged: residual <= tol }
}

/// Newton step `J^+ F`: LU for square systems, `J^T (J J^T)^{-1} F` for
/// underdetermined ones.
pub fn solve_step(jac: &DMatrix<f64>, f: &DVector<f64>) -> Option<DVector<f64>> {
    if jac.nrows() == jac.ncols() {
        jac.clone().lu().solve(f)
    } else if jac.nrows() < jac.ncols() {
        let jjt = jac * jac.transpose();
        let w = jjt.lu().solve(f)?;
        Some(jac.transpose() * w)
    } else {
        let jtj = jac.transpose() * jac;
        jtj.lu().solve(&(jac.transpose() * f))
    }
}

/// Null vector of a corank-one `(N-1) x N` matrix by signed maximal
/// minors. Its orientation varies continuously with the matrix.
pub fn cofactor_null_vector(jac: &DMatrix<f64>) -> DVector<f64> {
    let cols = jac.ncols();
    debug_assert_eq!(jac.nrows() + 1, cols);
    let mut t = DVector::zeros(cols);
    for k in 0..cols {
        let minor = jac.clone().remove_column(k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        t[k] = sign * minor.determinant();
    }
    t
}

/// Smallest singular value, used as a conditioning margin.
pub fn min_singular_value(jac: &DMatrix<f64>) -> f64 {
    jac.clone().singular_values().iter().copied().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prim_map::builtin_model;

    #[test]
    fn cofactor_vector_is_null() {
        let j = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, -1.0, 0.5, 2.0]);
        let t = cofactor_null_vector(&j);
        assert!((j * &t).amax() < 1e-12);
        assert!(t.norm() > 0.1);
    }

    #[test]
    fn figure_eight_double_point_newton() {
        let m = builtin_model("figure_eight", &[]).unwrap();
        let sys = System::new(2, vec![Condition::EqualImage { a: 0, b: 1, part: Part::Full }]);
        let start = [DomainPoint(vec![0.05]), DomainPoint(vec![3.1])];
        let out = newton(&m, &sys, &start, 1e-10, 30, 0.5);
        assert!(out.converged, "{out:?}");
        assert!(out.tuple[0].0[0].min(std::f64::consts::TAU - out.tuple[0].0[0]) < 1e-12);
        assert!((out.tuple[1].0[0] - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn fold_of_circle() {
        let m = builtin_model("round_circle", &[]).unwrap();
        let sys = System::new(1, vec![Condition::Stratum { a: 0, level: 1 }]);
        let out = newton(&m, &sys, &[DomainPoint(vec![3.0])], 1e-10, 30, 0.5);
        assert!(out.converged);
        assert!((out.tuple[0].0[0] - std::f64::consts::PI).abs() < 1e-12);
    }
}
