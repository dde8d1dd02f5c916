//! Concrete desk-scale prim maps.
//!
//! A model is a lift `g: M -> R^{m-1} x R` of closed form; the projection
//! `f` drops the last coordinate, which is the height. All evaluators are
//! written once over [`Scalar`] so the same code gives values (on `f64`)
//! and exact derivatives to order 3 (on [`Jet`]).

mod genericity;

use serde::Serialize;

use crate::domain::{ChartedDomain, DomainPoint};
use crate::jet::{Jet, Scalar};
use crate::{Error, Result};

pub use genericity::{genericity_report, genericity_report_with, GenericityReport, Margins, Verdict};

/// `Σ a_m cos(mθ) + Σ b_m sin(mθ)`; `cos[m]` holds `a_m` (m ≥ 0) and
/// `sin[m - 1]` holds `b_m` (m ≥ 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrigPoly {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { cos, sin }
    }

    pub fn degree(&self) -> usize {
        let c = self.cos.iter().rposition(|&a| a != 0.0).unwrap_or(0);
        let s = self.sin.iter().rposition(|&b| b != 0.0).map_or(0, |i| i + 1);
        c.max(s)
    }

    pub fn eval<S: Scalar>(&self, theta: S) -> S {
        let mut acc = S::constant(self.cos.first().copied().unwrap_or(0.0));
        for (m, &a) in self.cos.iter().enumerate().skip(1) {
            if a != 0.0 {
                acc = acc + theta.scale(m as f64).cos().scale(a);
            }
        }
        for (i, &b) in self.sin.iter().enumerate() {
            if b != 0.0 {
                acc = acc + theta.scale((i + 1) as f64).sin().scale(b);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `g(θ) = (f(θ), h(θ))`.
    Trig { f: TrigPoly, h: TrigPoly },
    /// Torus of revolution around the z-axis, then rotated by `tilt` about
    /// the x-axis.
    Torus { major: f64, minor: f64, tilt: f64 },
    /// Bryant–Kusner Boy surface, inverted into a bounded immersion of the
    /// projective plane, then rotated by `rotation`.
    Boy { rotation: [[f64; 3]; 3] },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimMapModel {
    pub name: String,
    pub params: Vec<f64>,
    pub domain: ChartedDomain,
    pub family: Family,
}

pub const BUILTIN_MODELS: [&str; 6] =
    ["trig_curve", "round_circle", "figure_eight", "round_torus", "tilted_torus", "boy_surface"];

fn invalid(model: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParams { model: model.to_string(), reason: reason.into() }
}

/// Instantiate a named family.
///
/// Parameter layouts:
/// - `trig_curve`: `[d, f_cos[0..=d], f_sin[1..=d], h_cos[0..=d], h_sin[1..=d]]`
/// - `round_circle`, `figure_eight`: none
/// - `round_torus`: `[R, ρ]` (default `[2, 1]`)
/// - `tilted_torus`: `[R, ρ, tilt]` (default `[2, 1, 1]`)
/// - `boy_surface`: `[α, β, γ]` rotation angles about x, y, z (default
///   `[0.3, 0.5, 0.7]`)
pub fn builtin_model(name: &str, params: &[f64]) -> Result<PrimMapModel> {
    match name {
        "trig_curve" => {
            let d = params.first().copied().ok_or_else(|| invalid(name, "missing degree"))?;
            if d < 0.0 || d.fract() != 0.0 {
                return Err(invalid(name, "degree must be a non-negative integer"));
            }
            let d = d as usize;
            let expected = 1 + 2 * (2 * d + 1);
            if params.len() != expected {
                return Err(invalid(name, format!("expected {expected} values for degree {d}, got {}", params.len())));
            }
            let rest = &params[1..];
            let f = TrigPoly::new(rest[..=d].to_vec(), rest[d + 1..2 * d + 1].to_vec());
            let rest = &rest[2 * d + 1..];
            let h = TrigPoly::new(rest[..=d].to_vec(), rest[d + 1..].to_vec());
            Ok(PrimMapModel::trig_curve(f, h))
        }
        "round_circle" => {
            no_params(name, params)?;
            let mut m = PrimMapModel::trig_curve(
                TrigPoly::new(vec![0.0, 1.0], vec![]),
                TrigPoly::new(vec![0.0], vec![1.0]),
            );
            m.name = name.to_string();
            Ok(m)
        }
        "figure_eight" => {
            no_params(name, params)?;
            let mut m = PrimMapModel::trig_curve(
                TrigPoly::new(vec![0.0], vec![0.0, 1.0]),
                TrigPoly::new(vec![0.0], vec![1.0]),
            );
            m.name = name.to_string();
            Ok(m)
        }
        "round_torus" | "tilted_torus" => {
            let tilted = name == "tilted_torus";
            let defaults: &[f64] = if tilted { &[2.0, 1.0, 1.0] } else { &[2.0, 1.0] };
            let p = if params.is_empty() { defaults } else { params };
            if p.len() != defaults.len() {
                return Err(invalid(name, format!("expected {} parameters", defaults.len())));
            }
            let (major, minor) = (p[0], p[1]);
            if !(minor > 0.0 && major > minor) {
                return Err(invalid(name, "need R > ρ > 0"));
            }
            Ok(PrimMapModel {
                name: name.to_string(),
                params: p.to_vec(),
                domain: ChartedDomain::Torus,
                family: Family::Torus { major, minor, tilt: if tilted { p[2] } else { 0.0 } },
            })
        }
        "boy_surface" => {
            let p: &[f64] = if params.is_empty() { &[0.3, 0.5, 0.7] } else { params };
            if p.len() != 3 {
                return Err(invalid(name, "expected three rotation angles"));
            }
            Ok(PrimMapModel {
                name: name.to_string(),
                params: p.to_vec(),
                domain: ChartedDomain::ProjectivePlane,
                family: Family::Boy { rotation: rotation_xyz(p[0], p[1], p[2]) },
            })
        }
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

fn no_params(name: &str, params: &[f64]) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(invalid(name, "takes no parameters"))
    }
}

/// `Rz(c) Ry(b) Rx(a)`.
fn rotation_xyz(a: f64, b: f64, c: f64) -> [[f64; 3]; 3] {
    let rx = [[1.0, 0.0, 0.0], [0.0, a.cos(), -a.sin()], [0.0, a.sin(), a.cos()]];
    let ry = [[b.cos(), 0.0, b.sin()], [0.0, 1.0, 0.0], [-b.sin(), 0.0, b.cos()]];
    let rz = [[c.cos(), -c.sin(), 0.0], [c.sin(), c.cos(), 0.0], [0.0, 0.0, 1.0]];
    matmul(rz, matmul(ry, rx))
}

fn matmul(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Complex<S> {
    re: S,
    im: S,
}

impl<S: Scalar> Complex<S> {
    fn real(x: f64) -> Self {
        Self { re: S::constant(x), im: S::constant(0.0) }
    }
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn scale(self, c: f64) -> Self {
        Self { re: self.re.scale(c), im: self.im.scale(c) }
    }
    fn div(self, o: Self) -> Self {
        let den = o.re * o.re + o.im * o.im;
        Self { re: (self.re * o.re + self.im * o.im) / den, im: (self.im * o.re - self.re * o.im) / den }
    }
}

impl PrimMapModel {
    pub fn trig_curve(f: TrigPoly, h: TrigPoly) -> Self {
        let d = [f.cos.len().saturating_sub(1), f.sin.len(), h.cos.len().saturating_sub(1), h.sin.len()]
            .into_iter()
            .max()
            .unwrap_or(0);
        let pad = |p: &TrigPoly| {
            let mut c = p.cos.clone();
            c.resize(d + 1, 0.0);
            let mut s = p.sin.clone();
            s.resize(d, 0.0);
            (c, s)
        };
        let (fc, fs) = pad(&f);
        let (hc, hs) = pad(&h);
        let mut params = vec![d as f64];
        params.extend(fc.iter().chain(&fs).chain(&hc).chain(&hs));
        Self {
            name: "trig_curve".to_string(),
            params,
            domain: ChartedDomain::Circle,
            family: Family::Trig { f: TrigPoly::new(fc, fs), h: TrigPoly::new(hc, hs) },
        }
    }

    /// Source dimension `n`.
    pub fn source_dim(&self) -> usize {
        self.domain.dim()
    }

    /// Dimension `n + k + 1` of the lift's target.
    pub fn ambient_dim(&self) -> usize {
        self.source_dim() + 1
    }

    /// Codimension excess `k` of `f: M^n -> N^{n+k}`.
    pub fn k(&self) -> usize {
        self.ambient_dim() - 1 - self.source_dim()
    }

    /// `n - (r-1)(k+1)`, the dimension of the r-tuple-point manifold.
    pub fn multiple_point_dim(&self, r: usize) -> i64 {
        self.source_dim() as i64 - (r as i64 - 1) * (self.k() as i64 + 1)
    }

    /// Evaluate `g` on ambient domain coordinates (angles, or a unit vector).
    pub fn eval_coords<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        match &self.family {
            Family::Trig { f, h } => vec![f.eval(x[0]), h.eval(x[0])],
            Family::Torus { major, minor, tilt } => {
                let (th, ph) = (x[0], x[1]);
                let w = S::constant(*major) + ph.cos().scale(*minor);
                let px = w * th.cos();
                let py = w * th.sin();
                let pz = ph.sin().scale(*minor);
                let (s, c) = tilt.sin_cos();
                vec![px, py.scale(c) - pz.scale(s), py.scale(s) + pz.scale(c)]
            }
            Family::Boy { rotation } => {
                let b = boy_bryant_kusner(x[0], x[1], x[2]);
                (0..3)
                    .map(|i| b[0].scale(rotation[i][0]) + b[1].scale(rotation[i][1]) + b[2].scale(rotation[i][2]))
                    .collect()
            }
        }
    }

    pub fn eval(&self, p: &DomainPoint) -> Vec<f64> {
        self.eval_coords::<f64>(p.coords())
    }

    pub fn f(&self, p: &DomainPoint) -> Vec<f64> {
        let mut g = self.eval(p);
        g.pop();
        g
    }

    pub fn height(&self, p: &DomainPoint) -> f64 {
        *self.eval(p).last().expect("ambient dimension >= 2")
    }

    /// Jets of `g` in the chart centred at `base`, expanded at chart
    /// coordinates `offset`.
    pub fn point_jet(&self, base: &DomainPoint, offset: &[f64]) -> PointJet {
        let n = self.source_dim();
        let local: Vec<Jet> = (0..n).map(|a| Jet::variable(offset.get(a).copied().unwrap_or(0.0), a)).collect();
        let ambient = self.domain.chart(base, &local);
        PointJet { n, g: self.eval_coords(&ambient) }
    }

    pub fn jet(&self, p: &DomainPoint) -> PointJet {
        self.point_jet(p, &[0.0, 0.0])
    }
}

/// `z ↦ (g1, g2, g3)/|g|^2` with `z = (X + iY)/(1 - Z)`, see R. Bryant,
/// "Surfaces in conformal geometry" (1988) and R. Kusner, "Conformal
/// geometry and complete minimal surfaces" (1987). The three poles of the
/// minimal surface land on the triple point at the origin.
fn boy_bryant_kusner<S: Scalar>(x: S, y: S, z: S) -> [S; 3] {
    let den = S::constant(1.0) - z;
    let w = Complex { re: x / den, im: y / den };
    let w2 = w.mul(w);
    let w3 = w2.mul(w);
    let w4 = w2.mul(w2);
    let w6 = w3.mul(w3);
    let d = w6.add(w3.scale(5f64.sqrt())).sub(Complex::real(1.0));
    let one = Complex::real(1.0);
    let a = w.mul(one.sub(w4)).div(d);
    let b = w.mul(one.add(w4)).div(d);
    let c = one.add(w6).div(d);
    let g1 = a.im.scale(-1.5);
    let g2 = b.re.scale(-1.5);
    let g3 = c.im - S::constant(0.5);
    let r2 = g1 * g1 + g2 * g2 + g3 * g3;
    [g1 / r2, g2 / r2, g3 / r2]
}

/// Jets of all components of `g` at one point, in one chart.
#[derive(Clone, Debug)]
pub struct PointJet {
    pub n: usize,
    pub g: Vec<Jet>,
}

impl PointJet {
    pub fn value(&self) -> Vec<f64> {
        self.g.iter().map(Jet::value).collect()
    }

    pub fn height(&self) -> Jet {
        *self.g.last().expect("nonempty jet")
    }

    /// Components of `f`.
    pub fn f(&self) -> &[Jet] {
        &self.g[..self.g.len() - 1]
    }

    /// Function whose zero set is `Σ^1(f)`: `f'` on curves, `det df` on
    /// surfaces.
    pub fn fold_function(&self) -> Jet {
        let f = self.f();
        if self.n == 1 {
            f[0].partial(0)
        } else {
            f[0].partial(0) * f[1].partial(1) - f[0].partial(1) * f[1].partial(0)
        }
    }

    /// Kernel direction of `df` (surfaces), built from the row of `df` with
    /// the larger norm and oriented so the height increases along it.
    pub fn kernel(&self) -> [Jet; 2] {
        let f = self.f();
        let rows = [[f[0].partial(0), f[0].partial(1)], [f[1].partial(0), f[1].partial(1)]];
        let norm = |r: &[Jet; 2]| r[0].value().hypot(r[1].value());
        let row = if norm(&rows[0]) >= norm(&rows[1]) { rows[0] } else { rows[1] };
        let v = [row[1], -row[0]];
        let h = self.height();
        let dh = h.derivative(1, 0) * v[0].value() + h.derivative(0, 1) * v[1].value();
        if dh < 0.0 {
            [-v[0], -v[1]]
        } else {
            v
        }
    }

    /// Second defining function of `Σ^{1,1}`: `f''` on curves, and on
    /// surfaces the derivative of `det df` along the kernel direction.
    pub fn cusp_function(&self) -> Jet {
        let d = self.fold_function();
        if self.n == 1 {
            d.partial(0)
        } else {
            let v = self.kernel();
            d.partial(0) * v[0] + d.partial(1) * v[1]
        }
    }

    /// Defining functions of `Σ^{1_j}(f)` for `j ≤ 2`.
    pub fn stratum_functions(&self, level: usize) -> Vec<Jet> {
        match level {
            0 => vec![],
            1 => vec![self.fold_function()],
            _ => vec![self.fold_function(), self.cusp_function()],
        }
    }
}

/// Value and derivative tensors of `g` at one point, in chart coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GJet {
    pub order: usize,
    pub value: Vec<f64>,
    /// `first[c][a] = ∂_a g_c`.
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<Vec<f64>>>,
    pub third: Vec<Vec<Vec<Vec<f64>>>>,
}

fn multi_derivative(jet: &Jet, axes: &[usize]) -> f64 {
    let a = axes.iter().filter(|&&x| x == 0).count();
    let b = axes.len() - a;
    jet.derivative(a, b)
}

/// Closed-form jet of `g` up to `order ≤ 3` at `x`.
pub fn eval_jet(model: &PrimMapModel, x: &DomainPoint, order: usize) -> Result<GJet> {
    if order > 3 {
        return Err(Error::contract("jet order must be at most 3"));
    }
    let pj = model.jet(x);
    let n = model.source_dim();
    // values straight from the evaluator, not through the chart
    let mut out = GJet { order, value: model.eval(x), first: vec![], second: vec![], third: vec![] };
    for jet in &pj.g {
        if order >= 1 {
            out.first.push((0..n).map(|a| multi_derivative(jet, &[a])).collect());
        }
        if order >= 2 {
            out.second
                .push((0..n).map(|a| (0..n).map(|b| multi_derivative(jet, &[a, b])).collect()).collect());
        }
        if order >= 3 {
            out.third.push(
                (0..n)
                    .map(|a| {
                        (0..n).map(|b| (0..n).map(|c| multi_derivative(jet, &[a, b, c])).collect()).collect()
                    })
                    .collect(),
            );
        }
    }
    Ok(out)
}
