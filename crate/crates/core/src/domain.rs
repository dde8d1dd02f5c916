//! Source domains of the desk-scale models and their charts.
//!
//! Every solver works in local charts: a point `p` together with a small
//! vector of chart coordinates `y` describes the point `chart(p, y)`.
//! On the circle and the torus the chart is translation of the angles; on
//! the projective plane (unit vectors modulo `±`) it is
//! `normalize(p + B y)` with `B` an orthonormal tangent frame at `p`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use serde::{Serialize, Serializer};

use crate::jet::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartedDomain {
    /// `[0, 2π)` with periodic identification.
    Circle,
    /// `[0, 2π)^2` with periodic identification.
    Torus,
    /// Unit vectors in `R^3` with `p ~ -p`.
    ProjectivePlane,
}

/// Canonical coordinates of a domain point: angles in `[0, 2π)` or a unit
/// vector with the representative chosen in the lower hemisphere.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPoint(pub Vec<f64>);

impl Serialize for DomainPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl DomainPoint {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// Grid of sample points used for seeding searches.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub points: Vec<DomainPoint>,
    /// Number of samples along each grid axis (`ny = 1` for curves).
    pub nx: usize,
    pub ny: usize,
    /// Whether the grid wraps around along each axis.
    pub periodic: [bool; 2],
    /// Approximate spacing in chart units.
    pub spacing: f64,
}

impl SampleGrid {
    pub fn at(&self, i: usize, j: usize) -> &DomainPoint {
        &self.points[j * self.nx + i]
    }

    /// Grid cells as quadruples of indices `(i, j)` of their corners
    /// (counter-clockwise), honouring periodicity.
    pub fn cells(&self) -> Vec<[(usize, usize); 4]> {
        let cx = if self.periodic[0] { self.nx } else { self.nx - 1 };
        let cy = if self.periodic[1] { self.ny } else { self.ny.saturating_sub(1) };
        let mut out = Vec::with_capacity(cx * cy);
        for j in 0..cy {
            for i in 0..cx {
                let i1 = (i + 1) % self.nx;
                let j1 = (j + 1) % self.ny;
                out.push([(i, j), (i1, j), (i1, j1), (i, j1)]);
            }
        }
        out
    }
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

fn wrap_diff(d: f64) -> f64 {
    let w = (d + std::f64::consts::PI).rem_euclid(TAU) - std::f64::consts::PI;
    if w < -std::f64::consts::PI {
        w + TAU
    } else {
        w
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Orthonormal tangent frame at a unit vector.
fn tangent_frame(p: [f64; 3]) -> [[f64; 3]; 2] {
    let axis = if p[0].abs() <= p[1].abs() && p[0].abs() <= p[2].abs() {
        [1.0, 0.0, 0.0]
    } else if p[1].abs() <= p[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let e1 = cross(axis, p);
    let n = norm3(e1);
    let e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    let e2 = cross(p, e1);
    [e1, e2]
}

fn as3(p: &DomainPoint) -> [f64; 3] {
    [p.0[0], p.0[1], p.0[2]]
}

impl ChartedDomain {
    /// Manifold dimension `n`.
    pub fn dim(&self) -> usize {
        match self {
            ChartedDomain::Circle => 1,
            ChartedDomain::Torus | ChartedDomain::ProjectivePlane => 2,
        }
    }

    /// Number of stored coordinates per point.
    pub fn coord_len(&self) -> usize {
        match self {
            ChartedDomain::Circle => 1,
            ChartedDomain::Torus => 2,
            ChartedDomain::ProjectivePlane => 3,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        match self {
            ChartedDomain::Circle | ChartedDomain::Torus => 0,
            ChartedDomain::ProjectivePlane => 1,
        }
    }

    pub fn canonicalize(&self, coords: &[f64]) -> DomainPoint {
        match self {
            ChartedDomain::Circle | ChartedDomain::Torus => {
                DomainPoint(coords.iter().map(|&a| wrap_angle(a)).collect())
            }
            ChartedDomain::ProjectivePlane => {
                let v = [coords[0], coords[1], coords[2]];
                let n = norm3(v);
                let mut u = [v[0] / n, v[1] / n, v[2] / n];
                // Lower hemisphere representative; ties broken on y then x.
                let flip = if u[2].abs() > 1e-15 {
                    u[2] > 0.0
                } else if u[1].abs() > 1e-15 {
                    u[1] > 0.0
                } else {
                    u[0] > 0.0
                };
                if flip {
                    u = [-u[0], -u[1], -u[2]];
                }
                DomainPoint(u.to_vec())
            }
        }
    }

    /// Ambient coordinates (the ones the model evaluators read) of
    /// `chart(p, local)`.
    pub fn chart<S: Scalar>(&self, p: &DomainPoint, local: &[S]) -> Vec<S> {
        match self {
            ChartedDomain::Circle | ChartedDomain::Torus => p
                .0
                .iter()
                .zip(local)
                .map(|(&c, &y)| S::constant(c) + y)
                .collect(),
            ChartedDomain::ProjectivePlane => {
                let base = as3(p);
                let [e1, e2] = tangent_frame(base);
                let v: Vec<S> = (0..3)
                    .map(|c| S::constant(base[c]) + local[0].scale(e1[c]) + local[1].scale(e2[c]))
                    .collect();
                let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                v.into_iter().map(|x| x / n).collect()
            }
        }
    }

    /// The point with chart coordinates `step` around `p`, canonicalized.
    pub fn retract(&self, p: &DomainPoint, step: &[f64]) -> DomainPoint {
        let ambient = self.chart::<f64>(p, step);
        self.canonicalize(&ambient)
    }

    /// Chart coordinates of `q` in the chart centred at `p` (inverse of
    /// [`ChartedDomain::retract`] for nearby points).
    pub fn log(&self, p: &DomainPoint, q: &DomainPoint) -> Vec<f64> {
        match self {
            ChartedDomain::Circle | ChartedDomain::Torus => {
                p.0.iter().zip(&q.0).map(|(a, b)| wrap_diff(b - a)).collect()
            }
            ChartedDomain::ProjectivePlane => {
                let a = as3(p);
                let mut b = as3(q);
                let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
                if dot < 0.0 {
                    b = [-b[0], -b[1], -b[2]];
                }
                let dot = dot.abs().max(1e-12);
                let [e1, e2] = tangent_frame(a);
                let y1 = (e1[0] * b[0] + e1[1] * b[1] + e1[2] * b[2]) / dot;
                let y2 = (e2[0] * b[0] + e2[1] * b[1] + e2[2] * b[2]) / dot;
                vec![y1, y2]
            }
        }
    }

    /// Intrinsic-ish distance: wrapped Euclidean for angles, the angle
    /// between lines for the projective plane.
    pub fn distance(&self, p: &DomainPoint, q: &DomainPoint) -> f64 {
        match self {
            ChartedDomain::Circle | ChartedDomain::Torus => p
                .0
                .iter()
                .zip(&q.0)
                .map(|(a, b)| wrap_diff(b - a).powi(2))
                .sum::<f64>()
                .sqrt(),
            ChartedDomain::ProjectivePlane => {
                let a = as3(p);
                let b = as3(q);
                let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs().min(1.0);
                let c = cross(a, b);
                norm3(c).atan2(dot)
            }
        }
    }

    /// Lexicographic order on canonical coordinates, treating coordinates
    /// within `1e-9` as equal.
    pub fn compare(&self, p: &DomainPoint, q: &DomainPoint) -> Ordering {
        for (a, b) in p.0.iter().zip(&q.0) {
            if (a - b).abs() > 1e-9 {
                return a.partial_cmp(b).unwrap_or(Ordering::Equal);
            }
        }
        Ordering::Equal
    }

    /// Sample grid with `n` points per axis.
    pub fn grid(&self, n: usize) -> SampleGrid {
        match self {
            ChartedDomain::Circle => SampleGrid {
                points: (0..n).map(|i| DomainPoint(vec![TAU * i as f64 / n as f64])).collect(),
                nx: n,
                ny: 1,
                periodic: [true, false],
                spacing: TAU / n as f64,
            },
            ChartedDomain::Torus => {
                let mut points = Vec::with_capacity(n * n);
                for j in 0..n {
                    for i in 0..n {
                        points.push(DomainPoint(vec![TAU * i as f64 / n as f64, TAU * j as f64 / n as f64]));
                    }
                }
                SampleGrid { points, nx: n, ny: n, periodic: [true, true], spacing: TAU / n as f64 }
            }
            ChartedDomain::ProjectivePlane => {
                // Concentric square-to-disk map, then the disk onto the lower
                // hemisphere by inverse stereographic projection.
                let m = n + 1;
                let mut points = Vec::with_capacity(m * m);
                for j in 0..m {
                    for i in 0..m {
                        let a = -1.0 + 2.0 * i as f64 / n as f64;
                        let b = -1.0 + 2.0 * j as f64 / n as f64;
                        let (u, v) = square_to_disk(a, b);
                        let w2 = u * u + v * v;
                        let p = [2.0 * u, 2.0 * v, w2 - 1.0];
                        points.push(self.canonicalize(&[p[0] / (1.0 + w2), p[1] / (1.0 + w2), p[2] / (1.0 + w2)]));
                    }
                }
                SampleGrid { points, nx: m, ny: m, periodic: [false, false], spacing: FRAC_PI_2 * 2.0 / n as f64 }
            }
        }
    }
}

fn square_to_disk(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 && b == 0.0 {
        return (0.0, 0.0);
    }
    let (r, phi) = if a.abs() > b.abs() {
        (a, FRAC_PI_4 * (b / a))
    } else {
        (b, FRAC_PI_2 - FRAC_PI_4 * (a / b))
    };
    (r * phi.cos(), r * phi.sin())
}
