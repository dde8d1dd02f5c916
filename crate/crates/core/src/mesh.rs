//! Triangulated images of surface models, used only to seed Newton.

use std::collections::{BTreeSet, HashMap};

use crate::domain::{DomainPoint, SampleGrid};
use crate::prim_map::PrimMapModel;

type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Möller–Trumbore: the segment `p0 + s (p1 - p0)`, `s ∈ [0, 1]`, against
/// a triangle; returns `(s, u, v)` with the hit at `(1-u-v) t0 + u t1 + v t2`.
pub fn segment_triangle(p0: V3, p1: V3, tri: [V3; 3]) -> Option<(f64, f64, f64)> {
    let dir = sub(p1, p0);
    let e1 = sub(tri[1], tri[0]);
    let e2 = sub(tri[2], tri[0]);
    let pv = cross(dir, e2);
    let det = dot(e1, pv);
    let scale = (dot(dir, dir) * dot(e1, e1) * dot(e2, e2)).sqrt();
    if det.abs() <= 1e-14 * scale {
        return None;
    }
    let inv = 1.0 / det;
    let tv = sub(p0, tri[0]);
    let u = dot(tv, pv) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let qv = cross(tv, e1);
    let v = dot(dir, qv) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let s = dot(e2, qv) * inv;
    if !(0.0..=1.0).contains(&s) {
        return None;
    }
    Some((s, u, v))
}

/// A point where two triangles meet, with barycentric coordinates on both.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub pos: V3,
    pub bary_a: V3,
    pub bary_b: V3,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub verts: Vec<DomainPoint>,
    pub pos: Vec<V3>,
    pub tris: Vec<[usize; 3]>,
    pub centroids: Vec<DomainPoint>,
    /// Typical domain distance between neighbouring vertices.
    pub spacing: f64,
    cell: f64,
    buckets: HashMap<[i64; 3], Vec<usize>>,
}

impl Mesh {
    pub fn build(model: &PrimMapModel, grid: &SampleGrid) -> Self {
        let verts = grid.points.clone();
        let pos: Vec<V3> = verts
            .iter()
            .map(|p| {
                let g = model.eval(p);
                [g[0], g[1], g[2]]
            })
            .collect();
        let mut tris = Vec::new();
        for cell in grid.cells() {
            let idx: Vec<usize> = cell.iter().map(|&(i, j)| j * grid.nx + i).collect();
            tris.push([idx[0], idx[1], idx[2]]);
            tris.push([idx[0], idx[2], idx[3]]);
        }
        let mut longest: f64 = 0.0;
        for t in &tris {
            for k in 0..3 {
                let d = sub(pos[t[k]], pos[t[(k + 1) % 3]]);
                longest = longest.max(dot(d, d).sqrt());
            }
        }
        let cell = longest.max(1e-9);
        let mut mesh = Self {
            centroids: Vec::with_capacity(tris.len()),
            verts,
            pos,
            tris,
            spacing: grid.spacing,
            cell,
            buckets: HashMap::new(),
        };
        for t in 0..mesh.tris.len() {
            let c = mesh.domain_point(model, t, [1.0 / 3.0; 3]);
            mesh.centroids.push(c);
            let (lo, hi) = mesh.tri_box(t);
            for key in mesh.keys(lo, hi) {
                mesh.buckets.entry(key).or_default().push(t);
            }
        }
        mesh
    }

    pub fn corners(&self, t: usize) -> [V3; 3] {
        let [a, b, c] = self.tris[t];
        [self.pos[a], self.pos[b], self.pos[c]]
    }

    fn tri_box(&self, t: usize) -> (V3, V3) {
        let c = self.corners(t);
        let mut lo = c[0];
        let mut hi = c[0];
        for p in &c[1..] {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    fn keys(&self, lo: V3, hi: V3) -> Vec<[i64; 3]> {
        let q = |x: f64| (x / self.cell).floor() as i64;
        let mut out = Vec::new();
        for i in q(lo[0])..=q(hi[0]) {
            for j in q(lo[1])..=q(hi[1]) {
                for k in q(lo[2])..=q(hi[2]) {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    /// Triangles whose bucket overlaps the box spanned by two points.
    pub fn near_segment(&self, p0: V3, p1: V3) -> Vec<usize> {
        let lo = [p0[0].min(p1[0]), p0[1].min(p1[1]), p0[2].min(p1[2])];
        let hi = [p0[0].max(p1[0]), p0[1].max(p1[1]), p0[2].max(p1[2])];
        let mut set = BTreeSet::new();
        for key in self.keys(lo, hi) {
            if let Some(list) = self.buckets.get(&key) {
                set.extend(list.iter().copied());
            }
        }
        set.into_iter().collect()
    }

    /// Domain point at barycentric coordinates on triangle `t`.
    pub fn domain_point(&self, model: &PrimMapModel, t: usize, bary: V3) -> DomainPoint {
        let [a, b, c] = self.tris[t];
        let base = &self.verts[a];
        let lb = model.domain.log(base, &self.verts[b]);
        let lc = model.domain.log(base, &self.verts[c]);
        let step: Vec<f64> = (0..lb.len()).map(|k| bary[1] * lb[k] + bary[2] * lc[k]).collect();
        model.domain.retract(base, &step)
    }

    /// Pairs of triangles whose images cross, skipping pairs closer than
    /// `min_sep` in the domain.
    pub fn crossing_pairs(&self, model: &PrimMapModel, min_sep: f64) -> Vec<(usize, usize, Vec<Crossing>)> {
        let mut pairs = BTreeSet::new();
        for list in self.buckets.values() {
            for (x, &a) in list.iter().enumerate() {
                for &b in &list[x + 1..] {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
        let mut out = Vec::new();
        for (a, b) in pairs {
            if model.domain.distance(&self.centroids[a], &self.centroids[b]) < min_sep {
                continue;
            }
            let pts = self.triangle_crossing(a, b);
            if !pts.is_empty() {
                out.push((a, b, pts));
            }
        }
        out
    }

    fn triangle_crossing(&self, a: usize, b: usize) -> Vec<Crossing> {
        let ta = self.corners(a);
        let tb = self.corners(b);
        let mut pts = Vec::new();
        for (first, second, swap) in [(ta, tb, false), (tb, ta, true)] {
            for k in 0..3 {
                let (i, j) = (k, (k + 1) % 3);
                if let Some((s, u, v)) = segment_triangle(first[i], first[j], second) {
                    let mut on_edge = [0.0; 3];
                    on_edge[i] = 1.0 - s;
                    on_edge[j] = s;
                    let on_tri = [1.0 - u - v, u, v];
                    let d = sub(first[j], first[i]);
                    let pos = [first[i][0] + s * d[0], first[i][1] + s * d[1], first[i][2] + s * d[2]];
                    let (bary_a, bary_b) = if swap { (on_tri, on_edge) } else { (on_edge, on_tri) };
                    pts.push(Crossing { pos, bary_a, bary_b });
                }
            }
        }
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_hits_triangle() {
        let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let hit = segment_triangle([0.25, 0.25, -1.0], [0.25, 0.25, 1.0], tri).unwrap();
        assert!((hit.0 - 0.5).abs() < 1e-15 && (hit.1 - 0.25).abs() < 1e-15 && (hit.2 - 0.25).abs() < 1e-15);
        assert!(segment_triangle([0.8, 0.8, -1.0], [0.8, 0.8, 1.0], tri).is_none());
        assert!(segment_triangle([0.25, 0.25, 0.5], [0.25, 0.25, 1.0], tri).is_none());
    }
}
