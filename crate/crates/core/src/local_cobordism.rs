//! Explicit pairs `(u, v)` with `u ∈ Σ^{1_j}(F)` and `F(u) = F(v)`.
//!
//! For every polynomial `p = p_i` split `p = q + h` where `h` is the known
//! high part (slots `m >= j + 2`, plus the leading `t^{r+1}` for `i = 0`)
//! and `q` carries the unknown slots `1..=j+1`. The derivative conditions fix
//! the Taylor coefficients of `q` at `tu` up to order `j`, the value
//! condition `p(tu) = p(tv)` fixes the top one, and `q(0) = 0` fixes the
//! constant of the expansion. Interior points satisfy `tv > tu`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::normal_form::{stratum_membership, NormalFormSpec, SourcePoint};
use crate::poly::{int, rat_to_f64, Rational, RationalPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSolution {
    pub spec: NormalFormSpec,
    pub j: usize,
    pub tu: Rational,
    pub tv: Rational,
    /// Singular point, `u ∈ Σ^{1_j}(F)`.
    pub u: SourcePoint,
    /// Companion point with `F(v) = F(u)`; same `y` and `s` blocks as `u`.
    pub v: SourcePoint,
}

impl PairSolution {
    /// Coefficients in canonical slot order.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.u.y_flat()
    }

    /// Every defining residual: `p_i^{(m)}(tu)` for `1 <= m <= j` and
    /// `p_i(tu) - p_i(tv)`, for every `i`. All are exactly zero for a valid
    /// solution.
    pub fn residuals(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for p in self.u.polys(&self.spec) {
            for m in 1..=self.j {
                out.push(p.derivative(m).eval(&self.tu));
            }
            out.push(p.eval(&self.tu) - p.eval(&self.tv));
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.tv > self.tu && self.residuals().iter().all(Zero::is_zero)
    }
}

fn factorials(n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for m in 1..=n {
        let next = &out[m - 1] * int(m as i64);
        out.push(next);
    }
    out
}

/// Known high part of `p_i` for level `j`: slots `m >= j + 2` taken from
/// `high`, plus `t^{r+1}` for `i = 0`.
fn high_part(spec: &NormalFormSpec, i: usize, j: usize, high: &[((usize, usize), Rational)]) -> RationalPoly {
    let mut coeffs = vec![Rational::zero(); spec.r + 2];
    for ((hi, m), v) in high {
        if *hi == i && *m >= j + 2 {
            coeffs[*m] = v.clone();
        }
    }
    if i == 0 {
        coeffs[spec.r + 1] = Rational::one();
    }
    RationalPoly::new(coeffs)
}

/// Closed form for the top unknown coefficient `λ_{j+1}`:
///
/// `λ_{j+1} = (tv - tu)^{-(j+1)} [h(tu) - h(tv) - Σ_{m=1}^{j} q^{(m)}(tu) (tv - tu)^m / m!]`
/// with `q^{(m)}(tu) = -h^{(m)}(tu)`.
pub fn top_unknown_coefficient(h: &RationalPoly, j: usize, tu: &Rational, tv: &Rational) -> Rational {
    let fact = factorials(j + 1);
    let gap = tv - tu;
    let mut bracket = h.eval(tu) - h.eval(tv);
    let mut gap_pow = Rational::one();
    for m in 1..=j {
        gap_pow *= &gap;
        let qm = -h.derivative(m).eval(tu);
        bracket -= qm * &gap_pow / &fact[m];
    }
    gap_pow *= &gap;
    bracket / gap_pow
}

/// Low part `q` reconstructed from its Taylor expansion at `tu`, with the
/// constant pinned by `q(0) = 0`.
fn reconstruct_low_part(h: &RationalPoly, j: usize, tu: &Rational, top: &Rational) -> RationalPoly {
    let fact = factorials(j + 1);
    // Coefficients in the shifted variable s = t - tu.
    let mut shifted = vec![Rational::zero(); j + 2];
    for m in 1..=j {
        shifted[m] = -h.derivative(m).eval(tu) / &fact[m];
    }
    shifted[j + 1] = top.clone();
    let q = RationalPoly::new(shifted).taylor_shift(&(-tu));
    &q - &RationalPoly::constant(q.eval(&Rational::zero()))
}

/// Solves for the pair at level `j < r - 1` given `tu < tv` and the high
/// block (`y(i, m)` for `m >= j + 2`, canonical slot order).
pub fn solve_pair(
    spec: &NormalFormSpec,
    j: usize,
    tu: &Rational,
    tv: &Rational,
    high: &[Rational],
) -> Result<PairSolution> {
    if j + 1 >= spec.r {
        return Err(Error::UseSolvePairTop);
    }
    if tv <= tu {
        return Err(Error::OutsideHalfSpace);
    }
    let high_slots = spec.slots_from(j + 2);
    if high.len() != high_slots.len() {
        return Err(Error::contract(format!(
            "expected {} high coefficients for level {j}, got {}",
            high_slots.len(),
            high.len()
        )));
    }
    let assigned: Vec<((usize, usize), Rational)> = high_slots.into_iter().zip(high.iter().cloned()).collect();
    let mut u = SourcePoint::zero(spec);
    for ((i, m), v) in &assigned {
        u.set_y(*i, *m, v.clone());
    }
    for i in 0..=spec.k {
        let h = high_part(spec, i, j, &assigned);
        let top = top_unknown_coefficient(&h, j, tu, tv);
        let q = reconstruct_low_part(&h, j, tu, &top);
        debug_assert!(q.degree().is_none_or(|d| d <= j + 1));
        for m in 1..=j + 1 {
            u.set_y(i, m, q.coeff(m));
        }
    }
    u.t = tu.clone();
    let mut v = u.clone();
    v.t = tv.clone();
    Ok(PairSolution { spec: *spec, j, tu: tu.clone(), tv: tv.clone(), u, v })
}

/// Level `j = r - 1`: the only parameter is `tv > 0`. All `p_i` with
/// `i >= 1` vanish, `tu = -tv / r`, and
/// `p_0(t) = p_0(tu) + (t + r tu)(t - tu)^r` with `p_0(0) = 0`.
pub fn solve_pair_top(spec: &NormalFormSpec, tv: &Rational) -> Result<PairSolution> {
    if !tv.is_positive() {
        return Err(Error::OutsideHalfSpace);
    }
    let r = spec.r;
    let tu = -tv / int(r as i64);
    let mut w = RationalPoly::new(vec![&tu * int(r as i64), Rational::one()]);
    let root = RationalPoly::new(vec![-tu.clone(), Rational::one()]);
    for _ in 0..r {
        w = &w * &root;
    }
    let p0 = &w - &RationalPoly::constant(w.eval(&Rational::zero()));
    debug_assert!(p0.coeff(r).is_zero());
    debug_assert!(p0.coeff(r + 1).is_one());
    let mut u = SourcePoint::zero(spec);
    for m in 1..r {
        u.set_y(0, m, p0.coeff(m));
    }
    u.t = tu.clone();
    let mut v = u.clone();
    v.t = tv.clone();
    Ok(PairSolution { spec: *spec, j: r - 1, tu, tv: tv.clone(), u, v })
}

/// One sample along a path approaching the boundary of the half-space.
#[derive(Clone, Debug)]
pub struct PathStep {
    pub tu: Rational,
    pub tv: Rational,
    pub high: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceStep {
    pub gap: f64,
    /// Euclidean distance between coefficient vectors.
    pub distance: f64,
    /// `max_i |p_i^{(j+1)}(tu)|` at this step.
    pub next_derivative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub steps: Vec<ConvergenceStep>,
    /// Distance from the two-point Richardson extrapolation (gap -> 0) to
    /// the limit point's coefficients.
    pub extrapolated_distance: f64,
    pub limit_in_next_stratum: bool,
    pub monotone: bool,
    pub passes: bool,
}

/// Gap at which the distance must already be below tolerance.
pub const BOUNDARY_GAP: f64 = 1e-4;
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;

/// Follows a path with `tv - tu` shrinking and checks that the solved
/// coefficients converge to those of `limit` and that `limit` lies on
/// `Σ^{1_{j+1}}`. At level `j = r - 1` each step is solved with
/// [`solve_pair_top`] from its `tv` alone.
pub fn boundary_limit_check(
    spec: &NormalFormSpec,
    j: usize,
    path: &[PathStep],
    limit: &SourcePoint,
) -> Result<ConvergenceReport> {
    if path.is_empty() {
        return Err(Error::contract("empty boundary path"));
    }
    if !limit.conforms_to(spec) {
        return Err(Error::contract("limit point does not conform to the normal form"));
    }
    let expected_high = spec.slots_from(j + 2).len();
    let target: Vec<f64> = limit.y_flat().iter().map(rat_to_f64).collect();
    let mut steps = Vec::with_capacity(path.len());
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(path.len());
    for step in path {
        let sol = if j + 1 == spec.r {
            solve_pair_top(spec, &step.tv)?
        } else {
            if step.high.len() != expected_high {
                return Err(Error::contract("inconsistent path: high block does not match level"));
            }
            solve_pair(spec, j, &step.tu, &step.tv, &step.high)?
        };
        let coeffs: Vec<f64> = sol.coefficients().iter().map(rat_to_f64).collect();
        let distance = euclid(&coeffs, &target);
        let next_derivative = sol
            .u
            .polys(spec)
            .iter()
            .map(|p| rat_to_f64(&p.derivative(j + 1).eval(&sol.tu).abs()))
            .fold(0.0, f64::max);
        steps.push(ConvergenceStep { gap: rat_to_f64(&(&sol.tv - &sol.tu)), distance, next_derivative });
        vectors.push(coeffs);
    }
    let monotone = steps.windows(2).all(|w| w[1].distance <= w[0].distance * (1.0 + 1e-12) + 1e-300);
    let extrapolated = match vectors.len() {
        1 => vectors[0].clone(),
        n => {
            let (g0, g1) = (steps[n - 2].gap, steps[n - 1].gap);
            let w = if (g0 - g1).abs() > 0.0 { g1 / (g0 - g1) } else { 0.0 };
            vectors[n - 1]
                .iter()
                .zip(&vectors[n - 2])
                .map(|(a, b)| a + (a - b) * w)
                .collect()
        }
    };
    let extrapolated_distance = euclid(&extrapolated, &target);
    let limit_in_next_stratum = j < spec.r && stratum_membership(spec, limit, j + 1)?;
    let reached = steps
        .iter()
        .position(|s| s.gap <= BOUNDARY_GAP)
        .is_some_and(|first| steps[first..].iter().all(|s| s.distance <= BOUNDARY_TOLERANCE));
    let passes = monotone && reached && extrapolated_distance <= BOUNDARY_TOLERANCE && limit_in_next_stratum;
    Ok(ConvergenceReport { steps, extrapolated_distance, limit_in_next_stratum, monotone, passes })
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// The path `tv = 2^{-n}`, `n = 1..=steps`, used for the top level.
pub fn dyadic_top_path(spec: &NormalFormSpec, steps: u32) -> Vec<PathStep> {
    (1..=steps)
        .map(|n| {
            let tv = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(n));
            PathStep { tu: -&tv / int(spec.r as i64), tv, high: Vec::new() }
        })
        .collect()
}
