//! The Morin prim normal form
//!
//! ```text
//! F(t, y, s) = (p_0(t), p_1(t), ..., p_k(t), y, s)
//! p_0(t) = t^{r+1} + y(0,r-1) t^{r-1} + ... + y(0,1) t
//! p_i(t) = y(i,r) t^r + ... + y(i,1) t            (1 <= i <= k)
//! ```
//!
//! and its lift `G = (F, t)`. The distinguished variable `t` is a standalone
//! source coordinate; the slot `y(0, r)` does not exist, which is what makes
//! `p_0` free of a `t^r` term. With this reading the source has dimension
//! `r(k+1) + z` and `F` has `1 + k + r(k+1) - 1 + z` target coordinates.
//!
//! Coefficient slots are always enumerated `i`-major, `m` ascending
//! (see [`NormalFormSpec::slots`]); that order is used for the `y` block of
//! target points and for every flat coefficient list accepted here.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{cauchy_window, int, rat_to_f64, Rational, RationalPoly};

/// Shape of a normal form: multiplicity index `r`, codimension `k`,
/// residual dimension `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalFormSpec {
    pub r: usize,
    pub k: usize,
    pub z: usize,
}

impl NormalFormSpec {
    pub fn new(r: usize, k: usize, z: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::contract("normal form needs r >= 1"));
        }
        Ok(Self { r, k, z })
    }

    /// `n = r(k+1) + z`.
    pub fn source_dim(&self) -> usize {
        self.r * (self.k + 1) + self.z
    }

    /// Number of coordinates of `F`: `1 + k + (r(k+1) - 1) + z`.
    pub fn target_dim(&self) -> usize {
        1 + self.k + self.slot_count() + self.z
    }

    pub fn lift_dim(&self) -> usize {
        self.target_dim() + 1
    }

    /// `r(k+1) - 1` coefficient slots.
    pub fn slot_count(&self) -> usize {
        self.r * (self.k + 1) - 1
    }

    /// Highest coefficient index present for polynomial `i`.
    pub fn top_index(&self, i: usize) -> usize {
        if i == 0 {
            self.r - 1
        } else {
            self.r
        }
    }

    /// All `(i, m)` slots in canonical order.
    pub fn slots(&self) -> Vec<(usize, usize)> {
        (0..=self.k)
            .flat_map(|i| (1..=self.top_index(i)).map(move |m| (i, m)))
            .collect()
    }

    /// Slots with `m >= from`, in canonical order.
    pub fn slots_from(&self, from: usize) -> Vec<(usize, usize)> {
        self.slots().into_iter().filter(|&(_, m)| m >= from).collect()
    }

    /// Free parameters of the `Σ^{1_j}` parametrization: `t`, `s` and the
    /// slots with `m > j`.
    pub fn stratum_param_count(&self, j: usize) -> usize {
        1 + self.z + self.slots_from(j + 1).len()
    }
}

/// A point of the source chart with exact coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourcePoint {
    pub t: Rational,
    /// `y[i][m-1]`; row 0 has `r - 1` entries, the others `r`.
    y: Vec<Vec<Rational>>,
    pub s: Vec<Rational>,
}

impl SourcePoint {
    pub fn zero(spec: &NormalFormSpec) -> Self {
        Self {
            t: Rational::zero(),
            y: (0..=spec.k)
                .map(|i| vec![Rational::zero(); spec.top_index(i)])
                .collect(),
            s: vec![Rational::zero(); spec.z],
        }
    }

    /// Builds a point from a flat coefficient list in canonical slot order.
    pub fn from_flat(spec: &NormalFormSpec, t: Rational, y_flat: &[Rational], s: &[Rational]) -> Result<Self> {
        if y_flat.len() != spec.slot_count() {
            return Err(Error::contract(format!(
                "expected {} y coordinates, got {}",
                spec.slot_count(),
                y_flat.len()
            )));
        }
        if s.len() != spec.z {
            return Err(Error::contract(format!("expected {} s coordinates, got {}", spec.z, s.len())));
        }
        let mut x = Self::zero(spec);
        x.t = t;
        for (&(i, m), v) in spec.slots().iter().zip(y_flat) {
            x.y[i][m - 1] = v.clone();
        }
        x.s = s.to_vec();
        Ok(x)
    }

    pub fn y(&self, i: usize, m: usize) -> &Rational {
        &self.y[i][m - 1]
    }

    pub fn set_y(&mut self, i: usize, m: usize, value: Rational) {
        self.y[i][m - 1] = value;
    }

    /// The `y` block in canonical slot order.
    pub fn y_flat(&self) -> Vec<Rational> {
        self.y.iter().flatten().cloned().collect()
    }

    pub fn conforms_to(&self, spec: &NormalFormSpec) -> bool {
        self.y.len() == spec.k + 1
            && self
                .y
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == spec.top_index(i))
            && self.s.len() == spec.z
    }

    fn check(&self, spec: &NormalFormSpec) -> Result<()> {
        if self.conforms_to(spec) {
            Ok(())
        } else {
            Err(Error::contract(format!(
                "source point does not conform to normal form (r={}, k={}, z={})",
                spec.r, spec.k, spec.z
            )))
        }
    }

    /// `p_i` as a polynomial in `t`.
    pub fn poly(&self, spec: &NormalFormSpec, i: usize) -> RationalPoly {
        let mut coeffs = vec![Rational::zero(); spec.r + 2];
        for (m, c) in self.y[i].iter().enumerate() {
            coeffs[m + 1] = c.clone();
        }
        if i == 0 {
            coeffs[spec.r + 1] = Rational::one();
        }
        RationalPoly::new(coeffs)
    }

    pub fn polys(&self, spec: &NormalFormSpec) -> Vec<RationalPoly> {
        (0..=spec.k).map(|i| self.poly(spec, i)).collect()
    }
}

/// A point of the target of `F` (or of `G`, one coordinate longer).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetPoint {
    pub values: Vec<Rational>,
}

pub fn eval_normal_form(spec: &NormalFormSpec, x: &SourcePoint) -> Result<TargetPoint> {
    x.check(spec)?;
    let mut values: Vec<Rational> = x.polys(spec).iter().map(|p| p.eval(&x.t)).collect();
    values.extend(x.y_flat());
    values.extend(x.s.iter().cloned());
    debug_assert_eq!(values.len(), spec.target_dim());
    Ok(TargetPoint { values })
}

/// `G(x) = (F(x), t)`: the height is the last coordinate.
pub fn eval_lift(spec: &NormalFormSpec, x: &SourcePoint) -> Result<TargetPoint> {
    let mut target = eval_normal_form(spec, x)?;
    target.values.push(x.t.clone());
    Ok(target)
}

/// `x ∈ Σ^{1_j}(F)` (closure sense): every `p_i^{(m)}(t)` vanishes for
/// `1 <= m <= j`.
pub fn stratum_membership(spec: &NormalFormSpec, x: &SourcePoint, j: usize) -> Result<bool> {
    x.check(spec)?;
    if j > spec.r {
        return Err(Error::StratumEmpty);
    }
    if j == 0 {
        return Err(Error::contract("stratum level starts at 1"));
    }
    Ok(x.polys(spec)
        .iter()
        .all(|p| (1..=j).all(|m| p.derivative(m).eval(&x.t).is_zero())))
}

/// Free parameters of a `Σ^{1_j}` point.
#[derive(Clone, Debug)]
pub struct StratumParams {
    pub t: Rational,
    pub s: Vec<Rational>,
    /// Values of `y(i, m)` for `m > j`, canonical slot order.
    pub high: Vec<Rational>,
}

/// Solves the lower coefficients `y(i, m)`, `m <= j`, so that the result
/// lies on `Σ^{1_j}`. Each `p_i^{(m)}(t) = 0` is linear in `y(i, m)` with
/// coefficient `m!` once the higher slots are known, so the system is solved
/// top-down.
pub fn stratum_parametrize(spec: &NormalFormSpec, j: usize, params: &StratumParams) -> Result<SourcePoint> {
    if j == 0 || j >= spec.r {
        return Err(Error::contract(format!(
            "stratum_parametrize needs 1 <= j < r (got j={j}, r={}); use top_stratum_point for j = r",
            spec.r
        )));
    }
    let high_slots = spec.slots_from(j + 1);
    if params.high.len() != high_slots.len() {
        return Err(Error::contract(format!(
            "expected {} high coefficients, got {}",
            high_slots.len(),
            params.high.len()
        )));
    }
    if params.s.len() != spec.z {
        return Err(Error::contract(format!("expected {} s coordinates, got {}", spec.z, params.s.len())));
    }
    let mut x = SourcePoint::zero(spec);
    x.t = params.t.clone();
    x.s = params.s.clone();
    for (&(i, m), v) in high_slots.iter().zip(&params.high) {
        x.set_y(i, m, v.clone());
    }
    for i in 0..=spec.k {
        let mut factorial = Rational::one();
        let facts: Vec<Rational> = (0..=j)
            .map(|m| {
                if m > 0 {
                    factorial *= int(m as i64);
                }
                factorial.clone()
            })
            .collect();
        for m in (1..=j).rev() {
            // y(i, m) is still zero here, so this is the rest of the equation.
            let rest = x.poly(spec, i).derivative(m).eval(&x.t);
            x.set_y(i, m, -rest / &facts[m]);
        }
    }
    Ok(x)
}

/// The only `Σ^{1_r}` points: `t = 0`, `y ≡ 0`, arbitrary `s`.
pub fn top_stratum_point(spec: &NormalFormSpec, s: &[Rational]) -> Result<SourcePoint> {
    if s.len() != spec.z {
        return Err(Error::contract(format!("expected {} s coordinates, got {}", spec.z, s.len())));
    }
    let mut x = SourcePoint::zero(spec);
    x.s = s.to_vec();
    Ok(x)
}

/// One real solution of `F(x) = F(x0)`.
#[derive(Clone, Debug)]
pub struct FiberSolution {
    /// Isolating interval for the `t` coordinate.
    pub t_lo: Rational,
    pub t_hi: Rational,
    pub t_value: f64,
    /// Multiplicity as a root of `gcd_m (p_m - p_m(t0))`.
    pub multiplicity: usize,
    /// The exact point when `t` is rational.
    pub exact: Option<SourcePoint>,
}

/// All real solutions of `F(x) = F(x0)`.
///
/// Equal images force equal `y` and `s` blocks, so the fiber is cut out by
/// the common real roots of `p_m(t) - p_m(t0)`, `0 <= m <= k`. Those are the
/// real roots of the exact gcd of these polynomials; `p_0` is monic of
/// degree `r+1`, so the gcd is never the zero polynomial.
pub fn solve_fiber(spec: &NormalFormSpec, x0: &SourcePoint) -> Result<Vec<FiberSolution>> {
    x0.check(spec)?;
    let polys = x0.polys(spec);
    let shifted: Vec<RationalPoly> = polys
        .iter()
        .map(|p| p - &RationalPoly::constant(p.eval(&x0.t)))
        .collect();
    let common = shifted
        .iter()
        .skip(1)
        .fold(shifted[0].clone(), |acc, p| acc.gcd(p));
    let (lo, hi) = cauchy_window(&shifted[0]);
    let roots = crate::poly::isolate_real_roots(&common, &lo, &hi)?;
    Ok(roots
        .into_iter()
        .map(|root| {
            let exact = root.exact.as_ref().map(|t| {
                let mut x = x0.clone();
                x.t = t.clone();
                x
            });
            FiberSolution {
                t_value: root.exact.as_ref().map_or(root.value, rat_to_f64),
                t_lo: root.lo,
                t_hi: root.hi,
                multiplicity: root.multiplicity,
                exact,
            }
        })
        .collect())
}
