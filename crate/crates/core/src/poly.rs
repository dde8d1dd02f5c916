//! Exact univariate polynomials over the rationals, plus real-root isolation.
//!
//! Coefficients are stored constant term first and kept in canonical form
//! (no trailing zeros; the zero polynomial has no coefficients). Every
//! arithmetic operation here is exact. Floating point only appears in the
//! refined root values reported by [`isolate_real_roots`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for exact rationals used throughout the crate.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: divide in floating point after scaling.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !whole_digits.chars().all(|c| c.is_ascii_digit())
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return None;
        }
        let digits = format!("{whole_digits}{frac}");
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn factorial(m: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=m {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// A univariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^degree`.
    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// Convenience constructor from integer coefficients, constant term first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rat_to_f64(c))
    }

    pub fn max_abs_coeff_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| rat_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The `m`-th formal derivative; `m = 0` returns a copy.
    pub fn derivative(&self, m: usize) -> Self {
        if m == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= m {
            return Self::zero();
        }
        let coeffs = (m..self.coeffs.len())
            .map(|i| {
                // i * (i-1) * ... * (i-m+1)
                let falling: BigInt = ((i - m + 1)..=i).map(BigInt::from).product();
                &self.coeffs[i] * BigRational::from_integer(falling)
            })
            .collect();
        Self::new(coeffs)
    }

    /// Returns `q` with `q(t) = p(t + c)`.
    pub fn taylor_shift(&self, c: &Rational) -> Self {
        if c.is_zero() || self.coeffs.len() <= 1 {
            return self.clone();
        }
        // Horner in the shifted variable: q = (...(a_n (t+c) + a_{n-1})(t+c) + ...)
        let shift = Self::new(vec![c.clone(), Rational::one()]);
        let mut acc = Self::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &shift) + &Self::constant(a.clone());
        }
        acc
    }

    /// Taylor coefficient `p^{(m)}(c) / m!`.
    pub fn taylor_coefficient(&self, c: &Rational, m: usize) -> Rational {
        self.derivative(m).eval(c) / factorial(m)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by the zero polynomial");
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + ddeg] / dlead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(ddeg);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // keep intermediate coefficients small
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `p = c * prod_m f_m^m` with each
    /// returned `(f_m, m)` square-free, monic, pairwise coprime and of
    /// positive degree.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative(1);
        let a0 = p.gcd(&dp);
        let mut b = p.div_rem(&a0).0;
        let mut c = dp.div_rem(&a0).0;
        let mut d = &c - &b.derivative(1);
        let mut m = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), m));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = &c - &b.derivative(1);
            m += 1;
        }
        out
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        let d = self.derivative(1);
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&mag))?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Free-function form of [`RationalPoly::derivative`].
pub fn derivative(p: &RationalPoly, m: usize) -> RationalPoly {
    p.derivative(m)
}

/// Free-function form of [`RationalPoly::taylor_shift`].
pub fn taylor_shift(p: &RationalPoly, c: &Rational) -> RationalPoly {
    p.taylor_shift(c)
}

/// Number of sign changes in a sequence, zeros skipped.
fn sign_variations(values: impl IntoIterator<Item = Rational>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for v in values {
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`,
/// computed with a Sturm chain.
pub fn sturm_count(sturm: &[RationalPoly], a: &Rational, b: &Rational) -> usize {
    let va = sign_variations(sturm.iter().map(|p| p.eval(a)));
    let vb = sign_variations(sturm.iter().map(|p| p.eval(b)));
    va.saturating_sub(vb)
}

/// Distinct real roots of `p` in the closed window `[lo, hi]`.
pub fn count_distinct_roots(p: &RationalPoly, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::IndeterminateRoots);
    }
    let sturm = p.sturm_sequence();
    let at_lo = usize::from(p.eval(lo).is_zero());
    Ok(sturm_count(&sturm, lo, hi) + at_lo)
}

/// How a reported root is certified on its isolating interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootCertificate {
    /// The root is the rational stored in [`IsolatedRoot::exact`].
    Exact,
    /// The square-free factor carrying the root changes sign strictly
    /// across the interval endpoints.
    SignChange,
}

/// One isolated real root.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub value: f64,
    pub multiplicity: usize,
    /// The exact value when the root is rational (and detected as such).
    pub exact: Option<Rational>,
    pub certificate: RootCertificate,
    /// The square-free factor of the input that vanishes at this root.
    pub factor: RationalPoly,
}

impl IsolatedRoot {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Isolates every distinct real root of `p` in `[lo, hi]`.
///
/// Roots come back sorted, with pairwise disjoint isolating intervals, a
/// multiplicity from the square-free decomposition and a floating value
/// refined until `|p(value)| <= 1e-12 * (1 + max|coeff|)` (or until the
/// interval collapses to adjacent doubles).
pub fn isolate_real_roots(p: &RationalPoly, lo: &Rational, hi: &Rational) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::IndeterminateRoots);
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    let mut roots = Vec::new();
    for (factor, multiplicity) in p.square_free_decomposition() {
        let sturm = factor.sturm_sequence();
        let mut pending = Vec::new();
        if factor.eval(lo).is_zero() {
            roots.push(exact_root(&factor, lo.clone(), multiplicity));
        }
        pending.push((lo.clone(), hi.clone()));
        while let Some((a, b)) = pending.pop() {
            let count = sturm_count(&sturm, &a, &b);
            match count {
                0 => {}
                1 => roots.push(isolated_root(&factor, a, b, multiplicity)),
                _ => {
                    let mid = (&a + &b) / int(2);
                    pending.push((mid.clone(), b));
                    pending.push((a, mid));
                }
            }
        }
    }
    roots.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    separate_intervals(&mut roots);
    let tol = 1e-12 * (1.0 + p.max_abs_coeff_f64());
    for root in &mut roots {
        if root.exact.is_none() {
            polish(p, root, tol);
        }
    }
    Ok(roots)
}

fn exact_root(factor: &RationalPoly, x: Rational, multiplicity: usize) -> IsolatedRoot {
    IsolatedRoot {
        value: rat_to_f64(&x),
        lo: x.clone(),
        hi: x.clone(),
        multiplicity,
        exact: Some(x),
        certificate: RootCertificate::Exact,
        factor: factor.clone(),
    }
}

/// `factor` has exactly one root in `(a, b]`.
fn isolated_root(factor: &RationalPoly, a: Rational, b: Rational, multiplicity: usize) -> IsolatedRoot {
    if factor.eval(&b).is_zero() {
        return exact_root(factor, b, multiplicity);
    }
    if factor.degree() == Some(1) {
        let x = -factor.coeff(0) / factor.coeff(1);
        return exact_root(factor, x, multiplicity);
    }
    let mut root = IsolatedRoot {
        value: rat_to_f64(&((&a + &b) / int(2))),
        lo: a,
        hi: b,
        multiplicity,
        exact: None,
        certificate: RootCertificate::SignChange,
        factor: factor.clone(),
    };
    // A small-denominator rational root shows up once the interval is narrow.
    for _ in 0..40 {
        bisect_once(&mut root);
        if root.exact.is_some() {
            return root;
        }
    }
    if let Some(q) = small_rational_near(root.value, 1_000_000) {
        if root.contains(&q) && factor.eval(&q).is_zero() {
            return exact_root(factor, q, multiplicity);
        }
    }
    root
}

/// Halves the interval of a sign-change root, keeping the root inside.
fn bisect_once(root: &mut IsolatedRoot) {
    let mid = (&root.lo + &root.hi) / int(2);
    let fm = root.factor.eval(&mid);
    if fm.is_zero() {
        *root = exact_root(&root.factor, mid, root.multiplicity);
        return;
    }
    // The upper end is never a root here (exact roots are split off first),
    // while the lower end of the initial half-open interval may be one.
    let fhi = root.factor.eval(&root.hi);
    if fhi.is_positive() == fm.is_positive() {
        root.hi = mid;
    } else {
        root.lo = mid;
    }
    root.value = rat_to_f64(&((&root.lo + &root.hi) / int(2)));
}

fn separate_intervals(roots: &mut [IsolatedRoot]) {
    loop {
        let mut changed = false;
        for k in 1..roots.len() {
            let (left, right) = roots.split_at_mut(k);
            let a = &mut left[k - 1];
            let b = &mut right[0];
            if a.hi >= b.lo && !(a.exact.is_some() && b.exact.is_some()) {
                if a.exact.is_none() {
                    bisect_once(a);
                }
                if b.exact.is_none() {
                    bisect_once(b);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
        roots.sort_by(|x, y| x.lo.cmp(&y.lo).then(x.hi.cmp(&y.hi)));
    }
}

fn polish(p: &RationalPoly, root: &mut IsolatedRoot, tol: f64) {
    // Exact bisection is cheap at these degrees; 60 halvings leave an interval
    // far below double resolution relative to the window.
    for _ in 0..200 {
        let width = rat_to_f64(&(&root.hi - &root.lo));
        let residual = p.eval_f64(root.value).abs();
        if residual <= tol && width <= 1e-15 * (1.0 + root.value.abs()) {
            break;
        }
        if width <= f64::EPSILON * (1.0 + root.value.abs()) * 0.25 {
            break;
        }
        bisect_once(root);
        if root.exact.is_some() {
            break;
        }
    }
}

/// Best rational approximation with denominator at most `max_den`
/// (continued fractions).
fn small_rational_near(x: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac.abs() < 1e-14 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// A window `[-B, B]` containing every real root of `p` (Cauchy bound).
pub fn cauchy_window(p: &RationalPoly) -> (Rational, Rational) {
    let lead = p.leading().cloned().unwrap_or_else(Rational::one).abs();
    let mut bound = Rational::zero();
    if let Some(deg) = p.degree() {
        for c in &p.coeffs()[..deg] {
            let r = c.abs() / &lead;
            if r > bound {
                bound = r;
            }
        }
    }
    let b = bound + Rational::one();
    (-b.clone(), b)
}
