//! Forward-mode differentiation by truncated Taylor arithmetic.
//!
//! A [`Jet`] holds the Taylor coefficients of a function of (at most) two
//! chart variables up to total order 3. Model evaluators are written once,
//! generically over [`Scalar`], and evaluated either on plain `f64` or on
//! jets to get closed-form derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the model evaluators.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;

    fn scale(self, c: f64) -> Self {
        self * Self::constant(c)
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

pub const MAX_ORDER: usize = 3;
const N: usize = 10;

/// Exponents `(a, b)` of `x^a y^b`, graded by total degree.
const MONOMIALS: [(usize, usize); N] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const fn index_of(a: usize, b: usize) -> usize {
    let d = a + b;
    // Start of degree d block is d(d+1)/2; within the block b counts up.
    d * (d + 1) / 2 + b
}

const fn degree_of(k: usize) -> usize {
    MONOMIALS[k].0 + MONOMIALS[k].1
}

/// Truncated bivariate Taylor polynomial. `order` is the highest total
/// degree whose coefficients are meaningful; it drops when a jet is
/// differentiated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; N],
    order: usize,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = value;
        Self { c, order: MAX_ORDER }
    }

    /// The chart variable along `axis` (0 or 1), expanded at `value`.
    pub fn variable(value: f64, axis: usize) -> Self {
        let mut jet = Self::constant(value);
        jet.c[1 + axis] = 1.0;
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative `∂_x^a ∂_y^b` at the expansion point.
    pub fn derivative(&self, a: usize, b: usize) -> f64 {
        debug_assert!(a + b <= self.order, "derivative beyond jet order");
        let fact = |n: usize| (1..=n).product::<usize>() as f64;
        self.c[index_of(a, b)] * fact(a) * fact(b)
    }

    pub fn gradient(&self) -> [f64; 2] {
        [self.derivative(1, 0), self.derivative(0, 1)]
    }

    /// Jet of `∂f/∂(axis)`; one order less accurate.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = [0.0; N];
        for (k, &(a, b)) in MONOMIALS.iter().enumerate() {
            let (na, nb, factor) = if axis == 0 { (a + 1, b, a + 1) } else { (a, b + 1, b + 1) };
            if na + nb <= MAX_ORDER {
                out[k] = self.c[index_of(na, nb)] * factor as f64;
            }
        }
        Self { c: out, order: self.order.saturating_sub(1) }
    }

    fn truncated(mut self) -> Self {
        for k in 0..N {
            if degree_of(k) > self.order {
                self.c[k] = 0.0;
            }
        }
        self
    }

    /// Nilpotent part (all coefficients but the constant).
    fn tail(&self) -> Self {
        let mut t = *self;
        t.c[0] = 0.0;
        t
    }

    /// `sum_k coeffs[k] * e^k` for a nilpotent `e`, `k <= 3`.
    fn series(e: Self, coeffs: [f64; 4]) -> Self {
        let e2 = e * e;
        let e3 = e2 * e;
        let mut out = Self::constant(coeffs[0]);
        for k in 0..N {
            out.c[k] += coeffs[1] * e.c[k] + coeffs[2] * e2.c[k] + coeffs[3] * e3.c[k];
        }
        out.order = e.order;
        out.truncated()
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self.order = self.order.min(rhs.order);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self.order = self.order.min(rhs.order);
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for v in &mut self.c {
            *v = -*v;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [0.0; N];
        for (i, &(a1, b1)) in MONOMIALS.iter().enumerate() {
            let x = self.c[i];
            if x == 0.0 {
                continue;
            }
            for (j, &(a2, b2)) in MONOMIALS.iter().enumerate() {
                let (a, b) = (a1 + a2, b1 + b2);
                if a + b <= MAX_ORDER {
                    out[index_of(a, b)] += x * rhs.c[j];
                }
            }
        }
        Jet { c: out, order: self.order.min(rhs.order) }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let u0 = rhs.c[0];
        let d = rhs.tail() * Jet::constant(1.0 / u0);
        // 1/(u0 (1 + d)) = (1/u0)(1 - d + d^2 - d^3)
        let inv = Jet::series(d, [1.0, -1.0, 1.0, -1.0]) * Jet::constant(1.0 / u0);
        let mut out = self * inv;
        out.order = self.order.min(rhs.order);
        out.truncated()
    }
}

impl Scalar for Jet {
    fn constant(c: f64) -> Self {
        Jet::constant(c)
    }
    fn value(&self) -> f64 {
        self.c[0]
    }
    fn sin(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let e = self.tail();
        // sin(u0 + e) = s cos e + c sin e
        let mut out = Jet::series(e, [s, c, -s / 2.0, -c / 6.0]);
        out.order = self.order;
        out
    }
    fn cos(self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        let e = self.tail();
        // cos(u0 + e) = c cos e - s sin e
        let mut out = Jet::series(e, [c, -s, -c / 2.0, s / 6.0]);
        out.order = self.order;
        out
    }
    fn sqrt(self) -> Self {
        let u0 = self.c[0];
        let r = u0.sqrt();
        let d = self.tail() * Jet::constant(1.0 / u0);
        let mut out = Jet::series(d, [1.0, 0.5, -0.125, 0.0625]) * Jet::constant(r);
        out.order = self.order;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn monomial_indexing() {
        for (k, &(a, b)) in MONOMIALS.iter().enumerate() {
            assert_eq!(index_of(a, b), k);
        }
    }

    #[test]
    fn polynomial_derivatives() {
        // f = x^2 y + 3 x y^2 at (1, 2)
        let x = Jet::variable(1.0, 0);
        let y = Jet::variable(2.0, 1);
        let f = x * x * y + Jet::constant(3.0) * x * y * y;
        assert!(close(f.value(), 2.0 + 12.0));
        assert!(close(f.derivative(1, 0), 2.0 * 2.0 + 12.0));
        assert!(close(f.derivative(0, 1), 1.0 + 12.0));
        assert!(close(f.derivative(1, 1), 2.0 + 12.0));
        assert!(close(f.derivative(0, 2), 6.0));
        assert!(close(f.derivative(2, 1), 2.0));
        assert!(close(f.derivative(1, 2), 6.0));
        assert!(close(f.derivative(3, 0), 0.0));
    }

    #[test]
    fn trig_derivatives() {
        let t = 0.7;
        let x = Jet::variable(t, 0);
        let f = (x * Jet::constant(2.0)).sin();
        assert!(close(f.derivative(1, 0), 2.0 * (2.0 * t).cos()));
        assert!(close(f.derivative(2, 0), -4.0 * (2.0 * t).sin()));
        assert!(close(f.derivative(3, 0), -8.0 * (2.0 * t).cos()));
        let g = x.cos();
        assert!(close(g.derivative(3, 0), t.sin()));
    }

    #[test]
    fn quotient_and_sqrt() {
        let x = Jet::variable(0.5, 0);
        let y = Jet::variable(-0.3, 1);
        let q = Jet::constant(1.0) / (Jet::constant(2.0) + x * y);
        // d/dx 1/(2 + xy) = -y/(2+xy)^2
        let den = 2.0 - 0.15;
        assert!(close(q.derivative(1, 0), 0.3 / (den * den)));
        // d2/dx2 = 2 y^2 / (2 + xy)^3
        assert!(close(q.derivative(2, 0), 2.0 * 0.09 / den.powi(3)));
        let s = (Jet::constant(1.0) + x * x).sqrt();
        assert!(close(s.derivative(1, 0), 0.5 / 1.25f64.sqrt()));
        // d3/dx3 sqrt(1 + x^2) = -3x / (1+x^2)^{5/2}
        assert!(close(s.derivative(3, 0), -1.5 / 1.25f64.powf(2.5)));
    }

    #[test]
    fn partial_drops_one_order() {
        let x = Jet::variable(0.3, 0);
        let y = Jet::variable(0.2, 1);
        let f = x.sin() * y.cos();
        let fx = f.partial(0);
        assert_eq!(fx.order(), 2);
        assert!(close(fx.value(), 0.3f64.cos() * 0.2f64.cos()));
        assert!(close(fx.derivative(0, 1), -0.3f64.cos() * 0.2f64.sin()));
        assert!(close(fx.derivative(2, 0), -0.3f64.cos() * 0.2f64.cos()));
        let prod = fx * f;
        assert_eq!(prod.order(), 2);
    }
}
