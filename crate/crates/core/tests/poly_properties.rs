use num_traits::{Signed, Zero};
use proptest::prelude::*;

use prim_cobordism::poly::{count_distinct_roots, isolate_real_roots, rat, Rational, RationalPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec(rational(), 0..=max_len).prop_map(RationalPoly::new)
}

/// Sign variations of a coefficient list, zeros skipped.
fn variations(coeffs: &[Rational]) -> usize {
    let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `(1+t)^d p((a + b t) / (1 + t))`: roots of `p` in `(a, b)` become the
/// positive roots.
fn moebius(p: &RationalPoly, a: &Rational, b: &Rational) -> RationalPoly {
    let d = p.degree().unwrap_or(0);
    let num = RationalPoly::new(vec![a.clone(), b.clone()]);
    let den = RationalPoly::new(vec![rat(1, 1), rat(1, 1)]);
    let mut out = RationalPoly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        let mut term = RationalPoly::constant(c.clone());
        for _ in 0..k {
            term = &term * &num;
        }
        for _ in k..d {
            term = &term * &den;
        }
        out = &out + &term;
    }
    out
}

/// Distinct roots in the open interval `(a, b)` of a square-free `p`, by
/// Descartes' rule of signs with bisection.
fn descartes_open(p: &RationalPoly, a: &Rational, b: &Rational, depth: usize) -> usize {
    let v = variations(moebius(p, a, b).coeffs());
    if v <= 1 {
        return v;
    }
    assert!(depth < 200, "bisection did not separate the roots");
    let m = (a + b) / rat(2, 1);
    let at_mid = usize::from(p.eval(&m).is_zero());
    descartes_open(p, a, &m, depth + 1) + at_mid + descartes_open(p, &m, b, depth + 1)
}

fn descartes_closed(p: &RationalPoly, a: &Rational, b: &Rational) -> usize {
    let sf = {
        let g = p.gcd(&p.derivative(1));
        p.div_rem(&g).0
    };
    let ends = usize::from(sf.eval(a).is_zero()) + usize::from(a != b && sf.eval(b).is_zero());
    descartes_open(&sf, a, b, 0) + ends
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn taylor_shift_round_trip(p in poly(7), c in rational()) {
        prop_assert_eq!(p.taylor_shift(&c).taylor_shift(&-c.clone()), p);
    }

    #[test]
    fn taylor_shift_evaluates_at_shifted_point(p in poly(7), c in rational(), t in rational()) {
        prop_assert_eq!(p.taylor_shift(&c).eval(&t), p.eval(&(&t + &c)));
    }

    #[test]
    fn product_rule(p in poly(6), q in poly(6)) {
        let lhs = (&p * &q).derivative(1);
        let rhs = &(&p.derivative(1) * &q) + &(&p * &q.derivative(1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_orders_compose(p in poly(8), a in 0usize..4, b in 0usize..4) {
        prop_assert_eq!(p.derivative(a).derivative(b), p.derivative(a + b));
    }

    #[test]
    fn canonical_form_has_nonzero_leading_coefficient(p in poly(8)) {
        prop_assert!(p.coeffs().last().is_none_or(|c| !c.is_zero()));
    }

    /// Products of known linear factors (with repeats) and a positive
    /// quadratic: the true root set is known in advance.
    #[test]
    fn isolation_finds_planted_roots(
        roots in prop::collection::vec(rational(), 1..5),
        powers in prop::collection::vec(1usize..3, 5),
        shift in 1i64..5,
    ) {
        let mut p = RationalPoly::new(vec![rat(shift, 1), rat(0, 1), rat(1, 1)]);
        for (r, &k) in roots.iter().zip(&powers) {
            for _ in 0..k {
                p = &p * &RationalPoly::new(vec![-r.clone(), rat(1, 1)]);
            }
        }
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let (lo, hi) = (rat(-21, 1), rat(21, 1));
        let found = isolate_real_roots(&p, &lo, &hi).unwrap();
        prop_assert_eq!(found.len(), distinct.len());
        prop_assert_eq!(count_distinct_roots(&p, &lo, &hi).unwrap(), distinct.len());
        prop_assert_eq!(descartes_closed(&p, &lo, &hi), distinct.len());
        for (iso, r) in found.iter().zip(&distinct) {
            prop_assert!(iso.contains(r));
            let expected: usize = roots.iter().zip(&powers).filter(|(q, _)| *q == r).map(|(_, k)| *k).sum();
            prop_assert_eq!(iso.multiplicity, expected);
        }
        for w in found.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }

    /// Sturm (production) and Descartes (oracle) agree on arbitrary input,
    /// and every root carries a certificate and a small residual.
    #[test]
    fn sturm_and_descartes_agree(p in poly(7), a in rational(), width in 1i64..30) {
        prop_assume!(!p.is_zero());
        let b = &a + rat(width, 2);
        let found = isolate_real_roots(&p, &a, &b).unwrap();
        prop_assert_eq!(found.len(), descartes_closed(&p, &a, &b));
        prop_assert_eq!(found.len(), count_distinct_roots(&p, &a, &b).unwrap());
        let scale = 1.0 + p.max_abs_coeff_f64();
        for iso in &found {
            prop_assert!(iso.lo <= iso.hi && a <= iso.lo && iso.hi <= b);
            match &iso.exact {
                Some(x) => prop_assert!(p.eval(x).is_zero()),
                None => {
                    let (fl, fh) = (iso.factor.eval(&iso.lo), iso.factor.eval(&iso.hi));
                    prop_assert!(fl.is_positive() != fh.is_positive() && !fl.is_zero() && !fh.is_zero());
                    // Either the residual target is met or the isolating
                    // interval is already below double resolution.
                    let width = prim_cobordism::poly::rat_to_f64(&(&iso.hi - &iso.lo));
                    let residual = p.eval_f64(iso.value).abs();
                    prop_assert!(residual <= 1e-12 * scale || width <= f64::EPSILON * (1.0 + iso.value.abs()),
                        "residual {} width {} at {}", residual, width, iso.value);
                }
            }
        }
        for w in found.windows(2) {
            prop_assert!(w[0].hi < w[1].lo);
        }
    }
}

#[test]
fn descartes_oracle_on_known_cases() {
    let cusp = RationalPoly::new(vec![rat(0, 1), rat(-3, 4), rat(0, 1), rat(1, 1)]);
    assert_eq!(descartes_closed(&cusp, &rat(-2, 1), &rat(2, 1)), 3);
    let no_roots = RationalPoly::new(vec![rat(1, 1), rat(0, 1), rat(1, 1)]);
    assert_eq!(descartes_closed(&no_roots, &rat(-10, 1), &rat(10, 1)), 0);
}
