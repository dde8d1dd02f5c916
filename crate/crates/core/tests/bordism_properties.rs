use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use prim_cobordism::bordism::{
    euler_cross_check, natural_r, parity_chain, random_trig_curve, sweep, trace_cobordism, CobordismReport, Endpoint,
    Outcome,
};
use prim_cobordism::multipoint::Analyzer;
use prim_cobordism::prim_map::{builtin_model, genericity_report_with, PrimMapModel, TrigPoly, Verdict};
use prim_cobordism::tolerances::Tolerances;
use prim_cobordism::Error;

fn model(name: &str) -> PrimMapModel {
    builtin_model(name, &[]).unwrap()
}

/// Every endpoint of `Λ^r_i ⊔ Λ^r_{i-1}` is used by exactly one arc.
fn assert_endpoint_bijection(a: &Analyzer<'_>, report: &CobordismReport) {
    let (r, i) = (report.r, report.i);
    let mut expected: BTreeMap<Endpoint, usize> = BTreeMap::new();
    for (level, set) in [(i, a.mixed(r, i).unwrap()), (i - 1, a.mixed(r, i - 1).unwrap())] {
        for p in set.points {
            *expected.entry(Endpoint { level, label: p.label }).or_default() += 1;
        }
    }
    assert!(expected.values().all(|&c| c == 1), "labels are not unique");
    let mut seen: BTreeMap<Endpoint, usize> = BTreeMap::new();
    for arc in &report.arcs {
        assert_ne!(arc.endpoint_a, arc.endpoint_b);
        *seen.entry(arc.endpoint_a.clone()).or_default() += 1;
        *seen.entry(arc.endpoint_b.clone()).or_default() += 1;
    }
    assert_eq!(seen, expected);
    assert_eq!(2 * report.arcs.len(), report.upper_count + report.lower_count);
}

/// The arc conditions re-evaluated from the model: `x_1` on the stratum,
/// equal `f` over the tuple, equal heights after `x_1`, and nonnegative
/// slack.
fn assert_interior(m: &PrimMapModel, report: &CobordismReport) {
    let tol = 1e-8;
    for arc in &report.arcs {
        assert!(arc.max_residual <= tol);
        assert!(arc.polyline.len() >= 2);
        for s in &arc.polyline {
            let f0 = m.f(&s.tuple[0]);
            for x in &s.tuple[1..] {
                for (a, b) in f0.iter().zip(m.f(x)) {
                    assert!((a - b).abs() <= tol, "f mismatch {}", (a - b).abs());
                }
            }
            let h: Vec<f64> = s.tuple.iter().map(|x| m.height(x)).collect();
            for w in h[1..].windows(2) {
                assert!((w[0] - w[1]).abs() <= tol);
            }
            assert!((s.slack - (h[0] - h[1])).abs() <= tol);
            assert!(s.slack >= -tol, "slack {}", s.slack);
            if report.r > report.i {
                assert!(m.jet(&s.tuple[0]).fold_function().value().abs() <= tol);
            }
        }
    }
}

#[test]
fn chain_examples() {
    let tol = Tolerances::default();
    for (name, r, counts) in [
        ("figure_eight", 2, vec![4, 2]),
        ("round_circle", 2, vec![2, 0]),
        ("round_torus", 3, vec![0, 0, 0]),
        ("tilted_torus", 3, vec![4, 0, 0]),
    ] {
        let m = model(name);
        assert_eq!(natural_r(&m), r);
        let report = parity_chain(&Analyzer::new(&m, tol.clone()), r).unwrap();
        assert_eq!(report.counts(), counts, "{name}");
        assert_eq!(report.verdict, Outcome::Pass, "{name}");
        assert!(report.levels.iter().all(|l| l.parity == 0));
        assert_eq!(report.covering, Some(true));
    }
}

#[test]
fn chain_rejects_and_refuses() {
    let flat = PrimMapModel::trig_curve(TrigPoly::new(vec![0.0, 1.0], vec![]), TrigPoly::new(vec![1.0], vec![]));
    let report = parity_chain(&Analyzer::new(&flat, Tolerances::default()), 2).unwrap();
    assert_eq!(report.verdict, Outcome::Rejected);
    assert!(report.levels.is_empty());
    let torus = model("round_torus");
    assert!(matches!(parity_chain(&Analyzer::new(&torus, Tolerances::default()), 2), Err(Error::Dimension { .. })));
}

#[test]
fn figure_eight_arcs() {
    let m = model("figure_eight");
    let a = Analyzer::new(&m, Tolerances::default());
    let report = trace_cobordism(&a, 2, 2).unwrap();
    assert_eq!(report.verdict, Outcome::Pass, "{:?}", report.issues);
    assert_eq!((report.upper_count, report.lower_count), (2, 4));
    assert_eq!(report.arcs.len(), 3);
    assert_endpoint_bijection(&a, &report);
    assert_interior(&m, &report);
    assert!(trace_cobordism(&a, 2, 1).is_err());
    assert!(trace_cobordism(&a, 2, 3).is_err());
}

/// The one arc is the family `θ_2 = -θ_1`, `θ_1 ∈ [0, π]`.
#[test]
fn round_circle_arc() {
    let m = model("round_circle");
    let a = Analyzer::new(&m, Tolerances::default());
    let report = trace_cobordism(&a, 2, 2).unwrap();
    assert_eq!(report.verdict, Outcome::Pass, "{:?}", report.issues);
    assert_eq!(report.arcs.len(), 1);
    let arc = &report.arcs[0];
    assert_eq!((arc.endpoint_a.level, arc.endpoint_b.level), (1, 1));
    assert_endpoint_bijection(&a, &report);
    assert_interior(&m, &report);
    for s in &arc.polyline {
        let (t1, t2) = (s.tuple[0].0[0], s.tuple[1].0[0]);
        assert!((t1 + t2).rem_euclid(TAU).min(TAU - (t1 + t2).rem_euclid(TAU)) < 1e-8, "{t1} {t2}");
        assert!((-1e-8..=PI + 1e-8).contains(&t1), "{t1}");
    }
    // the arc sweeps the whole half circle
    assert!((arc.arclength - PI * 2f64.sqrt()).abs() < 1e-2, "{}", arc.arclength);
}

#[test]
fn torus_levels() {
    let m = model("round_torus");
    let a = Analyzer::new(&m, Tolerances::default());
    for i in [2, 3] {
        let report = trace_cobordism(&a, 3, i).unwrap();
        assert_eq!(report.verdict, Outcome::Pass);
        assert!(report.arcs.is_empty());
    }
    // tilting creates four cusps, joined in pairs at the middle level
    let m = model("tilted_torus");
    let a = Analyzer::new(&m, Tolerances::default());
    let report = trace_cobordism(&a, 3, 2).unwrap();
    assert_eq!(report.verdict, Outcome::Pass, "{:?}", report.issues);
    assert_eq!(report.arcs.len(), 2);
    assert_endpoint_bijection(&a, &report);
    assert_interior(&m, &report);
    let top = trace_cobordism(&a, 3, 3).unwrap();
    assert_eq!(top.verdict, Outcome::Pass);
    assert!(top.arcs.is_empty());
}

#[test]
fn euler_examples() {
    for (name, count) in [("figure_eight", 4), ("round_circle", 2), ("round_torus", 0), ("tilted_torus", 4)] {
        let m = model(name);
        let check = euler_cross_check(&Analyzer::new(&m, Tolerances::default())).unwrap();
        assert_eq!(check.count, count, "{name}");
        assert!(check.pass);
    }
}

#[test]
fn boy_surface_chain_and_arcs() {
    let m = model("boy_surface");
    let a = Analyzer::new(&m, Tolerances::default());
    assert_eq!(genericity_report_with(&a).verdict, Verdict::Generic);
    let chain = parity_chain(&a, 3).unwrap();
    assert_eq!(chain.verdict, Outcome::Pass);
    let counts = chain.counts();
    assert_eq!(counts[2], 3);
    assert!(counts.iter().all(|c| c % 2 == 1), "{counts:?}");
    let euler = euler_cross_check(&a).unwrap();
    assert_eq!(euler.euler_characteristic, 1);
    assert!(euler.pass && euler.count % 2 == 1);
    for i in [2, 3] {
        let report = trace_cobordism(&a, 3, i).unwrap();
        assert_eq!(report.verdict, Outcome::Pass, "i = {i}: {:?}", report.issues);
        assert_endpoint_bijection(&a, &report);
        assert_interior(&m, &report);
    }
}

#[test]
fn random_curves_conserve_endpoints() {
    let tol = Tolerances::default();
    let mut traced = 0;
    for k in 0..40 {
        let m = random_trig_curve(5, k, 4);
        let a = Analyzer::new(&m, tol.clone());
        if genericity_report_with(&a).verdict == Verdict::Rejected {
            continue;
        }
        let chain = parity_chain(&a, 2).unwrap();
        assert_eq!(chain.verdict, Outcome::Pass, "sample {k}");
        let report = trace_cobordism(&a, 2, 2).unwrap();
        assert_eq!(report.verdict, Outcome::Pass, "sample {k}: {:?}", report.issues);
        assert_endpoint_bijection(&a, &report);
        assert_interior(&m, &report);
        assert!(euler_cross_check(&a).unwrap().pass);
        traced += 1;
    }
    assert!(traced >= 30, "only {traced} generic samples");
}

#[test]
fn sweep_is_reproducible_and_independent_of_scheduling() {
    let tol = Tolerances::default();
    let a = sweep(24, 99, 4, &tol);
    let b = sweep(24, 99, 4, &tol);
    assert_eq!(a, b);
    assert_eq!(a.accepted + a.rejected, 24);
    assert_eq!(a.rejection_rate, a.rejected as f64 / 24.0);
    assert_eq!(a.chain_failures + a.covering_failures + a.euler_failures, 0);
    // sample k is curve k of the seeded family, whatever the batch size
    let short = sweep(5, 99, 4, &tol);
    assert_eq!(&short.samples[..], &a.samples[..5]);
    for s in &a.samples {
        let m = random_trig_curve(99, s.index, 4);
        let prim_cobordism::prim_map::Family::Trig { f, h } = &m.family else { unreachable!() };
        assert_eq!((&s.f, &s.h), (f, h));
        assert!(f.degree().max(h.degree()) <= 4);
        if s.genericity == Verdict::Generic {
            assert_eq!(s.parities.iter().collect::<std::collections::BTreeSet<_>>().len(), 1);
        }
    }
    assert_ne!(sweep(5, 100, 4, &tol).samples, short.samples);
}
