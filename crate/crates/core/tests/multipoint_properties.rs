use std::f64::consts::{FRAC_PI_4, PI, TAU};

use prim_cobordism::bordism::random_trig_curve;
use prim_cobordism::domain::DomainPoint;
use prim_cobordism::multipoint::{covering_check, Analyzer, ResolvedPointSet, SetKind, Strata};
use prim_cobordism::prim_map::{builtin_model, genericity_report_with, PrimMapModel, Verdict};
use prim_cobordism::tolerances::Tolerances;
use prim_cobordism::Error;

fn model(name: &str) -> PrimMapModel {
    builtin_model(name, &[]).unwrap()
}

fn points(strata: Strata) -> ResolvedPointSet {
    match strata {
        Strata::Points(set) => set,
        Strata::Curves { .. } => panic!("expected isolated points"),
    }
}

fn angles(set: &ResolvedPointSet) -> Vec<Vec<f64>> {
    set.points.iter().map(|p| p.tuple.iter().map(|x| x.0[0]).collect()).collect()
}

fn wrapped(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Generic curves from the seeded sweep family.
fn generic_curves(count: usize) -> Vec<PrimMapModel> {
    (0..)
        .map(|k| random_trig_curve(21, k, 4))
        .filter(|m| genericity_report_with(&Analyzer::new(m, Tolerances::default())).verdict == Verdict::Generic)
        .take(count)
        .collect()
}

/// `|g(x_1) - g(x_m)|` over the tuple, plus the fold function at `x_1` when
/// the set asks for it, evaluated here from the model rather than taken
/// from the solver.
fn independent_residual(model: &PrimMapModel, set: &ResolvedPointSet, fold: bool) -> f64 {
    let mut worst = 0.0f64;
    for p in &set.points {
        let g0 = model.eval(&p.tuple[0]);
        for x in &p.tuple[1..] {
            let g = model.eval(x);
            let d = g0.iter().zip(&g).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            worst = worst.max(d);
        }
        if fold {
            worst = worst.max(model.jet(&p.tuple[0]).fold_function().value().abs());
        }
        let t = &p.target;
        worst = worst.max(t.iter().zip(&g0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    worst
}

/// No two tuples are related by permuting `x_2 … x_i`, and the tail of
/// every tuple is sorted.
fn assert_canonical(model: &PrimMapModel, set: &ResolvedPointSet) {
    for p in &set.points {
        for w in p.tuple[1..].windows(2) {
            assert_ne!(model.domain.compare(&w[0], &w[1]), std::cmp::Ordering::Greater, "{:?}", p.tuple);
        }
    }
    let same = |a: &DomainPoint, b: &DomainPoint| model.domain.distance(a, b) < 1e-6;
    for (k, p) in set.points.iter().enumerate() {
        for q in &set.points[k + 1..] {
            let first = same(&p.tuple[0], &q.tuple[0]);
            let rest = p.tuple[1..].iter().all(|x| q.tuple[1..].iter().any(|y| same(x, y)));
            assert!(!(first && rest), "orbit listed twice: {:?} {:?}", p.tuple, q.tuple);
        }
    }
}

#[test]
fn figure_eight_sets() {
    let m = model("figure_eight");
    let a = Analyzer::new(&m, Tolerances::default());
    let folds = points(a.strata(1).unwrap());
    let expected = [FRAC_PI_4, 3.0 * FRAC_PI_4, 5.0 * FRAC_PI_4, 7.0 * FRAC_PI_4];
    assert_eq!(folds.len(), 4);
    for (got, want) in angles(&folds).iter().zip(expected) {
        assert!(wrapped(got[0], want) < 1e-10, "{got:?}");
        // f'' = -4 sin 2θ is ±4 there
        assert!(((-4.0 * (2.0 * want).sin()).abs() - 4.0).abs() < 1e-12);
    }
    let (resolved, targets) = a.multiple_points(2).unwrap();
    let mut tuples = angles(&resolved);
    tuples.sort_by(|x, y| x[0].partial_cmp(&y[0]).unwrap());
    assert_eq!(tuples.len(), 2);
    for (got, want) in tuples.iter().zip([[0.0, PI], [PI, 0.0]]) {
        assert!(wrapped(got[0], want[0]) < 1e-10 && wrapped(got[1], want[1]) < 1e-10, "{got:?}");
    }
    assert_eq!(targets.len(), 1);
    assert!(targets.points[0].target.iter().all(|v| v.abs() < 1e-10));
    assert!(covering_check(&resolved, &targets));

    let l1 = a.mixed(2, 1).unwrap();
    assert_eq!(l1.kind, SetKind::Mixed { r: 2, i: 1 });
    assert_eq!(angles(&l1), angles(&folds));
    assert_eq!(angles(&a.mixed(2, 2).unwrap()), angles(&resolved));
}

#[test]
fn round_circle_sets() {
    let m = model("round_circle");
    let a = Analyzer::new(&m, Tolerances::default());
    let folds = angles(&points(a.strata(1).unwrap()));
    assert_eq!(folds.len(), 2);
    assert!(wrapped(folds[0][0], 0.0) < 1e-10 && wrapped(folds[1][0], PI) < 1e-10, "{folds:?}");
    let (resolved, targets) = a.multiple_points(2).unwrap();
    assert!(resolved.is_empty() && targets.is_empty());
    assert!(covering_check(&resolved, &targets));
}

#[test]
fn round_torus_sets() {
    let m = model("round_torus");
    let a = Analyzer::new(&m, Tolerances::default());
    match a.strata(1).unwrap() {
        Strata::Curves { curves, .. } => {
            assert_eq!(curves.len(), 2);
            let mut heights: Vec<f64> = curves
                .iter()
                .map(|c| {
                    assert!(c.closed);
                    let phi = c.points[0].0[1];
                    for p in &c.points {
                        assert!(wrapped(p.0[1], phi) < 1e-8, "fold circle drifts in φ");
                    }
                    phi
                })
                .collect();
            heights.sort_by(f64::total_cmp);
            assert!(wrapped(heights[0], 0.0) < 1e-8 && wrapped(heights[1], PI) < 1e-8, "{heights:?}");
        }
        Strata::Points(_) => panic!("fold set of a surface is a curve set"),
    }
    assert!(points(a.strata(2).unwrap()).is_empty());
    let (resolved, targets) = a.multiple_points(3).unwrap();
    assert!(resolved.is_empty() && targets.is_empty());
    for i in 1..=3 {
        assert!(a.mixed(3, i).unwrap().is_empty());
    }
}

#[test]
fn dimension_and_stratum_errors() {
    let eight = model("figure_eight");
    let a = Analyzer::new(&eight, Tolerances::default());
    assert!(matches!(a.multiple_points(3), Err(Error::Dimension { dim: -1, .. })));
    assert!(matches!(a.strata(2), Err(Error::UnsupportedStratum { n: 1, j: 2 })));
    assert!(a.mixed(2, 3).is_err());
    let torus = model("round_torus");
    let a = Analyzer::new(&torus, Tolerances::default());
    assert!(matches!(a.multiple_points(2), Err(Error::Dimension { dim: 1, .. })));
    let msg = a.multiple_points(2).unwrap_err().to_string();
    assert!(msg.contains("positive-dimensional"), "{msg}");
}

#[test]
fn covering_detects_a_dropped_tuple() {
    let m = model("figure_eight");
    let (mut resolved, targets) = Analyzer::new(&m, Tolerances::default()).multiple_points(2).unwrap();
    assert!(covering_check(&resolved, &targets));
    resolved.points.pop();
    assert!(!covering_check(&resolved, &targets));
    // and a target whose sheets were moved elsewhere
    let (mut resolved, targets) = Analyzer::new(&m, Tolerances::default()).multiple_points(2).unwrap();
    resolved.points[0].target[0] += 0.5;
    assert!(!covering_check(&resolved, &targets));
}

#[test]
fn curve_sets_on_random_curves() {
    let tol = Tolerances::default();
    for m in generic_curves(20) {
        let a = Analyzer::new(&m, tol.clone());
        let (resolved, targets) = a.multiple_points(2).unwrap();
        let folds = points(a.strata(1).unwrap());
        // i = r delegates to the multiple-point solve
        assert_eq!(a.mixed(2, 2).unwrap().points.iter().map(|p| &p.tuple).collect::<Vec<_>>(),
            resolved.points.iter().map(|p| &p.tuple).collect::<Vec<_>>());
        assert!(covering_check(&resolved, &targets), "{:?}", m.params);
        assert!(independent_residual(&m, &resolved, false) <= tol.residual);
        assert!(independent_residual(&m, &folds, true) <= tol.residual);
        for set in [&resolved, &targets, &folds] {
            assert!(set.points.iter().all(|p| p.residual <= tol.residual));
            assert_canonical(&m, set);
            assert!(set.provenance.warnings.is_empty(), "{:?}", set.provenance.warnings);
        }
        if !resolved.is_empty() {
            assert!(resolved.min_separation(&m) >= 10.0 * tol.dedup_radius);
        }

        // twice the grid, and an odd grid so samples land elsewhere
        for grid in [2 * tol.curve_grid, tol.curve_grid + 777] {
            let finer = Tolerances { curve_grid: grid, ..tol.clone() };
            let b = Analyzer::new(&m, finer);
            let (r2, t2) = b.multiple_points(2).unwrap();
            assert_eq!((r2.len(), t2.len()), (resolved.len(), targets.len()), "grid {grid}");
            assert_eq!(points(b.strata(1).unwrap()).len(), folds.len(), "grid {grid}");
            for (p, q) in r2.points.iter().zip(&resolved.points) {
                for (x, y) in p.tuple.iter().zip(&q.tuple) {
                    assert!(m.domain.distance(x, y) < 1e-8);
                }
            }
        }
    }
}

#[test]
fn boy_surface_sets() {
    let m = model("boy_surface");
    let tol = Tolerances::default();
    let a = Analyzer::new(&m, tol.clone());
    let (resolved, targets) = a.multiple_points(3).unwrap();
    assert_eq!((resolved.len(), targets.len()), (3, 1));
    assert!(covering_check(&resolved, &targets));
    let cusps = points(a.strata(2).unwrap());
    let l2 = a.mixed(3, 2).unwrap();
    assert_eq!(cusps.len() % 2, 1);
    assert_eq!(l2.len() % 2, 1);
    assert_eq!(a.mixed(3, 3).unwrap().points.iter().map(|p| &p.tuple).collect::<Vec<_>>(),
        resolved.points.iter().map(|p| &p.tuple).collect::<Vec<_>>());
    assert!(independent_residual(&m, &resolved, false) <= tol.residual);
    assert!(independent_residual(&m, &l2, true) <= tol.residual);
    for set in [&resolved, &l2, &cusps] {
        assert!(set.points.iter().all(|p| p.residual <= tol.residual));
        assert_canonical(&m, set);
    }
    assert!(resolved.min_separation(&m) >= 10.0 * tol.dedup_radius);
    assert!(l2.min_separation(&m) >= 10.0 * tol.dedup_radius);

    let finer = Analyzer::new(&m, Tolerances { surface_grid: 2 * tol.surface_grid, ..tol.clone() });
    assert_eq!(finer.multiple_points(3).unwrap().0.len(), resolved.len());
    assert_eq!(points(finer.strata(2).unwrap()).len(), cusps.len());
    assert_eq!(finer.mixed(3, 2).unwrap().len(), l2.len());
}
