//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always reach the terminal; exits nonzero if any criterion
//! fails. A criterion may be `skipped` only where that is allowed (the
//! Boy surface when it is not numerically generic).

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prim_cobordism::bordism::{euler_cross_check, parity_chain, sweep, trace_cobordism, Endpoint, Outcome};
use prim_cobordism::cli::{self, Subcommand};
use prim_cobordism::config::RunConfig;
use prim_cobordism::local_cobordism::{boundary_limit_check, dyadic_top_path, solve_pair, solve_pair_top};
use prim_cobordism::multipoint::{covering_check, Analyzer, Strata};
use prim_cobordism::normal_form::{
    solve_fiber, stratum_membership, stratum_parametrize, top_stratum_point, NormalFormSpec, SourcePoint, StratumParams,
};
use prim_cobordism::poly::{rat, Rational};
use prim_cobordism::prim_map::{builtin_model, genericity_report_with, Verdict};
use prim_cobordism::report::without_meta;
use prim_cobordism::tolerances::Tolerances;

const SEED: u64 = 20_240_601;

enum Verdict3 {
    Pass(String),
    Fail(String),
    Skipped(String),
}

use Verdict3::{Fail, Pass, Skipped};

fn check(ok: bool, detail: String) -> Verdict3 {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=6))
}

fn random_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

/// `m`-th derivative of `p_i` at `t`, from the coefficients by the power
/// rule.
fn derivative_at(spec: &NormalFormSpec, x: &SourcePoint, i: usize, m: usize, t: &Rational) -> Rational {
    let mut coeffs = vec![Rational::zero(); spec.r + 2];
    for mm in 1..=spec.r {
        if i == 0 && mm == spec.r {
            continue;
        }
        coeffs[mm] = x.y(i, mm).clone();
    }
    if i == 0 {
        coeffs[spec.r + 1] = Rational::one();
    }
    let mut acc = Rational::zero();
    for (d, c) in coeffs.iter().enumerate().skip(m) {
        let falling: i64 = ((d - m + 1)..=d).map(|v| v as i64).product();
        let mut pow = Rational::one();
        for _ in 0..d - m {
            pow *= t;
        }
        acc += c * rat(falling, 1) * pow;
    }
    acc
}

fn criterion_1() -> Verdict3 {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    let mut cases = 0;
    while cases < 200 {
        let r = rng.gen_range(2..=5);
        let spec = NormalFormSpec::new(r, rng.gen_range(0..=3), rng.gen_range(0..=2)).unwrap();
        let j = rng.gen_range(1..r);
        let params = StratumParams {
            t: random_rational(&mut rng),
            s: random_rationals(&mut rng, spec.z),
            high: random_rationals(&mut rng, spec.slots_from(j + 1).len()),
        };
        let x = stratum_parametrize(&spec, j, &params).unwrap();
        let exact = (0..=spec.k).all(|i| (1..=j).all(|m| derivative_at(&spec, &x, i, m, &x.t).is_zero()));
        if !(exact && stratum_membership(&spec, &x, j).unwrap()) {
            bad += 1;
        }
        cases += 1;
    }
    let elapsed = start.elapsed();
    check(bad == 0 && elapsed < Duration::from_secs(10), format!("{cases} cases, {bad} nonzero residuals, {elapsed:.2?} (limit 10 s)"))
}

fn criterion_2() -> Verdict3 {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut bad = 0;
    for _ in 0..200 {
        let r = rng.gen_range(3..=5);
        let spec = NormalFormSpec::new(r, rng.gen_range(0..=3), 0).unwrap();
        let j = rng.gen_range(1..r - 1);
        let tu = random_rational(&mut rng);
        let tv = &tu + rat(rng.gen_range(1..=24), rng.gen_range(1..=6));
        let high = random_rationals(&mut rng, spec.slots_from(j + 2).len());
        let sol = solve_pair(&spec, j, &tu, &tv, &high).unwrap();
        let ok = (0..=spec.k).all(|i| {
            (1..=j).all(|m| derivative_at(&spec, &sol.u, i, m, &tu).is_zero())
                && derivative_at(&spec, &sol.u, i, 0, &tu) == derivative_at(&spec, &sol.u, i, 0, &tv)
        });
        if !ok || !sol.is_exact() {
            bad += 1;
        }
    }
    let mut top_bad = 0;
    for _ in 0..200 {
        let r = rng.gen_range(1..=5);
        let spec = NormalFormSpec::new(r, rng.gen_range(0..=3), 0).unwrap();
        let tv = rat(rng.gen_range(1..=40), rng.gen_range(1..=9));
        let sol = solve_pair_top(&spec, &tv).unwrap();
        if sol.tu != -&tv / rat(r as i64, 1) || !sol.is_exact() {
            top_bad += 1;
        }
    }
    let spec = NormalFormSpec::new(2, 0, 0).unwrap();
    let top = solve_pair_top(&spec, &rat(1, 1)).unwrap();
    let cubic = top.u.poly(&spec, 0).coeffs().to_vec() == vec![rat(0, 1), rat(-3, 4), rat(0, 1), rat(1, 1)];
    check(
        bad == 0 && top_bad == 0 && cubic,
        format!("200 pairs ({bad} inexact), 200 top pairs ({top_bad} off), p_0 = t^3 - 3/4 t: {cubic}"),
    )
}

fn criterion_3() -> Verdict3 {
    let spec = NormalFormSpec::new(2, 0, 0).unwrap();
    let limit = top_stratum_point(&spec, &[]).unwrap();
    let report = boundary_limit_check(&spec, 1, &dyadic_top_path(&spec, 20), &limit).unwrap();
    let last = report.steps.last().unwrap().distance;
    let member = stratum_membership(&spec, &limit, 2).unwrap();
    check(
        last <= 1e-6 && report.extrapolated_distance <= 1e-6 && member && report.passes,
        format!(
            "distance at n = 20: {last:.3e}, extrapolated {:.3e}, limit on the next stratum: {member}",
            report.extrapolated_distance
        ),
    )
}

fn criterion_4() -> Verdict3 {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut sizes = BTreeMap::new();
    for _ in 0..50 {
        let spec = NormalFormSpec::new(rng.gen_range(1..=4), rng.gen_range(0..=2), rng.gen_range(0..=2)).unwrap();
        let x = top_stratum_point(&spec, &random_rationals(&mut rng, spec.z)).unwrap();
        let fiber = solve_fiber(&spec, &x).unwrap();
        let ok = fiber.len() == 1 && fiber[0].exact.as_ref() == Some(&x);
        *sizes.entry(if ok { 1 } else { fiber.len().max(2) }).or_insert(0) += 1;
    }
    check(sizes.keys().all(|&k| k == 1), format!("fibre sizes {sizes:?}"))
}

fn endpoints_biject(a: &Analyzer<'_>, r: usize, i: usize, arcs: &[prim_cobordism::bordism::CobordismArc]) -> bool {
    let mut expected: Vec<Endpoint> = Vec::new();
    for (level, set) in [(i, a.mixed(r, i).unwrap()), (i - 1, a.mixed(r, i - 1).unwrap())] {
        expected.extend(set.points.into_iter().map(|p| Endpoint { level, label: p.label }));
    }
    let mut seen: Vec<Endpoint> = arcs.iter().flat_map(|a| [a.endpoint_a.clone(), a.endpoint_b.clone()]).collect();
    expected.sort();
    seen.sort();
    expected == seen
}

fn criterion_5() -> Verdict3 {
    let start = Instant::now();
    let m = builtin_model("figure_eight", &[]).unwrap();
    let a = Analyzer::new(&m, Tolerances::default());
    let Ok(Strata::Points(folds)) = a.strata(1) else { return Fail("no fold set".into()) };
    let (resolved, targets) = a.multiple_points(2).unwrap();
    let covering = covering_check(&resolved, &targets);
    let chain = parity_chain(&a, 2).unwrap();
    let arcs = trace_cobordism(&a, 2, 2).unwrap();
    let biject = endpoints_biject(&a, 2, 2, &arcs.arcs);
    let elapsed = start.elapsed();
    check(
        folds.len() == 4
            && resolved.len() == 2
            && targets.len() == 1
            && covering
            && chain.verdict == Outcome::Pass
            && arcs.verdict == Outcome::Pass
            && arcs.arcs.len() == 3
            && biject
            && elapsed < Duration::from_secs(5),
        format!(
            "folds {}, M2 {}, N2 {}, covering {covering}, chain {:?}, {} arcs, bijection {biject}, {elapsed:.2?} (limit 5 s)",
            folds.len(),
            resolved.len(),
            targets.len(),
            chain.verdict,
            arcs.arcs.len()
        ),
    )
}

fn criterion_6() -> Verdict3 {
    let circle = builtin_model("round_circle", &[]).unwrap();
    let a = Analyzer::new(&circle, Tolerances::default());
    let c = parity_chain(&a, 2).unwrap();
    let c_arcs = trace_cobordism(&a, 2, 2).unwrap();
    let torus = builtin_model("round_torus", &[]).unwrap();
    let b = Analyzer::new(&torus, Tolerances::default());
    let t = parity_chain(&b, 3).unwrap();
    let t_arcs: Vec<_> = [2, 3].iter().map(|&i| trace_cobordism(&b, 3, i).unwrap()).collect();
    let ok = c.counts() == vec![2, 0]
        && c.verdict == Outcome::Pass
        && c_arcs.verdict == Outcome::Pass
        && c_arcs.arcs.len() == 1
        && t.counts() == vec![0, 0, 0]
        && t.verdict == Outcome::Pass
        && t_arcs.iter().all(|r| r.verdict == Outcome::Pass && r.arcs.is_empty());
    check(ok, format!("circle {:?} with {} arc, torus {:?} with no arcs", c.counts(), c_arcs.arcs.len(), t.counts()))
}

fn criterion_7() -> (Verdict3, Vec<bool>) {
    let start = Instant::now();
    let rep = sweep(100, 7, 4, &Tolerances::default());
    let elapsed = start.elapsed();
    let accepted: Vec<_> = rep.samples.iter().filter(|s| s.genericity == Verdict::Generic).collect();
    let chain_ok = accepted.iter().filter(|s| s.chain == Outcome::Pass).count();
    let covering_ok = accepted.iter().filter(|s| s.covering == Some(true)).count();
    let euler: Vec<bool> = accepted.iter().map(|s| s.euler == Some(true)).collect();
    let verdict = check(
        chain_ok == accepted.len() && covering_ok == accepted.len() && elapsed < Duration::from_secs(120),
        format!(
            "{} accepted, {} rejected (rate {:.2}), chain pass {chain_ok}/{}, covering {covering_ok}/{}, {elapsed:.2?} (limit 2 min)",
            rep.accepted,
            rep.rejected,
            rep.rejection_rate,
            accepted.len(),
            accepted.len()
        ),
    );
    (verdict, euler)
}

fn criterion_8(sweep_euler: &[bool]) -> Verdict3 {
    let mut fixed = Vec::new();
    for name in ["figure_eight", "round_circle", "round_torus"] {
        let m = builtin_model(name, &[]).unwrap();
        let e = euler_cross_check(&Analyzer::new(&m, Tolerances::default())).unwrap();
        fixed.push(e.pass);
    }
    let swept = sweep_euler.iter().filter(|&&e| e).count();
    check(
        fixed.iter().all(|&e| e) && swept == sweep_euler.len(),
        format!("builtins {}/3, sweep {swept}/{}", fixed.iter().filter(|&&e| e).count(), sweep_euler.len()),
    )
}

fn criterion_9() -> Verdict3 {
    let m = builtin_model("boy_surface", &[]).unwrap();
    let a = Analyzer::new(&m, Tolerances::default());
    let generic = genericity_report_with(&a);
    if generic.verdict != Verdict::Generic {
        return Skipped(format!("parametrization not numerically generic: {:?}", generic.failed));
    }
    let (resolved, targets) = a.multiple_points(3).unwrap();
    let Ok(Strata::Points(cusps)) = a.strata(2) else { return Fail("no cusp set".into()) };
    let l2 = a.mixed(3, 2).unwrap();
    let chain = parity_chain(&a, 3).unwrap();
    check(
        targets.len() == 1 && resolved.len() == 3 && cusps.len() % 2 == 1 && l2.len() % 2 == 1 && chain.verdict == Outcome::Pass,
        format!(
            "triple points {}, M3 {}, cusps {}, L3_2 {}, chain {:?} {:?}",
            targets.len(),
            resolved.len(),
            cusps.len(),
            l2.len(),
            chain.counts(),
            chain.verdict
        ),
    )
}

fn report_text(sub: Subcommand, config: &str) -> String {
    let cfg = RunConfig::parse(config).unwrap();
    cli::run(sub, &cfg).report.expect("report").to_json()
}

fn criterion_10() -> Verdict3 {
    let runs = [
        (Subcommand::ChainVerify, "model = figure_eight\nr = 2\n"),
        (Subcommand::TraceCobordism, "model = figure_eight\nr = 2\n"),
        (Subcommand::Multipoints, "model = figure_eight\nr = 2\n"),
        (Subcommand::Sweep, "seed = 7\ncount = 100\nmax_degree = 4\n"),
    ];
    let mut same = 0;
    for (sub, config) in runs {
        let a = without_meta(&report_text(sub, config)).unwrap();
        let b = without_meta(&report_text(sub, config)).unwrap();
        same += usize::from(a == b);
    }
    check(same == runs.len(), format!("{same}/{} report pairs byte-identical without meta", runs.len()))
}

fn main() -> ExitCode {
    let (c7, sweep_euler) = criterion_7();
    let results: Vec<(usize, &str, Verdict3)> = vec![
        (1, "exact stratum parametrization", criterion_1()),
        (2, "exact pair solutions", criterion_2()),
        (3, "boundary limit of top pairs", criterion_3()),
        (4, "singleton fibres over the top stratum", criterion_4()),
        (5, "figure-eight instance", criterion_5()),
        (6, "round circle and round torus", criterion_6()),
        (7, "random trigonometric sweep", c7),
        (8, "Euler cross-check", criterion_8(&sweep_euler)),
        (9, "Boy surface", criterion_9()),
        (10, "determinism", criterion_10()),
    ];
    let mut failed = 0;
    for (n, name, verdict) in &results {
        let (word, detail) = match verdict {
            Pass(d) => ("pass", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skipped(d) => ("skipped", d),
        };
        println!("criterion {n:>2} {word:<7} {name}: {detail}");
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
