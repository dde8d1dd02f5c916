//! Subcommand dispatch shared by the binary and the C interface.
//!
//! [`run`] never touches the filesystem; it returns the report and any
//! plots, and the caller decides where they go.

use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bordism::{euler_cross_check, natural_r, parity_chain, sweep, trace_cobordism, Outcome};
use crate::config::{NormalFormConfig, RunConfig};
use crate::local_cobordism::{boundary_limit_check, dyadic_top_path, solve_pair, solve_pair_top};
use crate::multipoint::{covering_check, Analyzer, Strata};
use crate::normal_form::{
    solve_fiber, stratum_membership, stratum_parametrize, top_stratum_point, NormalFormSpec, SourcePoint,
    StratumParams,
};
use crate::poly::{format_rational, int, Rational};
use crate::prim_map::{genericity_report_with, PrimMapModel, Verdict};
use crate::report::{diagnostics, Meta, Report, SCHEMA_VERSION};
use crate::svg;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subcommand {
    Strata,
    Multipoints,
    ChainVerify,
    TraceCobordism,
    NormalForm,
    Sweep,
}

impl Subcommand {
    pub const ALL: [Subcommand; 6] = [
        Subcommand::Strata,
        Subcommand::Multipoints,
        Subcommand::ChainVerify,
        Subcommand::TraceCobordism,
        Subcommand::NormalForm,
        Subcommand::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Strata => "strata",
            Subcommand::Multipoints => "multipoints",
            Subcommand::ChainVerify => "chain-verify",
            Subcommand::TraceCobordism => "trace-cobordism",
            Subcommand::NormalForm => "normal-form",
            Subcommand::Sweep => "sweep",
        }
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand `{s}`")))
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass = 0,
    /// A mathematical verdict failed.
    Failed = 1,
    /// Bad config or arguments.
    Usage = 2,
    /// Solver warnings, unfinished traces or a model rejected by its
    /// genericity margins: no verdict either way.
    Inconclusive = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Failure dominates, then missing verdicts.
    fn combine(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::Inconclusive => 1,
            Status::Failed => 2,
            Status::Usage => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }

    fn from_outcome(o: Outcome) -> Status {
        match o {
            Outcome::Pass => Status::Pass,
            Outcome::Fail => Status::Failed,
            Outcome::Inconclusive | Outcome::Rejected => Status::Inconclusive,
        }
    }

    fn from_error(e: &Error) -> Status {
        match e {
            Error::IndeterminateRoots => Status::Inconclusive,
            _ => Status::Usage,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub status: Status,
    /// Absent only for usage errors.
    pub report: Option<Report>,
    /// `(file stem, svg text)` pairs, produced when the config asks for them.
    pub plots: Vec<(String, String)>,
    pub message: Option<String>,
}

struct Body {
    status: Status,
    model: Value,
    results: Value,
    warnings: Vec<String>,
    extra: Value,
    plots: Vec<(String, String)>,
}

pub fn run(sub: Subcommand, cfg: &RunConfig) -> RunOutput {
    let start = Instant::now();
    let body = match sub {
        Subcommand::NormalForm => normal_form_suite(&cfg.normal_form),
        Subcommand::Sweep => run_sweep(cfg),
        _ => with_model(cfg).and_then(|model| run_model(sub, cfg, &model)),
    };
    match body {
        Ok(body) => {
            let mut diag = diagnostics(&body.warnings, &cfg.tol);
            if let (Some(d), Some(extra)) = (diag.as_object_mut(), body.extra.as_object()) {
                d.extend(extra.clone());
            }
            let report = Report {
                schema_version: SCHEMA_VERSION,
                meta: Meta::new(sub.name(), start.elapsed().as_secs_f64()),
                model: body.model,
                results: body.results,
                diagnostics: diag,
            };
            RunOutput { status: body.status, report: Some(report), plots: body.plots, message: None }
        }
        Err(e) => RunOutput { status: Status::from_error(&e), report: None, plots: Vec::new(), message: Some(e.to_string()) },
    }
}

fn with_model(cfg: &RunConfig) -> Result<PrimMapModel> {
    cfg.model.as_ref().ok_or_else(|| Error::Config("no model given (set `model` or the trig coefficients)".into()))?.build()
}

fn model_json(model: &PrimMapModel, r: usize) -> Value {
    json!({
        "name": model.name,
        "params": model.params,
        "source_dim": model.source_dim(),
        "target_dim": model.ambient_dim() - 1,
        "r": r,
        "definition": model,
    })
}

fn run_model(sub: Subcommand, cfg: &RunConfig, model: &PrimMapModel) -> Result<Body> {
    let r = cfg.r.unwrap_or_else(|| natural_r(model));
    let analyzer = Analyzer::new(model, cfg.tol.clone());
    let genericity = genericity_report_with(&analyzer);
    let mut status = Status::Pass;
    let mut warnings = Vec::new();
    let mut plots = Vec::new();
    let n = model.source_dim();
    let fold_curves = |a: &Analyzer<'_>| a.fold_curve_list().to_vec();
    let cusps = |a: &Analyzer<'_>| match a.strata(2) {
        Ok(Strata::Points(set)) => Some(set),
        _ => None,
    };
    let results = match sub {
        Subcommand::Strata => {
            let levels: Vec<usize> = if n == 1 { vec![1] } else { vec![1, 2] };
            let mut strata = Vec::new();
            for j in levels {
                let s = analyzer.strata(j)?;
                let prov = match &s {
                    Strata::Points(set) => &set.provenance,
                    Strata::Curves { provenance, .. } => provenance,
                };
                warnings.extend(prov.warnings.iter().cloned());
                strata.push(s);
            }
            let euler = euler_cross_check(&analyzer)?;
            if !euler.pass {
                status = Status::Failed;
            }
            if cfg.svg {
                plots.push(("strata".to_string(), stratum_plot(model, &analyzer)?));
            }
            json!({ "strata": strata, "euler": euler })
        }
        Subcommand::Multipoints => {
            let (resolved, targets) = analyzer.multiple_points(r)?;
            warnings.extend(resolved.provenance.warnings.iter().cloned());
            let covering = covering_check(&resolved, &targets);
            if !covering {
                status = Status::Failed;
            }
            if cfg.svg {
                plots.push(("multipoints".to_string(), stratum_plot(model, &analyzer)?));
            }
            json!({
                "r": r,
                "resolved_count": resolved.len(),
                "target_count": targets.len(),
                "covering": covering,
                "resolved": resolved,
                "targets": targets,
            })
        }
        Subcommand::ChainVerify => {
            let chain = parity_chain(&analyzer, r)?;
            warnings.extend(chain.warnings.iter().cloned());
            status = Status::from_outcome(chain.verdict);
            let euler = if genericity.verdict == Verdict::Generic {
                let e = euler_cross_check(&analyzer)?;
                if !e.pass {
                    status = status.combine(Status::Failed);
                }
                Some(e)
            } else {
                None
            };
            if cfg.svg {
                plots.push(("chain-verify".to_string(), stratum_plot(model, &analyzer)?));
            }
            json!({
                "r": r,
                "counts": chain.counts(),
                "parities": chain.levels.iter().map(|l| l.parity).collect::<Vec<_>>(),
                "verdict": chain.verdict,
                "covering": chain.covering,
                "euler": euler,
                "levels": chain.sets,
            })
        }
        Subcommand::TraceCobordism => {
            let dim = model.multiple_point_dim(r);
            if dim != 0 {
                return Err(Error::Dimension { n, k: model.k(), r, dim });
            }
            let mut levels = Vec::new();
            let mut all_arcs = Vec::new();
            for i in 2..=r {
                let rep = trace_cobordism(&analyzer, r, i)?;
                status = status.combine(Status::from_outcome(rep.verdict));
                warnings.extend(rep.issues.iter().cloned());
                all_arcs.extend(rep.arcs.iter().cloned());
                levels.push(rep);
            }
            if cfg.svg {
                let curves = if n == 2 { fold_curves(&analyzer) } else { Vec::new() };
                let c = if n == 2 { cusps(&analyzer) } else { None };
                plots.push(("trace-cobordism".to_string(), svg::arc_plot(model, &all_arcs, &curves, c.as_ref())));
            }
            json!({
                "r": r,
                "arc_counts": levels.iter().map(|l| l.arcs.len()).collect::<Vec<_>>(),
                "levels": levels,
            })
        }
        Subcommand::NormalForm | Subcommand::Sweep => unreachable!("dispatched before model construction"),
    };
    if !warnings.is_empty() {
        status = status.combine(Status::Inconclusive);
    }
    Ok(Body {
        status,
        model: model_json(model, r),
        results,
        warnings,
        extra: json!({ "genericity": genericity }),
        plots,
    })
}

fn stratum_plot(model: &PrimMapModel, analyzer: &Analyzer<'_>) -> Result<String> {
    if model.source_dim() == 1 {
        let (_, targets) = analyzer.multiple_points(2)?;
        let Strata::Points(folds) = analyzer.strata(1)? else {
            unreachable!("curve folds are isolated points")
        };
        Ok(svg::curve_plot(model, &targets, &folds))
    } else {
        let cusps = match analyzer.strata(2)? {
            Strata::Points(set) => Some(set),
            Strata::Curves { .. } => None,
        };
        Ok(svg::fold_plot(model, analyzer.fold_curve_list(), cusps.as_ref()))
    }
}

fn run_sweep(cfg: &RunConfig) -> Result<Body> {
    let seed = cfg.seed.ok_or_else(|| Error::Config("sweep needs a seed (`seed = N` or --seed N)".into()))?;
    let count = cfg.count.unwrap_or(100);
    if cfg.max_degree == 0 {
        return Err(Error::Config("max_degree must be at least 1".into()));
    }
    let rep = sweep(count, seed, cfg.max_degree, &cfg.tol);
    let status = if rep.chain_failures + rep.covering_failures + rep.euler_failures > 0 {
        Status::Failed
    } else if rep.inconclusive > 0 {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    Ok(Body {
        status,
        model: json!({ "family": "trig_curve", "max_degree": cfg.max_degree, "seed": seed, "count": count }),
        results: serde_json::to_value(&rep)?,
        warnings: Vec::new(),
        extra: json!({}),
        plots: Vec::new(),
    })
}

fn rats(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn point_json(x: &SourcePoint) -> Value {
    json!({ "t": format_rational(&x.t), "y": rats(&x.y_flat()), "s": rats(&x.s) })
}

/// The exact normal-form checks on the configured inputs.
fn normal_form_suite(nf: &NormalFormConfig) -> Result<Body> {
    let spec = NormalFormSpec::new(nf.r, nf.k, nf.z)?;
    let (r, j) = (spec.r, nf.j);
    if j == 0 || j > r {
        return Err(Error::Config(format!("nf.j must satisfy 1 <= j <= r = {r}")));
    }
    if nf.s.len() != spec.z {
        return Err(Error::Config(format!("nf.s needs {} values", spec.z)));
    }
    let mut checks: Vec<(String, bool)> = Vec::new();

    let point = if j < r {
        let high = nf.high.clone().unwrap_or_else(|| vec![Rational::zero(); spec.slots_from(j + 1).len()]);
        stratum_parametrize(&spec, j, &StratumParams { t: nf.t.clone(), s: nf.s.clone(), high })?
    } else {
        top_stratum_point(&spec, &nf.s)?
    };
    let membership: Vec<bool> =
        (1..=r).map(|l| stratum_membership(&spec, &point, l)).collect::<Result<_>>()?;
    checks.push(("membership".into(), membership[..j].iter().all(|&b| b)));
    let strata = json!({ "j": j, "point": point_json(&point), "membership": membership });

    let pair = if j + 1 < r {
        let high = nf.pair_high.clone().unwrap_or_else(|| vec![Rational::zero(); spec.slots_from(j + 2).len()]);
        let sol = solve_pair(&spec, j, &nf.tu, &nf.tv, &high)?;
        checks.push(("pair".into(), sol.is_exact()));
        json!({
            "j": j,
            "u": point_json(&sol.u),
            "v": point_json(&sol.v),
            "residuals": rats(&sol.residuals()),
            "exact": sol.is_exact(),
        })
    } else {
        Value::Null
    };

    let top = solve_pair_top(&spec, &nf.top_tv)?;
    let tu_ok = top.tu == -&nf.top_tv / int(r as i64);
    checks.push(("pair_top".into(), top.is_exact() && tu_ok));
    let p0 = top.u.poly(&spec, 0);
    let top_json = json!({
        "tu": format_rational(&top.tu),
        "tv": format_rational(&top.tv),
        "p0": rats(p0.coeffs()),
        "residuals": rats(&top.residuals()),
        "exact": top.is_exact(),
    });

    let limit_point = top_stratum_point(&spec, &vec![Rational::zero(); spec.z])?;
    let boundary = boundary_limit_check(&spec, r - 1, &dyadic_top_path(&spec, nf.limit_steps), &limit_point)?;
    checks.push(("boundary_limit".into(), boundary.passes));

    let base = top_stratum_point(&spec, &nf.s)?;
    let fiber = solve_fiber(&spec, &base)?;
    checks.push(("fiber_singleton".into(), fiber.len() == 1));
    let fiber_json: Vec<Value> = fiber
        .iter()
        .map(|f| {
            json!({
                "t_lo": format_rational(&f.t_lo),
                "t_hi": format_rational(&f.t_hi),
                "t": f.t_value,
                "multiplicity": f.multiplicity,
            })
        })
        .collect();

    let all = checks.iter().all(|(_, ok)| *ok);
    Ok(Body {
        status: if all { Status::Pass } else { Status::Failed },
        model: json!({ "normal_form": { "r": spec.r, "k": spec.k, "z": spec.z, "source_dim": spec.source_dim() } }),
        results: json!({
            "checks": checks.iter().map(|(name, ok)| json!({ "check": name, "pass": ok })).collect::<Vec<_>>(),
            "stratum": strata,
            "pair": pair,
            "pair_top": top_json,
            "boundary_limit": boundary,
            "fiber": fiber_json,
        }),
        warnings: Vec::new(),
        extra: json!({}),
        plots: Vec::new(),
    })
}
