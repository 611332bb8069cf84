use std::path::PathBuf;

use serde_json::{json, Value};
use vislab_core::boolean_model::BooleanParams;
use vislab_core::cylinder_model::CylinderParams;
use vislab_core::interlacements::{self, estimate_capacity, TargetShape, WosConfig};
use vislab_core::limitlaw::{
    self, limit_survival, run_experiment, sample_visibility, scene_summary, ExperimentConfig, InterlacementParams,
    ModelKind, ModelParams,
};
use vislab_core::simharness::{write_report_json, write_samples_csv, SCHEMA_VERSION};
use vislab_core::{Dimension, Error, RngStream, Vect};

use crate::args::{CapacityArgs, ExactArgs, LimitCheckArgs, ModelArgs, SimulateArgs};
use crate::{Failure, UsageError};

const DEFAULT_Q_CAP_MULT: f64 = 50.0;
const DEFAULT_S_GRID: [f64; 3] = [0.5, 1.0, 2.0];
const SUMMARY_LEVEL: f64 = 0.95;

fn required<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, Failure> {
    v.clone().ok_or_else(|| Failure::Usage(format!("missing required flag --{flag}")))
}

fn model_params(m: &ModelArgs) -> Result<ModelParams, Failure> {
    let kind: ModelKind = required(&m.model, "model")?.parse()?;
    let d = Dimension::new(required(&m.d, "d")?)?;
    let alpha = required(&m.alpha, "alpha")?;
    match kind {
        ModelKind::Bm => {
            if m.rho.is_some() {
                return Err(Failure::Usage("--rho applies to pc and bi; bm takes --radius-law".into()));
            }
            let law = required(&m.radius_law, "radius-law")?.parse()?;
            Ok(ModelParams::Bm(BooleanParams::new(alpha, law, d)?))
        }
        ModelKind::Pc | ModelKind::Bi => {
            if m.radius_law.is_some() {
                return Err(Failure::Usage(format!("--radius-law applies to bm; {kind} takes --rho")));
            }
            let rho = required(&m.rho, "rho")?;
            if kind == ModelKind::Pc {
                Ok(ModelParams::Pc(CylinderParams::new(alpha, rho, d)?))
            } else {
                Ok(ModelParams::Bi(InterlacementParams::new(alpha, rho, d)?))
            }
        }
    }
}

pub fn exact(a: &ExactArgs) -> Result<Value, Failure> {
    let params = model_params(&a.model)?;
    let r = required(&a.r, "r")?;
    let s = required(&a.s, "s")?;
    let delta = params.delta(r)?;
    let lambda = params.lambda()?;
    let limit = limit_survival(&params, s)?;
    let visibility = params.visibility_probability(r)?;
    let (conditional, method) = match params.exact_survival(r, s)? {
        Some(v) => (v, "exact"),
        None => (limit, "asymptotic"),
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "exact",
        "model": params.kind(),
        "method": method,
        "params": params,
        "r": r,
        "s": s,
        "delta": delta,
        "lambda": lambda,
        "visibility_prob": visibility,
        "conditional_survival": conditional,
        "limit_survival": limit,
    }))
}

pub fn simulate(a: &SimulateArgs) -> Result<Value, Failure> {
    let params = model_params(&a.model)?;
    if params.kind() == ModelKind::Bi {
        return Err(Failure::Usage(
            "simulate supports bm and pc only: interlacements have no scene sampler; \
             use `limit-check --model bi` for capacity-based survival estimates"
                .into(),
        ));
    }
    let r = required(&a.r, "r")?;
    let n = required(&a.n, "n")?;
    let seed = required(&a.seed, "seed")?;
    let out: PathBuf = required(&a.out, "out")?;
    let mult = a.q_cap_mult.unwrap_or(DEFAULT_Q_CAP_MULT);
    limitlaw::q_cap(&params, r, mult)?;
    let samples = sample_visibility(&params, r, n, mult, seed).map_err(Failure::runtime)?;
    write_samples_csv(&out, &samples.rows).map_err(Failure::runtime)?;
    let summary = if samples.rows.is_empty() {
        None
    } else {
        Some(scene_summary(&params, &samples, &DEFAULT_S_GRID, SUMMARY_LEVEL).map_err(Failure::runtime)?)
    };
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "model": params.kind(),
        "params": params,
        "r": r,
        "n": n,
        "seed": seed,
        "q_cap_mult": mult,
        "out": out,
        "delta": samples.delta,
        "q_cap": samples.q_cap,
        "insufficient_data": n < 100,
        "censored_fraction": summary.as_ref().and_then(|s| s.censored_fraction),
        "ks_exact": summary.as_ref().and_then(|s| s.ks_exact),
        "ks_limit": summary.as_ref().and_then(|s| s.ks_limit),
        "ks_band": summary.as_ref().and_then(|s| s.ks_band),
        "survival": summary.map(|s| s.survival).unwrap_or_default(),
    }))
}

pub fn capacity(a: &CapacityArgs) -> Result<Value, Failure> {
    let shape_name = required(&a.shape, "shape")?;
    let d = Dimension::new(required(&a.d, "d")?)?.require_transient()?;
    let r = required(&a.r, "r")?;
    let n = required(&a.n, "n")?;
    let seed = required(&a.seed, "seed")?;
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let dim = d.as_usize();
    let (shape, asymptotic, kind) = match shape_name.as_str() {
        "ball" => {
            if a.rho.is_some() || a.aperture.is_some() {
                return Err(Failure::Usage("a ball takes only --r (its radius)".into()));
            }
            let shape = TargetShape::ball(Vect::zeros(dim), r)?;
            (shape, Some(interlacements::ball_capacity(d, r)?), "exact")
        }
        "cylinder" => {
            if a.aperture.is_some() {
                return Err(Failure::Usage("--aperture applies to cone only".into()));
            }
            let rho = required(&a.rho, "rho")?;
            let shape = TargetShape::axis_cylinder(dim, r, rho)?;
            (shape, interlacements::capacity_asymptotic(r, rho, d).ok(), "leading_order")
        }
        "cone" => {
            let rho = required(&a.rho, "rho")?;
            let q = required(&a.aperture, "aperture")?;
            let shape = TargetShape::axis_cone(dim, r, q, rho)?;
            // Leading order of the cylinder plus the increment `(λ/α) q/δ_r`.
            let asym = interlacements::capacity_asymptotic(r, rho, d).ok().map(|c| {
                let per_s = interlacements::lambda_bi(1.0, rho, d).expect("transient dimension");
                c + per_s * q / interlacements::delta_bi(d, r).expect("transient dimension")
            });
            (shape, asym, "leading_order")
        }
        other => return Err(Failure::Usage(format!("unknown shape {other:?}; expected ball, cylinder or cone"))),
    };
    let cfg = WosConfig::for_shape(&shape)?.with_roulette(!a.truncate_only);
    let est = estimate_capacity(&shape, &cfg, n, &RngStream::new(seed, 0)).map_err(Failure::runtime)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "capacity",
        "shape": shape,
        "d": d,
        "n": n,
        "seed": seed,
        "roulette": !a.truncate_only,
        "estimate": est.value,
        "stderr": est.stderr,
        "bias_bound": est.bias_bound,
        "asymptotic": asymptotic,
        "asymptotic_kind": kind,
        "ratio": asymptotic.map(|c| est.value / c),
    }))
}

pub fn limit_check(a: &LimitCheckArgs) -> Result<Value, Failure> {
    let params = model_params(&a.model)?;
    let r_list = required(&a.r_list, "r-list")?.values("r-list")?;
    let n = required(&a.n, "n")?;
    let seed = required(&a.seed, "seed")?;
    let out: PathBuf = required(&a.out, "out")?;
    let mut config = ExperimentConfig::new(params.clone(), r_list, n, seed);
    if params.kind() == ModelKind::Bi {
        config.n_scenes = 0;
        config.walkers = n;
    }
    if let Some(grid) = &a.s_grid {
        config.s_grid = grid.values("s-grid")?;
    }
    if let Some(m) = a.q_cap_mult {
        config.q_cap_mult = m;
    }
    config.validate()?;
    let report = run_experiment(&config).map_err(Failure::runtime)?;
    write_report_json(&out, &report).map_err(Failure::runtime)?;
    let failures: Vec<String> = report
        .records
        .iter()
        .filter_map(|rec| rec.failure.as_ref().map(|f| format!("r = {}: {f}", rec.r)))
        .collect();
    if !failures.is_empty() {
        return Err(Failure::Runtime(format!(
            "{} of {} radii failed (partial report written to {}):\n  {}",
            failures.len(),
            report.records.len(),
            out.display(),
            failures.join("\n  ")
        )));
    }
    let records: Vec<Value> = report
        .records
        .iter()
        .map(|rec| {
            json!({
                "r": rec.r,
                "level": rec.level,
                "ks_exact": rec.ks_exact,
                "ks_limit": rec.ks_limit,
                "ks_band": rec.ks_band,
                "censored_fraction": rec.censored_fraction,
            })
        })
        .collect();
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "command": "limit-check",
        "model": params.kind(),
        "seed": seed,
        "out": out,
        "lambda": report.lambda,
        "records": records,
    }))
}

impl From<Error> for Failure {
    /// Domain errors come from argument validation; everything else is a
    /// failure while running.
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl Failure {
    fn runtime(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}
