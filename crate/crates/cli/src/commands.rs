//! One payload builder per subcommand. Arbitrary-precision integers are
//! written as decimal strings; log-domain values as natural logs.

use chromrate_core::graphs::{concentration_experiment, SolverLimits};
use chromrate_core::moments::{
    self, equipartition_count, expectation_growth_margin, first_moment_for_p, first_moment_threshold,
    ln_equipartition_count, lower_bound_s, EquipartitionShape,
};
use chromrate_core::overlap::{
    count_01_matrices, enumerate_overlap_pairs, mckay_estimate, overlap_matrix_census, pairs_from_matrices,
    second_moment_exact,
};
use chromrate_core::theory::{self, corollary_interval, theory_report};
use chromrate_core::{LogValue, ModelParams};
use serde_json::{json, Value};

use crate::config::{Command, RunConfig, DEFAULT_SIMULATE_SAMPLES};
use crate::{verify, CliError, Outcome};

/// `ln` of a log-domain value, `null` for zero.
pub fn ln_json(x: LogValue) -> Value {
    if x.is_zero() {
        Value::Null
    } else {
        json!(x.ln())
    }
}

fn done(payload: Value) -> Result<Outcome, CliError> {
    Ok(Outcome { payload, verified: None })
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Theory => done(theory_payload(cfg)?),
        Command::Moments => done(moments_payload(cfg)?),
        Command::Threshold => done(threshold_payload(cfg)?),
        Command::Simulate => done(simulate_payload(cfg)?),
        Command::CountMatrices => done(count_matrices_payload(cfg)?),
        Command::SecondMoment => done(second_moment_payload(cfg)?),
        Command::Verify => {
            let report = verify::run_verify(cfg)?;
            let passed = report.passed;
            Ok(Outcome { payload: serde_json::to_value(report).expect("plain data"), verified: Some(passed) })
        }
    }
}

pub fn theory_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = ModelParams::new(cfg.n(), cfg.p())?;
    let report = theory_report(&params, cfg.eps)?;
    Ok(json!({
        "report": report,
        "corollary": corollary_interval(&params),
        "eps": cfg.eps,
        "note": "asymptotic prediction",
    }))
}

pub fn moments_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let (n, k, p) = (cfg.n(), cfg.k(), cfg.p());
    let shape = EquipartitionShape::new(n, k)?;
    let mu = first_moment_for_p(&shape, p)?;
    let exact_p = (n <= 2000).then(|| equipartition_count(&shape).to_string());
    let mut payload = json!({
        "n": n,
        "k": k,
        "p": p,
        "shape": {
            "ceil_size": shape.ceil_size(),
            "floor_size": shape.floor_size(),
            "k1": shape.k1(),
            "k2": shape.k2(),
            "forbidden_pairs": shape.forbidden_pairs(),
            "delta": [shape.delta_frac().numer(), shape.delta_frac().denom()],
        },
        "P": exact_p,
        "ln_P": ln_equipartition_count(&shape).ln(),
        "ln_mu": ln_json(mu),
        "log10_mu": if mu.is_zero() { Value::Null } else { json!(mu.log10()) },
        "theta": cfg.theta,
        "eps": cfg.eps,
    });
    // The bound pipelines need log_b n > 1; report why when that fails.
    match ModelParams::new(n, p) {
        Ok(params) => {
            payload["growth_margin"] = json!(expectation_growth_margin(&shape, &params, cfg.theta)?);
            payload["upper_k"] = moments::upper_k(&params, cfg.theta).map(|k| json!(k)).unwrap_or(Value::Null);
            payload["lower_l"] = moments::lower_l(&params, cfg.eps).map(|l| json!(l)).unwrap_or(Value::Null);
            payload["lower_bound"] = match lower_bound_s(&params, cfg.eps) {
                Ok(lb) => json!({
                    "a": lb.a,
                    "s": lb.s,
                    "x0": lb.x0,
                    "ln_expected_precolourings": ln_json(lb.expected_precolourings),
                }),
                Err(e) => json!({ "not_applicable": e.to_string() }),
            };
        }
        Err(e) => payload["theory_unavailable"] = json!(e.to_string()),
    }
    Ok(payload)
}

pub fn threshold_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = ModelParams::new(cfg.n(), cfg.p())?;
    let t = first_moment_threshold(&params)?;
    let gamma = theory::gamma(&params);
    Ok(json!({
        "n": cfg.n(),
        "p": cfg.p(),
        "k_star": t.k,
        "ln_mu_below": ln_json(t.mu_below),
        "ln_mu_at": ln_json(t.mu_at),
        "rate": t.rate,
        "gamma": gamma,
        "n_over_gamma": cfg.n() as f64 / gamma,
        "corollary": corollary_interval(&params),
    }))
}

pub fn simulate_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let limits = SolverLimits::from_env()?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SIMULATE_SAMPLES);
    let n = usize::try_from(cfg.n()).map_err(|_| CliError::Usage("--n too large".into()))?;
    let stats = concentration_experiment(n, cfg.p(), samples, cfg.seed, cfg.eps, &limits)?;
    Ok(json!({ "limits": limits, "stats": stats }))
}

pub fn count_matrices_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let rows = cfg.rows.as_deref().expect("validated");
    let cols = cfg.cols.as_deref().expect("validated");
    let estimate = mckay_estimate(rows, cols)?;
    let exact = count_01_matrices(rows, cols);
    let ln_exact = LogValue::from_biguint(&exact);
    Ok(json!({
        "rows": rows,
        "cols": cols,
        "exact": exact.to_string(),
        "ln_exact": ln_json(ln_exact),
        "mckay_log": estimate.estimate.ln(),
        "mckay": {
            "ln_main": estimate.ln_main,
            "correction": estimate.correction,
            "error_scale": estimate.error_scale,
        },
        "formal": estimate.formal,
        "log_ratio": if ln_exact.is_zero() { Value::Null } else { json!(ln_exact.ln() - estimate.estimate.ln()) },
    }))
}

pub fn second_moment_payload(cfg: &RunConfig) -> Result<Value, CliError> {
    let (n, k, p) = (cfg.n(), cfg.k(), cfg.p());
    let sm = second_moment_exact(n, k, p)?;
    let pairs = enumerate_overlap_pairs(n, k)?;
    let census = overlap_matrix_census(n, k)?;
    let groups: Vec<Value> = pairs
        .iter()
        .map(|(r, p_r)| {
            let m_r = census.get(r).cloned().unwrap_or_default();
            json!({
                "r": r.counts(),
                "v": r.v(),
                "d": r.d(),
                "R": r.big_r(),
                "P_r": p_r.to_string(),
                "M_r": m_r.to_string(),
                "identity_holds": &pairs_from_matrices(n, r, &m_r) == p_r,
            })
        })
        .collect();
    Ok(json!({
        "n": n,
        "k": k,
        "p": p,
        "ln_direct": ln_json(sm.direct),
        "ln_grouped": ln_json(sm.grouped),
        "ln_first_moment": ln_json(sm.first_moment),
        "ratio": sm.ratio.value(),
        "relative_gap": sm.relative_gap,
        "pairs": groups,
    }))
}
