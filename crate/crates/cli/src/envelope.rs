use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const TOOL: &str = "chromrate";
/// Bumped whenever a payload layout changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub config: RunConfig,
    pub duration_ms: f64,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: u64,
    pub payload: Value,
}

impl ResultEnvelope {
    pub fn new(config: RunConfig, elapsed: Duration, payload: Value) -> Self {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
        ResultEnvelope {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema_version: SCHEMA_VERSION,
            config,
            duration_ms: elapsed.as_secs_f64() * 1e3,
            timestamp_ms: now.as_millis() as u64,
            payload,
        }
    }
}

fn error_kind(e: &chromrate_core::Error) -> &'static str {
    use chromrate_core::Error::*;
    match e {
        InvalidProbability(_) => "invalid_probability",
        DegenerateScale { .. } => "degenerate_scale",
        InvalidShape { .. } => "invalid_shape",
        Precondition(_) => "precondition",
        ScaleGuard { .. } => "scale_guard",
        SolverLimit { .. } => "solver_limit",
        SearchBudget { .. } => "search_budget",
        ShapeMismatch(_) => "shape_mismatch",
        NotApplicable(_) => "not_applicable",
        NoCrossing(_) => "no_crossing",
        Parse { .. } => "parse",
    }
}

pub fn error_payload(e: &chromrate_core::Error) -> Value {
    let mut err = json!({ "kind": error_kind(e), "message": e.to_string() });
    if let chromrate_core::Error::SearchBudget { lower, upper } = e {
        err["lower"] = json!(lower);
        err["upper"] = json!(upper);
    }
    json!({ "error": err })
}
