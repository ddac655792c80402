//! Machine-readable report records shared by the library and the CLI.
//!
//! Reports are deterministic: no timestamps or environment data inside the
//! payload, so identical configurations produce byte-identical JSON.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One named check with its measured value and bound.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// value must not exceed bound
    pub fn le(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value.is_finite() && value <= bound,
        }
    }

    /// value must be at least bound
    pub fn ge(name: impl Into<String>, value: f64, bound: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound,
            pass: value.is_finite() && value >= bound,
        }
    }

    /// boolean condition with an informational value
    pub fn flag(name: impl Into<String>, value: f64, pass: bool) -> Check {
        Check {
            name: name.into(),
            value,
            bound: f64::NAN,
            pass,
        }
    }
}

/// A verification suite outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> SuiteReport {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            schema: SCHEMA_VERSION,
            suite: suite.into(),
            checks,
            pass,
        }
    }
}

/// Norm record for the function-space operations.
#[derive(Debug, Clone, Serialize)]
pub struct NormRecord {
    pub schema: u32,
    pub space: String,
    pub domain: String,
    pub weight: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_delta: Option<f64>,
}

/// Control synthesis outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SynthesisRecord {
    pub schema: u32,
    pub residual: f64,
    pub lambda: f64,
    pub condition_estimate: f64,
    pub k: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lcurve: Vec<LCurvePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LCurvePoint {
    pub lambda: f64,
    pub residual: f64,
    pub control_norm: f64,
}

/// Cousin split outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CousinRecord {
    pub schema: u32,
    pub identity_error: f64,
    pub dbar_residual_f1: f64,
    pub dbar_residual_f2: f64,
    pub norm_f1: f64,
    pub norm_f2: f64,
    pub hormander_ratio: f64,
    pub hormander_satisfied: bool,
}
