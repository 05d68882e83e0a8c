//! Serializable result rows shared by the CLI and the browser demo.
//!
//! The JSON schema is stable: every row carries the full key set
//! `{family, direction, t, value, error_case1, error_case2, se, ci_low,
//! ci_high, degenerate, tie_warning}`, with `null` for fields a given
//! command does not produce.

use serde::Serialize;

use crate::inference::InferenceResult;
use crate::measures::{Direction, Family, MeasureResult};

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub family: Family,
    pub direction: Direction,
    pub t: usize,
    pub value: Option<f64>,
    pub error_case1: Option<f64>,
    pub error_case2: Option<f64>,
    pub se: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub degenerate: bool,
    pub tie_warning: bool,
}

impl ResultRow {
    pub fn from_measure(m: &MeasureResult) -> Self {
        ResultRow {
            family: m.family,
            direction: m.direction,
            t: m.t,
            value: Some(m.value),
            error_case1: Some(m.error_case1),
            error_case2: Some(m.error_case2),
            se: None,
            ci_low: None,
            ci_high: None,
            degenerate: false,
            tie_warning: m.tie_flag,
        }
    }

    pub fn from_inference(r: &InferenceResult) -> Self {
        ResultRow {
            family: r.measure.family,
            direction: r.measure.direction,
            t: r.measure.t,
            value: Some(r.measure.value),
            error_case1: Some(r.measure.error_case1),
            error_case2: Some(r.measure.error_case2),
            se: Some(r.std_error),
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            degenerate: r.degenerate,
            tie_warning: r.tie_warning,
        }
    }

    /// A profile entry whose order was degenerate: no value, flag set.
    pub fn degenerate_entry(family: Family, direction: Direction, t: usize) -> Self {
        ResultRow {
            family,
            direction,
            t,
            value: None,
            error_case1: None,
            error_case2: None,
            se: None,
            ci_low: None,
            ci_high: None,
            degenerate: true,
            tie_warning: false,
        }
    }
}
